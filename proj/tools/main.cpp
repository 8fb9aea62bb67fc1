#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace tailgame::cli;
  CLI::App app{"Exact solver and strategy toolkit for stochastic parity games"};
  app.require_subcommand(1);
  Options o;

  auto enumeration = [&](CLI::App* c) {
    c->add_option("--cap", o.cap, "Largest policy space enumerated exhaustively");
    c->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto game = [&](CLI::App* c) { c->add_option("game", o.game, "Game file")->required(); };
  auto strategy = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("strategy", o.strategy, "Max strategy file");
    if (required) opt->required();
  };
  auto out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output file"); };
  auto decimal = [&](CLI::App* c) { c->add_flag("--decimal", o.decimal, "Add a decimal column"); };

  auto* solve = app.add_subcommand("solve", "Values and optimal memoryless strategies");
  game(solve), enumeration(solve), out(solve), decimal(solve);

  auto* verify = app.add_subcommand("verify", "Run the structural checks on a game");
  game(verify), enumeration(verify);

  auto* reset = app.add_subcommand("reset", "Reset a Max strategy at its deviations");
  game(reset), strategy(reset, true), enumeration(reset), out(reset);

  auto* prune = app.add_subcommand("prune", "Remove superfluous edges");
  game(prune), enumeration(prune), out(prune);

  auto* check = app.add_subcommand("check", "Validate a game and optionally a strategy");
  game(check), check->add_option("strategy", o.strategy, "Strategy file");

  auto* quality = app.add_subcommand("quality", "Quality of a Max strategy per (vertex, memory)");
  game(quality), strategy(quality, true), enumeration(quality), decimal(quality);

  auto* lower = app.add_subcommand("lower-value", "Guaranteed win probability of a Max strategy");
  game(lower), strategy(lower, true), enumeration(lower), decimal(lower);

  auto* dev = app.add_subcommand("deviation-prob", "Probability of ever deviating");
  game(dev), strategy(dev, true), enumeration(dev), decimal(dev);
  dev->add_option("--tau", o.tau, "Min strategy file (default: smallest successor)");
  dev->add_option("--start", o.start, "Start vertex")->required();

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of the win probability");
  game(sim), strategy(sim, false), enumeration(sim), decimal(sim);
  sim->add_option("--tau", o.tau, "Min strategy file (default: smallest successor)");
  sim->add_option("--start", o.start, "Start vertex")->required();
  sim->add_option("--samples", o.samples, "Number of plays")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "Base seed");
  sim->add_option("--horizon", o.horizon, "Steps before a play counts as truncated")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "Generate a random game");
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--vertices", o.gen.n_vertices, "Vertex count")->check(CLI::PositiveNumber);
  gen->add_option("--max-priority", o.gen.max_priority, "Largest priority");
  gen->add_option("--max-degree", o.gen.max_out_degree, "Largest out-degree")->check(CLI::PositiveNumber);
  out(gen);

  auto* stub = app.add_subcommand("stubborn", "Play --good until the k-th visit to --pivot, then --bad");
  game(stub), out(stub);
  stub->add_option("--good", o.good, "Memoryless strategy file")->required();
  stub->add_option("--bad", o.bad, "Memoryless strategy file")->required();
  stub->add_option("--pivot", o.pivot, "Pivot vertex")->required();
  stub->add_option("--k", o.k, "Visit at which to switch")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  return run(app.get_subcommands().front()->get_name(), o, std::cout, std::cerr);
}
