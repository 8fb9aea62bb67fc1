#pragma once

// Batch commands behind tailgame_cli. Each returns the process exit code and
// writes its report to `out`, diagnostics to `err`.

#include "tailgame/tailgame.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

namespace tailgame::cli {

enum Exit : int { kPass = 0, kCheckFailed = 1, kInputError = 2, kCapExceeded = 3, kPrecondition = 4 };

struct Options {
  std::string game;
  std::string strategy;
  std::string tau;
  std::string good, bad, pivot;
  std::string start;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10'000;
  std::uint64_t horizon = 10'000;
  std::uint64_t cap = std::uint64_t{1} << 20;
  std::size_t k = 4;
  unsigned workers = 1;
  bool decimal = false;
  RandomGameParams gen{};
};

namespace detail {

class InputError : public Error {
 public:
  using Error::Error;
};

inline EnumerationOptions enumeration(const Options& o) { return {o.cap, o.workers}; }

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InputError("cannot write '" + path + "'");
}

inline void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

inline std::string fmt(const Rational& q, bool decimal) {
  std::string s = to_string(q);
  if (!decimal) return s;
  char buf[32];
  std::snprintf(buf, sizeof buf, "\t%.6f", to_double(q));
  return s + buf;
}

inline void print_values(std::ostream& out, const GameGraph& g, const ValueVector& vals, bool decimal) {
  for (VertexIndex v = 0; v < g.size(); ++v) out << g.id(v) << "=" << fmt(vals[v], decimal) << "\n";
}

inline MealyStrategy load_for(const std::string& path, const GameGraph& g, Player p) {
  auto s = load_strategy(path, g);
  if (s.player() != p) {
    throw InputError("'" + path + "' is a " + std::string(to_string(s.player())) + " strategy, expected " +
                     std::string(to_string(p)));
  }
  return s;
}

inline MealyStrategy max_strategy(const Options& o, const GameGraph& g) {
  return o.strategy.empty() ? default_strategy(g, Player::Max) : load_for(o.strategy, g, Player::Max);
}

inline MealyStrategy min_strategy(const Options& o, const GameGraph& g) {
  return o.tau.empty() ? default_strategy(g, Player::Min) : load_for(o.tau, g, Player::Min);
}

inline VertexIndex start_vertex(const Options& o, const GameGraph& g) {
  if (o.start.empty()) throw InputError("--start is required");
  auto v = g.find(o.start);
  if (!v) throw InputError("unknown start vertex '" + o.start + "'");
  return *v;
}

inline Rational require_m(const ValueVector& vals) {
  auto m = min_positive_value(vals);
  if (!m) throw PreconditionError("m = inf: every vertex has value 0");
  return *m;
}

}  // namespace detail

inline int cmd_solve(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  const auto sol = solve_game(g, detail::enumeration(o));
  detail::print_values(out, g, sol.values, o.decimal);
  if (!o.out.empty()) detail::write_file(o.out, serialize_solution(g, sol));
  return kPass;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  VerifyOptions vo;
  vo.enumeration = detail::enumeration(o);
  bool ok = true;
  for (const auto& l : verify_game(g, vo)) {
    ok &= l.pass;
    out << (l.skipped ? "SKIP" : l.pass ? "PASS" : "FAIL") << " " << l.name;
    if (!l.detail.empty()) out << ": " << l.detail;
    out << "\n";
  }
  return ok ? kPass : kCheckFailed;
}

// Transforms in the pruned game when the strategy lives there; otherwise in
// the original arena with the consistency check relaxed.
inline int cmd_reset(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = load_game(o.game);
  const auto sigma = detail::load_for(o.strategy, g, Player::Max);
  const auto eo = detail::enumeration(o);
  const auto vals = solve_game(g, eo).values;
  const Rational m = detail::require_m(vals);
  const auto p = prune_superfluous(g, vals);
  if (!is_consistent(p, vals)) throw InternalError("pruned game is not consistent");
  const bool in_pruned = strategy_violations(p, sigma).empty();
  const GameGraph& arena = in_pruned ? p : g;
  if (!in_pruned) err << "note: strategy uses superfluous edges; transforming in the original game\n";
  const auto r = reset_transform(arena, sigma, vals, m, {in_pruned, eo});
  const auto before = lower_value(arena, sigma, eo);
  const auto after = lower_value(arena, r.strategy, eo);
  out << "arena=" << (in_pruned ? "pruned" : "original") << "\n";
  out << "m=" << to_string(m) << "\n";
  for (VertexIndex v = 0; v < g.size(); ++v) {
    out << g.id(v) << ": lower(sigma)=" << to_string(before[v]) << " lower(sigma')=" << to_string(after[v])
        << " val=" << to_string(vals[v]) << "\n";
  }
  if (!o.out.empty()) detail::write_file(o.out, serialize_strategy(r.strategy, arena));
  if (after != vals) {
    err << "reset strategy is not optimal\n";
    return kCheckFailed;
  }
  return kPass;
}

inline int cmd_prune(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = load_game(o.game);
  const auto vals = solve_game(g, detail::enumeration(o)).values;
  const auto p = prune_superfluous(g, vals);
  for (const auto& e : g.edges()) {
    if (!p.has_edge(p.index(e.from), p.index(e.to))) err << "removed " << e.from << " -> " << e.to << "\n";
  }
  detail::emit(o, out, serialize_game(p));
  return kPass;
}

inline int cmd_check(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = parse_game_unchecked(tailgame::detail::read_file(o.game));
  auto vs = validate_game(g);
  if (vs.empty() && !o.strategy.empty()) {
    try {
      load_strategy(o.strategy, g);
    } catch (const ValidationError& e) {
      vs = e.violations();
    }
  }
  for (const auto& v : vs) out << v.str() << "\n";
  if (!vs.empty()) return kCheckFailed;
  out << "ok\n";
  return kPass;
}

inline int cmd_quality(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  const auto sigma = detail::load_for(o.strategy, g, Player::Max);
  const auto q = quality_table(g, sigma, detail::enumeration(o));
  for (VertexIndex v = 0; v < g.size(); ++v) {
    for (MemoryIndex m = 0; m < sigma.memory_size(); ++m) {
      out << g.id(v) << "[" << sigma.memory_name(m) << "]=" << detail::fmt(q.at(v, m), o.decimal) << "\n";
    }
  }
  return kPass;
}

inline int cmd_lower_value(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  const auto sigma = detail::load_for(o.strategy, g, Player::Max);
  const auto eo = detail::enumeration(o);
  const auto lower = lower_value(g, sigma, eo);
  detail::print_values(out, g, lower, o.decimal);
  out << "eps=" << detail::fmt(optimality_gap(solve_game(g, eo).values, lower), o.decimal) << "\n";
  return kPass;
}

inline int cmd_deviation_prob(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  const auto sigma = detail::load_for(o.strategy, g, Player::Max);
  const auto tau = detail::min_strategy(o, g);
  const auto start = detail::start_vertex(o, g);
  const auto eo = detail::enumeration(o);
  const auto vals = solve_game(g, eo).values;
  const Rational m = detail::require_m(vals);
  const auto p = deviation_probability(g, sigma, tau, vals, m, start, eo);
  const Rational eps = optimality_gap(vals, lower_value(g, sigma, eo));
  out << "p=" << detail::fmt(p, o.decimal) << "\n";
  out << "eps=" << detail::fmt(eps, o.decimal) << "\n";
  out << "m=" << detail::fmt(m, o.decimal) << "\n";
  out << "bound=" << detail::fmt(deviation_bound(eps, m), o.decimal) << "\n";
  return kPass;
}

inline int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  const auto sigma = detail::max_strategy(o, g);
  const auto tau = detail::min_strategy(o, g);
  const auto start = detail::start_vertex(o, g);
  if (o.samples < 1) throw detail::InputError("--samples must be at least 1");
  if (o.horizon < 1) throw detail::InputError("--horizon must be at least 1");
  const SimulationOptions so{o.horizon, o.workers};
  const auto est = estimate_value(g, sigma, tau, start, o.samples, o.seed, so);
  nlohmann::ordered_json j;
  j["estimate"] = to_string(est.estimate);
  j["stderr"] = est.std_error;
  j["n"] = est.n;
  j["truncated_count"] = est.truncated;
  // First-deviation dates; empty when m = inf.
  auto h = nlohmann::ordered_json::object();
  std::optional<DeviationStats> dev;
  const auto vals = solve_game(g, detail::enumeration(o)).values;
  if (auto m = min_positive_value(vals)) {
    dev = simulate_deviations(g, sigma, tau, vals, *m, start, o.samples, o.seed, so, detail::enumeration(o));
    for (const auto& [index, count] : dev->histogram) h[std::to_string(index)] = count;
  }
  j["histogram"] = std::move(h);
  if (dev) j["deviation_p"] = to_string(dev->empirical_p);
  if (o.decimal) j["estimate_decimal"] = to_double(est.estimate);
  out << j.dump(2) << "\n";
  return kPass;
}

inline int cmd_gen(const Options& o, std::ostream& out, std::ostream&) {
  RandomGameParams p = o.gen;
  p.seed = o.seed;
  detail::emit(o, out, serialize_game(random_game(p)));
  return kPass;
}

inline int cmd_stubborn(const Options& o, std::ostream& out, std::ostream&) {
  const auto g = load_game(o.game);
  const auto good = load_strategy(o.good, g);
  const auto bad = load_strategy(o.bad, g);
  auto pivot = g.find(o.pivot);
  if (!pivot) throw detail::InputError("unknown pivot vertex '" + o.pivot + "'");
  detail::emit(o, out, serialize_strategy(stubborn_strategy(g, good, bad, *pivot, o.k), g));
  return kPass;
}

// Maps library errors onto exit codes.
template <class F>
int guarded(F&& f, std::ostream& err) {
  try {
    return f();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const detail::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

inline int run(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
  using Fn = int (*)(const Options&, std::ostream&, std::ostream&);
  static const std::pair<const char*, Fn> table[] = {
      {"solve", cmd_solve},       {"verify", cmd_verify},
      {"reset", cmd_reset},       {"prune", cmd_prune},
      {"check", cmd_check},       {"quality", cmd_quality},
      {"lower-value", cmd_lower_value}, {"deviation-prob", cmd_deviation_prob},
      {"simulate", cmd_simulate}, {"gen", cmd_gen},
      {"stubborn", cmd_stubborn},
  };
  for (const auto& [name, fn] : table) {
    if (command == name) return guarded([&] { return fn(o, out, err); }, err);
  }
  err << "error: unknown command '" << command << "'\n";
  return kInputError;
}

}  // namespace tailgame::cli
