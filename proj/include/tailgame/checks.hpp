#pragma once

#include "tailgame/rng.hpp"
#include "tailgame/strategies.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

// Executable forms of the structural facts the library relies on: values
// satisfy the local equations, pruning preserves them, values are a
// martingale under every pair of strategies in a consistent game, deviations
// of near-optimal strategies are rare, and resetting at deviations yields an
// optimal strategy that stops resetting.
namespace tailgame {

struct NearOptimal {
  std::string label;
  MealyStrategy sigma;
  Rational eps;  // optimality gap; at most m/4
};

// Max strategies of g whose optimality gap is at most m/4: each memoryless
// strategy (when there are at most `max_memoryless`), plus stubborn variants
// of `optimal` that switch to another move at one pivot after k visits.
// Candidates whose evaluation exceeds the enumeration cap are counted in
// `skipped`.
inline std::vector<NearOptimal> near_optimal_strategies(const GameGraph& g, const ValueVector& vals,
                                                        const MealyStrategy& optimal,
                                                        const EnumerationOptions& opts,
                                                        std::size_t max_k = 4,
                                                        std::uint64_t max_memoryless = 64,
                                                        std::size_t* skipped = nullptr) {
  std::vector<NearOptimal> out;
  auto m = min_positive_value(vals);
  if (!m) return out;
  auto consider = [&](std::string label, MealyStrategy s) {
    try {
      Rational eps = optimality_gap(vals, lower_value(g, s, opts));
      if (eps <= *m / 4) out.push_back({std::move(label), std::move(s), std::move(eps)});
    } catch (const CapExceeded&) {
      if (skipped) ++*skipped;
    }
  };
  const std::uint64_t n = count_memoryless(g, Player::Max);
  if (n <= max_memoryless) {
    for (std::uint64_t i = 0; i < n; ++i) {
      consider("memoryless #" + std::to_string(i), memoryless_by_index(g, Player::Max, i));
    }
  }
  for (auto pivot : controlled_vertices(g, Player::Max)) {
    for (const auto& e : g.successors(pivot)) {
      if (e.to == optimal.action(0, pivot)) continue;
      std::vector<VertexIndex> choice(g.size(), 0);
      for (auto v : controlled_vertices(g, Player::Max)) choice[v] = optimal.action(0, v);
      choice[pivot] = e.to;
      const auto bad = memoryless(g, Player::Max, choice);
      for (std::size_t k = 2; k <= max_k; ++k) {
        consider("stubborn " + g.id(pivot) + "->" + g.id(e.to) + " k=" + std::to_string(k),
                 stubborn_strategy(g, optimal, bad, pivot, k));
      }
    }
  }
  return out;
}

// Per-start probability of reaching a deviation state, from one chain over
// every start vertex.
inline ValueVector deviation_probabilities(const GameGraph& g, const MealyStrategy& sigma,
                                          const MealyStrategy& tau, const QualityTable& quality,
                                          const ValueVector& vals, const Rational& m) {
  auto c = product_chain(g, sigma, tau);
  std::vector<char> mask(c.size(), 0);
  for (StateIndex s = 0; s < c.size(); ++s) {
    mask[s] = detail::deviates(quality, vals, m, c.states[s].vertex, c.states[s].mem_max);
  }
  auto reach = reach_probabilities(c, mask);
  ValueVector out(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) out[v] = reach[c.start.at(v)];
  return out;
}

// States of the (sigma, tau) chain where sum_s' p(s, s') val(s') != val(s).
inline std::vector<ProductState> martingale_failures(const GameGraph& g, const ValueVector& vals,
                                                     const MealyStrategy& sigma,
                                                     const MealyStrategy& tau) {
  auto c = product_chain(g, sigma, tau);
  std::vector<ProductState> out;
  for (StateIndex s = 0; s < c.size(); ++s) {
    Rational next = 0;
    for (const auto& t : c.transitions[s]) next += t.prob * vals[c.states[t.to].vertex];
    if (next != vals[c.states[s].vertex]) out.push_back(c.states[s]);
  }
  return out;
}

// Bottom-component states of the (sigma', tau) chain at which sigma' resets.
inline std::vector<ProductState> recurrent_resets(const GameGraph& g, const ResetStrategy& r,
                                                  const MealyStrategy& tau) {
  auto c = product_chain(g, r.strategy, tau);
  std::vector<ProductState> out;
  for (const auto& b : bsccs(c)) {
    for (auto s : b) {
      if (r.fires(c.states[s].vertex, c.states[s].mem_max)) out.push_back(c.states[s]);
    }
  }
  return out;
}

struct CheckLine {
  std::string name;
  bool pass = true;
  bool skipped = false;
  std::string detail;
};

struct VerifyOptions {
  EnumerationOptions enumeration{};
  std::uint64_t max_pairs = 1 << 10;       // memoryless (sigma, tau) pairs per chain check
  std::uint64_t max_opponents = 64;        // memoryless tau per near-optimal strategy; sampled beyond
  std::size_t max_k = 4;
  std::uint64_t check_cap = 1 << 12;       // product policies per near-optimal strategy evaluation
};

namespace detail {

// Every index below n when n <= budget, else `budget` distinct indices drawn
// from a fixed stream.
inline std::vector<std::uint64_t> opponent_sample(std::uint64_t n, std::uint64_t budget) {
  std::vector<std::uint64_t> out;
  if (n <= budget) {
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  std::set<std::uint64_t> picked;
  SplitMix64 rng(n);
  while (picked.size() < budget) picked.insert(rng.below(n));
  return {picked.begin(), picked.end()};
}

struct SideReport {
  std::size_t strategies = 0, pairs = 0, skipped = 0;
  std::vector<std::string> bound_failures, optimality_failures, reset_failures;
};

// Deviation and reset checks for Max in a consistent game h.
inline SideReport check_side(const GameGraph& h, const ValueVector& vals, const MealyStrategy& optimal,
                             const VerifyOptions& opts) {
  SideReport rep;
  const auto m = min_positive_value(vals);
  if (!m) return rep;
  const EnumerationOptions eo{std::min(opts.check_cap, opts.enumeration.cap), opts.enumeration.workers};
  auto cands = near_optimal_strategies(h, vals, optimal, eo, opts.max_k, opts.max_opponents, &rep.skipped);
  const std::uint64_t n_tau = count_memoryless(h, Player::Min);
  for (const auto& c : cands) {
    try {
      const auto q = quality_table(h, c.sigma, eo);
      const auto r = reset_transform(h, c.sigma, vals, m, {true, eo});
      ++rep.strategies;
      if (lower_value(h, r.strategy, eo) != vals) rep.optimality_failures.push_back(c.label);
      const Rational bound = deviation_bound(c.eps, *m);
      for (auto i : opponent_sample(n_tau, opts.max_opponents)) {
        const auto tau = memoryless_by_index(h, Player::Min, i);
        ++rep.pairs;
        for (const auto& p : deviation_probabilities(h, c.sigma, tau, q, vals, *m)) {
          if (p > bound) {
            rep.bound_failures.push_back(c.label + " vs tau #" + std::to_string(i));
            break;
          }
        }
        if (!recurrent_resets(h, r, tau).empty()) {
          rep.reset_failures.push_back(c.label + " vs tau #" + std::to_string(i));
        }
      }
    } catch (const CapExceeded&) {
      ++rep.skipped;
    }
  }
  return rep;
}

inline std::string summary(const std::vector<std::string>& failures) {
  std::string s;
  for (std::size_t i = 0; i < failures.size() && i < 3; ++i) s += (i ? "; " : "") + failures[i];
  if (failures.size() > 3) s += "; ...";
  return s;
}

}  // namespace detail

// The full suite on one game. Throws CapExceeded when the game itself is too
// large to solve; budget overruns inside individual checks are reported as
// skipped.
inline std::vector<CheckLine> verify_game(const GameGraph& g, const VerifyOptions& opts = {}) {
  std::vector<CheckLine> lines;
  Solution sol;
  try {
    sol = solve_game(g, opts.enumeration);
    lines.push_back({"determinacy", true, false, "lower and upper enumerations agree"});
  } catch (const InternalError& e) {
    lines.push_back({"determinacy", false, false, e.what()});
    return lines;
  }
  const auto& vals = sol.values;

  auto eq = check_value_equations(g, vals);
  lines.push_back({"value equations", eq.empty(), false, eq.empty() ? "" : join_violations(eq)});

  const GameGraph p = prune_superfluous(g, vals);
  const std::size_t removed = g.edges().size() - p.edges().size();
  const Solution psol = solve_game(p, opts.enumeration);
  lines.push_back({"prune and resolve", psol.values == vals, false,
                   std::to_string(removed) + " superfluous edge(s) removed"});
  const bool consistent = is_consistent(p, vals);
  lines.push_back({"consistency after pruning", consistent, false, ""});
  if (!consistent) return lines;

  {
    CheckLine l{"martingale", true, false, ""};
    const std::uint64_t pairs =
        saturating_mul(count_memoryless(p, Player::Max), count_memoryless(p, Player::Min));
    if (pairs > opts.max_pairs) {
      l.skipped = true;
      l.detail = std::to_string(pairs) + " pairs exceed budget";
    } else {
      std::vector<std::string> bad;
      for (std::uint64_t i = 0; i < count_memoryless(p, Player::Max); ++i) {
        const auto sigma = memoryless_by_index(p, Player::Max, i);
        for (std::uint64_t j = 0; j < count_memoryless(p, Player::Min); ++j) {
          if (!martingale_failures(p, vals, sigma, memoryless_by_index(p, Player::Min, j)).empty()) {
            bad.push_back("sigma #" + std::to_string(i) + ", tau #" + std::to_string(j));
          }
        }
      }
      l.pass = bad.empty();
      l.detail = bad.empty() ? std::to_string(pairs) + " pairs" : detail::summary(bad);
    }
    lines.push_back(l);
  }

  struct Side {
    std::string who;
    GameGraph game;
    ValueVector vals;
    MealyStrategy optimal;
  };
  ValueVector flipped;
  for (const auto& x : vals) flipped.push_back(1 - x);
  const std::vector<Side> sides{
      {"max", p, vals, psol.sigma_star},
      {"min", complement_game(p), flipped, psol.tau_star.with_player(Player::Max)},
  };
  for (const auto& side : sides) {
    const auto m = min_positive_value(side.vals);
    if (!m) {
      for (const char* what : {"deviation bound", "reset optimality", "finitely many resets"}) {
        lines.push_back({std::string(what) + " (" + side.who + ")", true, false, "vacuous: m = inf"});
      }
      continue;
    }
    const auto rep = detail::check_side(side.game, side.vals, side.optimal, opts);
    const std::string counts = std::to_string(rep.strategies) + " strategies, " +
                               std::to_string(rep.pairs) + " pairs" +
                               (rep.skipped ? ", " + std::to_string(rep.skipped) + " skipped" : "");
    lines.push_back({"deviation bound (" + side.who + ")", rep.bound_failures.empty(), false,
                     rep.bound_failures.empty() ? counts : detail::summary(rep.bound_failures)});
    lines.push_back({"reset optimality (" + side.who + ")", rep.optimality_failures.empty(), false,
                     rep.optimality_failures.empty() ? counts : detail::summary(rep.optimality_failures)});
    lines.push_back({"finitely many resets (" + side.who + ")", rep.reset_failures.empty(), false,
                     rep.reset_failures.empty() ? counts : detail::summary(rep.reset_failures)});
  }
  return lines;
}

}  // namespace tailgame
