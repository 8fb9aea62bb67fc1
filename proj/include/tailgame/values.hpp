#pragma once

#include "tailgame/mdp.hpp"
#include "tailgame/strategy_io.hpp"

#include <optional>
#include <vector>

namespace tailgame {

struct Solution {
  ValueVector values;
  MealyStrategy sigma_star;  // Max, memoryless
  MealyStrategy tau_star;    // Min, memoryless
  ValueVector lower_enum;    // max over memoryless sigma of inf over Min
  ValueVector upper_enum;    // min over memoryless tau of sup over Max
};

namespace detail {

// Values at every vertex of a memoryless fixed strategy's best response.
inline ValueVector response_values(const GameGraph& g, const MealyStrategy& fixed, Player free,
                                   const EnumerationOptions& opts) {
  auto r = mdp_value(g, fixed, free, opts);
  ValueVector out(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) out[v] = r.value(v, 0);
  return out;
}

struct SideResult {
  ValueVector values;
  MealyStrategy strategy;
};

// Optimizes `p`'s memoryless strategies against best responses: max over
// sigma of the inf for Max, min over tau of the sup for Min. The returned
// strategy is the first in lexicographic order that attains the optimum at
// every vertex.
inline SideResult optimise_side(const GameGraph& g, Player p, const EnumerationOptions& opts) {
  const std::uint64_t n = count_memoryless(g, p);
  const unsigned workers = std::max(1u, opts.workers);
  // Workers split the outer enumeration; inner ones run sequentially.
  EnumerationOptions inner{opts.cap, 1};
  const Player respond = opponent(p);
  std::vector<std::optional<ValueVector>> partial(workers);
  detail::parallel_chunks(n, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    for (std::uint64_t i = b; i < e; ++i) {
      auto x = response_values(g, memoryless_by_index(g, p, i), respond, inner);
      if (!partial[w]) {
        partial[w] = std::move(x);
      } else {
        improve(*partial[w], x, p);
      }
    }
  });
  std::optional<ValueVector> best;
  for (auto& x : partial) {
    if (!x) continue;
    if (!best) {
      best = std::move(*x);
    } else {
      improve(*best, *x, p);
    }
  }
  std::vector<std::uint64_t> first(workers, UINT64_MAX);
  detail::parallel_chunks(n, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    for (std::uint64_t i = b; i < e; ++i) {
      if (response_values(g, memoryless_by_index(g, p, i), respond, inner) == *best) {
        first[w] = i;
        return;
      }
    }
  });
  const std::uint64_t chosen = *std::min_element(first.begin(), first.end());
  if (chosen == UINT64_MAX) {
    throw InternalError("no memoryless strategy is optimal from every vertex");
  }
  return {std::move(*best), memoryless_by_index(g, p, chosen)};
}

}  // namespace detail

// Values and optimal memoryless strategies by enumerating both sides. The
// cap bounds the number of (sigma, tau) pairs evaluated per side.
inline Solution solve_game(const GameGraph& g, const EnumerationOptions& opts = {}) {
  require_valid(g);
  const std::uint64_t pairs =
      saturating_mul(count_memoryless(g, Player::Max), count_memoryless(g, Player::Min));
  if (pairs > opts.cap) throw CapExceeded(pairs, opts.cap);
  auto lower = detail::optimise_side(g, Player::Max, opts);
  auto upper = detail::optimise_side(g, Player::Min, opts);
  if (lower.values != upper.values) {
    std::string where;
    for (VertexIndex v = 0; v < g.size(); ++v) {
      if (lower.values[v] != upper.values[v]) {
        where += " " + g.id(v) + ": " + to_string(lower.values[v]) + " vs " +
                 to_string(upper.values[v]);
      }
    }
    throw InternalError("determinacy mismatch between enumerations:" + where);
  }
  Solution s;
  s.values = lower.values;
  s.lower_enum = std::move(lower.values);
  s.upper_enum = std::move(upper.values);
  s.sigma_star = std::move(lower.strategy);
  s.tau_star = std::move(upper.strategy);
  return s;
}

inline std::vector<Violation> check_value_equations(const GameGraph& g, const ValueVector& vals) {
  std::vector<Violation> out;
  if (vals.size() != g.size()) {
    out.push_back({"values", "expected " + std::to_string(g.size()) + " entries"});
    return out;
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    auto succ = g.successors(v);
    if (succ.empty()) continue;
    Rational expected;
    switch (g.owner(v)) {
      case Owner::Max:
        expected = vals[succ.front().to];
        for (const auto& e : succ) expected = std::max(expected, vals[e.to]);
        break;
      case Owner::Min:
        expected = vals[succ.front().to];
        for (const auto& e : succ) expected = std::min(expected, vals[e.to]);
        break;
      case Owner::Random:
        expected = 0;
        for (const auto& e : succ) expected += e.prob * vals[e.to];
        break;
    }
    if (vals[v] != expected) {
      out.push_back({"vertex " + g.id(v),
                     to_string(vals[v]) + " ≠ " + to_string(expected) + " (" +
                         std::string(to_string(g.owner(v))) + " equation)"});
    }
  }
  return out;
}

// Smallest strictly positive entry; nullopt stands for m = infinity (every
// value is zero).
inline std::optional<Rational> min_positive_value(const ValueVector& vals) {
  std::optional<Rational> m;
  for (const auto& x : vals) {
    if (x > 0 && (!m || x < *m)) m = x;
  }
  return m;
}

inline bool is_superfluous(const GameGraph& g, const ValueVector& vals, VertexIndex from,
                           VertexIndex to) {
  switch (g.owner(from)) {
    case Owner::Max: return vals[to] < vals[from];
    case Owner::Min: return vals[to] > vals[from];
    case Owner::Random: return false;
  }
  return false;
}

// Drops every controlled edge that strictly worsens its owner's value. The
// value equations guarantee each vertex keeps an optimal edge.
inline GameGraph prune_superfluous(const GameGraph& g, const ValueVector& vals) {
  require_valid(g);
  auto stale = check_value_equations(g, vals);
  if (!stale.empty()) {
    throw PreconditionError("prune_superfluous: values violate the value equations: " +
                            join_violations(stale));
  }
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    if (!is_superfluous(g, vals, g.index(e.from), g.index(e.to))) kept.push_back(e);
  }
  GameGraph out(g.name(), g.vertices(), std::move(kept));
  require_valid(out);
  return out;
}

inline bool is_consistent(const GameGraph& g, const ValueVector& vals) {
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (g.owner(v) == Owner::Random) continue;
    for (const auto& e : g.successors(v)) {
      if (vals[e.to] != vals[v]) return false;
    }
  }
  return true;
}

// Solution files:
//   {"values": {"id": "num/den", ...}, "sigma_star": <strategy>,
//    "tau_star": <strategy>, "consistent": bool, "m": "num/den" | "inf"}
inline std::string serialize_solution(const GameGraph& g, const Solution& s) {
  nlohmann::ordered_json root;
  auto& vals = root["values"] = nlohmann::ordered_json::object();
  for (VertexIndex v = 0; v < g.size(); ++v) vals[g.id(v)] = to_string(s.values[v]);
  root["sigma_star"] = detail::strategy_json(s.sigma_star, g);
  root["tau_star"] = detail::strategy_json(s.tau_star, g);
  root["consistent"] = is_consistent(g, s.values);
  auto m = min_positive_value(s.values);
  root["m"] = m ? to_string(*m) : "inf";
  return root.dump(2) + "\n";
}

// Reads the `values` map of a solution file.
inline ValueVector parse_solution_values(std::string_view text, const GameGraph& g) {
  const auto root = detail::parse_json(text);
  const auto& jv = detail::member(root, "values", "solution");
  if (!jv.is_object()) throw ParseError("solution: 'values' must be an object");
  ValueVector out(g.size());
  std::vector<char> have(g.size(), 0);
  for (auto it = jv.begin(); it != jv.end(); ++it) {
    auto v = g.find(it.key());
    if (!v) throw ParseError("solution: unknown vertex '" + it.key() + "'");
    if (!it->is_string()) throw ParseError("solution: value of '" + it.key() + "' must be a string");
    auto q = parse_rational(it->get<std::string>());
    if (!q) throw ParseError("solution: malformed rational for '" + it.key() + "'");
    out[*v] = *q;
    have[*v] = 1;
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!have[v]) throw ParseError("solution: missing value for '" + g.id(v) + "'");
  }
  return out;
}

}  // namespace tailgame
