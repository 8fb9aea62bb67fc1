#pragma once

#include "tailgame/values.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tailgame {

// Worst-case conditional win probability of a Max strategy, indexed by the
// current vertex and the strategy's memory before reading it. For a Mealy
// machine the quality after a prefix depends on nothing else.
struct QualityTable {
  std::size_t memory_size = 0;
  ValueVector entries;  // [v * memory_size + m]

  const Rational& at(VertexIndex v, MemoryIndex m) const { return entries[v * memory_size + m]; }
};

inline QualityTable quality_table(const GameGraph& g, const MealyStrategy& sigma,
                                  const EnumerationOptions& opts = {}) {
  auto r = mdp_value(g, sigma, Player::Min, opts);
  QualityTable t{sigma.memory_size(), ValueVector(g.size() * sigma.memory_size())};
  for (VertexIndex v = 0; v < g.size(); ++v) {
    for (MemoryIndex m = 0; m < sigma.memory_size(); ++m) t.entries[v * t.memory_size + m] = r.value(v, m);
  }
  return t;
}

// inf over Min of the win probability from each vertex, sigma starting at its
// initial memory.
inline ValueVector lower_value(const GameGraph& g, const MealyStrategy& sigma,
                               const EnumerationOptions& opts = {}) {
  std::vector<ProductKey> starts;
  for (VertexIndex v = 0; v < g.size(); ++v) starts.emplace_back(v, sigma.initial());
  auto r = mdp_value(g, sigma, Player::Min, opts, starts);
  ValueVector out(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) out[v] = r.value(v, sigma.initial());
  return out;
}

// sup over Max of the win probability against a Min strategy.
inline ValueVector upper_value(const GameGraph& g, const MealyStrategy& tau,
                               const EnumerationOptions& opts = {}) {
  std::vector<ProductKey> starts;
  for (VertexIndex v = 0; v < g.size(); ++v) starts.emplace_back(v, tau.initial());
  auto r = mdp_value(g, tau, Player::Max, opts, starts);
  ValueVector out(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) out[v] = r.value(v, tau.initial());
  return out;
}

// Largest shortfall of a Max strategy below the values, over all vertices.
inline Rational optimality_gap(const ValueVector& vals, const ValueVector& lower) {
  Rational eps = 0;
  for (std::size_t v = 0; v < vals.size(); ++v) eps = std::max(eps, Rational(vals[v] - lower[v]));
  return eps;
}

// sigma[h]: the strategy that plays from the last vertex of h as sigma would
// after h. The last vertex is read again as the first vertex of the shifted
// play, so the new initial memory is the one reached before it.
inline MealyStrategy shift_strategy(const GameGraph& g, const MealyStrategy& sigma,
                                    const PlayPrefix& prefix) {
  if (!is_legal_prefix(g, prefix)) throw PreconditionError("shift_strategy: illegal prefix");
  if (prefix.empty()) return sigma;
  return sigma.with_initial(sigma.memory_after(std::span(prefix).first(prefix.size() - 1)));
}

namespace detail {

inline void require_threshold(const std::optional<Rational>& m) {
  if (!m) throw PreconditionError("m = inf: every vertex has value 0");
  if (*m <= 0) throw PreconditionError("m must be positive, got " + to_string(*m));
}

// quality <= val - m/2, the deviation test.
inline bool deviates(const QualityTable& q, const ValueVector& vals, const Rational& m,
                     VertexIndex v, MemoryIndex mem) {
  return q.at(v, mem) <= vals[v] - m / 2;
}

// quality < val - m/2, the reset test of the transformer.
inline bool falls_below(const QualityTable& q, const ValueVector& vals, const Rational& m,
                        VertexIndex v, MemoryIndex mem) {
  return q.at(v, mem) < vals[v] - m / 2;
}

}  // namespace detail

// First position n of the prefix whose quality is at most val(v_n) - m/2.
inline std::optional<std::size_t> deviation_date(const GameGraph& g, const MealyStrategy& sigma,
                                                 const QualityTable& quality,
                                                 const ValueVector& vals, const Rational& m,
                                                 const PlayPrefix& prefix) {
  if (!is_legal_prefix(g, prefix)) throw PreconditionError("deviation_date: illegal prefix");
  if (m <= 0) throw PreconditionError("deviation_date: m must be positive");
  MemoryIndex mem = sigma.initial();
  for (std::size_t n = 0; n < prefix.size(); ++n) {
    if (detail::deviates(quality, vals, m, prefix[n], mem)) return n;
    mem = sigma.update(mem, prefix[n]);
  }
  return std::nullopt;
}

inline std::optional<std::size_t> deviation_date(const GameGraph& g, const MealyStrategy& sigma,
                                                 const ValueVector& vals, const Rational& m,
                                                 const PlayPrefix& prefix,
                                                 const EnumerationOptions& opts = {}) {
  return deviation_date(g, sigma, quality_table(g, sigma, opts), vals, m, prefix);
}

// Date of the latest deviation t(v_0...v_n) for every n, straight from its
// recursive definition: the window start moves to n+1 as soon as the quality
// of sigma on the window v_t...v_{n+1} drops strictly below val(v_{n+1}) - m/2.
inline std::vector<std::size_t> latest_deviation_dates(const GameGraph& g,
                                                       const MealyStrategy& sigma,
                                                       const QualityTable& quality,
                                                       const ValueVector& vals, const Rational& m,
                                                       const PlayPrefix& prefix) {
  if (!is_legal_prefix(g, prefix)) throw PreconditionError("latest_deviation_dates: illegal prefix");
  std::vector<std::size_t> t;
  for (std::size_t n = 0; n < prefix.size(); ++n) {
    if (n == 0) {
      t.push_back(0);
      continue;
    }
    const std::size_t start = t.back();
    const MemoryIndex mem =
        sigma.memory_after(std::span(prefix).subspan(start, n - start));
    t.push_back(detail::falls_below(quality, vals, m, prefix[n], mem) ? n : start);
  }
  return t;
}

// Max strategy sigma' that plays sigma on the suffix starting at the latest
// deviation, compiled into a Mealy machine over sigma's memory states.
struct ResetStrategy {
  MealyStrategy base;
  ValueVector values;
  Rational m;
  QualityTable quality;
  MealyStrategy strategy;
  bool inclusive = false;

  // Whether entering v with base memory `mem` resets to the initial memory.
  bool fires(VertexIndex v, MemoryIndex mem) const {
    return inclusive ? detail::deviates(quality, values, m, v, mem)
                     : detail::falls_below(quality, values, m, v, mem);
  }
};

struct ResetOptions {
  // The construction is stated for consistent games. Disabling the check
  // lets callers run it on the original arena when the input strategy uses
  // superfluous edges and therefore has no counterpart in the pruned game.
  bool require_consistent = true;
  EnumerationOptions enumeration{};
  // Reset at quality <= val - m/2 (the deviation test) instead of <.
  bool inclusive = false;
};

inline ResetStrategy reset_transform(const GameGraph& g, const MealyStrategy& sigma,
                                     const ValueVector& vals, const std::optional<Rational>& m,
                                     const ResetOptions& opts = {}) {
  require_valid(g);
  require_legal(g, sigma, Player::Max);
  detail::require_threshold(m);
  auto stale = check_value_equations(g, vals);
  if (!stale.empty()) {
    throw PreconditionError("reset_transform: values violate the value equations: " +
                            join_violations(stale));
  }
  if (opts.require_consistent && !is_consistent(g, vals)) {
    throw PreconditionError("reset_transform: game is not consistent; prune superfluous edges first");
  }
  ResetStrategy r{sigma, vals, *m, quality_table(g, sigma, opts.enumeration), {}, opts.inclusive};
  const std::size_t nm = sigma.memory_size();
  std::vector<std::vector<MemoryIndex>> update(nm, std::vector<MemoryIndex>(g.size()));
  std::vector<std::vector<std::optional<VertexIndex>>> action(
      nm, std::vector<std::optional<VertexIndex>>(g.size()));
  for (MemoryIndex mem = 0; mem < nm; ++mem) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      const MemoryIndex eff = r.fires(v, mem) ? sigma.initial() : mem;
      update[mem][v] = sigma.update(eff, v);
      action[mem][v] = sigma.action_entry(eff, v);
    }
  }
  r.strategy = MealyStrategy(Player::Max, sigma.memory_names(), sigma.initial(), std::move(update),
                             std::move(action));
  return r;
}

// Probability, from `start`, of ever entering a product state whose quality
// is at most val - m/2.
inline Rational deviation_probability(const GameGraph& g, const MealyStrategy& sigma,
                                      const MealyStrategy& tau, const QualityTable& quality,
                                      const ValueVector& vals, const Rational& m, VertexIndex start) {
  if (m <= 0) throw PreconditionError("deviation_probability: m must be positive");
  const VertexIndex starts[] = {start};
  auto c = product_chain(g, sigma, tau, starts);
  std::vector<char> mask(c.size(), 0);
  for (StateIndex s = 0; s < c.size(); ++s) {
    mask[s] = detail::deviates(quality, vals, m, c.states[s].vertex, c.states[s].mem_max);
  }
  return reach_probabilities(c, mask)[c.start.at(start)];
}

inline Rational deviation_probability(const GameGraph& g, const MealyStrategy& sigma,
                                      const MealyStrategy& tau, const ValueVector& vals,
                                      const Rational& m, VertexIndex start,
                                      const EnumerationOptions& opts = {}) {
  return deviation_probability(g, sigma, tau, quality_table(g, sigma, opts), vals, m, start);
}

// The bound (1 + eps) / (1 + m/2) on the deviation probability of an
// eps-optimal strategy in a consistent game.
inline Rational deviation_bound(const Rational& eps, const Rational& m) {
  return (1 + eps) / (1 + m / 2);
}

// Counts visits to `pivot` up to k (memory states m0..mk) and plays `good`
// until the k-th visit, `bad` from the k-th visit on.
inline MealyStrategy stubborn_strategy(const GameGraph& g, const MealyStrategy& good,
                                       const MealyStrategy& bad, VertexIndex pivot, std::size_t k) {
  if (pivot >= g.size()) throw PreconditionError("stubborn_strategy: pivot is not a vertex");
  if (k < 1) throw PreconditionError("stubborn_strategy: k must be at least 1");
  if (good.memory_size() != 1 || bad.memory_size() != 1 || good.player() != bad.player()) {
    throw PreconditionError("stubborn_strategy: good and bad must be memoryless for one player");
  }
  require_legal(g, good, good.player());
  require_legal(g, bad, bad.player());
  std::vector<std::string> names;
  for (std::size_t i = 0; i <= k; ++i) names.push_back("m" + std::to_string(i));
  std::vector<std::vector<MemoryIndex>> update(k + 1, std::vector<MemoryIndex>(g.size()));
  std::vector<std::vector<std::optional<VertexIndex>>> action(
      k + 1, std::vector<std::optional<VertexIndex>>(g.size()));
  for (MemoryIndex visits = 0; visits <= k; ++visits) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      const bool at_pivot = v == pivot;
      update[visits][v] = at_pivot ? std::min(visits + 1, k) : visits;
      // At the pivot the current visit is number visits+1.
      const bool late = at_pivot ? visits + 1 >= k : visits >= k;
      action[visits][v] = (late ? bad : good).action_entry(0, v);
    }
  }
  return MealyStrategy(good.player(), std::move(names), 0, std::move(update), std::move(action));
}

}  // namespace tailgame
