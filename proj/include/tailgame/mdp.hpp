#pragma once

#include "tailgame/chain.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <thread>
#include <utility>
#include <vector>

namespace tailgame {

struct EnumerationOptions {
  std::uint64_t cap = std::uint64_t{1} << 20;
  unsigned workers = 1;
};

using ProductKey = std::pair<VertexIndex, MemoryIndex>;

// Optimal values of the Markov decision process left when one player's
// strategy is fixed, over states (vertex, memory of the fixed strategy).
struct MdpResult {
  Player free_player = Player::Min;
  std::vector<ProductKey> states;  // sorted
  ValueVector values;
  MealyStrategy witness;           // for the free player; memory mirrors the fixed strategy
  std::uint64_t policies = 0;

  std::optional<std::size_t> find(VertexIndex v, MemoryIndex m) const {
    auto it = std::lower_bound(states.begin(), states.end(), ProductKey{v, m});
    if (it == states.end() || *it != ProductKey{v, m}) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
  }

  const Rational& value(VertexIndex v, MemoryIndex m) const {
    auto i = find(v, m);
    if (!i) throw PreconditionError("mdp_value: product state was not materialized");
    return values[*i];
  }
};

namespace detail {

// Runs body(begin, end, worker) over [0, count) split into contiguous chunks.
inline void parallel_chunks(std::uint64_t count, unsigned workers,
                            const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2 * workers) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t b = std::min(count, w * chunk), e = std::min(count, b + chunk);
    pool.emplace_back([&, b, e, w] { body(b, e, w); });
  }
  for (auto& t : pool) t.join();
}

// Pointwise combination by the free player's preference; returns the best.
inline void improve(ValueVector& best, const ValueVector& cand, Player free_player) {
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (free_player == Player::Max ? cand[i] > best[i] : cand[i] < best[i]) best[i] = cand[i];
  }
}

// The Markov decision process on the product of a game with one fixed
// strategy, restricted to the states reachable from a start set.
class ProductMdp {
 public:
  ProductMdp(const GameGraph& g, const MealyStrategy& fixed, Player free_player,
             std::span<const ProductKey> starts)
      : g_(g), fixed_(fixed), free_(free_player) {
    std::map<ProductKey, StateIndex> index;
    for (const auto& k : starts) {
      if (k.first >= g.size() || k.second >= fixed.memory_size()) {
        throw PreconditionError("mdp_value: start state out of range");
      }
      index.emplace(k, 0);
    }
    // Collect the closure first, then number states in sorted order.
    std::vector<ProductKey> todo(starts.begin(), starts.end());
    while (!todo.empty()) {
      auto [v, m] = todo.back();
      todo.pop_back();
      const MemoryIndex next = fixed_.update(m, v);
      auto visit = [&](VertexIndex w) {
        if (index.emplace(ProductKey{w, next}, 0).second) todo.emplace_back(w, next);
      };
      if (g.owner(v) == owner_of(opponent(free_))) {
        visit(fixed_.action(m, v));
      } else {
        for (const auto& e : g.successors(v)) visit(e.to);
      }
    }
    for (auto& [k, i] : index) {
      i = keys_.size();
      keys_.push_back(k);
    }
    auto state_of = [&](VertexIndex v, MemoryIndex m) { return index.at({v, m}); };

    chain_.states.resize(keys_.size());
    chain_.transitions.resize(keys_.size());
    chain_.priority.resize(keys_.size());
    for (StateIndex i = 0; i < keys_.size(); ++i) {
      auto [v, m] = keys_[i];
      ProductState ps{v, 0, 0};
      (fixed_.player() == Player::Max ? ps.mem_max : ps.mem_min) = m;
      chain_.states[i] = ps;
      chain_.priority[i] = g.priority(v);
      const MemoryIndex next = fixed_.update(m, v);
      const Owner o = g.owner(v);
      if (o == Owner::Random) {
        for (const auto& e : g.successors(v)) chain_.transitions[i].push_back({state_of(e.to, next), e.prob});
      } else if (o == owner_of(opponent(free_))) {
        chain_.transitions[i].push_back({state_of(fixed_.action(m, v), next), Rational(1)});
      } else {
        std::vector<StateIndex> opts;
        for (const auto& e : g.successors(v)) opts.push_back(state_of(e.to, next));
        free_states_.push_back(i);
        options_.push_back(std::move(opts));
        chain_.transitions[i].push_back({options_.back().front(), Rational(1)});
      }
    }
    chain_.index_states();
    // Free states are already in (vertex id, memory) order since vertex
    // indices follow id order; the last one varies fastest.
    policies_ = 1;
    for (const auto& o : options_) policies_ = saturating_mul(policies_, o.size());
  }

  std::uint64_t policy_count() const { return policies_; }
  const std::vector<ProductKey>& keys() const { return keys_; }

  // Win probabilities in every state under the index-th product policy.
  ValueVector evaluate(std::uint64_t index, ProductChain& scratch) const {
    for (std::size_t k = free_states_.size(); k-- > 0;) {
      const auto& opts = options_[k];
      scratch.transitions[free_states_[k]].front().to = opts[index % opts.size()];
      index /= opts.size();
    }
    return win_probabilities(scratch);
  }

  const ProductChain& chain_template() const { return chain_; }

  // Free-player Mealy strategy playing the index-th policy.
  MealyStrategy witness(std::uint64_t index) const {
    const std::size_t nm = fixed_.memory_size();
    std::vector<std::vector<MemoryIndex>> update(nm, std::vector<MemoryIndex>(g_.size()));
    std::vector<std::vector<std::optional<VertexIndex>>> action(
        nm, std::vector<std::optional<VertexIndex>>(g_.size()));
    const Owner mine = owner_of(free_);
    for (MemoryIndex m = 0; m < nm; ++m) {
      for (VertexIndex v = 0; v < g_.size(); ++v) {
        update[m][v] = fixed_.update(m, v);
        if (g_.owner(v) == mine) action[m][v] = g_.successors(v).front().to;
      }
    }
    for (std::size_t k = free_states_.size(); k-- > 0;) {
      const auto& opts = options_[k];
      auto [v, m] = keys_[free_states_[k]];
      action[m][v] = keys_[opts[index % opts.size()]].first;
      index /= opts.size();
    }
    return MealyStrategy(free_, fixed_.memory_names(), fixed_.initial(), std::move(update),
                         std::move(action));
  }

 private:
  const GameGraph& g_;
  const MealyStrategy& fixed_;
  Player free_;
  std::vector<ProductKey> keys_;
  ProductChain chain_;
  std::vector<StateIndex> free_states_;
  std::vector<std::vector<StateIndex>> options_;
  std::uint64_t policies_ = 1;
};

}  // namespace detail

// Exact optimum of the free player (sup for Max, inf for Min) of the win
// probability, by exhaustive enumeration of memoryless policies on the
// product. Parity MDPs admit uniformly optimal memoryless policies, so the
// pointwise optimum is attained by a single policy; the first such policy in
// enumeration order is returned as witness. An empty start set means every
// (vertex, memory) pair.
inline MdpResult mdp_value(const GameGraph& g, const MealyStrategy& fixed, Player free_player,
                           const EnumerationOptions& opts = {},
                           std::span<const ProductKey> starts = {}) {
  require_valid(g);
  require_legal(g, fixed, opponent(free_player));
  std::vector<ProductKey> all;
  if (starts.empty()) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      for (MemoryIndex m = 0; m < fixed.memory_size(); ++m) all.emplace_back(v, m);
    }
    starts = all;
  }
  detail::ProductMdp mdp(g, fixed, free_player, starts);
  const std::uint64_t count = mdp.policy_count();
  if (count > opts.cap) throw CapExceeded(count, opts.cap);

  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::optional<ValueVector>> partial(workers);
  detail::parallel_chunks(count, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    ProductChain scratch = mdp.chain_template();
    for (std::uint64_t i = b; i < e; ++i) {
      auto x = mdp.evaluate(i, scratch);
      if (!partial[w]) {
        partial[w] = std::move(x);
      } else {
        detail::improve(*partial[w], x, free_player);
      }
    }
  });
  std::optional<ValueVector> best;
  for (auto& p : partial) {
    if (!p) continue;
    if (!best) {
      best = std::move(*p);
    } else {
      detail::improve(*best, *p, free_player);
    }
  }

  std::vector<std::uint64_t> first(workers, UINT64_MAX);
  detail::parallel_chunks(count, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    ProductChain scratch = mdp.chain_template();
    for (std::uint64_t i = b; i < e; ++i) {
      if (mdp.evaluate(i, scratch) == *best) {
        first[w] = i;
        return;
      }
    }
  });
  const std::uint64_t chosen = *std::min_element(first.begin(), first.end());
  if (chosen == UINT64_MAX) {
    throw InternalError("mdp_value: no single memoryless policy attains the pointwise optimum");
  }

  MdpResult r;
  r.free_player = free_player;
  r.states = mdp.keys();
  r.values = std::move(*best);
  r.witness = mdp.witness(chosen);
  r.policies = count;
  return r;
}

}  // namespace tailgame
