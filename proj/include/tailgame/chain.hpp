#pragma once

#include "tailgame/game.hpp"
#include "tailgame/linear.hpp"
#include "tailgame/strategy.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

namespace tailgame {

using StateIndex = std::size_t;
using ValueVector = std::vector<Rational>;

// A vertex together with each player's memory before reading it.
struct ProductState {
  VertexIndex vertex = 0;
  MemoryIndex mem_max = 0;
  MemoryIndex mem_min = 0;

  auto operator<=>(const ProductState&) const = default;
};

struct Transition {
  StateIndex to;
  Rational prob;
};

// Finite Markov chain induced by a game and a pair of Mealy strategies. Only
// states reachable from the start vertices are materialized.
struct ProductChain {
  std::vector<ProductState> states;
  std::vector<std::vector<Transition>> transitions;
  std::vector<unsigned> priority;
  std::map<VertexIndex, StateIndex> start;

  std::size_t size() const { return states.size(); }

  std::optional<StateIndex> find(const ProductState& s) const {
    auto it = std::lower_bound(order_.begin(), order_.end(), s,
                               [&](StateIndex i, const ProductState& x) { return states[i] < x; });
    if (it == order_.end() || states[*it] != s) return std::nullopt;
    return *it;
  }

  // Rebuilds the lookup index; call after filling `states`.
  void index_states() {
    order_.resize(states.size());
    for (StateIndex i = 0; i < states.size(); ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(),
              [&](StateIndex a, StateIndex b) { return states[a] < states[b]; });
  }

 private:
  std::vector<StateIndex> order_;
};

inline ProductChain product_chain(const GameGraph& g, const MealyStrategy& sigma,
                                  const MealyStrategy& tau, std::span<const VertexIndex> starts) {
  require_valid(g);
  require_legal(g, sigma, Player::Max);
  require_legal(g, tau, Player::Min);
  ProductChain c;
  std::map<ProductState, StateIndex> index;
  std::vector<StateIndex> work;
  auto intern = [&](const ProductState& s) {
    auto [it, fresh] = index.emplace(s, c.states.size());
    if (fresh) {
      c.states.push_back(s);
      work.push_back(it->second);
    }
    return it->second;
  };
  for (auto v : starts) {
    if (v >= g.size()) throw PreconditionError("start vertex out of range");
    c.start[v] = intern({v, sigma.initial(), tau.initial()});
  }
  c.transitions.resize(c.states.size());
  while (!work.empty()) {
    const StateIndex i = work.back();
    work.pop_back();
    const ProductState s = c.states[i];
    const MemoryIndex nmax = sigma.update(s.mem_max, s.vertex);
    const MemoryIndex nmin = tau.update(s.mem_min, s.vertex);
    std::vector<Transition> out;
    switch (g.owner(s.vertex)) {
      case Owner::Max:
        out.push_back({intern({sigma.action(s.mem_max, s.vertex), nmax, nmin}), Rational(1)});
        break;
      case Owner::Min:
        out.push_back({intern({tau.action(s.mem_min, s.vertex), nmax, nmin}), Rational(1)});
        break;
      case Owner::Random:
        for (const auto& e : g.successors(s.vertex)) out.push_back({intern({e.to, nmax, nmin}), e.prob});
        break;
    }
    if (c.transitions.size() < c.states.size()) c.transitions.resize(c.states.size());
    c.transitions[i] = std::move(out);
  }
  c.transitions.resize(c.states.size());
  c.priority.resize(c.states.size());
  for (StateIndex i = 0; i < c.size(); ++i) c.priority[i] = g.priority(c.states[i].vertex);
  c.index_states();
  return c;
}

inline ProductChain product_chain(const GameGraph& g, const MealyStrategy& sigma,
                                  const MealyStrategy& tau) {
  std::vector<VertexIndex> all(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) all[v] = v;
  return product_chain(g, sigma, tau, all);
}

// Strongly connected components by an iterative Tarjan; component ids are
// assigned in reverse topological order.
inline std::vector<std::size_t> scc_ids(const ProductChain& c, std::size_t* count = nullptr) {
  const std::size_t n = c.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, kNone), low(n), dfn(n, kNone), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<StateIndex, std::size_t>> frames;
  std::size_t time = 0, ncomp = 0;
  for (StateIndex root = 0; root < n; ++root) {
    if (dfn[root] != kNone) continue;
    frames.emplace_back(root, 0);
    dfn[root] = low[root] = time++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < c.transitions[v].size()) {
        const StateIndex w = c.transitions[v][next++].to;
        if (dfn[w] == kNone) {
          dfn[w] = low[w] = time++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], dfn[w]);
        }
        continue;
      }
      const StateIndex done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == dfn[done]) {
        StateIndex x;
        do {
          x = stack.back();
          stack.pop_back();
          on_stack[x] = 0;
          comp[x] = ncomp;
        } while (x != done);
        ++ncomp;
      }
    }
  }
  if (count) *count = ncomp;
  return comp;
}

// Bottom SCCs, each sorted, ordered by their smallest state.
inline std::vector<std::vector<StateIndex>> bsccs(const ProductChain& c) {
  std::size_t ncomp = 0;
  auto comp = scc_ids(c, &ncomp);
  std::vector<char> bottom(ncomp, 1);
  for (StateIndex s = 0; s < c.size(); ++s) {
    for (const auto& t : c.transitions[s]) {
      if (comp[t.to] != comp[s]) bottom[comp[s]] = 0;
    }
  }
  std::vector<std::vector<StateIndex>> members(ncomp);
  for (StateIndex s = 0; s < c.size(); ++s) {
    if (bottom[comp[s]]) members[comp[s]].push_back(s);
  }
  std::vector<std::vector<StateIndex>> out;
  for (auto& m : members) {
    if (!m.empty()) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class Outcome { Win, Lose };

inline bool is_bscc(const ProductChain& c, std::span<const StateIndex> set) {
  if (set.empty()) return false;
  std::vector<char> in(c.size(), 0);
  for (auto s : set) {
    if (s >= c.size()) return false;
    in[s] = 1;
  }
  for (auto s : set) {
    for (const auto& t : c.transitions[s]) {
      if (!in[t.to]) return false;
    }
  }
  // Closed, so strongly connected iff every member reaches every other; it
  // suffices that the first member reaches all and all reach the first.
  std::vector<char> seen(c.size(), 0);
  std::vector<StateIndex> work{set.front()};
  seen[set.front()] = 1;
  while (!work.empty()) {
    auto s = work.back();
    work.pop_back();
    for (const auto& t : c.transitions[s]) {
      if (!seen[t.to]) {
        seen[t.to] = 1;
        work.push_back(t.to);
      }
    }
  }
  for (auto s : set) {
    if (!seen[s]) return false;
  }
  for (auto s : set) {
    std::fill(seen.begin(), seen.end(), 0);
    work = {s};
    seen[s] = 1;
    bool hit = s == set.front();
    while (!work.empty() && !hit) {
      auto x = work.back();
      work.pop_back();
      for (const auto& t : c.transitions[x]) {
        if (t.to == set.front()) hit = true;
        if (!seen[t.to]) {
          seen[t.to] = 1;
          work.push_back(t.to);
        }
      }
    }
    if (!hit) return false;
  }
  return true;
}

// Inside a BSCC every state recurs almost surely, so the least priority seen
// infinitely often is the least priority of the component.
inline Outcome classify_bscc(const ProductChain& c, std::span<const StateIndex> bscc) {
  if (!is_bscc(c, bscc)) throw PreconditionError("classify_bscc: not a bottom SCC");
  unsigned p = UINT32_MAX;
  for (auto s : bscc) p = std::min(p, c.priority[s]);
  return p % 2 == 0 ? Outcome::Win : Outcome::Lose;
}

// Probability of ever visiting `target` from each state, with target states
// treated as absorbing.
inline ValueVector reach_probabilities(const ProductChain& c, const std::vector<char>& target) {
  const std::size_t n = c.size();
  std::vector<std::vector<StateIndex>> pred(n);
  for (StateIndex s = 0; s < n; ++s) {
    if (target[s]) continue;
    for (const auto& t : c.transitions[s]) pred[t.to].push_back(s);
  }
  std::vector<char> reaches(n, 0);
  std::vector<StateIndex> work;
  for (StateIndex s = 0; s < n; ++s) {
    if (target[s]) {
      reaches[s] = 1;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    auto s = work.back();
    work.pop_back();
    for (auto p : pred[s]) {
      if (!reaches[p]) {
        reaches[p] = 1;
        work.push_back(p);
      }
    }
  }
  ValueVector x(n, Rational(0));
  std::vector<std::size_t> unknown_of(n, static_cast<std::size_t>(-1));
  std::vector<StateIndex> unknowns;
  for (StateIndex s = 0; s < n; ++s) {
    if (target[s]) {
      x[s] = 1;
    } else if (reaches[s]) {
      unknown_of[s] = unknowns.size();
      unknowns.push_back(s);
    }
  }
  if (unknowns.empty()) return x;
  // x_s - sum_{u unknown} p(s,u) x_u = sum_{t target} p(s,t)
  LinearSystem sys(unknowns.size());
  for (std::size_t r = 0; r < unknowns.size(); ++r) {
    const StateIndex s = unknowns[r];
    sys.at(r, r) += 1;
    for (const auto& t : c.transitions[s]) {
      if (target[t.to]) {
        sys.b[r] += t.prob;
      } else if (reaches[t.to]) {
        sys.at(r, unknown_of[t.to]) -= t.prob;
      }
    }
  }
  auto sol = solve(std::move(sys));
  for (std::size_t r = 0; r < unknowns.size(); ++r) x[unknowns[r]] = std::move(sol[r]);
  return x;
}

// `target` must be closed under transitions (a union of BSCCs).
inline ValueVector absorption_probabilities(const ProductChain& c,
                                            std::span<const StateIndex> target) {
  std::vector<char> mask(c.size(), 0);
  for (auto s : target) {
    if (s >= c.size()) throw PreconditionError("absorption_probabilities: state out of range");
    mask[s] = 1;
  }
  for (auto s : target) {
    for (const auto& t : c.transitions[s]) {
      if (!mask[t.to]) throw PreconditionError("absorption_probabilities: target not BSCC-closed");
    }
  }
  return reach_probabilities(c, mask);
}

// Win probability of every state: absorption into the winning BSCCs.
inline ValueVector win_probabilities(const ProductChain& c) {
  std::vector<char> win(c.size(), 0);
  for (const auto& b : bsccs(c)) {
    if (classify_bscc(c, b) == Outcome::Win) {
      for (auto s : b) win[s] = 1;
    }
  }
  return reach_probabilities(c, win);
}

// P(W) from each start vertex under (sigma, tau).
inline std::map<VertexIndex, Rational> chain_win_probability(const GameGraph& g,
                                                             const MealyStrategy& sigma,
                                                             const MealyStrategy& tau,
                                                             std::span<const VertexIndex> starts) {
  auto c = product_chain(g, sigma, tau, starts);
  auto x = win_probabilities(c);
  std::map<VertexIndex, Rational> out;
  for (const auto& [v, s] : c.start) out.emplace(v, x[s]);
  return out;
}

// Same, from every vertex.
inline ValueVector chain_win_probability(const GameGraph& g, const MealyStrategy& sigma,
                                         const MealyStrategy& tau) {
  auto c = product_chain(g, sigma, tau);
  auto x = win_probabilities(c);
  ValueVector out(g.size());
  for (const auto& [v, s] : c.start) out[v] = x[s];
  return out;
}

}  // namespace tailgame
