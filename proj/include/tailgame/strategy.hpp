#pragma once

#include "tailgame/game.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace tailgame {

enum class Player { Max, Min };

inline Owner owner_of(Player p) { return p == Player::Max ? Owner::Max : Owner::Min; }
inline Player opponent(Player p) { return p == Player::Max ? Player::Min : Player::Max; }
inline std::string_view to_string(Player p) { return p == Player::Max ? "max" : "min"; }

using MemoryIndex = std::size_t;

// Deterministic finite-memory strategy.
//
// Reading vertex v in memory state m, the machine moves to action(m, v) when
// v belongs to its player and switches to update(m, v). Hence the memory
// paired with the current vertex is the state reached after reading every
// earlier vertex of the play, and a memoryless strategy is the one-state case.
class MealyStrategy {
 public:
  MealyStrategy() = default;

  // update[m][v] is the next memory state; action[m][v] the chosen successor
  // (nullopt on vertices not owned by the player).
  MealyStrategy(Player player, std::vector<std::string> memory_names, MemoryIndex initial,
                std::vector<std::vector<MemoryIndex>> update,
                std::vector<std::vector<std::optional<VertexIndex>>> action)
      : player_(player),
        names_(std::move(memory_names)),
        initial_(initial),
        update_(std::move(update)),
        action_(std::move(action)) {}

  Player player() const { return player_; }
  std::size_t memory_size() const { return names_.size(); }
  const std::vector<std::string>& memory_names() const { return names_; }
  const std::string& memory_name(MemoryIndex m) const { return names_[m]; }
  MemoryIndex initial() const { return initial_; }
  std::size_t vertex_count() const { return update_.empty() ? 0 : update_.front().size(); }

  MemoryIndex update(MemoryIndex m, VertexIndex v) const { return update_[m][v]; }

  VertexIndex action(MemoryIndex m, VertexIndex v) const {
    const auto& a = action_[m][v];
    if (!a) throw PreconditionError("strategy has no action at this vertex");
    return *a;
  }
  const std::optional<VertexIndex>& action_entry(MemoryIndex m, VertexIndex v) const {
    return action_[m][v];
  }

  std::optional<MemoryIndex> find_memory(std::string_view name) const {
    for (MemoryIndex m = 0; m < names_.size(); ++m) {
      if (names_[m] == name) return m;
    }
    return std::nullopt;
  }

  MealyStrategy with_initial(MemoryIndex m) const {
    MealyStrategy s = *this;
    s.initial_ = m;
    return s;
  }

  // Same machine attributed to the other player; used together with
  // complement_game, where ownership is swapped.
  MealyStrategy with_player(Player p) const {
    MealyStrategy s = *this;
    s.player_ = p;
    return s;
  }

  // Memory after reading every vertex of `play`, starting from initial.
  MemoryIndex memory_after(std::span<const VertexIndex> play) const {
    MemoryIndex m = initial_;
    for (auto v : play) m = update(m, v);
    return m;
  }

  bool operator==(const MealyStrategy&) const = default;

 private:
  Player player_ = Player::Max;
  std::vector<std::string> names_;
  MemoryIndex initial_ = 0;
  std::vector<std::vector<MemoryIndex>> update_;
  std::vector<std::vector<std::optional<VertexIndex>>> action_;
};

inline std::vector<Violation> strategy_violations(const GameGraph& g, const MealyStrategy& s) {
  std::vector<Violation> out;
  if (s.memory_size() == 0) {
    out.push_back({"strategy", "no memory states"});
    return out;
  }
  if (s.initial() >= s.memory_size()) out.push_back({"strategy", "initial memory out of range"});
  if (s.vertex_count() != g.size()) {
    out.push_back({"strategy", "defined over " + std::to_string(s.vertex_count()) +
                                   " vertices, game has " + std::to_string(g.size())});
    return out;
  }
  const Owner mine = owner_of(s.player());
  for (MemoryIndex m = 0; m < s.memory_size(); ++m) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      const std::string where = "(" + s.memory_name(m) + ", " + g.id(v) + ")";
      if (s.update(m, v) >= s.memory_size()) out.push_back({where, "update out of range"});
      const auto& a = s.action_entry(m, v);
      if (g.owner(v) == mine) {
        if (!a) {
          out.push_back({where, "missing action"});
        } else if (*a >= g.size() || !g.has_edge(v, *a)) {
          out.push_back({where, "action is not an edge"});
        }
      } else if (a) {
        out.push_back({where, "action on a vertex not owned by " + std::string(to_string(s.player()))});
      }
    }
  }
  return out;
}

inline void require_legal(const GameGraph& g, const MealyStrategy& s, Player expected) {
  if (s.player() != expected) {
    throw PreconditionError("expected a " + std::string(to_string(expected)) + " strategy");
  }
  auto vs = strategy_violations(g, s);
  if (!vs.empty()) throw ValidationError(std::move(vs));
}

// choice[v] is the successor taken at v; entries for vertices not owned by
// `p` are ignored.
inline MealyStrategy memoryless(const GameGraph& g, Player p, std::span<const VertexIndex> choice) {
  std::vector<std::optional<VertexIndex>> act(g.size());
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (g.owner(v) == owner_of(p)) act[v] = choice[v];
  }
  return MealyStrategy(p, {"m0"}, 0, {std::vector<MemoryIndex>(g.size(), 0)}, {std::move(act)});
}

inline MealyStrategy memoryless(const GameGraph& g, Player p,
                                std::initializer_list<std::pair<std::string, std::string>> moves) {
  std::vector<VertexIndex> choice(g.size(), 0);
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (!g.successors(v).empty()) choice[v] = g.successors(v).front().to;
  }
  for (const auto& [from, to] : moves) choice[g.index(from)] = g.index(to);
  return memoryless(g, p, choice);
}

// Vertices owned by `p`, in index (= id) order.
inline std::vector<VertexIndex> controlled_vertices(const GameGraph& g, Player p) {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < g.size(); ++v) {
    if (g.owner(v) == owner_of(p)) out.push_back(v);
  }
  return out;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline std::uint64_t count_memoryless(const GameGraph& g, Player p) {
  std::uint64_t n = 1;
  for (auto v : controlled_vertices(g, p)) n = saturating_mul(n, g.successors(v).size());
  return n;
}

// The index-th memoryless strategy in lexicographic order of the successor
// ids chosen at p's vertices (taken in id order). Index 0 picks the smallest
// successor everywhere.
inline MealyStrategy memoryless_by_index(const GameGraph& g, Player p, std::uint64_t index) {
  std::vector<VertexIndex> choice(g.size(), 0);
  auto owned = controlled_vertices(g, p);
  for (auto it = owned.rbegin(); it != owned.rend(); ++it) {
    auto succ = g.successors(*it);
    choice[*it] = succ[index % succ.size()].to;
    index /= succ.size();
  }
  return memoryless(g, p, choice);
}

// Takes the smallest successor everywhere; the canonical opponent for
// players without real choices.
inline MealyStrategy default_strategy(const GameGraph& g, Player p) {
  return memoryless_by_index(g, p, 0);
}

// True iff a and b choose the same move in every configuration reachable
// when both machines read the same play.
inline bool behaviorally_equal(const GameGraph& g, const MealyStrategy& a, const MealyStrategy& b) {
  if (a.player() != b.player()) return false;
  const std::size_t na = a.memory_size(), nb = b.memory_size();
  std::vector<char> seen(g.size() * na * nb, 0);
  std::vector<std::tuple<VertexIndex, MemoryIndex, MemoryIndex>> stack;
  for (VertexIndex v = 0; v < g.size(); ++v) stack.emplace_back(v, a.initial(), b.initial());
  const Owner mine = owner_of(a.player());
  while (!stack.empty()) {
    auto [v, ma, mb] = stack.back();
    stack.pop_back();
    auto key = (v * na + ma) * nb + mb;
    if (seen[key]) continue;
    seen[key] = 1;
    if (g.owner(v) == mine && a.action(ma, v) != b.action(mb, v)) return false;
    const MemoryIndex na2 = a.update(ma, v), nb2 = b.update(mb, v);
    if (g.owner(v) == mine) {
      stack.emplace_back(a.action(ma, v), na2, nb2);
    } else {
      for (const auto& e : g.successors(v)) stack.emplace_back(e.to, na2, nb2);
    }
  }
  return true;
}

}  // namespace tailgame
