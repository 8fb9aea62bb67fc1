#pragma once

#include "tailgame/errors.hpp"
#include "tailgame/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tailgame {

enum class Owner { Max, Min, Random };

inline std::string_view to_string(Owner o) {
  switch (o) {
    case Owner::Max: return "max";
    case Owner::Min: return "min";
    case Owner::Random: return "random";
  }
  return "?";
}

inline std::optional<Owner> parse_owner(std::string_view s) {
  if (s == "max") return Owner::Max;
  if (s == "min") return Owner::Min;
  if (s == "random") return Owner::Random;
  return std::nullopt;
}

using VertexIndex = std::size_t;

struct Vertex {
  std::string id;
  Owner owner = Owner::Max;
  unsigned priority = 0;

  bool operator==(const Vertex&) const = default;
};

// `prob` is present exactly on edges leaving a Random vertex.
struct Edge {
  std::string from;
  std::string to;
  std::optional<Rational> prob;

  bool operator==(const Edge&) const = default;
};

struct OutEdge {
  VertexIndex to;
  Rational prob;  // 1 for controlled vertices
};

// Arena with a min-parity winning condition: a play is won by Max iff the
// least priority occurring infinitely often is even.
//
// Construction never throws on semantic problems so that validate_game can
// report them; every analysis entry point calls require_valid first.
// Vertices are kept sorted by id and edges by (from, to), so vertex indices
// and successor lists are canonical.
class GameGraph {
 public:
  GameGraph() = default;

  GameGraph(std::string name, std::vector<Vertex> vertices, std::vector<Edge> edges)
      : name_(std::move(name)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::stable_sort(vertices_.begin(), vertices_.end(),
                     [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    for (VertexIndex i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i].id, i);
    out_.resize(vertices_.size());
    for (const auto& e : edges_) {
      auto f = find(e.from);
      auto t = find(e.to);
      if (!f || !t) continue;
      out_[*f].push_back({*t, e.prob.value_or(Rational(1))});
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return vertices_.size(); }

  const Vertex& vertex(VertexIndex v) const { return vertices_[v]; }
  const std::string& id(VertexIndex v) const { return vertices_[v].id; }
  Owner owner(VertexIndex v) const { return vertices_[v].owner; }
  unsigned priority(VertexIndex v) const { return vertices_[v].priority; }

  // Successors sorted by id.
  std::span<const OutEdge> successors(VertexIndex v) const { return out_[v]; }

  bool has_edge(VertexIndex from, VertexIndex to) const {
    return std::any_of(out_[from].begin(), out_[from].end(),
                       [&](const OutEdge& e) { return e.to == to; });
  }

  std::optional<VertexIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  VertexIndex index(std::string_view id) const {
    if (auto v = find(id)) return *v;
    throw PreconditionError("unknown vertex '" + std::string(id) + "'");
  }

  bool operator==(const GameGraph& o) const {
    return name_ == o.name_ && vertices_ == o.vertices_ && edges_ == o.edges_;
  }

 private:
  std::string name_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, VertexIndex, std::less<>> index_;
  std::vector<std::vector<OutEdge>> out_;
};

inline std::vector<Violation> validate_game(const GameGraph& g) {
  std::vector<Violation> out;
  std::map<std::string, int> seen;
  for (const auto& v : g.vertices()) {
    if (++seen[v.id] == 2) out.push_back({"vertex " + v.id, "duplicate vertex id"});
  }
  std::vector<std::size_t> degree(g.size(), 0);
  std::vector<Rational> mass(g.size(), Rational(0));
  const Edge* prev = nullptr;
  for (const auto& e : g.edges()) {
    const std::string where = "edge " + e.from + "->" + e.to;
    if (prev && prev->from == e.from && prev->to == e.to) {
      out.push_back({where, "duplicate edge"});
    }
    prev = &e;
    auto f = g.find(e.from);
    if (!f) out.push_back({where, "unknown source vertex '" + e.from + "'"});
    if (!g.find(e.to)) out.push_back({where, "unknown target vertex '" + e.to + "'"});
    if (!f) continue;
    ++degree[*f];
    if (g.owner(*f) == Owner::Random) {
      if (!e.prob) {
        out.push_back({where, "edge from random vertex lacks prob"});
      } else if (*e.prob <= 0 || *e.prob > 1) {
        out.push_back({where, "prob " + to_string(*e.prob) + " not in (0,1]"});
      } else {
        mass[*f] += *e.prob;
      }
    } else if (e.prob) {
      out.push_back({where, std::string(to_string(g.owner(*f))) +
                                " vertex edge carries a prob field"});
    }
  }
  for (VertexIndex v = 0; v < g.size(); ++v) {
    const std::string where = "vertex " + g.id(v);
    if (degree[v] == 0) {
      out.push_back({where, "dead end"});
    } else if (g.owner(v) == Owner::Random && mass[v] != 1) {
      out.push_back({where, "row sum ≠ 1 (got " + to_string(mass[v]) + ")"});
    }
  }
  return out;
}

inline void require_valid(const GameGraph& g) {
  auto vs = validate_game(g);
  if (!vs.empty()) throw ValidationError(std::move(vs));
}

using PlayPrefix = std::vector<VertexIndex>;

// The infinite play prefix · cycle^ω.
struct UltimatelyPeriodicPlay {
  PlayPrefix prefix;
  PlayPrefix cycle;
};

inline PlayPrefix to_prefix(const GameGraph& g, std::span<const std::string> ids) {
  PlayPrefix p;
  p.reserve(ids.size());
  for (const auto& id : ids) p.push_back(g.index(id));
  return p;
}

// Every consecutive pair is an edge; incidentally rejects out-of-range indices.
inline bool is_legal_prefix(const GameGraph& g, std::span<const VertexIndex> play) {
  for (std::size_t i = 0; i < play.size(); ++i) {
    if (play[i] >= g.size()) return false;
    if (i + 1 < play.size() && (play[i + 1] >= g.size() || !g.has_edge(play[i], play[i + 1]))) {
      return false;
    }
  }
  return true;
}

inline bool is_legal(const GameGraph& g, const UltimatelyPeriodicPlay& play) {
  if (play.cycle.empty()) return false;
  if (!is_legal_prefix(g, play.prefix) || !is_legal_prefix(g, play.cycle)) return false;
  if (!g.has_edge(play.cycle.back(), play.cycle.front())) return false;
  if (!play.prefix.empty() && !g.has_edge(play.prefix.back(), play.cycle.front())) return false;
  return true;
}

inline unsigned min_priority(const GameGraph& g, std::span<const VertexIndex> vs) {
  unsigned p = UINT32_MAX;
  for (auto v : vs) p = std::min(p, g.priority(v));
  return p;
}

// Prefix priorities never matter: parity is a tail condition.
inline bool winner_ultimately_periodic(const GameGraph& g, const UltimatelyPeriodicPlay& play) {
  if (!is_legal(g, play)) throw PreconditionError("illegal ultimately periodic play");
  return min_priority(g, play.cycle) % 2 == 0;
}

// Swaps Max and Min and shifts priorities by one. Plays won by Max here are
// exactly the plays won by Min in g, so Min's problems in g become Max's
// problems in the complement and values map to 1 - val.
inline GameGraph complement_game(const GameGraph& g) {
  std::vector<Vertex> vs = g.vertices();
  for (auto& v : vs) {
    if (v.owner == Owner::Max) {
      v.owner = Owner::Min;
    } else if (v.owner == Owner::Min) {
      v.owner = Owner::Max;
    }
    v.priority += 1;
  }
  return GameGraph(g.name().empty() ? g.name() : g.name() + "-complement", std::move(vs),
                   g.edges());
}

}  // namespace tailgame
