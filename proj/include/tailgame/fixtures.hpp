#pragma once

#include "tailgame/game.hpp"

#include <functional>
#include <string>
#include <vector>

// Small hand-checkable arenas. Vertex w (priority 0) and l (priority 1) are
// winning and losing self-loop sinks throughout.
namespace tailgame::fixtures {

namespace detail {
inline Edge prob_edge(std::string from, std::string to, int num, int den) {
  return {std::move(from), std::move(to), Rational(num, den)};
}
inline Edge edge(std::string from, std::string to) { return {std::move(from), std::move(to), {}}; }

inline void add_sinks(std::vector<Vertex>& vs, std::vector<Edge>& es) {
  vs.push_back({"w", Owner::Max, 0});
  vs.push_back({"l", Owner::Max, 1});
  es.push_back(edge("w", "w"));
  es.push_back(edge("l", "l"));
}
}  // namespace detail

// a chooses between w and l. Values a=1, w=1, l=0.
inline GameGraph choice() {
  std::vector<Vertex> vs{{"a", Owner::Max, 1}};
  std::vector<Edge> es{detail::edge("a", "w"), detail::edge("a", "l")};
  detail::add_sinks(vs, es);
  return GameGraph("choice", std::move(vs), std::move(es));
}

// r flips a fair coin between w and l. Values r=1/2.
inline GameGraph coin() {
  std::vector<Vertex> vs{{"r", Owner::Random, 1}};
  std::vector<Edge> es{detail::prob_edge("r", "w", 1, 2), detail::prob_edge("r", "l", 1, 2)};
  detail::add_sinks(vs, es);
  return GameGraph("coin", std::move(vs), std::move(es));
}

// s may give up (to l) or retry the coin t, which wins or returns to s.
// Values s=t=w=1, l=0.
inline GameGraph retry() {
  std::vector<Vertex> vs{{"s", Owner::Max, 1}, {"t", Owner::Random, 1}};
  std::vector<Edge> es{detail::edge("s", "t"), detail::edge("s", "l"),
                       detail::prob_edge("t", "w", 1, 2), detail::prob_edge("t", "s", 1, 2)};
  detail::add_sinks(vs, es);
  return GameGraph("retry", std::move(vs), std::move(es));
}

// retry with the roles swapped: Min at s may concede (to w) or keep sending
// the play through t, which loses or returns. Values s=t=0, w=1, l=0.
inline GameGraph mirror() {
  std::vector<Vertex> vs{{"s", Owner::Min, 1}, {"t", Owner::Random, 1}};
  std::vector<Edge> es{detail::edge("s", "t"), detail::edge("s", "w"),
                       detail::prob_edge("t", "l", 1, 2), detail::prob_edge("t", "s", 1, 2)};
  detail::add_sinks(vs, es);
  return GameGraph("mirror", std::move(vs), std::move(es));
}

// Consistent variant of retry: instead of giving up, s may stall on an odd
// self-loop. Every strategy that eventually stalls forever loses, although
// every edge preserves value. Values s=t=w=1.
inline GameGraph linger() {
  std::vector<Vertex> vs{{"s", Owner::Max, 1}, {"t", Owner::Random, 1}, {"w", Owner::Max, 0}};
  std::vector<Edge> es{detail::edge("s", "s"), detail::edge("s", "t"),
                       detail::prob_edge("t", "w", 1, 2), detail::prob_edge("t", "s", 1, 2),
                       detail::edge("w", "w")};
  return GameGraph("linger", std::move(vs), std::move(es));
}

// Consistent variant of mirror: Min at s may stall on an even self-loop,
// which hands the play to Max. Values s=t=l=0.
inline GameGraph mirror_linger() {
  std::vector<Vertex> vs{{"s", Owner::Min, 0}, {"t", Owner::Random, 1}, {"l", Owner::Max, 1}};
  std::vector<Edge> es{detail::edge("s", "s"), detail::edge("s", "t"),
                       detail::prob_edge("t", "l", 1, 2), detail::prob_edge("t", "s", 1, 2),
                       detail::edge("l", "l")};
  return GameGraph("mirror-linger", std::move(vs), std::move(es));
}

inline std::vector<GameGraph> all() {
  return {choice(), coin(), retry(), mirror(), linger(), mirror_linger()};
}

}  // namespace tailgame::fixtures
