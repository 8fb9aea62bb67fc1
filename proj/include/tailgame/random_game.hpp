#pragma once

#include "tailgame/game.hpp"
#include "tailgame/rng.hpp"

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace tailgame {

struct RandomGameParams {
  std::uint64_t seed = 0;
  std::size_t n_vertices = 6;
  unsigned max_priority = 2;
  std::size_t max_out_degree = 3;
  Rational random_vertex_fraction{1, 3};
};

// Deterministic in its parameters. Random vertices get probabilities with a
// common denominator of at most 16. Ids are "v0", "v1", ... zero-padded so
// that id order matches creation order.
inline GameGraph random_game(const RandomGameParams& p) {
  if (p.n_vertices == 0 || p.max_out_degree == 0) {
    throw PreconditionError("random_game: need n_vertices >= 1 and max_out_degree >= 1");
  }
  SplitMix64 rng(SplitMix64::mix(p.seed));
  const std::size_t width = std::to_string(p.n_vertices - 1).size();
  auto name = [&](std::size_t i) {
    std::string s = std::to_string(i);
    return "v" + std::string(width - s.size(), '0') + s;
  };

  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < p.n_vertices; ++i) {
    Owner owner = rng.chance(p.random_vertex_fraction) ? Owner::Random
                  : rng.below(std::uint64_t{2}) == 0   ? Owner::Max
                                                       : Owner::Min;
    unsigned pri = static_cast<unsigned>(rng.below(std::uint64_t{p.max_priority} + 1));
    vs.push_back({name(i), owner, pri});
  }

  std::vector<Edge> es;
  const std::size_t max_deg = std::min(p.max_out_degree, p.n_vertices);
  std::vector<std::size_t> pool(p.n_vertices);
  for (std::size_t i = 0; i < p.n_vertices; ++i) {
    const std::size_t deg = 1 + rng.below(std::uint64_t{max_deg});
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t k = 0; k < deg; ++k) {  // partial Fisher-Yates
      std::swap(pool[k], pool[k + rng.below(std::uint64_t{pool.size() - k})]);
    }
    std::vector<std::size_t> targets(pool.begin(), pool.begin() + deg);
    if (vs[i].owner != Owner::Random) {
      for (auto t : targets) es.push_back({name(i), name(t), {}});
      continue;
    }
    // Split a total of `den` units into `deg` positive parts.
    const std::uint64_t den = deg + rng.below(std::uint64_t{16 - deg + 1});
    std::vector<std::uint64_t> parts(deg, 1);
    for (std::uint64_t extra = den - deg; extra > 0; --extra) ++parts[rng.below(std::uint64_t{deg})];
    for (std::size_t k = 0; k < deg; ++k) {
      es.push_back({name(i), name(targets[k]), Rational(parts[k], den)});
    }
  }
  return GameGraph("random-" + std::to_string(p.seed), std::move(vs), std::move(es));
}

}  // namespace tailgame

namespace tailgame {

inline GameGraph random_game(std::uint64_t seed, std::size_t n_vertices, unsigned max_priority,
                             std::size_t max_out_degree, const Rational& random_vertex_fraction) {
  return random_game(
      RandomGameParams{seed, n_vertices, max_priority, max_out_degree, random_vertex_fraction});
}

}  // namespace tailgame
