#pragma once

#include "tailgame/rng.hpp"
#include "tailgame/strategies.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <vector>

namespace tailgame {

enum class PlayOutcome { Win, Lose, Truncated };

inline std::string_view to_string(PlayOutcome o) {
  switch (o) {
    case PlayOutcome::Win: return "win";
    case PlayOutcome::Lose: return "lose";
    case PlayOutcome::Truncated: return "truncated";
  }
  return "?";
}

struct PlayRecord {
  PlayPrefix trace;
  PlayOutcome outcome = PlayOutcome::Truncated;
  std::optional<std::vector<ProductState>> absorbed_bscc;
  std::optional<std::size_t> first_deviation;

  bool operator==(const PlayRecord&) const = default;
};

// Walks the product chain of (sigma, tau) from one start vertex. A play is
// decided the moment it enters a bottom SCC, since from then on every state
// of the component recurs almost surely.
class PlaySampler {
 public:
  PlaySampler(const GameGraph& g, const MealyStrategy& sigma, const MealyStrategy& tau,
              VertexIndex start)
      : chain_([&] {
          const VertexIndex s[] = {start};
          return product_chain(g, sigma, tau, s);
        }()),
        start_(chain_.start.at(start)) {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    bscc_of_.assign(chain_.size(), kNone);
    for (const auto& b : bsccs(chain_)) {
      for (auto s : b) bscc_of_[s] = members_.size();
      outcome_.push_back(classify_bscc(chain_, b) == Outcome::Win ? PlayOutcome::Win
                                                                  : PlayOutcome::Lose);
      members_.push_back(b);
    }
    // Integer weights over a common denominator per state for exact draws.
    weights_.resize(chain_.size());
    totals_.resize(chain_.size());
    for (StateIndex s = 0; s < chain_.size(); ++s) {
      Integer den = 1;
      for (const auto& t : chain_.transitions[s]) {
        den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(t.prob));
      }
      for (const auto& t : chain_.transitions[s]) {
        weights_[s].push_back(boost::multiprecision::numerator(t.prob) *
                              (den / boost::multiprecision::denominator(t.prob)));
      }
      totals_[s] = den;
    }
  }

  // Marks product states counted as deviations in first_deviation.
  void track_deviations(const QualityTable& q, const ValueVector& vals, const Rational& m) {
    deviation_.assign(chain_.size(), 0);
    for (StateIndex s = 0; s < chain_.size(); ++s) {
      deviation_[s] = detail::deviates(q, vals, m, chain_.states[s].vertex, chain_.states[s].mem_max);
    }
    bscc_deviates_.assign(members_.size(), 0);
    for (std::size_t b = 0; b < members_.size(); ++b) {
      for (auto s : members_[b]) bscc_deviates_[b] |= deviation_[s];
    }
  }

  const ProductChain& chain() const { return chain_; }

  PlayRecord sample(std::uint64_t seed, std::size_t horizon) const {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    SplitMix64 rng(seed);
    PlayRecord rec;
    StateIndex s = start_;
    rec.trace.push_back(chain_.states[s].vertex);
    bool decided = false;
    for (std::size_t step = 0;; ++step) {
      if (!deviation_.empty() && !rec.first_deviation && deviation_[s]) rec.first_deviation = step;
      if (!decided && bscc_of_[s] != kNone) {
        const std::size_t b = bscc_of_[s];
        rec.outcome = outcome_[b];
        std::vector<ProductState> comp;
        for (auto x : members_[b]) comp.push_back(chain_.states[x]);
        rec.absorbed_bscc = std::move(comp);
        decided = true;
      }
      // Inside a component containing deviation states one is hit almost
      // surely; keep walking to date it.
      const bool searching = decided && !deviation_.empty() && !rec.first_deviation &&
                             bscc_deviates_[bscc_of_[s]];
      if ((decided && !searching) || step == horizon) break;
      s = next(s, rng);
      rec.trace.push_back(chain_.states[s].vertex);
    }
    return rec;
  }

 private:
  StateIndex next(StateIndex s, SplitMix64& rng) const {
    const auto& ts = chain_.transitions[s];
    if (ts.size() == 1) return ts.front().to;
    Integer u = rng.below(totals_[s]);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (u < weights_[s][i]) return ts[i].to;
      u -= weights_[s][i];
    }
    return ts.back().to;
  }

  ProductChain chain_;
  StateIndex start_;
  std::vector<std::size_t> bscc_of_;
  std::vector<std::vector<StateIndex>> members_;
  std::vector<PlayOutcome> outcome_;
  std::vector<std::vector<Integer>> weights_;
  std::vector<Integer> totals_;
  std::vector<char> deviation_;
  std::vector<char> bscc_deviates_;
};

inline PlayRecord sample_play(const GameGraph& g, const MealyStrategy& sigma,
                              const MealyStrategy& tau, VertexIndex start, std::uint64_t seed,
                              std::size_t horizon) {
  if (horizon < 1) throw PreconditionError("sample_play: horizon must be at least 1");
  return PlaySampler(g, sigma, tau, start).sample(seed, horizon);
}

struct Estimate {
  Rational estimate;      // wins / (n - truncated)
  Rational variance;      // estimate (1 - estimate) / (n - truncated)
  double std_error = 0;   // sqrt(variance)
  std::size_t n = 0;
  std::size_t wins = 0;
  std::size_t truncated = 0;

  // |estimate - exact| <= k * std_error, decided exactly on squares.
  bool within(const Rational& exact, unsigned k = 3) const {
    const Rational d = estimate - exact;
    return d * d <= Rational(k * k) * variance;
  }
};

struct SimulationOptions {
  std::size_t horizon = 10'000;
  unsigned workers = 1;
};

// Plays sample i with seed derive_seed(seed, i). Truncated plays are excluded
// from the estimate and reported.
inline Estimate estimate_value(const GameGraph& g, const MealyStrategy& sigma,
                               const MealyStrategy& tau, VertexIndex start, std::size_t n,
                               std::uint64_t seed, const SimulationOptions& opts = {}) {
  if (n < 1) throw PreconditionError("estimate_value: n must be at least 1");
  PlaySampler sampler(g, sigma, tau, start);
  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::size_t> wins(workers, 0), truncated(workers, 0);
  detail::parallel_chunks(n, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    for (std::uint64_t i = b; i < e; ++i) {
      auto rec = sampler.sample(derive_seed(seed, i), opts.horizon);
      if (rec.outcome == PlayOutcome::Win) ++wins[w];
      if (rec.outcome == PlayOutcome::Truncated) ++truncated[w];
    }
  });
  Estimate r;
  r.n = n;
  for (unsigned w = 0; w < workers; ++w) {
    r.wins += wins[w];
    r.truncated += truncated[w];
  }
  const std::size_t decided = n - r.truncated;
  if (decided == 0) throw PreconditionError("estimate_value: every sample was truncated");
  r.estimate = Rational(r.wins, decided);
  r.variance = r.estimate * (1 - r.estimate) / decided;
  r.std_error = std::sqrt(to_double(r.variance));
  return r;
}

struct DeviationStats {
  Rational empirical_p;                        // plays with a deviation / n
  std::map<std::size_t, std::size_t> histogram;  // first deviation index -> count
  std::size_t n = 0;
  std::size_t truncated = 0;
};

inline DeviationStats simulate_deviations(const GameGraph& g, const MealyStrategy& sigma,
                                          const MealyStrategy& tau, const ValueVector& vals,
                                          const Rational& m, VertexIndex start, std::size_t n,
                                          std::uint64_t seed, const SimulationOptions& opts = {},
                                          const EnumerationOptions& enumeration = {}) {
  if (n < 1) throw PreconditionError("simulate_deviations: n must be at least 1");
  if (m <= 0) throw PreconditionError("simulate_deviations: m must be positive");
  PlaySampler sampler(g, sigma, tau, start);
  sampler.track_deviations(quality_table(g, sigma, enumeration), vals, m);
  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::map<std::size_t, std::size_t>> hist(workers);
  std::vector<std::size_t> truncated(workers, 0);
  detail::parallel_chunks(n, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    for (std::uint64_t i = b; i < e; ++i) {
      auto rec = sampler.sample(derive_seed(seed, i), opts.horizon);
      if (rec.first_deviation) ++hist[w][*rec.first_deviation];
      if (rec.outcome == PlayOutcome::Truncated) ++truncated[w];
    }
  });
  DeviationStats r;
  r.n = n;
  std::size_t hits = 0;
  for (unsigned w = 0; w < workers; ++w) {
    for (const auto& [k, c] : hist[w]) {
      r.histogram[k] += c;
      hits += c;
    }
    r.truncated += truncated[w];
  }
  r.empirical_p = Rational(hits, n);
  return r;
}

}  // namespace tailgame
