#include "tailgame/tailgame.hpp"

#include <gtest/gtest.h>

using namespace tailgame;

namespace {

struct Retry {
  GameGraph g = fixtures::retry();
  VertexIndex s = g.index("s");
  MealyStrategy sigma3 = stubborn_strategy(g, memoryless(g, Player::Max, {{"s", "t"}}),
                                           memoryless(g, Player::Max, {{"s", "l"}}), s, 4);
  MealyStrategy tau = default_strategy(g, Player::Min);
};

}  // namespace

TEST(SamplePlay, Deterministic) {
  auto g = fixtures::coin();
  auto sigma = default_strategy(g, Player::Max);
  auto tau = default_strategy(g, Player::Min);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = sample_play(g, sigma, tau, g.index("r"), seed, 100);
    EXPECT_EQ(a, sample_play(g, sigma, tau, g.index("r"), seed, 100));
    // Decided by the first draw.
    EXPECT_EQ(a.trace.size(), 2u);
    EXPECT_EQ(a.outcome, a.trace.back() == g.index("w") ? PlayOutcome::Win : PlayOutcome::Lose);
  }
}

TEST(SamplePlay, ChoiceWinsAtStepOne) {
  auto g = fixtures::choice();
  auto sigma = memoryless(g, Player::Max, {{"a", "w"}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = sample_play(g, sigma, default_strategy(g, Player::Min), g.index("a"), seed, 10);
    EXPECT_EQ(r.outcome, PlayOutcome::Win);
    EXPECT_EQ(r.trace.size(), 2u);
  }
  EXPECT_THROW(sample_play(g, sigma, default_strategy(g, Player::Min), 0, 1, 0), PreconditionError);
}

// Decided records carry the absorbing component, which classifies to the
// outcome.
TEST(SamplePlay, RecordInvariant) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = random_game(RandomGameParams{.seed = seed});
    auto sigma = default_strategy(g, Player::Max);
    auto tau = default_strategy(g, Player::Min);
    PlaySampler sampler(g, sigma, tau, 0);
    for (std::uint64_t i = 0; i < 20; ++i) {
      auto rec = sampler.sample(derive_seed(seed, i), 1000);
      ASSERT_NE(rec.outcome, PlayOutcome::Truncated);
      ASSERT_TRUE(rec.absorbed_bscc);
      std::vector<StateIndex> ids;
      for (const auto& ps : *rec.absorbed_bscc) ids.push_back(*sampler.chain().find(ps));
      EXPECT_EQ(classify_bscc(sampler.chain(), ids) == Outcome::Win, rec.outcome == PlayOutcome::Win);
      EXPECT_TRUE(is_legal_prefix(g, rec.trace));
    }
  }
}

TEST(SamplePlay, Truncation) {
  // r loops on itself with probability 1/2, so one step often stays outside
  // every bottom component.
  auto g = GameGraph("", {{"r", Owner::Random, 1}, {"a", Owner::Max, 1}, {"b", Owner::Max, 2}},
                     {{"r", "r", Rational(1, 2)}, {"r", "a", Rational(1, 2)}, {"a", "b", {}}, {"b", "a", {}}});
  auto sigma = default_strategy(g, Player::Max);
  auto tau = default_strategy(g, Player::Min);
  std::size_t truncated = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto rec = sample_play(g, sigma, tau, g.index("r"), seed, 1);
    if (rec.outcome == PlayOutcome::Truncated) {
      ++truncated;
      EXPECT_FALSE(rec.absorbed_bscc);
    }
  }
  EXPECT_GT(truncated, 0u);
}

TEST(Estimate, Examples) {
  auto g1 = fixtures::choice();
  auto e1 = estimate_value(g1, memoryless(g1, Player::Max, {{"a", "w"}}), default_strategy(g1, Player::Min),
                           g1.index("a"), 10, 3);
  EXPECT_EQ(e1.estimate, 1);
  EXPECT_EQ(e1.std_error, 0.0);

  auto g2 = fixtures::coin();
  auto sigma = default_strategy(g2, Player::Max);
  auto tau = default_strategy(g2, Player::Min);
  auto one = estimate_value(g2, sigma, tau, g2.index("r"), 1, 9);
  EXPECT_TRUE(one.estimate == 0 || one.estimate == 1);
  auto big = estimate_value(g2, sigma, tau, g2.index("r"), 10000, 1);
  EXPECT_TRUE(big.within(Rational(1, 2)));
  EXPECT_EQ(big.n, 10000u);
}

TEST(Estimate, WorkersAreReproducible) {
  Retry f;
  auto a = estimate_value(f.g, f.sigma3, f.tau, f.s, 2000, 42, {10000, 1});
  auto b = estimate_value(f.g, f.sigma3, f.tau, f.s, 2000, 42, {10000, 4});
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.wins, b.wins);
}

TEST(Estimate, AllTruncatedThrows) {
  // a -> b -> c with c absorbing: one step from a never reaches c.
  auto g = GameGraph("", {{"a", Owner::Max, 1}, {"b", Owner::Max, 1}, {"c", Owner::Max, 0}},
                     {{"a", "b", {}}, {"b", "c", {}}, {"c", "c", {}}});
  auto sigma = default_strategy(g, Player::Max);
  auto tau = default_strategy(g, Player::Min);
  EXPECT_THROW(estimate_value(g, sigma, tau, g.index("a"), 5, 1, {1, 1}), PreconditionError);
  auto e = estimate_value(g, sigma, tau, g.index("a"), 5, 1, {2, 1});
  EXPECT_EQ(e.estimate, 1);
  EXPECT_EQ(e.truncated, 0u);
}

TEST(Deviations, Examples) {
  Retry f;
  auto vals = solve_game(f.g).values;
  auto d = simulate_deviations(f.g, f.sigma3, f.tau, vals, Rational(1), f.s, 10000, 5);
  const double p = to_double(d.empirical_p);
  EXPECT_LE(std::abs(p - 0.25), 3 * std::sqrt(0.25 * 0.75 / 10000));
  ASSERT_FALSE(d.histogram.empty());
  EXPECT_EQ(d.histogram.begin()->first, 4u);
  EXPECT_EQ(d.histogram.size(), 1u);

  auto g1 = fixtures::choice();
  auto d1 = simulate_deviations(g1, memoryless(g1, Player::Max, {{"a", "w"}}), default_strategy(g1, Player::Min),
                                solve_game(g1).values, Rational(1), g1.index("a"), 100, 1);
  EXPECT_EQ(d1.empirical_p, 0);
  EXPECT_TRUE(d1.histogram.empty());
}

// Along simulated plays of a reset strategy the window start never moves
// backwards.
TEST(Deviations, MonotoneWindow) {
  Retry f;
  auto vals = solve_game(f.g).values;
  auto r = reset_transform(f.g, f.sigma3, vals, Rational(1), {false, {}});
  PlaySampler sampler(f.g, r.strategy, f.tau, f.s);
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rec = sampler.sample(derive_seed(8, i), 200);
    auto t = latest_deviation_dates(f.g, f.sigma3, r.quality, vals, Rational(1), rec.trace);
    for (std::size_t n = 1; n < t.size(); ++n) EXPECT_GE(t[n], t[n - 1]);
  }
}
