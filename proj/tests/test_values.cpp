#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace tailgame;

namespace {

ValueVector by_id(const GameGraph& g, std::initializer_list<std::pair<const char*, Rational>> kv) {
  ValueVector out(g.size());
  for (const auto& [id, q] : kv) out[g.index(id)] = q;
  return out;
}

std::vector<GameGraph> corpus() {
  auto out = fixtures::all();
  for (std::uint64_t seed = 1; seed <= 200; ++seed) out.push_back(random_game(RandomGameParams{.seed = seed}));
  return out;
}

}  // namespace

TEST(SolveGame, Fixtures) {
  auto g1 = fixtures::choice();
  auto s1 = solve_game(g1);
  EXPECT_EQ(s1.values, by_id(g1, {{"a", 1}, {"w", 1}, {"l", 0}}));
  EXPECT_EQ(s1.sigma_star.action(0, g1.index("a")), g1.index("w"));

  auto g2 = fixtures::coin();
  EXPECT_EQ(solve_game(g2).values, by_id(g2, {{"r", Rational(1, 2)}, {"w", 1}, {"l", 0}}));

  auto g3 = fixtures::retry();
  auto s3 = solve_game(g3);
  EXPECT_EQ(s3.values, by_id(g3, {{"s", 1}, {"t", 1}, {"w", 1}, {"l", 0}}));
  EXPECT_EQ(s3.sigma_star.action(0, g3.index("s")), g3.index("t"));

  auto gm = fixtures::mirror();
  EXPECT_EQ(solve_game(gm).values, by_id(gm, {{"s", 0}, {"t", 0}, {"w", 1}, {"l", 0}}));
  auto gl = fixtures::linger();
  EXPECT_EQ(solve_game(gl).values, ValueVector(gl.size(), Rational(1)));
  auto gml = fixtures::mirror_linger();
  EXPECT_EQ(solve_game(gml).values, ValueVector(gml.size(), Rational(0)));
}

// Ties go to the smallest successor id.
TEST(SolveGame, LexicographicTieBreak) {
  auto g = GameGraph("", {{"a", Owner::Max, 1}, {"x", Owner::Max, 0}, {"y", Owner::Max, 0}},
                     {{"a", "y", {}}, {"a", "x", {}}, {"x", "x", {}}, {"y", "y", {}}});
  EXPECT_EQ(solve_game(g).sigma_star.action(0, g.index("a")), g.index("x"));
}

TEST(SolveGame, CapAndOracle) {
  auto g = random_game(RandomGameParams{.seed = 29});
  EXPECT_THROW(solve_game(g, {1, 1}), CapExceeded);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto h = random_game(RandomGameParams{.seed = seed});
    auto exact = solve_game(h).values;
    auto approx = oracle::maxmin(h);
    for (VertexIndex v = 0; v < h.size(); ++v) EXPECT_NEAR(to_double(exact[v]), approx[v], 1e-6) << seed;
  }
}

TEST(SolveGame, CorpusProperties) {
  for (const auto& g : corpus()) {
    auto s = solve_game(g);
    EXPECT_EQ(s.lower_enum, s.upper_enum) << g.name();
    EXPECT_TRUE(check_value_equations(g, s.values).empty()) << g.name();
    // Both witnesses are optimal from every vertex.
    EXPECT_EQ(lower_value(g, s.sigma_star), s.values) << g.name();
    EXPECT_EQ(upper_value(g, s.tau_star), s.values) << g.name();
    auto p = prune_superfluous(g, s.values);
    EXPECT_TRUE(is_consistent(p, s.values)) << g.name();
    EXPECT_EQ(solve_game(p).values, s.values) << g.name();
  }
}

TEST(SolveGame, ComplementValues) {
  for (const auto& g : corpus()) {
    auto a = solve_game(g).values;
    auto b = solve_game(complement_game(g)).values;
    for (VertexIndex v = 0; v < g.size(); ++v) EXPECT_EQ(b[v], 1 - a[v]) << g.name();
  }
}

TEST(ValueEquations, Examples) {
  auto g2 = fixtures::coin();
  EXPECT_TRUE(check_value_equations(g2, by_id(g2, {{"r", Rational(1, 2)}, {"w", 1}, {"l", 0}})).empty());
  auto bad = check_value_equations(g2, by_id(g2, {{"r", 1}, {"w", 1}, {"l", 0}}));
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].where, "vertex r");
  EXPECT_NE(bad[0].message.find("1/1 ≠ 1/2"), std::string::npos);
  auto g1 = fixtures::choice();
  auto bad1 = check_value_equations(g1, by_id(g1, {{"a", 0}, {"w", 1}, {"l", 0}}));
  ASSERT_EQ(bad1.size(), 1u);
  EXPECT_EQ(bad1[0].where, "vertex a");
}

TEST(MinPositiveValue, Examples) {
  auto g2 = fixtures::coin();
  EXPECT_EQ(*min_positive_value(solve_game(g2).values), Rational(1, 2));
  EXPECT_FALSE(min_positive_value(ValueVector(3, Rational(0))));
  EXPECT_EQ(*min_positive_value(solve_game(fixtures::choice()).values), 1);
}

TEST(Prune, Examples) {
  auto g1 = fixtures::choice();
  auto v1 = solve_game(g1).values;
  auto p1 = prune_superfluous(g1, v1);
  EXPECT_FALSE(p1.has_edge(p1.index("a"), p1.index("l")));
  EXPECT_TRUE(p1.has_edge(p1.index("a"), p1.index("w")));
  EXPECT_EQ(p1.edges().size(), g1.edges().size() - 1);
  EXPECT_FALSE(is_consistent(g1, v1));
  EXPECT_TRUE(is_consistent(p1, v1));

  auto g2 = fixtures::coin();
  auto v2 = solve_game(g2).values;
  EXPECT_EQ(prune_superfluous(g2, v2), g2);
  EXPECT_TRUE(is_consistent(g2, v2));

  auto g3 = fixtures::retry();
  auto p3 = prune_superfluous(g3, solve_game(g3).values);
  EXPECT_FALSE(p3.has_edge(p3.index("s"), p3.index("l")));
  EXPECT_EQ(p3.edges().size(), g3.edges().size() - 1);

  auto stale = v1;
  stale[g1.index("a")] = 0;
  EXPECT_THROW(prune_superfluous(g1, stale), PreconditionError);
}

TEST(SolutionFile, Format) {
  auto g3 = fixtures::retry();
  auto s = solve_game(g3);
  auto text = serialize_solution(g3, s);
  auto j = nlohmann::ordered_json::parse(text);
  EXPECT_EQ(j["values"]["s"], "1/1");
  EXPECT_EQ(j["values"]["l"], "0/1");
  EXPECT_EQ(j["consistent"], false);
  EXPECT_EQ(j["m"], "1/1");
  EXPECT_EQ(parse_strategy(j["sigma_star"].dump(), g3), s.sigma_star);
  EXPECT_EQ(parse_solution_values(text, g3), s.values);

  auto gml = fixtures::mirror_linger();
  auto jz = nlohmann::ordered_json::parse(serialize_solution(gml, solve_game(gml)));
  EXPECT_EQ(jz["m"], "inf");
  EXPECT_EQ(jz["consistent"], true);
}
