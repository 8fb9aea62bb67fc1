#include "tailgame/tailgame.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace tailgame;

namespace {

const char* kCoin = R"({
  "name": "coin",
  "vertices": [
    {"id": "r", "owner": "random", "priority": 1},
    {"id": "w", "owner": "max", "priority": 0},
    {"id": "l", "owner": "max", "priority": 1}
  ],
  "edges": [
    {"from": "r", "to": "w", "prob": "1/2"},
    {"from": "r", "to": "l", "prob": "1/2"},
    {"from": "w", "to": "w"},
    {"from": "l", "to": "l"}
  ]
})";

bool has_violation(const std::vector<Violation>& vs, std::string_view needle) {
  for (const auto& v : vs) {
    if (v.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

GameGraph tiny(std::vector<Vertex> vs, std::vector<Edge> es) {
  return GameGraph("", std::move(vs), std::move(es));
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(to_string(Rational(1)), "1/1");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(*parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(*parse_rational("-2"), Rational(-2));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("x"));
  EXPECT_FALSE(parse_rational("1/"));
  EXPECT_FALSE(parse_rational(""));
}

TEST(ParseGame, CoinFixture) {
  auto g = parse_game(kCoin);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.owner(g.index("r")), Owner::Random);
  EXPECT_EQ(g, fixtures::coin());
}

TEST(ParseGame, RowSumMismatch) {
  std::string text = kCoin;
  text.replace(text.find("\"1/2\"}"), 5, "\"2/5\"");
  try {
    parse_game(text);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(has_violation(e.violations(), "row sum ≠ 1"));
  }
}

TEST(ParseGame, SyntaxErrorCarriesPosition) {
  try {
    parse_game("{\"vertices\": [");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(e.position(), ParseError::npos);
  }
}

TEST(ParseGame, StructuralErrors) {
  EXPECT_THROW(parse_game(R"({"vertices": []})"), ParseError);
  EXPECT_THROW(parse_game(R"({"vertices": [{"id": "a", "owner": "king", "priority": 0}], "edges": []})"),
               ParseError);
  EXPECT_THROW(parse_game(R"({"vertices": [{"id": "a", "owner": "max", "priority": -1}], "edges": []})"),
               ParseError);
  EXPECT_THROW(parse_game(R"({"vertices": [{"id": "a", "owner": "random", "priority": 0}],
                              "edges": [{"from": "a", "to": "a", "prob": "one"}]})"),
               ParseError);
}

TEST(SerializeGame, RoundTripAndIdempotence) {
  for (const auto& g : fixtures::all()) {
    const auto text = serialize_game(g);
    EXPECT_EQ(parse_game(text), g) << g.name();
    EXPECT_EQ(serialize_game(parse_game(text)), text) << g.name();
  }
}

TEST(SerializeGame, LowestTermsAndEmptyName) {
  auto g = tiny({{"r", Owner::Random, 0}, {"a", Owner::Max, 0}},
                {{"r", "a", Rational(2, 4)}, {"r", "r", Rational(1, 2)}, {"a", "a", {}}});
  const auto text = serialize_game(g);
  EXPECT_NE(text.find("\"1/2\""), std::string::npos);
  EXPECT_EQ(text.find("2/4"), std::string::npos);
  EXPECT_EQ(text.find("\"name\""), std::string::npos);
}

TEST(SerializeGame, RandomCorpusRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto g = random_game(RandomGameParams{.seed = seed});
    EXPECT_EQ(parse_game(serialize_game(g)), g) << seed;
  }
}

TEST(ValidateGame, Fixtures) {
  for (const auto& g : fixtures::all()) EXPECT_TRUE(validate_game(g).empty()) << g.name();
}

TEST(ValidateGame, DeadEnd) {
  auto g = tiny({{"a", Owner::Max, 0}, {"b", Owner::Max, 0}}, {{"a", "b", {}}});
  auto vs = validate_game(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].message, "dead end");
  EXPECT_EQ(vs[0].where, "vertex b");
}

TEST(ValidateGame, ProbOnControlledEdge) {
  auto g = tiny({{"a", Owner::Max, 0}}, {{"a", "a", Rational(1)}});
  auto vs = validate_game(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_TRUE(has_violation(vs, "carries a prob"));
}

TEST(ValidateGame, OtherViolations) {
  EXPECT_TRUE(has_violation(validate_game(tiny({{"a", Owner::Random, 0}}, {{"a", "a", {}}})), "lacks prob"));
  EXPECT_TRUE(has_violation(validate_game(tiny({{"a", Owner::Random, 0}}, {{"a", "a", Rational(0)}})),
                            "not in (0,1]"));
  EXPECT_TRUE(has_violation(validate_game(tiny({{"a", Owner::Max, 0}, {"a", Owner::Min, 0}}, {{"a", "a", {}}})),
                            "duplicate vertex"));
  EXPECT_TRUE(has_violation(validate_game(tiny({{"a", Owner::Max, 0}}, {{"a", "a", {}}, {"a", "a", {}}})),
                            "duplicate edge"));
  EXPECT_TRUE(has_violation(validate_game(tiny({{"a", Owner::Max, 0}}, {{"a", "a", {}}, {"a", "z", {}}})),
                            "unknown"));
  EXPECT_THROW(require_valid(tiny({{"a", Owner::Max, 0}}, {})), ValidationError);
}

TEST(Winner, Examples) {
  auto g1 = fixtures::choice();
  EXPECT_TRUE(winner_ultimately_periodic(g1, {to_prefix(g1, std::vector<std::string>{"a"}),
                                              to_prefix(g1, std::vector<std::string>{"w"})}));
  auto g3 = fixtures::retry();
  const auto cycle = to_prefix(g3, std::vector<std::string>{"s", "t"});
  EXPECT_FALSE(winner_ultimately_periodic(g3, {{}, cycle}));
  EXPECT_FALSE(winner_ultimately_periodic(g3, {to_prefix(g3, std::vector<std::string>{"s", "t", "s", "t"}), cycle}));
  EXPECT_THROW(winner_ultimately_periodic(g3, {{}, to_prefix(g3, std::vector<std::string>{"s", "w"})}),
               PreconditionError);
}

// Prepending legal vertices to the prefix never changes the winner.
TEST(Winner, ShiftInvariance) {
  SplitMix64 rng(99);
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 1000; ++seed) {
    auto g = random_game(RandomGameParams{.seed = seed});
    // Random walk until a vertex repeats; the repeated segment is the cycle.
    std::vector<VertexIndex> walk{static_cast<VertexIndex>(rng.below(std::uint64_t{g.size()}))};
    std::size_t loop_at = 0;
    for (;;) {
      auto succ = g.successors(walk.back());
      auto next = succ[rng.below(std::uint64_t{succ.size()})].to;
      auto it = std::find(walk.begin(), walk.end(), next);
      if (it != walk.end()) {
        loop_at = static_cast<std::size_t>(it - walk.begin());
        break;
      }
      walk.push_back(next);
    }
    UltimatelyPeriodicPlay base{{walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(loop_at)},
                                {walk.begin() + static_cast<std::ptrdiff_t>(loop_at), walk.end()}};
    ASSERT_TRUE(is_legal(g, base));
    const bool w = winner_ultimately_periodic(g, base);
    // Extend backwards through predecessors of the first vertex.
    UltimatelyPeriodicPlay ext = base;
    for (int step = 0; step < 5; ++step) {
      const VertexIndex first = ext.prefix.empty() ? ext.cycle.front() : ext.prefix.front();
      std::vector<VertexIndex> preds;
      for (VertexIndex u = 0; u < g.size(); ++u) {
        if (g.has_edge(u, first)) preds.push_back(u);
      }
      if (preds.empty()) break;
      ext.prefix.insert(ext.prefix.begin(), preds[rng.below(std::uint64_t{preds.size()})]);
      ASSERT_TRUE(is_legal(g, ext));
      EXPECT_EQ(winner_ultimately_periodic(g, ext), w);
      ++checked;
    }
  }
}

TEST(RandomGame, DeterministicAndValid) {
  const RandomGameParams p{.seed = 7, .n_vertices = 6, .max_priority = 3, .max_out_degree = 3};
  EXPECT_EQ(random_game(p), random_game(p));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto g = random_game(RandomGameParams{.seed = seed, .max_priority = 3});
    EXPECT_TRUE(validate_game(g).empty()) << seed;
  }
}

TEST(RandomGame, SeedsGiveDistinctGames) {
  std::set<std::string> seen;
  for (std::uint64_t seed = 7; seed < 107; ++seed) {
    auto g = random_game(RandomGameParams{.seed = seed, .max_priority = 3});
    auto text = serialize_game(g);
    seen.insert(text.substr(text.find("\"vertices\"")));
  }
  EXPECT_GE(seen.size(), 99u);
}

TEST(ComplementGame, SwapsOwnersAndShiftsPriorities) {
  auto g = fixtures::mirror();
  auto c = complement_game(g);
  EXPECT_EQ(c.owner(c.index("s")), Owner::Max);
  EXPECT_EQ(c.owner(c.index("t")), Owner::Random);
  EXPECT_EQ(c.priority(c.index("w")), 1u);
  EXPECT_TRUE(validate_game(c).empty());
}

TEST(Rng, DeterministicStreams) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  SplitMix64 a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  SplitMix64 r(3);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.below(std::uint64_t{7}), 7u);
}
