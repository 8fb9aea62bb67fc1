#include "commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace tailgame;
using namespace tailgame::cli;

namespace {

const std::string kData = TAILGAME_DATA_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result run_cmd(const std::string& command, Options o) {
  std::ostringstream out, err;
  int code = run(command, o, out, err);
  return {code, out.str(), err.str()};
}

Options game(const std::string& file) {
  Options o;
  o.game = kData + "/" + file;
  return o;
}

Options game_strategy(const std::string& file, const std::string& strat) {
  Options o = game(file);
  o.strategy = kData + "/" + strat;
  return o;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tailgame_test_" + name)).string();
}

}  // namespace

TEST(Cli, DataFilesMatchFixtures) {
  EXPECT_EQ(load_game(kData + "/G1.game"), fixtures::choice());
  EXPECT_EQ(load_game(kData + "/G2.game"), fixtures::coin());
  EXPECT_EQ(load_game(kData + "/G3.game"), fixtures::retry());
  EXPECT_EQ(load_game(kData + "/mirror.game"), fixtures::mirror());
  EXPECT_EQ(load_game(kData + "/linger.game"), fixtures::linger());
  EXPECT_EQ(load_game(kData + "/mirror-linger.game"), fixtures::mirror_linger());
}

TEST(Cli, Solve) {
  auto r = run_cmd("solve", game("G3.game"));
  EXPECT_EQ(r.code, kPass);
  EXPECT_EQ(r.out, "l=0/1\ns=1/1\nt=1/1\nw=1/1\n");
  EXPECT_NE(run_cmd("solve", game("G2.game")).out.find("r=1/2\n"), std::string::npos);
  EXPECT_EQ(run_cmd("solve", game("missing.game")).code, kInputError);
  EXPECT_EQ(run_cmd("solve", game("corrupt.game")).code, kInputError);
  auto o = game("G3.game");
  o.cap = 1;
  EXPECT_EQ(run_cmd("solve", o).code, kCapExceeded);
}

TEST(Cli, SolveWritesSolutionFile) {
  auto o = game("G3.game");
  o.out = temp_path("g3.solution");
  ASSERT_EQ(run_cmd("solve", o).code, kPass);
  auto vals = parse_solution_values(tailgame::detail::read_file(o.out), fixtures::retry());
  EXPECT_EQ(vals, solve_game(fixtures::retry()).values);
  std::filesystem::remove(o.out);
}

TEST(Cli, Verify) {
  for (const char* f : {"G1.game", "G2.game", "G3.game", "mirror.game", "linger.game", "mirror-linger.game"}) {
    auto r = run_cmd("verify", game(f));
    EXPECT_EQ(r.code, kPass) << f << "\n" << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << f;
  }
  auto g1 = run_cmd("verify", game("G1.game"));
  EXPECT_NE(g1.out.find("1 superfluous edge(s) removed"), std::string::npos);
  EXPECT_EQ(run_cmd("verify", game("corrupt.game")).code, kInputError);
}

TEST(Cli, VerifyGeneratedGames) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Options gen;
    gen.seed = seed;
    gen.out = temp_path("gen.game");
    ASSERT_EQ(run_cmd("gen", gen).code, kPass);
    Options o;
    o.game = gen.out;
    auto r = run_cmd("verify", o);
    EXPECT_EQ(r.code, kPass) << seed << "\n" << r.out;
  }
  std::filesystem::remove(temp_path("gen.game"));
}

TEST(Cli, Reset) {
  auto o = game_strategy("G3.game", "sigma3.strat");
  o.out = temp_path("reset.strat");
  auto r = run_cmd("reset", o);
  EXPECT_EQ(r.code, kPass) << r.err;
  EXPECT_NE(r.out.find("s: lower(sigma)=7/8 lower(sigma')=1/1 val=1/1"), std::string::npos) << r.out;
  auto g3 = fixtures::retry();
  EXPECT_EQ(lower_value(g3, load_strategy(o.out, g3))[g3.index("s")], 1);
  std::filesystem::remove(o.out);

  auto opt = game_strategy("G3.game", "G3-good.strat");
  opt.out = temp_path("reset-opt.strat");
  ASSERT_EQ(run_cmd("reset", opt).code, kPass);
  auto p3 = prune_superfluous(g3, solve_game(g3).values);
  EXPECT_TRUE(behaviorally_equal(p3, load_strategy(opt.out, p3), load_strategy(kData + "/G3-good.strat", p3)));
  std::filesystem::remove(opt.out);

  auto zero = run_cmd("reset", game_strategy("mirror-linger.game", "mirror-linger-max.strat"));
  EXPECT_EQ(zero.code, kPrecondition);
  EXPECT_NE(zero.err.find("m = inf"), std::string::npos);

  auto linger = run_cmd("reset", game_strategy("linger.game", "linger-stubborn.strat"));
  EXPECT_EQ(linger.code, kPass);
  EXPECT_NE(linger.out.find("arena=pruned"), std::string::npos);
}

TEST(Cli, Prune) {
  auto r = run_cmd("prune", game("G1.game"));
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.err.find("removed a -> l"), std::string::npos);
  auto p = parse_game(r.out);
  EXPECT_FALSE(p.has_edge(p.index("a"), p.index("l")));
}

TEST(Cli, Check) {
  EXPECT_EQ(run_cmd("check", game_strategy("G3.game", "sigma3.strat")).code, kPass);
  EXPECT_EQ(run_cmd("check", game("corrupt.game")).code, kInputError);
  auto bad = temp_path("deadend.game");
  {
    std::ofstream f(bad);
    f << R"({"vertices": [{"id": "a", "owner": "max", "priority": 0}], "edges": []})";
  }
  Options o;
  o.game = bad;
  auto r = run_cmd("check", o);
  EXPECT_EQ(r.code, kCheckFailed);
  EXPECT_NE(r.out.find("dead end"), std::string::npos);
  std::filesystem::remove(bad);
  // The memoryless s->t strategy is not legal in a game without that edge.
  auto p3 = temp_path("pruned-g1.game");
  {
    std::ofstream f(p3);
    f << serialize_game(prune_superfluous(fixtures::retry(), solve_game(fixtures::retry()).values));
  }
  Options q;
  q.game = p3;
  q.strategy = kData + "/G3-bad.strat";
  EXPECT_EQ(run_cmd("check", q).code, kCheckFailed);
  std::filesystem::remove(p3);
}

TEST(Cli, QualityLowerAndDeviation) {
  auto q = run_cmd("quality", game_strategy("G3.game", "sigma3.strat"));
  EXPECT_EQ(q.code, kPass);
  for (const char* line : {"s[m0]=7/8\n", "s[m1]=3/4\n", "s[m2]=1/2\n", "s[m3]=0/1\n"}) {
    EXPECT_NE(q.out.find(line), std::string::npos) << line;
  }
  auto lv = run_cmd("lower-value", game_strategy("G3.game", "sigma3.strat"));
  EXPECT_NE(lv.out.find("s=7/8\n"), std::string::npos);
  EXPECT_NE(lv.out.find("eps=1/8\n"), std::string::npos);

  auto o = game_strategy("G3.game", "sigma3.strat");
  o.start = "s";
  auto d = run_cmd("deviation-prob", o);
  EXPECT_EQ(d.code, kPass);
  EXPECT_EQ(d.out, "p=1/4\neps=1/8\nm=1/1\nbound=3/4\n");
  o.start = "nowhere";
  EXPECT_EQ(run_cmd("deviation-prob", o).code, kInputError);
  auto wrong = game_strategy("G3.game", "sigma3.strat");
  wrong.tau = kData + "/sigma3.strat";
  wrong.start = "s";
  EXPECT_EQ(run_cmd("deviation-prob", wrong).code, kInputError);
}

TEST(Cli, SimulateIsDeterministic) {
  auto o = game_strategy("G3.game", "sigma3.strat");
  o.start = "s";
  o.samples = 2000;
  o.seed = 17;
  auto a = run_cmd("simulate", o);
  ASSERT_EQ(a.code, kPass) << a.err;
  EXPECT_EQ(a.out, run_cmd("simulate", o).out);
  o.workers = 3;
  EXPECT_EQ(a.out, run_cmd("simulate", o).out);
  auto j = nlohmann::ordered_json::parse(a.out);
  for (const char* key : {"estimate", "stderr", "n", "truncated_count", "histogram"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["n"], 2000);
  EXPECT_TRUE(j["histogram"].contains("4"));
}

TEST(Cli, GenAndStubborn) {
  Options a, b;
  a.seed = b.seed = 5;
  EXPECT_EQ(run_cmd("gen", a).out, run_cmd("gen", b).out);
  auto o = game("G3.game");
  o.good = kData + "/G3-good.strat";
  o.bad = kData + "/G3-bad.strat";
  o.pivot = "s";
  o.k = 4;
  auto r = run_cmd("stubborn", o);
  ASSERT_EQ(r.code, kPass);
  auto g3 = fixtures::retry();
  EXPECT_EQ(parse_strategy(r.out, g3), load_strategy(kData + "/sigma3.strat", g3));
  EXPECT_EQ(run_cmd("nonsense", Options{}).code, kInputError);
}
