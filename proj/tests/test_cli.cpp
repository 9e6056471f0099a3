#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "choicerank/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = CHOICERANK_CLI_PATH;
const fs::path fixtures = CHOICERANK_FIXTURE_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("choicerank_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }
  static std::string fixture(const std::string& name) { return (fixtures / name).string(); }

  // Exit status of the CLI; stderr goes to a file so test output stays clean.
  int run(const std::string& args) const {
    const std::string cmd = cli + " " + args + " 2>" + tmp("stderr.txt") + " >" + tmp("stdout.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<double> strengths(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    return choicerank::parse_strengths(in, n).vector();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(slurp(tmp("stdout.txt")).find("rank"), std::string::npos);
  EXPECT_EQ(run("evaluate --help"), 0);
  EXPECT_NE(slurp(tmp("stdout.txt")).find("rank_disp"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("rank -g " + fixture("star_graph.tsv")), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("rank -g " + fixture("star_graph.tsv") + " -t " + fixture("star_traffic.tsv") +
                " -o " + tmp("l.tsv") + " --alpha 1"),
            2);
}

TEST_F(Cli, RankStar) {
  ASSERT_EQ(run("rank -g " + fixture("star_graph.tsv") + " -t " + fixture("star_traffic.tsv") +
                " -o " + tmp("l.tsv") + " --transitions " + tmp("p.tsv")),
            0);
  const auto lam = strengths(tmp("l.tsv"), 3);
  EXPECT_NEAR(lam[0], 1.0, 1e-6);
  EXPECT_NEAR(lam[1], 4.0 / 3.0, 1e-6);
  EXPECT_NEAR(lam[2], 2.0 / 3.0, 1e-6);
  EXPECT_EQ(slurp(tmp("p.tsv")), "0\t1\t0.66666666666666663\n0\t2\t0.33333333333333331\n");
  const std::string err = slurp(tmp("stderr.txt"));
  EXPECT_NE(err.find("iter 1 delta"), std::string::npos);
  EXPECT_NE(err.find("s/iteration"), std::string::npos);
}

TEST_F(Cli, RankMaxIterZero) {
  EXPECT_EQ(run("rank -q -g " + fixture("star_graph.tsv") + " -t " + fixture("star_traffic.tsv") +
                " -o " + tmp("l.tsv") + " --max-iter 0"),
            5);
  EXPECT_EQ(slurp(tmp("l.tsv")), "0\t1\n1\t1\n2\t1\n");
  EXPECT_EQ(run("rank -q -g " + fixture("star_graph.tsv") + " -t " + fixture("star_traffic.tsv") +
                " -o " + tmp("l.tsv") + " --max-iter 0 --best-effort"),
            0);
}

TEST_F(Cli, RankFixedIterations) {
  EXPECT_EQ(run("rank -g " + fixture("star_graph.tsv") + " -t " + fixture("star_traffic.tsv") +
                " -o " + tmp("l.tsv") + " --tol 0 --max-iter 3"),
            0);
  const std::string err = slurp(tmp("stderr.txt"));
  EXPECT_NE(err.find("ran 3 iterations"), std::string::npos);
  EXPECT_NE(err.find("iter 3 delta nan"), std::string::npos);
}

TEST_F(Cli, RankInputErrors) {
  std::ofstream(tmp("unknown.tsv")) << "0\t0\t10\n9\t1\t0\n";
  EXPECT_EQ(run("rank -g " + fixture("star_graph.tsv") + " -t " + tmp("unknown.tsv") + " -o " +
                tmp("l.tsv")),
            3);
  EXPECT_NE(slurp(tmp("stderr.txt")).find("line 2"), std::string::npos);
  std::ofstream(tmp("sink.tsv")) << "0\t0\t10\n1\t7\t1\n2\t3\t0\n";
  EXPECT_EQ(run("rank -g " + fixture("star_graph.tsv") + " -t " + tmp("sink.tsv") + " -o " +
                tmp("l.tsv")),
            4);
  EXPECT_EQ(run("rank -g " + tmp("missing.tsv") + " -t " + tmp("sink.tsv") + " -o " + tmp("l.tsv")),
            3);
}

TEST_F(Cli, ConserveFlowFlag) {
  const std::string base =
      "rank -q -g " + fixture("star_graph.tsv") + " -t " + fixture("star_traffic_in_only.tsv") +
      " -o " + tmp("l.tsv");
  // copying c_in gives nodes 1 and 2 departures but they are sinks
  EXPECT_EQ(run(base), 3);
  EXPECT_EQ(run(base + " --conserve-flow"), 4);
  EXPECT_EQ(run("check -g " + fixture("cycle_graph.tsv") + " -t " +
                fixture("star_traffic_in_only.tsv") + " --conserve-flow"),
            0);
}

TEST_F(Cli, SimulateCycle) {
  ASSERT_EQ(run("simulate -g " + fixture("cycle_graph.tsv") +
                " -k 1 -T 10 --start node:0 --seed 3 -o " + tmp("c.tsv") + " --traffic " +
                tmp("t.tsv")),
            0);
  EXPECT_EQ(slurp(tmp("c.tsv")), "0\t1\t4\n1\t2\t3\n2\t0\t3\n");
  EXPECT_EQ(slurp(tmp("t.tsv")), "0\t3\t4\n1\t4\t3\n2\t3\t3\n");
}

TEST_F(Cli, SimulateSinkAndEarlyStop) {
  EXPECT_EQ(run("simulate -g " + fixture("star_graph.tsv") + " -T 3 --start node:0 -o " +
                tmp("c.tsv")),
            4);
  EXPECT_EQ(run("simulate -g " + fixture("star_graph.tsv") +
                " -T 3 --start node:0 --allow-early-stop -o " + tmp("c.tsv")),
            0);
  EXPECT_EQ(run("simulate -g " + fixture("star_graph.tsv") + " -T 3 --stop-prob 0.5 -o " +
                tmp("c.tsv")),
            2);
}

TEST_F(Cli, BaselineTraffic) {
  ASSERT_EQ(run("baseline -g " + fixture("star_graph.tsv") + " -m traffic -t " +
                fixture("star_traffic.tsv") + " -o " + tmp("q.tsv")),
            0);
  EXPECT_EQ(slurp(tmp("q.tsv")), "0\t1\t0.69999999999999996\n0\t2\t0.29999999999999999\n");
  ASSERT_EQ(run("baseline -g " + fixture("cycle_graph.tsv") + " -m pagerank --scores " +
                tmp("pr.tsv") + " -o " + tmp("q.tsv")),
            0);
  EXPECT_EQ(run("baseline -g " + fixture("star_graph.tsv") + " -m traffic -o " + tmp("q.tsv")), 2);
}

TEST_F(Cli, EvaluateExact) {
  ASSERT_EQ(run("evaluate -c " + fixture("star_counts.tsv") + " -e exact=" +
                fixture("star_transitions.tsv") + " -o " + tmp("e.tsv") + " -s " + tmp("s.json")),
            0);
  EXPECT_EQ(slurp(tmp("e.tsv")),
            "# method\tnode\tout_degree\tweight\tkl\trank_disp\nexact\t0\t2\t10\t0\t0\n");
  const auto doc = nlohmann::json::parse(slurp(tmp("s.json")));
  EXPECT_EQ(doc["methods"]["exact"]["kl"]["mean"].get<double>(), 0.0);
  EXPECT_EQ(doc["kl_log_base"], "e");
  EXPECT_EQ(run("evaluate -c " + fixture("star_counts.tsv") + " -e bad -o " + tmp("e.tsv")), 2);
}

TEST_F(Cli, CheckReportAndJson) {
  ASSERT_EQ(run("check -g " + fixture("split_hypergraph.tsv") + " -t " +
                fixture("never_chosen_traffic.tsv") + " --nodes 7 --json " + tmp("d.json")),
            0);
  const std::string text = slurp(tmp("stdout.txt"));
  EXPECT_NE(text.find("MAP"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(tmp("d.json")));
  EXPECT_FALSE(doc["ml_well_posed"].get<bool>());
  EXPECT_FALSE(doc["hypergraph_connected"].get<bool>());
  EXPECT_EQ(doc["hypergraph"]["components"][1], nlohmann::json::array({3, 4}));

  ASSERT_EQ(run("check -g " + fixture("never_chosen_graph.tsv") + " -t " +
                fixture("never_chosen_traffic.tsv") + " --json " + tmp("d.json") + " --flow " +
                tmp("a.tsv")),
            0);
  const auto d2 = nlohmann::json::parse(slurp(tmp("d.json")));
  EXPECT_TRUE(d2["hypergraph_connected"].get<bool>());
  EXPECT_TRUE(d2["flow_feasible"].get<bool>());
  EXPECT_FALSE(d2["comparison_graph_strongly_connected"].get<bool>());
  EXPECT_TRUE(d2["map_guaranteed"].get<bool>());
  EXPECT_EQ(d2["comparison_graph"]["raise"], nlohmann::json::array({0, 1, 3}));
  EXPECT_EQ(slurp(tmp("a.tsv")), "0\t1\t5\n0\t2\t0\n1\t3\t5\n1\t2\t0\n2\t0\t0\n3\t0\t5\n3\t2\t0\n");
}

TEST_F(Cli, ReorderHilbertAndBinary) {
  ASSERT_EQ(run("reorder -g " + fixture("grid2_graph.tsv") + " -o " + tmp("h.tsv")), 0);
  EXPECT_EQ(slurp(tmp("h.tsv")), "0\t0\n1\t0\n1\t1\n0\t1\n");
  ASSERT_EQ(run("reorder -g " + fixture("star_graph.tsv") + " --order as-loaded --binary -o " +
                tmp("g.bin")),
            0);
  EXPECT_EQ(slurp(tmp("g.bin")).substr(0, 5), "CRNK1");
  ASSERT_EQ(run("rank -q -g " + tmp("g.bin") + " -t " + fixture("star_traffic.tsv") + " -o " +
                tmp("l.tsv")),
            0);
  EXPECT_NEAR(strengths(tmp("l.tsv"), 3)[1], 4.0 / 3.0, 1e-12);
}

TEST_F(Cli, HilbertRankMatchesOriginal) {
  ASSERT_EQ(run("generate -n 300 -d 4 --seed 11 -o " + tmp("g.tsv") + " --traffic " +
                tmp("t.tsv") + " --traffic-range 1:50"),
            0);
  ASSERT_EQ(run("reorder -g " + tmp("g.tsv") + " -o " + tmp("h.tsv")), 0);
  ASSERT_EQ(run("rank -q -g " + tmp("g.tsv") + " -t " + tmp("t.tsv") + " -o " + tmp("a.tsv")), 0);
  ASSERT_EQ(run("rank -q -g " + tmp("h.tsv") + " -t " + tmp("t.tsv") + " -o " + tmp("b.tsv")), 0);
  const auto a = strengths(tmp("a.tsv"), 300);
  const auto b = strengths(tmp("b.tsv"), 300);
  for (std::size_t i = 0; i < 300; ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST_F(Cli, GenerateIsSeeded) {
  ASSERT_EQ(run("generate -n 50 --seed 5 -o " + tmp("a.tsv")), 0);
  ASSERT_EQ(run("generate -n 50 --seed 5 -o " + tmp("b.tsv")), 0);
  ASSERT_EQ(run("generate -n 50 --seed 6 -o " + tmp("c.tsv")), 0);
  EXPECT_EQ(slurp(tmp("a.tsv")), slurp(tmp("b.tsv")));
  EXPECT_NE(slurp(tmp("a.tsv")), slurp(tmp("c.tsv")));
  EXPECT_EQ(run("check -g " + tmp("a.tsv") + " -t " + fixture("star_traffic.tsv")), 0);
}

TEST_F(Cli, RemapRoundTrip) {
  ASSERT_EQ(run("remap -i " + fixture("named_graph.tsv") + " -o " + tmp("dense.tsv") + " --map " +
                tmp("map.tsv")),
            0);
  EXPECT_EQ(slurp(tmp("dense.tsv")), "# pages\n0\t1\n0\t2\n2\t0\n");
  EXPECT_EQ(slurp(tmp("map.tsv")), "0\thome\n1\tabout\n2\tblog\n");
  std::ofstream(tmp("lam.tsv")) << "0\t1.5\n1\t0.5\n2\t1\n";
  ASSERT_EQ(run("remap --reverse -i " + tmp("lam.tsv") + " -o " + tmp("named.tsv") + " --map " +
                tmp("map.tsv")),
            0);
  EXPECT_EQ(slurp(tmp("named.tsv")), "home\t1.5\nabout\t0.5\nblog\t1\n");
  std::ofstream(tmp("traffic.tsv")) << "blog\t3\t1\nnews\t0\t0\n";
  ASSERT_EQ(run("remap --columns 1 -i " + tmp("traffic.tsv") + " -o " + tmp("t.tsv") + " --map " +
                tmp("map.tsv")),
            0);
  EXPECT_EQ(slurp(tmp("t.tsv")), "2\t3\t1\n3\t0\t0\n");
  EXPECT_EQ(run("remap --reverse -i " + tmp("t.tsv") + " -o " + tmp("x.tsv") + " --map " +
                tmp("nomap.tsv")),
            3);
}

TEST_F(Cli, PipelineIsByteIdentical) {
  auto pipeline = [&](const std::string& tag) {
    EXPECT_EQ(run("generate -n 60 -d 3 --seed 2 -o " + tmp(tag + "g.tsv")), 0);
    EXPECT_EQ(run("simulate -g " + tmp(tag + "g.tsv") + " --lambda-dist lognormal:1 -k 50 -T 200 "
                  "--seed 9 -o " + tmp(tag + "c.tsv") + " --traffic " + tmp(tag + "t.tsv")),
              0);
    EXPECT_EQ(run("rank -q -g " + tmp(tag + "g.tsv") + " -t " + tmp(tag + "t.tsv") + " -o " +
                  tmp(tag + "l.tsv") + " --transitions " + tmp(tag + "p.tsv")),
              0);
    EXPECT_EQ(run("evaluate -c " + tmp(tag + "c.tsv") + " -e cr=" + tmp(tag + "p.tsv") + " -o " +
                  tmp(tag + "e.tsv") + " -s " + tmp(tag + "s.json")),
              0);
  };
  pipeline("a");
  pipeline("b");
  for (const char* f : {"g.tsv", "c.tsv", "t.tsv", "l.tsv", "p.tsv", "e.tsv", "s.json"}) {
    const std::string a = slurp(tmp(std::string("a") + f));
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(tmp(std::string("b") + f))) << f;
  }
}

TEST_F(Cli, RecoveryPipelineBeatsBaselines) {
  ASSERT_EQ(run("generate -n 50 -d 4 --seed 7 -o " + tmp("g.tsv")), 0);
  ASSERT_EQ(run("simulate -g " + tmp("g.tsv") +
                " --lambda-dist lognormal:1 -k 1000 -T 1000 --seed 7 -o " + tmp("c.tsv") +
                " --traffic " + tmp("t.tsv")),
            0);
  ASSERT_EQ(run("rank -q --max-iter 1000000 -g " + tmp("g.tsv") + " -t " + tmp("t.tsv") +
                " -o " + tmp("l.tsv") + " --transitions " + tmp("cr.tsv")),
            0);
  ASSERT_EQ(run("baseline -g " + tmp("g.tsv") + " -m traffic -t " + tmp("t.tsv") + " -o " +
                tmp("tr.tsv")),
            0);
  ASSERT_EQ(run("baseline -g " + tmp("g.tsv") + " -m pagerank -o " + tmp("pr.tsv")), 0);
  ASSERT_EQ(run("baseline -g " + tmp("g.tsv") + " -m uniform -o " + tmp("un.tsv")), 0);
  ASSERT_EQ(run("evaluate -c " + tmp("c.tsv") + " -e choicerank=" + tmp("cr.tsv") +
                " -e traffic=" + tmp("tr.tsv") + " -e pagerank=" + tmp("pr.tsv") +
                " -e uniform=" + tmp("un.tsv") + " -o " + tmp("e.tsv") + " -s " + tmp("s.json")),
            0);
  const auto doc = nlohmann::json::parse(slurp(tmp("s.json")));
  auto mean = [&](const char* m) { return doc["methods"][m]["kl"]["mean"].get<double>(); };
  EXPECT_LT(mean("choicerank"), mean("traffic"));
  EXPECT_LT(mean("choicerank"), mean("pagerank"));
  EXPECT_LT(mean("choicerank"), mean("uniform"));
}
