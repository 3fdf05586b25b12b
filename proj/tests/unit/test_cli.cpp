#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdl/cli/cli.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = mdl::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mdl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream f(dir_ / name);
    return std::string(std::istreambuf_iterator<char>(f), {});
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string binary_sample(std::size_t zeros, std::size_t ones) {
  std::string s;
  for (std::size_t i = 0; i < zeros; ++i) s += "0\n";
  for (std::size_t i = 0; i < ones; ++i) s += "1\n";
  return s;
}

TEST_F(Cli, FitUniformOnThreeSymbols) {
  const auto r = run({"fit", "--alphabet", "0,1,2", "--mean", "1.0", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  for (double p : j["result"]["probs"]) EXPECT_NEAR(p, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(j["result"]["entropy_nats"].get<double>(), std::log(3.0), 1e-9);
}

TEST_F(Cli, InfeasibleMeanExitsThree) {
  const auto r = run({"fit", "--alphabet", "0,1", "--mean", "1.5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
  EXPECT_NE(r.err.find("maxent-mdl fit"), std::string::npos);
}

TEST_F(Cli, NmlOfTheInterceptOnlyModel) {
  const auto s = write("s.txt", binary_sample(27, 11));
  const auto r = run({"nml", "--sample", s, "--m", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["result"]["nml_nats"].get<double>(), 38 * std::log(2.0), 1e-9);
  EXPECT_EQ(j["inputs"][0]["path"], s);
}

TEST_F(Cli, NmlOfTwoBinarySymbols) {
  const auto s = write("s.txt", "0 1\n");
  const auto r = run({"nml", "--sample", s, "--m", "1", "--method", "exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["result"]["nml_nats"].get<double>(), std::log(10.0), 1e-9);
  const auto b = run({"--bits", "nml", "--sample", s, "--m", "1"});
  EXPECT_NEAR(json::parse(b.out)["result"]["nml_bits"].get<double>(), std::log2(10.0), 1e-9);
}

TEST_F(Cli, ConditionalNmlOfLabels) {
  std::string labels, x;
  for (int i = 0; i < 38; ++i) {
    labels += i < 27 ? "ALL\n" : "AML\n";
    x += std::to_string(i % 3) + "\n";
  }
  const auto l = write("labels.txt", labels);
  const auto g = write("x.txt", x);
  const auto r = run({"nml", "--sample", l, "--given", g, "--m", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out)["result"];
  EXPECT_EQ(j["model"], "conditional");
  EXPECT_NEAR(j["nml_nats"].get<double>(), 24.99, 0.05);
  EXPECT_NEAR(j["uncompressed_nats"].get<double>(), 38 * std::log(2.0), 1e-9);
}

TEST_F(Cli, MonteCarloIsReproducibleInTheSeed) {
  const auto s = write("s.txt", "0 1 2 2 1 0 1\n");
  const std::vector<std::string> args{"nml", "--sample", s, "--m", "1", "--method", "mc", "--draws", "2000", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out)["result"].contains("mc_stderr_nats"));
}

TEST_F(Cli, SelectWithBothCriteria) {
  const auto s = write("s.txt", "0 0 0 0 0 0 1 1 2 0 0 1\n");
  const auto n = run({"--json", "select", "--sample", s, "--m-max", "2"});
  ASSERT_EQ(n.code, 0) << n.err;
  const auto j = json::parse(n.out);
  EXPECT_EQ(j["criterion"], "nml");
  EXPECT_EQ(j["candidates"].size(), 3u);
  const auto m = run({"select", "--sample", s, "--criterion", "minimax", "--candidate", "a:1", "--candidate", "b:1,2"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_NE(m.out.find("id,features,"), std::string::npos);
  EXPECT_NE(m.out.find("# chosen"), std::string::npos);
  EXPECT_EQ(run({"select", "--sample", s, "--candidate", "bad"}).code, 2);
}

TEST_F(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run({"fit", "--nonsense"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nml", "--sample", path("missing.txt")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

std::string synth(Cli& t, const std::string& out, std::size_t informative, std::size_t noise) {
  const auto r = run({"--out", out, "synth", "--informative", std::to_string(informative), "--noise",
                      std::to_string(noise), "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  (void)t;
  return out;
}

TEST_F(Cli, GenesRankIsSortedByMinimumNml) {
  const auto d = synth(*this, path("data"), 4, 6);
  const auto r = run({"--json", "genes", "rank", "--matrix", d + "/matrix.tsv", "--labels", d + "/labels.tsv", "--m",
                      "1..3", "--levels", "4", "--no-filter"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto genes = json::parse(r.out)["genes"];
  ASSERT_EQ(genes.size(), 10u);
  for (std::size_t i = 1; i < genes.size(); ++i)
    EXPECT_LE(genes[i - 1]["min_nml_nats"].get<double>(), genes[i]["min_nml_nats"].get<double>());
  for (const auto& g : genes) ASSERT_EQ(g["curve"].size(), 3u);
}

TEST_F(Cli, OutputsAreByteIdenticalAcrossRunsAndWorkers) {
  const auto d = synth(*this, path("data"), 4, 6);
  auto rank = [&](const std::string& out, const std::string& workers) {
    const auto r = run({"--out", out, "--workers", workers, "genes", "rank", "--matrix", d + "/matrix.tsv", "--labels",
                        d + "/labels.tsv", "--m", "1..3", "--levels", "4", "--no-filter"});
    EXPECT_EQ(r.code, 0) << r.err;
    return read(fs::relative(out, dir_).string() + "/ranking.csv") + read(fs::relative(out, dir_).string() + "/curves.csv");
  };
  const auto a = rank(path("a"), "1");
  const auto b = rank(path("b"), "1");
  const auto c = rank(path("c"), "4");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST_F(Cli, ClassifyReportsAnEvaluation) {
  const auto d = synth(*this, path("data"), 4, 6);
  const auto r = run({"genes", "classify", "--matrix", d + "/matrix.tsv", "--labels", d + "/labels.tsv", "--m", "1..2",
                      "--levels", "3", "--top", "3", "--no-filter"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["eval_split"], "test");
  EXPECT_EQ(j["total"], 34);
  EXPECT_EQ(j["genes"].size(), 3u);
}

TEST_F(Cli, MalformedMatrixExitsTwoWithLocation) {
  const auto m = write("m.tsv", "gene\ta\tb\ng1\t1\tx\n");
  const auto l = write("l.tsv", "a\tc0\nb\tc1\n");
  const auto r = run({"genes", "rank", "--matrix", m, "--labels", l});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("parse"), std::string::npos);
}

TEST(CliExitCodes, Mapping) {
  using mdl::ErrorCode;
  EXPECT_EQ(mdl::cli::exit_code_for(ErrorCode::infeasible), 3);
  EXPECT_EQ(mdl::cli::exit_code_for(ErrorCode::cap_exceeded), 4);
  EXPECT_EQ(mdl::cli::exit_code_for(ErrorCode::non_convergence), 5);
  EXPECT_EQ(mdl::cli::exit_code_for(ErrorCode::empty_result), 6);
  EXPECT_EQ(mdl::cli::exit_code_for(ErrorCode::parse), 2);
}

}  // namespace
