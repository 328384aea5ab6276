#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "robin/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("robin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd =
        std::string(ROBIN_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return CliRun{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  fs::path dir_;
};

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

TEST_F(CliTest, BenchWritesOneRowPerRun) {
  const CliRun r = run("bench --problem rotavg --runs 20 --outlier-rates 0.0,0.9 --seed 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 41u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "problem,mode,solver,outlier_rate,seed,rot_err_deg,trans_err,inliers_preserved_pct,"
            "outliers_rejected_pct,inlier_rate_pct,prune_ms,solve_ms,success");
}

TEST_F(CliTest, BenchWithoutTimingIsReproducible) {
  const std::string args =
      "bench --problem registration --n 80 --runs 3 --outlier-rates 0.5 --seed 9 --no-timing";
  const CliRun a = run(args + " --threads 1");
  const CliRun b = run(args + " --threads 2");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const CliRun j = run(args + " --format json --out " + (dir_ / "bench.json").string());
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_TRUE(j.out.empty());
  EXPECT_NE(slurp(dir_ / "bench.json").find("\"outlier_rate\": 0.5"), std::string::npos);
}

TEST_F(CliTest, KCoreKeepsAllInlierFile) {
  const fs::path data = dir_ / "inliers.json";
  ASSERT_EQ(run("generate --problem registration --n 40 --seed 3 --out " + data.string()).code, 0);
  const CliRun r = run("prune --mode kcore " + data.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"mode\": \"kcore\""), std::string::npos);
  std::string expected = "\"selected\": [";
  for (int i = 0; i < 40; ++i) expected += (i ? "," : "") + std::string("\n    ") + std::to_string(i);
  EXPECT_NE(r.out.find(expected + "\n  ]"), std::string::npos) << r.out;
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const fs::path data = dir_ / "rot.json";
  ASSERT_EQ(run("generate --problem rotavg --n 60 --outlier-rate 0.7 --seed 4 --out " + data.string()).code, 0);
  const std::string path = data.string();
  for (const std::string& cmd : std::vector<std::string>{"prune " + path, "rotavg " + path, "graph " + path,
                                                         "generate --problem crossratio --seed 2"}) {
    const CliRun a = run(cmd);
    const CliRun b = run(cmd);
    ASSERT_EQ(a.code, 0) << cmd << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << cmd;
  }
}

TEST_F(CliTest, PipelineReportsMetricsForLabelledFiles) {
  const fs::path data = dir_ / "reg.json";
  ASSERT_EQ(run("generate --problem registration --n 100 --outlier-rate 0.5 --seed 5 --out " + data.string()).code,
            0);
  const CliRun r = run("register --solver closed-form " + data.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"metrics\""), std::string::npos);
  EXPECT_NE(r.out.find("\"translation\""), std::string::npos);
  const CliRun wrong = run("rotavg " + data.string());
  EXPECT_EQ(wrong.code, 2);
  EXPECT_NE(wrong.err.find("registration"), std::string::npos);
}

TEST_F(CliTest, GraphIsAnEdgeList) {
  const fs::path data = dir_ / "cr.json";
  ASSERT_EQ(run("generate --problem crossratio --n 10 --seed 6 --out " + data.string()).code, 0);
  const CliRun r = run("graph " + data.string());
  ASSERT_EQ(r.code, 0) << r.err;
  // Every pair of a noise-bounded all-inlier set is compatible.
  EXPECT_EQ(count_lines(r.out), 45u);
  EXPECT_EQ(r.out.substr(0, 4), "0 1\n");
}

TEST_F(CliTest, MalformedFileExitsWithTwo) {
  const fs::path bad = write("bad.json", R"({"problem": "registration", "beta": 0.1,
      "measurements": [{"a": [0, 0, 0], "b": [1, 2]}]})");
  const CliRun r = run("prune " + bad.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("measurements[0].b"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());

  const CliRun syntax = run("prune " + write("syntax.json", "{\"problem\":").string());
  EXPECT_EQ(syntax.code, 2);
  EXPECT_NE(syntax.err.find("invalid JSON"), std::string::npos) << syntax.err;
}

TEST_F(CliTest, BadFlagsExitWithTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("bench --problem nope").code, 2);
  EXPECT_EQ(run("bench --outlier-rates 0.5,1.2 --runs 1").code, 2);
  EXPECT_EQ(run("bench --format xml").code, 2);
  EXPECT_EQ(run("prune /nonexistent/file.json").code, 2);
  const fs::path data = dir_ / "ok.json";
  ASSERT_EQ(run("generate --problem rotavg --n 5 --out " + data.string()).code, 0);
  EXPECT_EQ(run("prune --mode fastest " + data.string()).code, 2);
  EXPECT_EQ(run("prune --budget 0 " + data.string()).code, 2);
  EXPECT_EQ(run("prune --budget lots " + data.string()).code, 2);
}

TEST_F(CliTest, PointsFileFeedsTheGenerator) {
  const fs::path pts = write("cloud.txt", "# x y z nx ny nz\n0 0 0 0 0 1\n2 0 0 0 0 1\n0 4 0 1 0 0\n"
                                          "0 0 1 0 1 0\n1 1 1 0 0 1\n");
  const CliRun r = run("generate --problem registration_normals --seed 1 --points-file " + pts.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const robin::Dataset d = robin::read_measurements(in);
  EXPECT_EQ(robin::measurement_count(d.measurements), 5u);

  const CliRun bad = run("generate --problem registration --points-file " + write("bad.txt", "1 2\n").string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;
}

}  // namespace
