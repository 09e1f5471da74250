#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "arm/matrix_io.hpp"
#include "cli.hpp"
#include "manifest.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = arm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

class CliTest : public ::testing::Test {
protected:
  fs::path dir = oracle::scratch_dir("cli");
  void TearDown() override { fs::remove_all(dir); }

  std::string p(const std::string& name) const { return (dir / name).string(); }

  // Two noiseless independent subspaces in R^20.
  void synth(const std::string& prefix, const std::string& k = "2") {
    const auto r = run({"synth", "--m", "20", "--k", k, "--dim", "3", "--points", "15", "--seed", "3", "--out-prefix",
                        p(prefix)});
    ASSERT_EQ(r.code, 0) << r.err;
  }
};

TEST_F(CliTest, NoSubcommandIsAnError) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
}

TEST_F(CliTest, HelpSucceeds) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

TEST_F(CliTest, SynthWritesThreeFilesAndManifest) {
  synth("s");
  EXPECT_TRUE(fs::exists(p("s_X.csv")));
  EXPECT_TRUE(fs::exists(p("s_labels.txt")));
  EXPECT_TRUE(fs::exists(p("s_E.csv")));
  EXPECT_TRUE(fs::exists(p("s_manifest.txt")));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 4u);
  const auto x = arm::load_matrix(p("s_X.csv"));
  EXPECT_EQ(x.rows(), 20);
  EXPECT_EQ(x.cols(), 30);
  EXPECT_EQ(arm::load_matrix(p("s_E.csv")), arm::Matrix::Zero(20, 30));
}

TEST_F(CliTest, SynthIsSeedDeterministic) {
  synth("a");
  synth("b");
  EXPECT_EQ(slurp(p("a_X.csv")), slurp(p("b_X.csv")));
  EXPECT_EQ(slurp(p("a_labels.txt")), slurp(p("b_labels.txt")));
}

TEST_F(CliTest, SynthZeroLevelEqualsClean) {
  synth("clean");
  const auto r = run({"synth", "--m", "20", "--k", "2", "--dim", "3", "--points", "15", "--seed", "3", "--corruption",
                      "sparse", "--level", "0", "--out-prefix", p("zero")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(p("clean_X.csv")), slurp(p("zero_X.csv")));
}

TEST_F(CliTest, SynthRejectsInvalidSpec) {
  EXPECT_EQ(run({"synth", "--m", "5", "--k", "3", "--dim", "3", "--out-prefix", p("bad")}).code, 1);
  EXPECT_EQ(run({"synth", "--corruption", "sparse", "--level", "2", "--out-prefix", p("bad")}).code, 1);
  EXPECT_EQ(run({"synth", "--corruption", "salt", "--out-prefix", p("bad")}).code, 1);
}

TEST_F(CliTest, SolveConvergesAndWritesOutputs) {
  synth("s");
  const auto r = run({"solve", "--input", p("s_X.csv"), "--out-prefix", p("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* suffix : {"_Z.csv", "_E.csv", "_XZ.csv", "_trace.csv", "_manifest.txt"})
    EXPECT_TRUE(fs::exists(p(std::string("out") + suffix))) << suffix;
  EXPECT_GT(line_count(p("out_trace.csv")), 1u);
  const std::string trace = slurp(p("out_trace.csv"));
  EXPECT_EQ(trace.rfind("iter,objective,r1,r2,mu,dc_iters", 0), 0u);
  const auto z = arm::load_matrix(p("out_Z.csv"));
  EXPECT_EQ(z.rows(), 30);
  EXPECT_EQ(z.cols(), 30);
}

TEST_F(CliTest, SolveLrrUsesSameSchema) {
  synth("s");
  ASSERT_EQ(run({"solve", "--input", p("s_X.csv"), "--out-prefix", p("arm")}).code, 0);
  ASSERT_EQ(run({"solve", "--method", "lrr", "--input", p("s_X.csv"), "--out-prefix", p("lrr")}).code, 0);
  auto header = [](const std::string& text) { return text.substr(0, text.find('\n')); };
  EXPECT_EQ(header(slurp(p("arm_trace.csv"))), header(slurp(p("lrr_trace.csv"))));
  EXPECT_NE(slurp(p("lrr_manifest.txt")).find("solver.method=lrr"), std::string::npos);
}

TEST_F(CliTest, SolveMissingInputPrintsUsage) {
  const auto r = run({"solve"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--input"), std::string::npos);
}

TEST_F(CliTest, SolveBadInputFile) {
  EXPECT_EQ(run({"solve", "--input", p("missing.csv"), "--out-prefix", p("o")}).code, 1);
  std::ofstream(p("ragged.csv")) << "1,2\n3\n";
  const auto r = run({"solve", "--input", p("ragged.csv"), "--out-prefix", p("o")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, SolveBadConfig) {
  synth("s");
  EXPECT_EQ(run({"solve", "--input", p("s_X.csv"), "--rho", "0.5", "--out-prefix", p("o")}).code, 1);
  EXPECT_EQ(run({"solve", "--input", p("s_X.csv"), "--error-model", "l3", "--out-prefix", p("o")}).code, 1);
}

TEST_F(CliTest, SolveNonConvergenceExitsTwo) {
  synth("s");
  EXPECT_EQ(run({"solve", "--input", p("s_X.csv"), "--max-iters", "2", "--out-prefix", p("o")}).code, 2);
}

TEST_F(CliTest, ClusterRecoversTwoSubspaces) {
  synth("s");
  const auto r = run({"cluster", "--input", p("s_X.csv"), "--k", "2", "--truth", p("s_labels.txt"), "--alpha", "3",
                      "--out-prefix", p("c")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("clustering error: 0.00%"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(p("c_labels.txt")));
  EXPECT_TRUE(fs::exists(p("c_W.csv")));
  const auto manifest = arm::cli::Manifest::read(p("c_manifest.txt"));
  EXPECT_EQ(manifest.get("affinity.alpha").value_or(""), "3");
}

TEST_F(CliTest, ClusterTruthLengthMismatch) {
  synth("s");
  std::ofstream(p("short.txt")) << "0\n1\n";
  EXPECT_EQ(run({"cluster", "--input", p("s_X.csv"), "--k", "2", "--truth", p("short.txt"), "--out-prefix", p("c")}).code,
            1);
}

TEST_F(CliTest, ClusterRejectsTooManyClusters) {
  synth("s");
  EXPECT_EQ(run({"cluster", "--input", p("s_X.csv"), "--k", "31", "--out-prefix", p("c")}).code, 1);
}

TEST_F(CliTest, RankfigSurface) {
  const auto r = run({"rankfig", "--mode", "surface", "--sigma-max", "5", "--steps", "6", "--out", p("surf.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(p("surf.csv")), 37u);
  EXPECT_TRUE(fs::exists(p("surf_manifest.txt")));
}

TEST_F(CliTest, RankfigSweep) {
  synth("s");
  const auto r = run({"rankfig", "--mode", "lambda-sweep", "--input", p("s_X.csv"), "--truth", p("s_labels.txt"),
                      "--k", "2", "--lambdas", "1,2,3", "--jobs", "2", "--out", p("sweep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(p("sweep.csv")), 4u);
  EXPECT_EQ(slurp(p("sweep.csv")).rfind("lambda,error,converged,iterations", 0), 0u);
}

TEST_F(CliTest, RankfigSweepNeedsInputs) {
  EXPECT_EQ(run({"rankfig", "--mode", "lambda-sweep", "--lambdas", "1,2"}).code, 1);
  EXPECT_EQ(run({"rankfig", "--mode", "spiral"}).code, 1);
}

TEST_F(CliTest, ReplayReproducesOutputs) {
  synth("s");
  ASSERT_EQ(run({"cluster", "--input", p("s_X.csv"), "--k", "2", "--seed", "5", "--out-prefix", p("c")}).code, 0);
  const std::string labels = slurp(p("c_labels.txt"));
  const std::string w = slurp(p("c_W.csv"));
  const std::string trace = slurp(p("c_trace.csv"));
  fs::remove(p("c_labels.txt"));
  fs::remove(p("c_W.csv"));
  fs::remove(p("c_trace.csv"));
  ASSERT_EQ(run({"replay", "--manifest", p("c_manifest.txt")}).code, 0);
  EXPECT_EQ(slurp(p("c_labels.txt")), labels);
  EXPECT_EQ(slurp(p("c_W.csv")), w);
  EXPECT_EQ(slurp(p("c_trace.csv")), trace);

  const std::string x = slurp(p("s_X.csv"));
  fs::remove(p("s_X.csv"));
  ASSERT_EQ(run({"replay", "--manifest", p("s_manifest.txt")}).code, 0);
  EXPECT_EQ(slurp(p("s_X.csv")), x);
}

TEST_F(CliTest, ReplayMissingManifest) { EXPECT_EQ(run({"replay", "--manifest", p("nope.txt")}).code, 1); }

TEST(Manifest, RoundTrip) {
  const auto dir = oracle::scratch_dir("manifest");
  arm::cli::Manifest m;
  m.set("lambda", 0.1);
  m.set("name", "a=b c");
  m.set_args({"solve", "--input", "x y.csv"});
  m.write(dir / "m.txt");
  const auto back = arm::cli::Manifest::read(dir / "m.txt");
  EXPECT_EQ(back.args(), (std::vector<std::string>{"solve", "--input", "x y.csv"}));
  EXPECT_EQ(std::stod(back.get("lambda").value()), 0.1);
  EXPECT_EQ(back.get("name").value(), "a=b c");
  EXPECT_FALSE(back.get("missing").has_value());
  fs::remove_all(dir);
}
