#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "schmidt_forge/io.hpp"

using namespace schmidt_forge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SF_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    spectrum_ = (dir_ / "s.json").string();
    write_spectrum(make_spectrum({0.4, 0.3, 0.2, 0.1}), spectrum_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string spectrum_;
};

}  // namespace

TEST_F(Cli, Measures) {
  const auto r = run("measures " + spectrum_);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["purity"].get<double>(), 0.3, 1e-15);
}

TEST_F(Cli, ConcentrateAtMinimalReference) {
  const auto r = run("concentrate --spectrum " + spectrum_ + " --pref 0.25 --out " + path("o.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto o = read_outcome(path("o.json"));
  EXPECT_NEAR(o.p_success, 0.4, 1e-15);
  for (double v : o.post_spectrum.sq_coeffs()) EXPECT_NEAR(v, 0.25, 1e-15);
  EXPECT_EQ(outcome_to_json(o), read_text(path("o.json")));
}

TEST_F(Cli, ReferenceAlternatives) {
  const auto a = run("concentrate --spectrum " + spectrum_ + " --kref 4");
  const auto b = run("concentrate --spectrum " + spectrum_ + " --cref-sq 1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("concentrate --spectrum " + spectrum_).code, 2);
  EXPECT_EQ(run("concentrate --spectrum " + spectrum_ + " --pref 0.3 --kref 4").code, 2);
}

TEST_F(Cli, FixedProbability) {
  const auto r = run("fixedp --spectrum " + spectrum_ + " --p 0.7 --out " + path("f.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(read_outcome(path("f.json")).post_measures.purity, 13.0 / 49, 1e-12);
}

TEST_F(Cli, DomainErrorsExitOneWithName) {
  auto r = run("fixedp --spectrum " + spectrum_ + " --p 1.5");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("PFixOutOfRange"), std::string::npos) << r.out;
  r = run("measures " + path("missing.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("IoError"), std::string::npos);
  r = run("sweep --spectrum " + spectrum_ + " --pref-grid lin:0:1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("GridSyntax"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("fixedp --spectrum " + spectrum_).code, 2);
  EXPECT_EQ(run("kthreshold --spectrum " + spectrum_ + " --kmin 3").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, SweepIsDeterministicAndOrdered) {
  const std::string args = "sweep --sample-dim 64 --seed 5 --mode efficiency --out ";
  ASSERT_EQ(run(args + path("a.csv")).code, 0);
  ASSERT_EQ(run(args + path("b.csv")).code, 0);
  const auto a = read_text(path("a.csv"));
  EXPECT_EQ(a, read_text(path("b.csv")));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 101);
  const auto j = run("sweep --spectrum " + spectrum_ + " --mode fixedprob --p-grid lin:0.1:1:10 --format json");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 10u);
}

TEST_F(Cli, InterpCsv) {
  ASSERT_EQ(run("interp --spectrum " + spectrum_ + " --grid-points 101 --out " + path("i.csv")).code, 0);
  const auto text = read_text(path("i.csv"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 102);
  EXPECT_NE(text.find("\n1,0.40000000000000002,0.25,"), std::string::npos);
}

TEST_F(Cli, SampleWritesReadableSpectra) {
  ASSERT_EQ(run("sample --dim 8 --seed 3 --count 3 --out " + path("samples")).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path("samples"))) {
    const auto s = read_spectrum(e.path());
    EXPECT_EQ(s.dim(), 8u);
    EXPECT_EQ(spectrum_to_json(s), read_text(e.path()));
    ++files;
  }
  EXPECT_EQ(files, 3u);
}

TEST_F(Cli, Kthreshold) {
  const auto r = run("kthreshold --spectrum " + spectrum_ + " --kmin 3.5 --gap 0.1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["p_ref"].get<double>(), 1.0 / (3.5 * 0.9), 1e-15);
}

TEST_F(Cli, OracleReport) {
  const auto r = run("oracle --spectrum " + spectrum_ + " --pref 0.3");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["q_value"].get<double>(), 0.0233333333333333, 1e-12);
  EXPECT_TRUE(j["converged"].get<bool>());
}

TEST_F(Cli, ValidateSmall) {
  const auto r = run("validate --dim-max 8 --instances 100 --seed 2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS efficiency-vs-enumeration"), std::string::npos);
}
