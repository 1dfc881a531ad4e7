// Copyright 2026 The cqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cqpt/analysis.hpp"
#include "cqpt/errors.hpp"

namespace cqpt::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cqpt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cqpt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(ConfigParser, ReadsSectionsAndRecordsLines) {
  const auto s = parse_config("# comment\n[model]\nfamily = grover ; trailing\nN = 4\n\n[mc]\nseed=9\n",
                              "run.ini");
  EXPECT_EQ(s.at("model.family").value, "grover");
  EXPECT_EQ(s.at("model.N").origin, "run.ini:4");
  EXPECT_EQ(s.at("mc.seed").value, "9");
}

TEST(ConfigParser, RejectsWithLineDiagnostics) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "c.ini");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("[model]\nfamly = grover\n").find("c.ini:2: unknown key 'model.famly'"),
            std::string::npos);
  EXPECT_NE(message("N = 4\n").find("c.ini:1: key outside"), std::string::npos);
  EXPECT_NE(message("[bogus]\n").find("c.ini:1: unknown section"), std::string::npos);
  EXPECT_NE(message("[model]\nN=1\nN=2\n").find("c.ini:3: duplicate"), std::string::npos);
  EXPECT_NE(message("[model]\nN\n").find("c.ini:2: expected key = value"), std::string::npos);
}

TEST_F(CliTest, SplitExamples) {
  const std::string out = dir_.string();
  auto a = invoke({"split", "--family", "grover", "--N", "8", "--g", "1", "--out", out});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("M=256 M_cond=1 ratio=2^-8"), std::string::npos) << a.out;
  auto b = invoke({"split", "--family", "ising-transverse", "--N", "6", "--g", "1", "--out", out});
  EXPECT_NE(b.out.find("M=64 M_cond=2"), std::string::npos) << b.out;
  auto c = invoke({"split", "--family", "fermion-impurity", "--N", "8", "--Np", "4", "--Nimp", "2",
                   "--g", "1", "--format", "json", "--out", out});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto j = nlohmann::json::parse(c.out);
  EXPECT_EQ(j["rows"][0]["M_cond"], "15");
  EXPECT_EQ(j["rows"][0]["M"], "70");
}

TEST_F(CliTest, SweepWritesNamedCsvWithExactColumns) {
  auto r = invoke({"sweep", "--family", "fermion-attractive", "--N", "6,8", "--density", "0.5",
                   "--g-min", "0.5", "--g-max", "1.5", "--g-step", "0.5", "--gap", "--out",
                   dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"fermion-attractive_N6_Np3.csv", "fermion-attractive_N8_Np4.csv"}) {
    const std::string text = slurp(dir_ / name);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "g,N,Np,E_over_Np,E_cond_over_Np,E_norm_over_Np,delta,delta0,delta1,E_solver,"
              "Enorm_solver,mc_stderr");
    const auto rows = parse_csv(text);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(to_csv(rows), text);
  }
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "fermion-attractive_sweep_manifest.json"));
  EXPECT_EQ(manifest["command"], "sweep");
  EXPECT_EQ(manifest["config"]["model.N"], "6,8");
  EXPECT_EQ(manifest["rows"].size(), 6u);
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const fs::path ini = dir_ / "run.ini";
  std::ofstream(ini) << "[model]\nfamily = grover\nN = 4\n[sweep]\ng_min = 0\ng_max = 2\n"
                        "g_step = 0.5\n[output]\npath = " << (dir_ / "a").string() << "\n";
  auto r = invoke({"sweep", "--config", ini.string(), "--N", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "a" / "grover_N5_Np5.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "a" / "grover_N4_Np4.csv"));
}

TEST_F(CliTest, ReplayReproducesCsvBitExactly) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  auto r = invoke({"sweep", "--family", "hardcore-boson-attractive", "--N", "6", "--Np", "3",
                   "--boundary", "pbc", "--g-list", "0.5,1.5", "--full", "qmc", "--norm", "none",
                   "--walkers", "1024", "--blocks", "16", "--dt", "2", "--seed", "11", "--out",
                   a.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto e = invoke({"sweep", "--family", "grover", "--N", "5", "--g-list", "0.5,1,2", "--out", a.string()});
  ASSERT_EQ(e.code, 0) << e.err;
  for (const char* family : {"hardcore-boson-attractive", "grover"}) {
    auto p = invoke({"replay", (a / (std::string(family) + "_sweep_manifest.json")).string(), "--out",
                     b.string()});
    ASSERT_EQ(p.code, 0) << p.err;
  }
  EXPECT_EQ(slurp(a / "hardcore-boson-attractive_N6_Np3.csv"),
            slurp(b / "hardcore-boson-attractive_N6_Np3.csv"));
  EXPECT_EQ(slurp(a / "grover_N5_Np5.csv"), slurp(b / "grover_N5_Np5.csv"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const fs::path env_dir = dir_ / "env";
  ::setenv("CQPT_OUTPUT_DIR", env_dir.c_str(), 1);
  auto r = invoke({"sweep", "--family", "grover", "--N", "3", "--g-list", "1"});
  ::unsetenv("CQPT_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(env_dir / "grover_N3_Np3.csv"));
}

TEST_F(CliTest, LocateReportsGroverAndIsing) {
  auto g = invoke({"locate", "--family", "grover", "--N", "12", "--g-min", "0.3", "--g-max", "1.7",
                   "--g-step", "0.05", "--full", "symmetric", "--cond", "symmetric", "--norm",
                   "symmetric", "--diagnostic", "delta0", "--out", dir_.string()});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto jg = nlohmann::json::parse(g.out);
  EXPECT_NEAR(jg["g_c"].get<double>(), 1.0, 0.15);
  auto i = invoke({"locate", "--family", "ising-transverse", "--thermodynamic", "--g-min", "0.05",
                   "--g-max", "5", "--g-step", "0.05", "--diagnostic", "delta1", "--out",
                   dir_.string()});
  ASSERT_EQ(i.code, 0) << i.err;
  EXPECT_EQ(nlohmann::json::parse(i.out)["g_c"], "no-crossing");
  auto c = invoke({"locate", "--family", "fermion-attractive", "--density", "0.5", "--analytic",
                   "--out", dir_.string()});
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(c.out)["g_c"].get<double>(), 2.0);
}

TEST_F(CliTest, LocateFromCsvInput) {
  auto s = invoke({"sweep", "--family", "grover", "--N", "10", "--g-min", "0.5", "--g-max", "1.5",
                   "--g-step", "0.1", "--out", dir_.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  auto l = invoke({"locate", "--input", (dir_ / "grover_N10_Np10.csv").string(), "--diagnostic",
                   "delta0", "--out", dir_.string()});
  ASSERT_EQ(l.code, 0) << l.err;
  const auto j = nlohmann::json::parse(l.out);
  EXPECT_NEAR(j["g_c"].get<double>(), 1.0, 0.15);
  EXPECT_EQ(j["N"], 10);
}

TEST_F(CliTest, QmcTraceWritesPerBlockCsv) {
  auto r = invoke({"qmc-trace", "--family", "fermion-impurity", "--N", "6", "--Np", "3", "--Nimp",
                   "1", "--g", "1", "--restriction", "norm", "--walkers", "512", "--blocks", "8",
                   "--dt", "2", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["restriction_violations"], 0);
  const std::string trace = slurp(dir_ / "fermion-impurity_N6_Np3_norm_trace.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 9);
}

TEST_F(CliTest, ExitCodesAndFieldMessages) {
  const std::string out = dir_.string();
  auto bad_range = invoke({"sweep", "--family", "grover", "--N", "4", "--g-min", "2", "--g-max",
                           "1", "--g-step", "0.1", "--out", out});
  EXPECT_EQ(bad_range.code, 2);
  EXPECT_NE(bad_range.err.find("sweep.g_max"), std::string::npos);
  auto bad_step = invoke({"sweep", "--family", "grover", "--N", "4", "--g-min", "0", "--g-max", "1",
                          "--g-step", "0", "--out", out});
  EXPECT_EQ(bad_step.code, 2);
  EXPECT_NE(bad_step.err.find("sweep.g_step"), std::string::npos);
  auto missing_np = invoke({"sweep", "--family", "fermion-attractive", "--N", "4", "--g-list", "1",
                            "--out", out});
  EXPECT_EQ(missing_np.code, 2);
  EXPECT_NE(missing_np.err.find("model.Np"), std::string::npos);
  auto walkers = invoke({"sweep", "--family", "fermion-attractive", "--N", "4", "--Np", "2",
                         "--g-list", "1", "--full", "qmc", "--walkers", "1", "--out", out});
  EXPECT_EQ(walkers.code, 2);
  EXPECT_NE(walkers.err.find("mc.walkers"), std::string::npos);
  auto capability = invoke({"sweep", "--family", "ising-transverse", "--N", "4", "--g-list", "1",
                            "--full", "quadratic", "--out", out});
  EXPECT_EQ(capability.code, 3);
  EXPECT_NE(capability.err.find("method.full"), std::string::npos);
  auto sign = invoke({"qmc-trace", "--family", "fermion-attractive", "--N", "6", "--Np", "2",
                      "--boundary", "pbc", "--g", "1", "--walkers", "64", "--blocks", "4",
                      "--out", out});
  EXPECT_EQ(sign.code, 3) << sign.err;
  auto unknown = invoke({"sweep", "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

}  // namespace
}  // namespace cqpt::cli
