// Copyright 2026 The resetlb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "resetlb/cli.hpp"
#include "resetlb/closed_form.hpp"
#include "resetlb/errors.hpp"

namespace resetlb::cli {
namespace {

namespace fs = std::filesystem;

Json dephasing_config() {
  return Json::parse(R"({
    "model": "gas", "unit": "gamma",
    "hamiltonian": {"kind": "ising", "g": 5, "omega": 0},
    "noise": {"gamma": 1},
    "reset": {"r": 10, "state": "plus"}
  })");
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("resetlb_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const Json& j) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
  }

  static std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  struct Result {
    int code;
    std::string out;
    std::string err;
  };

  static Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "resetlb");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

TEST(Config, FillsDefaults) {
  const ExperimentConfig cfg = parse_config(dephasing_config());
  EXPECT_EQ(cfg.model, "gas");
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.resolved["noise"]["s"].get<double>(), 0.5);
  EXPECT_EQ(cfg.resolved["n_qubits"].get<int>(), 2);
}

TEST(Config, UnknownKeyIsRejected) {
  Json j = dephasing_config();
  j["reset"]["rate"] = 3;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = dephasing_config();
  j["colour"] = "blue";
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, TypesAreChecked) {
  Json j = dephasing_config();
  j["reset"]["r"] = "ten";
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, UnitIsRequiredAndMustBeOne) {
  Json j = dephasing_config();
  j.erase("unit");
  EXPECT_THROW(parse_config(j), ConfigError);
  j = dephasing_config();
  j["noise"]["gamma"] = 2;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = dephasing_config();
  j["unit"] = "furlong";
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, SweepValidation) {
  Json j = dephasing_config();
  j["sweep"] = Json::array({{{"param", "reset.nope"}, {"min", 0}, {"max", 1}, {"points", 3}}});
  EXPECT_THROW(parse_config(j), ConfigError);
  j["sweep"] = Json::array({{{"param", "reset.r"}, {"min", 0}, {"max", 1}, {"points", 3}, {"scale", "log"}}});
  EXPECT_THROW(parse_config(j), ConfigError);
  j["sweep"] = Json::array({{{"param", "reset.r"}, {"min", 1}, {"max", 2}, {"points", 2}},
                            {{"param", "reset.r"}, {"min", 1}, {"max", 2}, {"points", 2}}});
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, GridOrderLastAxisFastest) {
  Json j = dephasing_config();
  j["sweep"] = Json::array({{{"param", "hamiltonian.g"}, {"min", 1}, {"max", 2}, {"points", 2}},
                            {{"param", "reset.r"}, {"min", 1}, {"max", 100}, {"points", 3}, {"scale", "log"}}});
  const auto grid = expand_grid(parse_config(j));
  ASSERT_EQ(grid.size(), 6u);
  EXPECT_EQ(grid[0].coords, (std::vector<double>{1, 1}));
  EXPECT_NEAR(grid[1].coords[1], 10.0, 1e-12);
  EXPECT_EQ(grid[3].coords[0], 2.0);
  EXPECT_EQ(grid[5].config["reset"]["r"].get<double>(), 100.0);
}

TEST(Config, StatesFromBlochVectors) {
  Json j = dephasing_config();
  j["reset"]["state"] = Json::array({0, 0, 0.5});
  const ModelSpec m = model_from(parse_config(j).resolved);
  EXPECT_NEAR(m.reset.states[0](0, 0).real(), 1.0, 1e-15);
}

TEST_F(TempDir, SteadyReproducesWorkedValue) {
  const Result r = invoke({"steady", "--config", write("c.json", dephasing_config()), "--no-timestamp"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "negativity,min_eigenvalue");
  EXPECT_NEAR(std::stod(rows[1].substr(0, rows[1].find(','))), 58.0 / 4368.0, 1e-12);
}

TEST_F(TempDir, SinglePointSweepGivesOneRow) {
  Json j = dephasing_config();
  j["sweep"] = Json::array({{{"param", "reset.r"}, {"min", 10}, {"max", 10}, {"points", 1}}});
  const Result r = invoke({"steady", "--config", write("c.json", j), "--no-timestamp"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].rfind("reset.r,", 0), 0u);
}

TEST_F(TempDir, OutputIsByteIdenticalWithoutTimestamp) {
  Json j = dephasing_config();
  j["sweep"] = Json::array({{{"param", "reset.r"}, {"min", 1}, {"max", 30}, {"points", 4}}});
  const std::string cfg = write("c.json", j);
  const std::string a = (dir_ / "a.csv").string();
  const std::string b = (dir_ / "b.csv").string();
  ASSERT_EQ(invoke({"steady", "--config", cfg, "--out", a, "--no-timestamp"}).code, kExitOk);
  ASSERT_EQ(invoke({"steady", "--config", cfg, "--out", b, "--no-timestamp", "--threads", "3"}).code, kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).find("# generated"), std::string::npos);
  ASSERT_EQ(invoke({"steady", "--config", cfg, "--out", a}).code, kExitOk);
  EXPECT_NE(slurp(a).find("# generated"), std::string::npos);
}

TEST_F(TempDir, HeaderCarriesResolvedConfigAndSeed) {
  const Result r = invoke({"steady", "--config", write("c.json", dephasing_config()), "--seed", "42"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("# resetlb steady\n# seed: 42\n", 0), 0u);
  EXPECT_NE(r.out.find("#     \"model\": \"gas\""), std::string::npos);
}

TEST_F(TempDir, DumpStatesWritesJson) {
  const std::string out = (dir_ / "s.csv").string();
  ASSERT_EQ(invoke({"steady", "--config", write("c.json", dephasing_config()), "--out", out, "--dump-states"}).code,
            kExitOk);
  const Json states = Json::parse(slurp(out + ".states.json"));
  EXPECT_FALSE(states.empty());
  EXPECT_EQ(invoke({"steady", "--config", write("c.json", dephasing_config()), "--dump-states"}).code,
            kExitConfig);
}

TEST_F(TempDir, EvolveColumns) {
  Json j = dephasing_config();
  j["evolve"] = {{"t_max", 1.0}, {"points", 5}};
  const Result r = invoke({"evolve", "--config", write("c.json", j)});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "t,negativity,trace,min_eigenvalue");
}

TEST_F(TempDir, SpectrumMultiplicitiesSumToDimension) {
  const Result r = invoke({"spectrum", "--config", write("c.json", dephasing_config())});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = data_rows(r.out);
  int total = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) total += std::stoi(rows[k].substr(rows[k].rfind(',') + 1));
  EXPECT_EQ(total, 16);
}

TEST_F(TempDir, SpingasRuns) {
  const Json j = Json::parse(R"({"model": "spingas", "unit": "step",
                                 "spingas": {"steps": 30, "runs": 8, "exchange_prob": 1}})");
  const Result r = invoke({"spingas", "--config", write("c.json", j)});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "exchange_prob,negativity,stderr,runs");
  EXPECT_EQ(rows[1], "1,0,0,8");
}

TEST_F(TempDir, MeasuresMemoryGuard) {
  Json j = dephasing_config();
  j["measures"] = {{"n_max", 7}};
  EXPECT_EQ(invoke({"measures", "--config", write("c.json", j)}).code, kExitConfig);
}

TEST_F(TempDir, ExitCodes) {
  EXPECT_EQ(invoke({"steady"}).code, kExitConfig);
  EXPECT_EQ(invoke({"steady", "--config", (dir_ / "missing.json").string()}).code, kExitConfig);
  EXPECT_EQ(invoke({"bogus"}).code, kExitConfig);
  Json j = dephasing_config();
  j["reset"]["r"] = 0;
  const Result r = invoke({"steady", "--config", write("c.json", j)});
  EXPECT_EQ(r.code, kExitSolver);
  EXPECT_EQ(r.err.rfind("solver error:", 0), 0u);
  EXPECT_EQ(invoke({"verify", "--filter", "qop."}).code, kExitOk);
}

TEST_F(TempDir, ThreadsFromEnvironmentMustBeValid) {
  const std::string cfg = write("c.json", dephasing_config());
  ::setenv("RESETLB_THREADS", "zero", 1);
  EXPECT_EQ(invoke({"steady", "--config", cfg}).code, kExitConfig);
  ::setenv("RESETLB_THREADS", "2", 1);
  EXPECT_EQ(invoke({"steady", "--config", cfg}).code, kExitOk);
  ::unsetenv("RESETLB_THREADS");
}

TEST(Verify, PerturbedFormulaFailsTheNamedCheck) {
  VerifyContext ctx;
  ctx.dephasing_ising_reset = [](double g, double gamma, double r) {
    return closed_form::neg_dephasing_ising_reset(g, gamma, r) * 1.01 + 1e-4;
  };
  std::ostringstream out;
  const VerifyOutcome outcome = run_verify(ctx, out, "closed_form.");
  EXPECT_FALSE(outcome.all_passed);
  ASSERT_EQ(outcome.failed.size(), 1u);
  EXPECT_EQ(outcome.failed[0], "closed_form.dephasing_ising_reset");
  EXPECT_NE(out.str().find("FAIL closed_form.dephasing_ising_reset"), std::string::npos);
}

TEST(Verify, ToleranceScaleLoosensChecks) {
  VerifyContext ctx;
  ctx.dephasing_ising_reset = [](double g, double gamma, double r) {
    return closed_form::neg_dephasing_ising_reset(g, gamma, r) + 1e-6;
  };
  std::ostringstream out;
  EXPECT_FALSE(run_verify(ctx, out, "closed_form.dephasing_ising_reset").all_passed);
  ctx.tol_scale = 1e6;
  EXPECT_TRUE(run_verify(ctx, out, "closed_form.dephasing_ising_reset").all_passed);
}

TEST(Verify, RegistryNamesAreUnique) {
  std::set<std::string> names;
  for (const VerifyCheck& c : verify_registry()) EXPECT_TRUE(names.insert(c.name).second) << c.name;
  EXPECT_GE(names.size(), 20u);
}

TEST(Parallel, KeepsOrderAndRethrowsFirstError) {
  const auto squares = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < squares.size(); ++i) EXPECT_EQ(squares[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map<int>(10, 3,
                                 [](std::size_t i) -> int {
                                   if (i == 4) throw std::runtime_error("boom");
                                   return 0;
                                 }),
               std::runtime_error);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2");
}

}  // namespace
}  // namespace resetlb::cli
