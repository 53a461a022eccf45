#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "alber/errors.hpp"
#include "alber/serialization.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "output.hpp"
#include "support.hpp"

#ifndef ALBER_LAB_EXE
#error "ALBER_LAB_EXE must point at the alber-lab binary"
#endif

namespace alber::lab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

struct CliResult {
  int code;
  std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(ALBER_LAB_EXE) + " " + args + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::string config_error(const json& doc) {
  try {
    (void)parse_config(doc);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, DefaultsParse) {
  const RunConfig c = parse_config(json::object());
  EXPECT_EQ(c.grid.cutoff, 16);
  EXPECT_EQ(c.state.preset, "random");
  EXPECT_EQ(c.perturb.epsilons.size(), 2u);
}

TEST(Config, ShippedConfigsParse) {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(ALBER_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW((void)load_config(entry.path().string())) << entry.path();
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

TEST(Config, ErrorsCarryFieldPaths) {
  EXPECT_NE(config_error({{"physics", {{"r", 1}}}}).find("'physics.r' is not a recognized field"),
            std::string::npos);
  EXPECT_NE(config_error({{"bogus", 1}}).find("'bogus'"), std::string::npos);
  EXPECT_NE(config_error({{"time", {{"dt", -1.0}}}}).find("'time.dt'"), std::string::npos);
  EXPECT_NE(config_error({{"grid", {{"N", "big"}}}}).find("'grid.N' must be an integer"),
            std::string::npos);
  EXPECT_NE(config_error({{"state", {{"preset", "odd"}}}}).find("'state.preset'"),
            std::string::npos);
  EXPECT_NE(config_error({{"perturb", {{"epsilon", "x"}}}}).find("'perturb.epsilon'"),
            std::string::npos);
  EXPECT_NE(config_error({{"seed", -3}}).find("'seed'"), std::string::npos);
  EXPECT_NE(config_error({{"physics", 3}}).find("'physics' must be an object"), std::string::npos);
}

TEST(Config, EpsilonAcceptsNumberOrArray) {
  EXPECT_EQ(parse_config({{"perturb", {{"epsilon", 0.5}}}}).perturb.epsilons,
            std::vector<double>{0.5});
  EXPECT_EQ(parse_config({{"perturb", {{"epsilon", {0.1, 0.2}}}}}).perturb.epsilons,
            (std::vector<double>{0.1, 0.2}));
}

TEST(Csv, EscapingAndLayout) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
  CsvTable t({"x", "name", "n"});
  t.add_row({0.1, std::string("a,b"), std::int64_t(3)});
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::string(""), std::int64_t(-1)});
  EXPECT_EQ(t.str(), "x,name,n\r\n0.10000000000000001,\"a,b\",3\r\nnan,,-1\r\n");
  EXPECT_THROW(t.add_row({1.0}), Error);
}

TEST(Hash, KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = test::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  fs::path config(const json& doc) {
    const fs::path p = dir_ / "config.json";
    write(p, doc.dump(2));
    return p;
  }
  // Runs the subcommand twice into separate directories, checks the manifest
  // and that everything except the timing field is byte-identical.
  json run_twice(const std::string& sub, const json& doc, int expected_code = 0) {
    const fs::path cfg = config(doc);
    json manifests[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path out = dir_ / ("out" + std::to_string(i));
      const CliResult r = run_cli(sub + " --config " + cfg.string() + " --out " + out.string(), dir_);
      EXPECT_EQ(r.code, expected_code) << r.err;
      manifests[i] = json::parse(slurp(out / "manifest.json"));
      EXPECT_EQ(manifests[i].at("exit_code"), expected_code);
      EXPECT_EQ(manifests[i].at("subcommand"), sub);
      for (const auto& f : manifests[i].at("files")) {
        const std::string bytes = slurp(out / f.at("path").get<std::string>());
        EXPECT_EQ(sha256_hex(bytes), f.at("sha256")) << f.at("path");
        EXPECT_EQ(bytes.size(), f.at("bytes").get<std::size_t>());
      }
    }
    manifests[0].erase("wall_clock_seconds");
    manifests[1].erase("wall_clock_seconds");
    EXPECT_EQ(manifests[0], manifests[1]);
    return manifests[0];
  }
  fs::path out0() const { return dir_ / "out0"; }

  fs::path dir_;
};

TEST_F(CliRun, SimulateIsDeterministic) {
  const json doc{{"seed", 4},
                 {"grid", {{"N", 8}}},
                 {"time", {{"dt", 1e-3}, {"T", 0.05}, {"record_every", 10}}},
                 {"checks", {{"mass_drift", 1e-10}, {"gram", 1e-10}}}};
  const json m = run_twice("simulate", doc);
  EXPECT_EQ(m.at("files").size(), 4u);
  const std::string traj = slurp(out0() / "trajectory.csv");
  EXPECT_EQ(traj.substr(0, traj.find("\r\n")), "t,mass,s2,energy,kinetic,gram_dev,h1s1,ybar");
  EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 7);  // header + t = 0, 0.01, ..., 0.05
  const json summary = json::parse(slurp(out0() / "summary.json"));
  EXPECT_EQ(summary.at("status"), "ok");
  EXPECT_TRUE(summary.at("violations").empty());
  const MixedState final_state = state_from_json(json::parse(slurp(out0() / "final_state.json")));
  EXPECT_EQ(final_state.grid().cutoff(), 8);
}

TEST_F(CliRun, SeedOverrideChangesTheState) {
  const json doc{{"grid", {{"N", 6}}}, {"time", {{"dt", 1e-2}, {"T", 0.02}}}};
  const fs::path cfg = config(doc);
  ASSERT_EQ(run_cli("simulate --config " + cfg.string() + " --seed 1 --out " +
                        (dir_ / "a").string(), dir_).code, 0);
  ASSERT_EQ(run_cli("simulate --config " + cfg.string() + " --seed 2 --out " +
                        (dir_ / "b").string(), dir_).code, 0);
  EXPECT_NE(slurp(dir_ / "a" / "trajectory.csv"), slurp(dir_ / "b" / "trajectory.csv"));
  EXPECT_EQ(json::parse(slurp(dir_ / "b" / "manifest.json")).at("seed"), 2);
}

TEST_F(CliRun, PenroseReportsTheUnstableZero) {
  const json doc{{"physics", {{"p", 1}, {"q", 1}}},
                 {"background", {{"preset", "unstable-single-mode"}}},
                 {"penrose", {{"k_max", 2}}}};
  run_twice("penrose", doc);
  const json c = json::parse(slurp(out0() / "constants.json"));
  EXPECT_EQ(c.at("stable"), false);
  EXPECT_TRUE(c.at("constants").is_null());
  const json reports = json::parse(slurp(out0() / "reports.json"));
  const auto z = reports.at(0).at("zeros").at(0);
  EXPECT_NEAR(z.at(0).get<double>(), 1.0, 1e-6);
}

TEST_F(CliRun, PerturbWithZeroEpsilonStaysOnTheBackground) {
  const json doc{{"grid", {{"N", 8}}},
                 {"physics", {{"p", 1}, {"q", -1}}},
                 {"time", {{"dt", 1e-2}, {"T", 0.2}, {"record_every", 5}}},
                 {"background", {{"preset", "stable-broad"}, {"J", 4}}},
                 {"penrose", {{"k_max", 4}, {"c_bilinear", 0.3}}},
                 {"perturb", {{"epsilon", {0.0}}}}};
  run_twice("perturb", doc);
  const std::string csv = slurp(out0() / "perturb.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    EXPECT_LT(std::stod(line.substr(b + 1, c - b - 1)), 1e-12) << line;
    ++rows;
  }
  EXPECT_GT(rows, 0);
}

TEST_F(CliRun, InequalitiesAndConvergence) {
  run_twice("inequalities", {{"seed", 2}, {"ensemble", {{"n_samples", 5}, {"N", 6}}}});
  const json checks = json::parse(slurp(out0() / "checks.json"));
  EXPECT_FALSE(checks.empty());
  run_twice("convergence", {{"grid", {{"N", 6}}},
                            {"time", {{"T", 0.1}}},
                            {"convergence", {{"dts", {0.02, 0.01}}, {"reference_dt", 1e-3}}}});
  const std::string g = slurp(out0() / "convergence.csv");
  EXPECT_EQ(g.substr(0, g.find("\r\n")), "dt,error_s2,ratio");
}

TEST_F(CliRun, ConfigErrorsExitWithTwo) {
  const fs::path bad = config({{"grid", {{"N", 8}, {"extra", 1}}}});
  CliResult r = run_cli("simulate --config " + bad.string() + " --out " + (dir_ / "o").string(), dir_);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("grid.extra"), std::string::npos) << r.err;

  write(dir_ / "broken.json", "{\"grid\": {\"N\": 8,}");
  r = run_cli("simulate --config " + (dir_ / "broken.json").string(), dir_);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;

  EXPECT_EQ(run_cli("simulate --config " + (dir_ / "missing.json").string(), dir_).code, 2);
  EXPECT_EQ(run_cli("simulate", dir_).code, 2);
  EXPECT_EQ(run_cli("frobnicate --config x", dir_).code, 2);
  EXPECT_EQ(run_cli("--version", dir_).code, 0);
}

TEST_F(CliRun, CheckViolationExitsWithFour) {
  const json doc{{"grid", {{"N", 6}}},
                 {"time", {{"dt", 1e-2}, {"T", 0.1}}},
                 {"checks", {{"energy_drift", 0.0}}}};
  const json m = run_twice("simulate", doc, 4);
  const json summary = json::parse(slurp(out0() / "summary.json"));
  EXPECT_EQ(summary.at("violations").at(0).at("check"), "energy_drift");
  EXPECT_EQ(m.at("exit_code"), 4);
}

TEST_F(CliRun, DivergenceExitsWithThreeAndKeepsPartialOutput) {
  const json doc{{"grid", {{"N", 4}}},
                 {"state", {{"preset", "plane-wave"}, {"mass", 1e13}}},
                 {"time", {{"dt", 1e-3}, {"T", 0.01}, {"record_every", 1}}}};
  run_twice("simulate", doc, 3);
  const json summary = json::parse(slurp(out0() / "summary.json"));
  EXPECT_EQ(summary.at("status"), "diverged");
  EXPECT_TRUE(fs::exists(out0() / "trajectory.csv"));
  EXPECT_FALSE(fs::exists(out0() / "final_state.json"));
}

}  // namespace
}  // namespace alber::lab
