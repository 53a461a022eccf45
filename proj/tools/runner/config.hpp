#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alber/dynamics.hpp"
#include "alber/inequality_lab.hpp"
#include "alber/penrose.hpp"

namespace alber::lab {

// Run configuration. The document format is described in docs/schemas.md;
// every field has a default, unknown keys are rejected.

struct GridConfig {
  int cutoff = 16;
  int points = 0;
};

struct StateConfig {
  std::string preset = "random";  ///< random | zero | homogeneous | plane-wave | file
  std::string file;
  int rank = 2;
  double decay = 4.0;
  double mass = 1.0;
  int band = 0;  ///< random orbitals live on |n| <= band (0: whole grid)
  int mode = 0;  ///< plane-wave mode
};

struct BackgroundConfig {
  std::string preset = "zero";  ///< zero | unstable-single-mode | stable-broad | custom | file
  std::string file;
  std::vector<double> symbol;  ///< custom: values on -J..J
  double mass = 1.0;           ///< stable-broad: sum of the symbol
  int support = 8;             ///< stable-broad: J
  double decay = 4.0;          ///< stable-broad: symbol ~ <n>^{-decay}
};

struct SimulateChecks {
  double mass_drift = -1.0;  ///< negative: not checked
  double s2_drift = -1.0;
  double energy_drift = -1.0;
  double gram = -1.0;
  bool apriori = true;
};

struct PenroseConfig {
  int k_max = 8;
  MarginScan scan;
  double eta = 1.0;      ///< eta at which C_Gamma(eta) is reported
  double epsilon = 1e-3;
  double c_bilinear = 0.0;  ///< 0: estimate from the ensemble section
};

struct PerturbConfig {
  std::vector<double> epsilons{1e-2, 1e-3};
  std::string perturbation = "random";  ///< random | sideband
  int rank = 2;
  double decay = 4.0;
  int band = 0;  ///< 0: background support (at least 1)
  bool linearized = true;
  int fit_mode = 1;
  double fit_start = 5.0;
  double fit_end = 15.0;
  bool until_tstar = false;  ///< stable background: horizon = max T_star
};

struct InequalityConfig {
  EnsembleConfig ensemble;
  double s = 1.0;
  bool stability = false;  ///< rerun unnamed-constant checks with 4x samples
  double apriori_horizon = 0.5;
  double apriori_dt = 1e-3;
};

struct ConvergenceConfig {
  std::string mode = "dt";  ///< dt | galerkin
  std::vector<double> dts{4e-3, 2e-3, 1e-3};
  double reference_dt = 6.25e-5;
  std::vector<int> cutoffs{8, 16, 32, 64};
  int reference_cutoff = 128;
};

struct RunConfig {
  GridConfig grid;
  double p = 1.0;
  double q = 1.0;
  double dt = 1e-3;
  double horizon = 1.0;
  int record_every = 10;
  StateConfig state;
  BackgroundConfig background;
  SimulateChecks checks;
  PenroseConfig penrose;
  PerturbConfig perturb;
  InequalityConfig inequalities;
  ConvergenceConfig convergence;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::string base_dir;       ///< directory of the config file, for relative paths
  nlohmann::json document;    ///< the parsed input, echoed into the manifest

  EvolveConfig evolve_config() const;
};

/// Parses and validates; throws InputError with the offending field path.
RunConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

}  // namespace alber::lab
