#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace alber::lab {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDivergence = 3, kCheckViolation = 4 };

// ---------------------------------------------------------------------------
// simulate

struct Drifts {
  double mass = 0.0;  ///< max relative |M(t) - M(0)|
  double s2 = 0.0;
  double energy = 0.0;  ///< relative to |E(0)| (absolute when E(0) = 0)
  double gram = 0.0;    ///< max Gram deviation
};

Drifts measure_drifts(const std::vector<TrajectoryRecord>& records);

// ---------------------------------------------------------------------------
// penrose

struct ModeScan {
  std::vector<PenroseReport> reports;  ///< k = 1..k_max
  double kappa = 0.0;                  ///< min margin over the reported k
  bool stable = false;                 ///< no zeros in any reported mode
};

ModeScan scan_modes(const BackgroundSymbol& bg, double p, double q, int k_max,
                    const MarginScan& scan);

/// Empirical bilinear constant at s = 1 from the ensemble section.
double estimate_bilinear_constant(const InequalityConfig& cfg);

PropagatorInputs propagator_inputs(const BackgroundSymbol& bg, double kappa, double q,
                                   double eta, double epsilon, double c_bilinear);

// ---------------------------------------------------------------------------
// perturb

struct PerturbSeries {
  double epsilon = 0.0;
  std::vector<double> t;
  std::vector<double> deviation;         ///< ||gamma(t) - Gamma||_{H^1 S^1}
  std::vector<double> linear_deviation;  ///< ||eps U(t)||_{H^1 S^1}, linearized
  std::vector<double> linear_mode;       ///< |sum_j eps U(j+k, j)(t)| at the fit mode
  std::vector<double> envelope;          ///< 2 C_star <t>^2 eps (NaN if unstable)
  double fit_rate = std::numeric_limits<double>::quiet_NaN();
  double t_star = std::numeric_limits<double>::quiet_NaN();
  int envelope_violations = 0;  ///< records with t <= T_star above the envelope
};

/// Perturbation matrix U0 (epsilon-independent for "random").
OperatorMatrix perturbation_matrix(const RunConfig& cfg, const BackgroundSymbol& bg,
                                   const SpectralGrid& grid, double epsilon);

PerturbSeries run_perturbation(const RunConfig& cfg, const BackgroundSymbol& bg,
                               double epsilon,
                               const std::optional<PropagatorConstants>& constants,
                               double horizon);

/// Least-squares slope of log(values) against t over [t0, t1].
double fit_log_rate(const std::vector<double>& t, const std::vector<double>& values,
                    double t0, double t1);

// ---------------------------------------------------------------------------
// convergence

struct DtRow {
  double dt;
  double error;  ///< ||gamma_dt(T) - gamma_ref(T)||_{S^2}
  double ratio;  ///< previous error / this error (NaN for the first row)
};

std::vector<DtRow> dt_convergence(const MixedState& state, const EvolveConfig& base,
                                  const std::vector<double>& dts, double reference_dt);

struct GalerkinRow {
  int cutoff;
  double error;           ///< ||P gamma P - gamma||_{H^1 S^1}
  double truncated_norm;  ///< ||P gamma P||_{H^1 S^1}
};

std::vector<GalerkinRow> galerkin_convergence(const OperatorMatrix& reference,
                                              const std::vector<int>& cutoffs);

/// Runs one subcommand, writing into cfg.output_dir. Library errors map to
/// exit codes; messages go to stderr.
int run_subcommand(const std::string& name, const RunConfig& cfg);

}  // namespace alber::lab
