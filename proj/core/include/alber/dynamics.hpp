#pragma once

#include <functional>
#include <vector>

#include "alber/errors.hpp"
#include "alber/mixed_state.hpp"

namespace alber {

// Sign conventions. The orbital system is
//
//   i d/dt psi = p Delta psi + q rho psi.
//
// On a Fourier mode Delta e_n = -n^2 e_n, so the free flow is
// psi(n) -> e^{+i p n^2 t} psi(n). With only the potential term,
// d/dt |psi(x)|^2 = 0 pointwise, rho is frozen and
// psi(x) -> e^{-i q rho(x) t} psi(x) exactly. For the operator,
// S(t) gamma = e^{-i p Delta t} gamma e^{i p Delta t} multiplies U(m, n) by
// e^{i p (m^2 - n^2) t}.

struct EvolveConfig {
  double p = 1.0;
  double q = 1.0;
  double dt = 1e-3;
  double horizon = 1.0;
  int record_every = 1;

  void validate() const;
  int step_count() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  double mass = 0.0;
  double s2_norm = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
  double gram_dev = 0.0;
  double h1s1 = 0.0;
  std::vector<double> density_spectrum;  ///< |rho(k)|, k = -N..N
};

/// Evolution produced a non-finite value or an observable above 1e12.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time, TrajectoryRecord last_good)
      : Error(what), time_(time), last_good_(std::move(last_good)) {}
  double time() const { return time_; }
  const TrajectoryRecord& last_good() const { return last_good_; }

 private:
  double time_;
  TrajectoryRecord last_good_;
};

MixedState free_step(const MixedState& state, double p, double dt);
MixedState potential_step(const MixedState& state, double q, double dt);
/// Half free, full potential, half free.
MixedState strang_step(const MixedState& state, const EvolveConfig& cfg);

TrajectoryRecord monitor(const MixedState& state, double t, double p, double q);

struct Evolution {
  MixedState final_state;
  std::vector<TrajectoryRecord> records;
};

/// Called at t = 0, every `record_every` steps and at the horizon.
using EvolveObserver = std::function<void(const TrajectoryRecord&, const MixedState&)>;

Evolution evolve(const MixedState& state, const EvolveConfig& cfg,
                 const EvolveObserver& observer = {});

// ---------------------------------------------------------------------------
// Operator-level tools

/// S(t) U.
OperatorMatrix free_evolve(const OperatorMatrix& u, double p, double t);
/// Galerkin matrix of V_{rho_U}: (2pi)^{-1} sum_j U(j + m - n, j).
OperatorMatrix potential_matrix(const OperatorMatrix& u);
/// [V_{rho_a}, b].
OperatorMatrix density_commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Fixed point of the mild formulation
///   gamma(t) = S(t) gamma0 - i q int_0^t S(t - tau) [V_rho, gamma](tau) dtau
/// on `n_quad` trapezoid nodes over [0, T], after `n_iter` sweeps.
/// Throws NoContractionError if successive iterates stop approaching.
OperatorMatrix picard_solve(const OperatorMatrix& gamma0, double p, double q,
                            double horizon, int n_iter, int n_quad);

struct LinearizedTrajectory {
  std::vector<double> times;
  /// Diagonal sums sum_j U(j+k, j) at each record for k = -2N..2N.
  std::vector<ComplexVector> diagonal_sums;
  std::vector<OperatorMatrix> states;  ///< only when requested
  bool growth_flagged = false;         ///< stopped after max|U| > 1e12
  int cutoff = 0;

  Complex mode(std::size_t record, int k) const {
    return diagonal_sums[record][k + 2 * cutoff];
  }
};

/// Linearization around a homogeneous background,
///   i dU(m,n)/dt = -p (m^2 - n^2) U(m,n) - (q/2pi)(G(m) - G(n)) rho_U(m - n),
/// advanced in the interaction picture by explicit midpoint.
LinearizedTrajectory linearized_evolve(const OperatorMatrix& u0,
                                       const BackgroundSymbol& bg,
                                       const EvolveConfig& cfg,
                                       bool keep_states = false);

}  // namespace alber
