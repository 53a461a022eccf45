#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alber/dynamics.hpp"
#include "alber/mixed_state.hpp"

namespace alber {

/// Random ensembles. Sample i is drawn from its own generator seeded from
/// (seed, i), so an ensemble of n samples is a prefix of one with 4n.
struct EnsembleConfig {
  int n_samples = 200;
  int cutoff = 32;
  int rank_min = 1;
  int rank_max = 4;
  double decay = 2.0;  ///< coefficients scale like <n>^{-decay}
  std::uint64_t seed = 0;

  void validate() const;
};

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index);

/// Orthonormalized complex Gaussian orbitals with <n>^{-decay} profile and
/// weights |g| 2^{-k}; rank uniform in [rank_min, rank_max].
MixedState random_state(const SpectralGrid& grid, const EnsembleConfig& cfg,
                        std::mt19937_64& rng);
FourierField random_field(const SpectralGrid& grid, double decay, std::mt19937_64& rng);
/// Non-sign-definite self-adjoint matrix gamma_1 - gamma_2.
OperatorMatrix random_difference(const SpectralGrid& grid, const EnsembleConfig& cfg,
                                 std::mt19937_64& rng);
/// General (non-self-adjoint) matrix with entries ~ <m>^{-d-1} <n>^{-d-1}.
OperatorMatrix random_matrix(const SpectralGrid& grid, double decay, std::mt19937_64& rng);

struct CheckResult {
  std::string name;
  int n_samples = 0;
  int violations = 0;
  /// max LHS / RHS for explicit bounds (NaN when there is none).
  double worst_ratio = 0.0;
  /// max LHS / constant-free RHS for bounds with an unnamed constant.
  double empirical_constant = 0.0;
  bool explicit_constant = false;
  nlohmann::json offending;  ///< first violating sample, null if none
};

nlohmann::json to_json(const CheckResult& r);

// Explicit-constant checks: a sample violates when LHS > RHS (1 + slack).
CheckResult check_bessel(const EnsembleConfig& cfg, double s);
CheckResult check_gn(const EnsembleConfig& cfg);
CheckResult check_hoffmann_ostenhof(const EnsembleConfig& cfg);
CheckResult check_apriori(const std::vector<TrajectoryRecord>& records, double ybar);

// Unnamed-constant estimates.
CheckResult check_trace_estimate(const EnsembleConfig& cfg, double s);
CheckResult check_conjugation(const EnsembleConfig& cfg, double s);
CheckResult check_bilinear(const EnsembleConfig& cfg, double s);
/// Also tests the semi-explicit constant 8 sum_j <j>^{-2} (worst_ratio).
CheckResult check_fourier_summation(const EnsembleConfig& cfg);

// Per-sample quantities, exposed for tests.
struct Ratio {
  double lhs;
  double rhs;
};
/// sup rho (on an 8x oversampled grid) vs B_s ||gamma||_{H^s S^1}.
Ratio bessel_ratio(const MixedState& state, double s);
/// ||u||_4^4 vs |T|^{-1} ||u||_2^4 + 2 ||u||_2^3 ||u'||_2.
Ratio gn_ratio(const FourierField& u);
/// ||u||_inf^2 vs |T|^{-1} ||u||_2^2 + 2 ||u||_2 ||u'||_2.
Ratio linfty_ratio(const FourierField& u);
/// ||grad sqrt(rho + eps)||^2 vs sum mu ||psi'||^2, eps = 1e-12 ||rho||_inf.
Ratio hoffmann_ostenhof_ratio(const MixedState& state);
/// ||rho_U||_{H^s} vs ||U||_{H^s S^1}.
Ratio trace_ratio(const OperatorMatrix& u, double s);
/// ||<D>^s V_f <D>^{-s}||_op vs ||f||_{H^s}.
Ratio conjugation_ratio(const FourierField& f, double s);
/// ||[V_{rho_a}, b]||_{H^s S^1} vs ||a||_{H^s S^1} ||b||_{H^s S^1}.
Ratio bilinear_ratio(const OperatorMatrix& a, const OperatorMatrix& b, double s);
/// sum_{k != 0} <k>^2 (sum_j |U(j+k, j)|)^2 vs ||U||_{H^1 S^1}^2.
Ratio fourier_summation_ratio(const OperatorMatrix& u);

/// 8 sum_j <j>^{-2} = 8 pi coth(pi).
double fourier_summation_constant();

/// Matrix of multiplication by f on the grid band.
OperatorMatrix multiplication_matrix(const FourierField& f);

}  // namespace alber
