#pragma once

#include <vector>

#include "alber/spectral.hpp"

namespace alber {

/// Dense matrix of an operator in the Fourier basis e_n = (2pi)^{-1/2} e^{inx},
/// entries U(m, n) = <e_m, U e_n> for m, n in -N..N.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(SpectralGrid grid);
  OperatorMatrix(SpectralGrid grid, ComplexMatrix entries);

  const SpectralGrid& grid() const { return grid_; }
  const ComplexMatrix& entries() const { return entries_; }
  ComplexMatrix& entries() { return entries_; }

  Complex operator()(int m, int n) const {
    return entries_(grid_.index(m), grid_.index(n));
  }
  Complex& operator()(int m, int n) {
    return entries_(grid_.index(m), grid_.index(n));
  }

  /// max|U - U^dagger| <= rel_tol * ||U||_{S^2}.
  bool is_self_adjoint(double rel_tol = 1e-12) const;

  /// Density diagonal sum sum_j U(j+k, j); equals (2pi)^{1/2} times the
  /// unitary Fourier coefficient of the kernel diagonal.
  Complex diagonal_sum(int k) const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(Complex factor);

 private:
  SpectralGrid grid_;
  ComplexMatrix entries_;
};

OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex factor, OperatorMatrix a);

/// Non-negative Fourier symbol of a translation-invariant operator,
/// supported on -J..J.
class BackgroundSymbol {
 public:
  /// `values` has length 2J+1, mode n stored at n + J.
  explicit BackgroundSymbol(std::vector<double> values);

  static BackgroundSymbol zero(int support = 0);

  int support() const { return support_; }
  /// Symbol at any integer n (0 outside the support).
  double operator()(int n) const {
    return std::abs(n) > support_ ? 0.0 : values_[n + support_];
  }
  const std::vector<double>& values() const { return values_; }

  double l1_norm() const;
  /// ||Gamma||_{H^1 S^1} = sum_n <n>^2 Gamma(n).
  double h1s1_norm() const;
  bool is_zero() const;

 private:
  int support_;
  std::vector<double> values_;
};

/// Finite-rank non-negative operator gamma = sum_k mu_k |psi_k><psi_k| with
/// orthonormal orbitals on a shared grid. Immutable once built.
class MixedState {
 public:
  explicit MixedState(SpectralGrid grid);
  /// Rejects negative weights and orbitals with max|G - I| > gram_tol.
  MixedState(std::vector<double> weights, std::vector<FourierField> orbitals,
             double gram_tol = 1e-10);

  /// Skips the orthonormality check; for flows that preserve the Gram matrix
  /// exactly (the deviation is monitored instead).
  static MixedState unchecked(SpectralGrid grid, std::vector<double> weights,
                              std::vector<FourierField> orbitals,
                              double gram_tol = 1e-10);

  const SpectralGrid& grid() const { return grid_; }
  int rank() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<FourierField>& orbitals() const { return orbitals_; }
  double gram_tol() const { return gram_tol_; }

  ComplexMatrix gram_matrix() const;
  double gram_deviation() const;
  /// (2N+1) x rank matrix whose columns are the orbital coefficients.
  ComplexMatrix orbital_matrix() const;

 private:
  struct Unchecked {};
  // References, so a delegating caller can still read its arguments while
  // the grid is being computed.
  MixedState(Unchecked, SpectralGrid grid, std::vector<double>&& weights,
             std::vector<FourierField>&& orbitals, double gram_tol);

  SpectralGrid grid_;
  std::vector<double> weights_;
  std::vector<FourierField> orbitals_;
  double gram_tol_ = 1e-10;
};

/// Stable (Householder QR) orthonormalization of a family of fields.
std::vector<FourierField> orthonormalize(const std::vector<FourierField>& fields);

/// Position density rho(x) = sum_k mu_k |psi_k(x)|^2.
struct Density {
  RealVector samples;      ///< rho at the M collocation points
  ComplexVector spectrum;  ///< unitary coefficients, modes -2N..2N
  FourierField field;      ///< spectrum truncated to the grid band -N..N
};

Density density(const MixedState& state);

/// Density of an arbitrary (not necessarily non-negative) operator matrix,
/// unitary coefficients on -2N..2N.
ComplexVector density_spectrum(const OperatorMatrix& u);

OperatorMatrix to_matrix(const MixedState& state);
/// diag(Gamma(n)); the grid cutoff must cover the symbol support.
OperatorMatrix background_to_matrix(const BackgroundSymbol& bg,
                                    const SpectralGrid& grid);

enum class Schatten { one, two, infinity };

// Descending.
std::vector<double> singular_values(const OperatorMatrix& u);
double schatten_norm(const OperatorMatrix& u, Schatten p);
/// ||<D>^s U <D>^s||_{S^1}.
double sobolev_schatten_norm(const OperatorMatrix& u, double s);
/// <D>^s U <D>^s as a matrix.
ComplexMatrix sobolev_weighted(const OperatorMatrix& u, double s);

/// sum_k mu_k ||psi_k||_{H^s}^2 (valid for non-negative states only).
double hs1_norm_nonneg(const MixedState& state, double s);

double mass(const MixedState& state);
double kinetic_energy(const MixedState& state);
/// E = p tr(Delta gamma) + (q/2)||rho||_{L^2}^2 = -p K + (q/2)||rho||^2.
double energy(const MixedState& state, double p, double q);

/// P_N' U P_N' on the same grid.
OperatorMatrix galerkin_truncate(const OperatorMatrix& u, int cutoff);

/// Spectral decomposition of a non-negative self-adjoint matrix; keeps
/// eigenvalues >= drop_tol * ||U||_{S^inf}, sorted descending.
MixedState eigendecompose(const OperatorMatrix& u, double drop_tol = 1e-12);

/// Uniform a-priori bound on ||gamma(t)||_{H^1 S^1} = M + K(t); the focusing
/// (pq > 0) or defocusing closed form is chosen from the sign of pq.
double ybar_bound(double mass, double kinetic0, double rho0_l2, double p,
                  double q);
double ybar_bound(const MixedState& state, double p, double q);

/// Copy of a field onto another grid (zero padding or truncation).
FourierField regrid(const FourierField& field, const SpectralGrid& grid);
MixedState regrid(const MixedState& state, const SpectralGrid& grid);

}  // namespace alber
