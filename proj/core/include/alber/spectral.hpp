#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>

#include <Eigen/Dense>

namespace alber {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline const double kSqrtTwoPi = std::sqrt(kTwoPi);

/// Japanese bracket <n> = (1 + n^2)^{1/2}.
inline double bracket(double n) { return std::sqrt(1.0 + n * n); }

/// Smallest integer >= min_size whose only prime factors are 2, 3 and 5.
int fft_friendly_size(int min_size);

namespace detail {
struct FftPlans;
}

/// Discretization of the torus R/(2 pi Z): Fourier modes -N..N and M
/// equispaced collocation points x_j = 2 pi j / M.
///
/// M >= 2(2N+1) so that products of two resolved fields (degree <= 2N) and
/// squares of densities (degree <= 4N) are integrated exactly by the
/// rectangle rule. Copies share one pair of FFT plans.
class SpectralGrid {
 public:
  /// `points == 0` picks the smallest FFT-friendly M >= 2(2N+1).
  explicit SpectralGrid(int cutoff, int points = 0);

  int cutoff() const { return cutoff_; }
  int points() const { return points_; }
  int modes() const { return 2 * cutoff_ + 1; }
  int index(int n) const { return n + cutoff_; }
  int mode(int index) const { return index - cutoff_; }
  double spacing() const { return kTwoPi / points_; }
  double node(int j) const { return spacing() * j; }

  /// Samples (2pi)^{-1/2} sum_n c(n) e^{i n x_j} for coefficients on any
  /// band -B..B with 2B+1 <= M (c has length 2B+1, mode n at n+B).
  ComplexVector synthesize_band(const ComplexVector& coeffs) const;

  /// Unitary Fourier coefficients -B..B of M physical samples (rectangle
  /// rule). Requires 2B+1 <= M.
  ComplexVector analyze_band(const ComplexVector& samples, int band) const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.cutoff_ == b.cutoff_ && a.points_ == b.points_;
  }

 private:
  int cutoff_;
  int points_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Complex function on the torus stored as unitary Fourier coefficients
/// f(n), n = -N..N.
class FourierField {
 public:
  explicit FourierField(SpectralGrid grid);
  FourierField(SpectralGrid grid, ComplexVector coeffs);

  /// amplitude * e^{i n x}, i.e. coefficient amplitude * sqrt(2 pi) at n.
  static FourierField plane_wave(const SpectralGrid& grid, int n,
                                 Complex amplitude = 1.0);
  /// The normalized basis vector e_n = (2 pi)^{-1/2} e^{i n x}.
  static FourierField basis(const SpectralGrid& grid, int n);

  const SpectralGrid& grid() const { return grid_; }
  const ComplexVector& coeffs() const { return coeffs_; }
  ComplexVector& coeffs() { return coeffs_; }

  Complex operator[](int n) const { return coeffs_[grid_.index(n)]; }
  Complex& operator[](int n) { return coeffs_[grid_.index(n)]; }

 private:
  SpectralGrid grid_;
  ComplexVector coeffs_;
};

ComplexVector synthesize(const FourierField& field);
FourierField analyze(const SpectralGrid& grid, const ComplexVector& samples);

/// Spectral derivative d/dx.
FourierField derivative(const FourierField& field);

double sobolev_norm(const FourierField& field, double s);

/// Rectangle-rule L^p norm on the uniform torus grid; p in {1, 2, 4, inf}.
double lp_norm(const ComplexVector& samples, double p);
double lp_norm(const RealVector& samples, double p);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// B_s = (2 pi)^{-1} sum_n <n>^{-2s}, absolute error <= tail_tol.
double bessel_constant(double s, double tail_tol = 1e-14);

}  // namespace alber
