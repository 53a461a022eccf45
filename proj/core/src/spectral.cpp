#include "alber/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "alber/errors.hpp"

namespace alber {

namespace detail {

namespace {
// FFTW planning and destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlans {
  explicit FftPlans(int n) : size(n) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
    if (forward == nullptr || backward == nullptr) {
      throw NumericalError("FFTW failed to create plans of size " +
                           std::to_string(n));
    }
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void run(fftw_plan plan, const ComplexVector& in, ComplexVector& out) const {
    // fftw_complex is layout-compatible with std::complex<double>.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }

  int size;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

}  // namespace detail

int fft_friendly_size(int min_size) {
  for (int n = std::max(min_size, 1);; ++n) {
    int r = n;
    for (int p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

SpectralGrid::SpectralGrid(int cutoff, int points) : cutoff_(cutoff) {
  if (cutoff < 1) {
    throw InputError("SpectralGrid: cutoff N must be >= 1, got " +
                     std::to_string(cutoff));
  }
  const int min_points = 2 * (2 * cutoff + 1);
  if (points == 0) {
    points = fft_friendly_size(min_points);
  } else if (points < min_points) {
    throw InputError("SpectralGrid: M = " + std::to_string(points) +
                     " violates M >= 2(2N+1) = " + std::to_string(min_points));
  }
  points_ = points;
  plans_ = std::make_shared<const detail::FftPlans>(points_);
}

ComplexVector SpectralGrid::synthesize_band(const ComplexVector& coeffs) const {
  const auto len = static_cast<int>(coeffs.size());
  if (len % 2 == 0 || len > points_) {
    throw InputError("synthesize_band: band of length " + std::to_string(len) +
                     " does not fit on " + std::to_string(points_) + " points");
  }
  const int band = (len - 1) / 2;
  ComplexVector buffer = ComplexVector::Zero(points_);
  for (int n = -band; n <= band; ++n) {
    buffer[(n % points_ + points_) % points_] = coeffs[n + band];
  }
  ComplexVector out(points_);
  plans_->run(plans_->backward, buffer, out);
  out /= kSqrtTwoPi;
  return out;
}

ComplexVector SpectralGrid::analyze_band(const ComplexVector& samples,
                                         int band) const {
  if (samples.size() != points_) {
    throw InputError("analyze: expected " + std::to_string(points_) +
                     " samples, got " + std::to_string(samples.size()));
  }
  if (band < 0 || 2 * band + 1 > points_) {
    throw InputError("analyze: band " + std::to_string(band) +
                     " is not resolved by " + std::to_string(points_) +
                     " points");
  }
  ComplexVector spectrum(points_);
  plans_->run(plans_->forward, samples, spectrum);
  // f(n) = (2pi)^{-1/2} (2pi/M) sum_j f_j e^{-i n x_j}
  const double scale = kSqrtTwoPi / points_;
  ComplexVector coeffs(2 * band + 1);
  for (int n = -band; n <= band; ++n) {
    coeffs[n + band] = scale * spectrum[(n % points_ + points_) % points_];
  }
  return coeffs;
}

FourierField::FourierField(SpectralGrid grid)
    : grid_(std::move(grid)), coeffs_(ComplexVector::Zero(grid_.modes())) {}

FourierField::FourierField(SpectralGrid grid, ComplexVector coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.modes()) {
    throw InputError("FourierField: expected " + std::to_string(grid_.modes()) +
                     " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

FourierField FourierField::plane_wave(const SpectralGrid& grid, int n,
                                      Complex amplitude) {
  if (std::abs(n) > grid.cutoff()) {
    throw InputError("plane_wave: mode " + std::to_string(n) +
                     " outside cutoff " + std::to_string(grid.cutoff()));
  }
  FourierField f(grid);
  f[n] = amplitude * kSqrtTwoPi;
  return f;
}

FourierField FourierField::basis(const SpectralGrid& grid, int n) {
  return plane_wave(grid, n, 1.0 / kSqrtTwoPi);
}

ComplexVector synthesize(const FourierField& field) {
  return field.grid().synthesize_band(field.coeffs());
}

FourierField analyze(const SpectralGrid& grid, const ComplexVector& samples) {
  return FourierField(grid, grid.analyze_band(samples, grid.cutoff()));
}

FourierField derivative(const FourierField& field) {
  FourierField out = field;
  const int cutoff = field.grid().cutoff();
  for (int n = -cutoff; n <= cutoff; ++n) {
    out[n] *= Complex(0.0, n);
  }
  return out;
}

double sobolev_norm(const FourierField& field, double s) {
  if (!(s >= 0.0)) {
    throw InputError("sobolev_norm: order s must be >= 0");
  }
  const int cutoff = field.grid().cutoff();
  double sum = 0.0;
  for (int n = -cutoff; n <= cutoff; ++n) {
    sum += std::pow(1.0 + double(n) * n, s) * std::norm(field[n]);
  }
  return std::sqrt(sum);
}

namespace {

template <typename Abs>
double lp_norm_impl(Eigen::Index size, Abs&& abs_at, double p) {
  if (size == 0) return 0.0;
  if (std::isinf(p) && p > 0) {
    double mx = 0.0;
    for (Eigen::Index j = 0; j < size; ++j) mx = std::max(mx, abs_at(j));
    return mx;
  }
  if (p != 1.0 && p != 2.0 && p != 4.0) {
    throw InputError("lp_norm: p must be one of 1, 2, 4, inf");
  }
  const double weight = kTwoPi / static_cast<double>(size);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < size; ++j) {
    const double a = abs_at(j);
    sum += p == 1.0 ? a : p == 2.0 ? a * a : (a * a) * (a * a);
  }
  sum *= weight;
  return p == 1.0 ? sum : p == 2.0 ? std::sqrt(sum) : std::sqrt(std::sqrt(sum));
}

}  // namespace

double lp_norm(const ComplexVector& samples, double p) {
  return lp_norm_impl(samples.size(), [&](Eigen::Index j) { return std::abs(samples[j]); }, p);
}

double lp_norm(const RealVector& samples, double p) {
  return lp_norm_impl(samples.size(), [&](Eigen::Index j) { return std::abs(samples[j]); }, p);
}

double bessel_constant(double s, double tail_tol) {
  if (!(s > 0.5)) {
    throw InputError("bessel_constant: series diverges for s <= 1/2");
  }
  if (!(tail_tol > 0.0)) {
    throw InputError("bessel_constant: tail_tol must be positive");
  }
  auto f = [s](double x) { return std::pow(1.0 + x * x, -s); };
  auto fpp = [s](double x) {
    const double u = 1.0 + x * x;
    return -2.0 * s * std::pow(u, -s - 1.0) +
           4.0 * s * (s + 1.0) * x * x * std::pow(u, -s - 2.0);
  };
  // Tail sum_{n>K} f(n) = int_K^inf f - f(K)/2 - f'(K)/12 + R with
  // |R| <= |f''(K)|/720; two tails (n and -n), then the 1/(2pi) prefactor.
  double cutoff = 16.0;
  while (2.0 * std::abs(fpp(cutoff)) / 720.0 / kTwoPi > tail_tol &&
         cutoff < 1e7) {
    cutoff *= 2.0;
  }
  const auto big_k = static_cast<long>(cutoff);
  double partial = 0.0;
  for (long n = big_k; n >= 1; --n) partial += f(double(n));

  // int_K^inf (1+x^2)^{-s} dx = sum_m binom(-s, m) K^{1-2s-2m} / (2s+2m-1)
  double integral = 0.0;
  double binom = 1.0;
  for (int m = 0; m < 60; ++m) {
    const double term =
        binom * std::pow(cutoff, 1.0 - 2.0 * s - 2.0 * m) / (2.0 * s + 2.0 * m - 1.0);
    integral += term;
    if (std::abs(term) < 1e-18 * std::abs(integral)) break;
    binom *= (-s - m) / (m + 1.0);
  }
  const double fp = -2.0 * s * cutoff * std::pow(1.0 + cutoff * cutoff, -s - 1.0);
  const double tail = integral - 0.5 * f(cutoff) - fp / 12.0;
  return (1.0 + 2.0 * (partial + tail)) / kTwoPi;
}

}  // namespace alber
