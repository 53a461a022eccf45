#include "alber/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "alber/errors.hpp"
#include "alber/serialization.hpp"

namespace alber {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return Complex(re, im) / std::sqrt(2.0);
}

double sup_on_fine_grid(const ComplexVector& spectrum, int points, bool squared) {
  SpectralGrid fine(1, points);  // only the point count matters for synthesis
  const ComplexVector v = fine.synthesize_band(spectrum);
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = squared ? std::norm(v[i]) : v[i].real();
    m = std::max(m, a);
  }
  return m;
}

// Accumulates ratios and violations; rhs == 0 samples are excluded.
struct Tally {
  CheckResult result;
  double slack = 0.0;
  bool absolute_slack = false;

  void add(const Ratio& r, const std::function<nlohmann::json()>& describe,
           double abs_slack = 0.0) {
    ++result.n_samples;
    const bool violated = result.explicit_constant &&
                          (absolute_slack ? r.lhs > r.rhs + abs_slack
                                          : r.lhs > r.rhs * (1.0 + slack));
    if (violated) {
      if (result.violations == 0) result.offending = describe();
      ++result.violations;
    }
    if (r.rhs > 0.0) {
      const double q = r.lhs / r.rhs;
      if (result.explicit_constant) {
        result.worst_ratio = std::max(result.worst_ratio, q);
      } else {
        result.empirical_constant = std::max(result.empirical_constant, q);
      }
    }
    if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) {
      throw NumericalError(result.name + ": non-finite sample");
    }
  }
};

Tally make_tally(const char* name, bool explicit_constant, double slack) {
  Tally t;
  t.result.name = name;
  t.result.explicit_constant = explicit_constant;
  t.result.worst_ratio = explicit_constant ? 0.0 : kNaN;
  t.result.empirical_constant = explicit_constant ? kNaN : 0.0;
  t.slack = slack;
  return t;
}

nlohmann::json matrix_json(const OperatorMatrix& u) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < u.entries().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < u.entries().cols(); ++j) {
      row.push_back({u.entries()(i, j).real(), u.entries()(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return {{"N", u.grid().cutoff()}, {"entries", std::move(rows)}};
}

nlohmann::json field_json(const FourierField& f) {
  nlohmann::json c = nlohmann::json::array();
  for (Eigen::Index i = 0; i < f.coeffs().size(); ++i) {
    c.push_back({f.coeffs()[i].real(), f.coeffs()[i].imag()});
  }
  return {{"N", f.grid().cutoff()}, {"coeffs", std::move(c)}};
}

double sobolev_of_spectrum(const ComplexVector& c, double s) {
  const int B = static_cast<int>(c.size() - 1) / 2;
  double sum = 0.0;
  for (int n = -B; n <= B; ++n) sum += std::pow(bracket(n), 2.0 * s) * std::norm(c[n + B]);
  return std::sqrt(sum);
}

}  // namespace

void EnsembleConfig::validate() const {
  if (n_samples < 1) throw InputError("ensemble: n_samples must be >= 1");
  if (cutoff < 1) throw InputError("ensemble: cutoff must be >= 1");
  if (rank_min < 1 || rank_max < rank_min || rank_max > 2 * cutoff + 1) {
    throw InputError("ensemble: need 1 <= rank_min <= rank_max <= 2N+1");
  }
  if (!(decay >= 0.0)) throw InputError("ensemble: decay must be >= 0");
}

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

FourierField random_field(const SpectralGrid& grid, double decay, std::mt19937_64& rng) {
  FourierField f(grid);
  for (int n = -grid.cutoff(); n <= grid.cutoff(); ++n) {
    f[n] = gaussian(rng) * std::pow(bracket(n), -decay);
  }
  return f;
}

MixedState random_state(const SpectralGrid& grid, const EnsembleConfig& cfg,
                        std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank_dist(cfg.rank_min, cfg.rank_max);
  const int rank = rank_dist(rng);
  std::vector<FourierField> raw;
  for (int k = 0; k < rank; ++k) raw.push_back(random_field(grid, cfg.decay, rng));
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> weights;
  for (int k = 0; k < rank; ++k) weights.push_back(std::abs(g(rng)) * std::pow(0.5, k));
  return MixedState(std::move(weights), orthonormalize(raw));
}

OperatorMatrix random_difference(const SpectralGrid& grid, const EnsembleConfig& cfg,
                                 std::mt19937_64& rng) {
  const MixedState a = random_state(grid, cfg, rng);
  const MixedState b = random_state(grid, cfg, rng);
  return to_matrix(a) - to_matrix(b);
}

OperatorMatrix random_matrix(const SpectralGrid& grid, double decay, std::mt19937_64& rng) {
  OperatorMatrix u(grid);
  const int N = grid.cutoff();
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) {
      u(m, n) = gaussian(rng) * std::pow(bracket(m) * bracket(n), -decay - 1.0);
    }
  }
  return u;
}

nlohmann::json to_json(const CheckResult& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  return {{"name", r.name},
          {"n_samples", r.n_samples},
          {"violations", r.violations},
          {"worst_ratio", num(r.worst_ratio)},
          {"empirical_constant", num(r.empirical_constant)},
          {"explicit_constant", r.explicit_constant},
          {"offending", r.offending}};
}

// ---------------------------------------------------------------------------
// Per-sample ratios

Ratio bessel_ratio(const MixedState& state, double s) {
  const Density d = density(state);
  const double sup = sup_on_fine_grid(d.spectrum, 8 * state.grid().points(), false);
  return {sup, bessel_constant(s) * hs1_norm_nonneg(state, s)};
}

Ratio gn_ratio(const FourierField& u) {
  const ComplexVector v = synthesize(u);
  const double l4 = std::pow(lp_norm(v, 4.0), 4.0);
  const double l2 = u.coeffs().norm();
  const double dl2 = derivative(u).coeffs().norm();
  return {l4, std::pow(l2, 4.0) / kTwoPi + 2.0 * std::pow(l2, 3.0) * dl2};
}

Ratio linfty_ratio(const FourierField& u) {
  const double sup = sup_on_fine_grid(u.coeffs(), 8 * u.grid().points(), true);
  const double l2 = u.coeffs().norm();
  const double dl2 = derivative(u).coeffs().norm();
  return {sup, l2 * l2 / kTwoPi + 2.0 * l2 * dl2};
}

Ratio hoffmann_ostenhof_ratio(const MixedState& state) {
  const SpectralGrid& grid = state.grid();
  const Density d = density(state);
  const int B = 2 * grid.cutoff();
  ComplexVector dspec(d.spectrum.size());
  for (int k = -B; k <= B; ++k) dspec[k + B] = Complex(0.0, k) * d.spectrum[k + B];
  const ComplexVector grad = grid.synthesize_band(dspec);
  const double eps = 1e-12 * d.samples.cwiseAbs().maxCoeff();
  if (!(eps > 0.0)) return {0.0, kinetic_energy(state)};
  double lhs = 0.0;
  for (int j = 0; j < grid.points(); ++j) {
    const double g = grad[j].real();
    lhs += g * g / (4.0 * (d.samples[j] + eps));
  }
  lhs *= grid.spacing();
  return {lhs, kinetic_energy(state)};
}

Ratio trace_ratio(const OperatorMatrix& u, double s) {
  return {sobolev_of_spectrum(density_spectrum(u), s), sobolev_schatten_norm(u, s)};
}

OperatorMatrix multiplication_matrix(const FourierField& f) {
  const int N = f.grid().cutoff();
  OperatorMatrix m(f.grid());
  for (int a = -N; a <= N; ++a) {
    for (int b = -N; b <= N; ++b) {
      if (std::abs(a - b) <= N) m(a, b) = f[a - b] / kSqrtTwoPi;
    }
  }
  return m;
}

Ratio conjugation_ratio(const FourierField& f, double s) {
  OperatorMatrix m = multiplication_matrix(f);
  const int N = f.grid().cutoff();
  for (int a = -N; a <= N; ++a) {
    for (int b = -N; b <= N; ++b) m(a, b) *= std::pow(bracket(a) / bracket(b), s);
  }
  const auto sv = singular_values(m);
  const double op = sv.empty() ? 0.0 : *std::max_element(sv.begin(), sv.end());
  return {op, sobolev_norm(f, s)};
}

Ratio bilinear_ratio(const OperatorMatrix& a, const OperatorMatrix& b, double s) {
  return {sobolev_schatten_norm(density_commutator(a, b), s),
          sobolev_schatten_norm(a, s) * sobolev_schatten_norm(b, s)};
}

Ratio fourier_summation_ratio(const OperatorMatrix& u) {
  const int N = u.grid().cutoff();
  double lhs = 0.0;
  for (int k = -2 * N; k <= 2 * N; ++k) {
    if (k == 0) continue;
    double row = 0.0;
    for (int j = std::max(-N, -N - k); j <= std::min(N, N - k); ++j) row += std::abs(u(j + k, j));
    lhs += (1.0 + double(k) * k) * row * row;
  }
  const double h1 = sobolev_schatten_norm(u, 1.0);
  return {lhs, h1 * h1};
}

double fourier_summation_constant() { return 8.0 * kPi / std::tanh(kPi); }

// ---------------------------------------------------------------------------
// Ensemble checks

CheckResult check_bessel(const EnsembleConfig& cfg, double s) {
  cfg.validate();
  if (!(s > 0.5)) throw InputError("check_bessel: requires s > 1/2");
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("bessel", true, 1e-8);
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const MixedState st = random_state(grid, cfg, rng);
    t.add(bessel_ratio(st, s), [&] { return to_json(st); });
  }
  return t.result;
}

CheckResult check_gn(const EnsembleConfig& cfg) {
  cfg.validate();
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("gagliardo_nirenberg", true, 1e-10);
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const FourierField u = random_field(grid, cfg.decay, rng);
    t.add(gn_ratio(u), [&] { return field_json(u); });
    // The L-infinity form belongs to the same estimate; count it per sample.
    const Ratio li = linfty_ratio(u);
    if (li.lhs > li.rhs * (1.0 + 1e-10)) {
      if (t.result.violations == 0) t.result.offending = field_json(u);
      ++t.result.violations;
    }
    if (li.rhs > 0.0) t.result.worst_ratio = std::max(t.result.worst_ratio, li.lhs / li.rhs);
  }
  return t.result;
}

CheckResult check_hoffmann_ostenhof(const EnsembleConfig& cfg) {
  cfg.validate();
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("hoffmann_ostenhof", true, 0.0);
  t.absolute_slack = true;
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const MixedState st = random_state(grid, cfg, rng);
    const Ratio r = hoffmann_ostenhof_ratio(st);
    t.add(r, [&] { return to_json(st); }, 1e-8 * r.rhs);
  }
  return t.result;
}

CheckResult check_apriori(const std::vector<TrajectoryRecord>& records, double ybar) {
  Tally t = make_tally("apriori", true, 1e-6);
  for (const auto& rec : records) {
    t.add({rec.h1s1, ybar}, [&] {
      return nlohmann::json{{"t", rec.t}, {"h1s1", rec.h1s1}, {"ybar", ybar}};
    });
  }
  return t.result;
}

CheckResult check_trace_estimate(const EnsembleConfig& cfg, double s) {
  cfg.validate();
  if (!(s > 0.5)) throw InputError("check_trace_estimate: requires s > 1/2");
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("trace_estimate", false, 0.0);
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const OperatorMatrix u = random_difference(grid, cfg, rng);
    t.add(trace_ratio(u, s), [&] { return matrix_json(u); });
  }
  return t.result;
}

CheckResult check_conjugation(const EnsembleConfig& cfg, double s) {
  cfg.validate();
  if (!(s > 0.5)) throw InputError("check_conjugation: requires s > 1/2");
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("conjugation", false, 0.0);
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const FourierField f = random_field(grid, cfg.decay, rng);
    t.add(conjugation_ratio(f, s), [&] { return field_json(f); });
  }
  return t.result;
}

CheckResult check_bilinear(const EnsembleConfig& cfg, double s) {
  cfg.validate();
  if (!(s > 0.5)) throw InputError("check_bilinear: requires s > 1/2");
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("bilinear", false, 0.0);
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const OperatorMatrix a = to_matrix(random_state(grid, cfg, rng));
    const OperatorMatrix b = random_difference(grid, cfg, rng);
    t.add(bilinear_ratio(a, b, s), [&] { return matrix_json(a); });
  }
  return t.result;
}

CheckResult check_fourier_summation(const EnsembleConfig& cfg) {
  cfg.validate();
  const SpectralGrid grid(cfg.cutoff);
  Tally t = make_tally("fourier_summation", false, 0.0);
  const double c = fourier_summation_constant();
  t.result.worst_ratio = 0.0;
  for (int i = 0; i < cfg.n_samples; ++i) {
    auto rng = sample_engine(cfg.seed, i);
    const OperatorMatrix u = random_matrix(grid, cfg.decay, rng);
    const Ratio r = fourier_summation_ratio(u);
    t.add(r, [&] { return matrix_json(u); });
    if (r.rhs > 0.0) {
      const double q = r.lhs / (c * r.rhs);
      t.result.worst_ratio = std::max(t.result.worst_ratio, q);
      if (q > 1.0 + 1e-10) {
        if (t.result.violations == 0) t.result.offending = matrix_json(u);
        ++t.result.violations;
      }
    }
  }
  return t.result;
}

}  // namespace alber
