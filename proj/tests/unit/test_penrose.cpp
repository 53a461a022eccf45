#include <gtest/gtest.h>

#include "alber/errors.hpp"
#include "alber/penrose.hpp"
#include "support.hpp"

namespace alber {
namespace {

const Complex kI(0.0, 1.0);

BackgroundSymbol broad() { return lab::stable_broad(1.0, 6, 3.0); }

OperatorMatrix seed_matrix(int cutoff) {
  OperatorMatrix u(SpectralGrid{cutoff});
  u(1, 0) = 1.0;
  return u;
}

TEST(Kernel, SingleModeClosedForms) {
  const BackgroundSymbol bg = lab::unstable_single_mode();
  for (double tau : {0.0, 0.3, 1.7, 12.5}) {
    EXPECT_LT(std::abs(volterra_kernel(bg, 1.0, 1, tau) + 4.0 * kPi * kI * std::sin(tau)), 1e-13);
  }
  for (Complex l : {Complex(1.0, 0.0), Complex(0.5, 2.0), Complex(3.0, -1.0)}) {
    const Complex expected = -4.0 * kPi * kI / (l * l + 1.0);
    EXPECT_LT(std::abs(laplace_symbol(bg, 1.0, 1, l) - expected), 1e-13);
    EXPECT_LT(std::abs(dispersion(bg, 1.0, 1.0, 1, l) - (l * l - 1.0) / (l * l + 1.0)), 1e-13);
  }
  EXPECT_LT(std::abs(dispersion(bg, 1.0, 1.0, 1, 1.0)), 1e-12);
}

TEST(Kernel, ZeroBackgroundAndDomain) {
  const BackgroundSymbol z = BackgroundSymbol::zero();
  EXPECT_EQ(volterra_kernel(z, 1.0, 2, 0.4), Complex(0.0));
  EXPECT_EQ(laplace_symbol(z, 1.0, 2, 1.0), Complex(0.0));
  EXPECT_TRUE(kernel_terms(z, 1.0, 3).empty());
  EXPECT_THROW(volterra_kernel(z, 1.0, 0, 0.1), InputError);
  EXPECT_THROW(laplace_symbol(broad(), 1.0, 1, Complex(0.0, 1.0)), InputError);
  EXPECT_THROW(laplace_symbol(broad(), 1.0, 1, Complex(-1.0, 0.0)), InputError);
}

TEST(Kernel, L1Bounds) {
  const BackgroundSymbol bg = broad();
  const double l1 = bg.l1_norm();
  for (int k : {1, 2, 5, -3}) {
    for (int i = 0; i < 400; ++i) {
      EXPECT_LE(std::abs(volterra_kernel(bg, 1.0, k, 0.05 * i)), 2.0 * l1 * (1 + 1e-14));
    }
    for (double eta : {0.01, 0.3, 2.0}) {
      for (double s = -40.0; s <= 40.0; s += 0.37) {
        EXPECT_LE(std::abs(laplace_symbol(bg, 1.0, k, Complex(eta, s))),
                  2.0 * l1 / eta * (1 + 1e-14));
      }
    }
  }
}

TEST(Kernel, LaplaceSymbolMatchesQuadrature) {
  // Composite Simpson on [0, 40 / Re lambda]; the tail is below e^{-40}.
  const BackgroundSymbol bg = broad();
  const Complex lambda = 2.0;
  const double T = 40.0 / lambda.real();
  const int n = 200000;
  const double h = T / n;
  Complex sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::exp(-lambda * (i * h)) * volterra_kernel(bg, 1.0, 2, i * h);
  }
  sum *= h / 3.0;
  EXPECT_LT(std::abs(sum - laplace_symbol(bg, 1.0, 2, lambda)), 1e-8);
}

TEST(Kernel, DerivativeMatchesFiniteDifference) {
  const BackgroundSymbol bg = broad();
  const Complex z(0.4, 1.3);
  const double h = 1e-6;
  const Complex fd = (dispersion(bg, 1.0, -1.0, 2, z + h) - dispersion(bg, 1.0, -1.0, 2, z - h)) /
                     (2.0 * h);
  EXPECT_LT(std::abs(fd - dispersion_derivative(bg, 1.0, -1.0, 2, z)), 1e-6);
}

TEST(Margin, ZeroBackgroundIsUnity) {
  const PenroseReport r = penrose_margin(BackgroundSymbol::zero(), 1.0, 1.0, 1);
  EXPECT_NEAR(r.margin, 1.0, 1e-15);
  EXPECT_TRUE(r.stable());
}

TEST(Margin, UnstableSingleModeHasZeroAtOne) {
  const PenroseReport r = penrose_margin(lab::unstable_single_mode(), 1.0, 1.0, 1);
  ASSERT_FALSE(r.stable());
  EXPECT_EQ(r.margin, 0.0);
  EXPECT_LT(std::abs(r.zeros.front() - 1.0), 1e-6);
  for (const auto& z : r.zeros) {
    EXPECT_GT(z.real(), 0.0);
    EXPECT_LE(std::abs(dispersion(lab::unstable_single_mode(), 1.0, 1.0, 1, z)), 1e-8);
  }
}

TEST(Margin, SymmetricInK) {
  const BackgroundSymbol bg = broad();
  for (int k : {1, 2, 4}) {
    const PenroseReport a = penrose_margin(bg, 1.0, -1.0, k);
    const PenroseReport b = penrose_margin(bg, 1.0, -1.0, -k);
    EXPECT_NEAR(a.margin, b.margin, 1e-12 * std::max(1.0, a.margin));
    // F_{-k}(lambda) = conj F_k(conj lambda)
    const Complex l(0.7, 2.1);
    EXPECT_LT(std::abs(dispersion(bg, 1.0, -1.0, -k, l) -
                       std::conj(dispersion(bg, 1.0, -1.0, k, std::conj(l)))),
              1e-13);
  }
}

TEST(Margin, StableBroadBackgroundHasNoZeros) {
  const BackgroundSymbol bg = lab::stable_broad(1.0, 8, 4.0);
  for (int k = 1; k <= 12; ++k) {
    const PenroseReport r = penrose_margin(bg, 1.0, -1.0, k);
    EXPECT_TRUE(r.stable()) << "k = " << k;
    EXPECT_GT(r.margin, 0.0);
    // The margin is attained: |F| at the reported argmin equals it.
    EXPECT_NEAR(std::abs(dispersion(bg, 1.0, -1.0, k, r.argmin_lambda)), r.margin, 1e-12);
  }
}

TEST(Margin, NeverExceedsSampledModulus) {
  const BackgroundSymbol bg = broad();
  MarginScan scan;
  const PenroseReport r = penrose_margin(bg, 1.0, -2.0, 3, scan);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> eta(std::log(scan.eta_min), std::log(scan.eta_max));
  std::uniform_real_distribution<double> s(-30.0, 30.0);
  double sampled = kInfinity;
  for (int i = 0; i < 2000; ++i) {
    sampled = std::min(sampled,
                       std::abs(dispersion(bg, 1.0, -2.0, 3, Complex(std::exp(eta(rng)), s(rng)))));
  }
  EXPECT_LE(r.margin, sampled);
}

TEST(FreeDensity, SeedAndDiagonal) {
  const OperatorMatrix u = seed_matrix(3);
  for (double t : {0.0, 0.5, 2.0}) {
    EXPECT_LT(std::abs(free_density(u, 1.0, 1, t) - std::polar(1.0, t)), 1e-15);
  }
  OperatorMatrix d(SpectralGrid{3});
  for (int n = -3; n <= 3; ++n) d(n, n) = 1.0 + n;
  EXPECT_EQ(free_density(d, 1.0, 2, 0.7), Complex(0.0));
}

TEST(Volterra, FreeWhenBackgroundOrCouplingVanishes) {
  const MixedState st = test::smooth_state(6, 2, 44);
  const OperatorMatrix u = to_matrix(st);
  for (const auto& [bg, q] : {std::pair{BackgroundSymbol::zero(), 1.0}, std::pair{broad(), 0.0}}) {
    const VolterraSolution v = volterra_solve(bg, u, 1.0, q, 2, 0.01, 1.0);
    for (std::size_t i = 0; i < v.times.size(); ++i) {
      EXPECT_LT(std::abs(v.rho[i] - free_density(u, 1.0, 2, v.times[i])), 1e-14);
    }
  }
}

TEST(Volterra, SingleModeClosedForm) {
  // F = (lambda^2 - 1)/(lambda^2 + 1) and rho_free = e^{it}:
  // rho(t) = ((1 + i) e^t + (1 - i) e^{-t}) / 2.
  const VolterraSolution v =
      volterra_solve(lab::unstable_single_mode(), seed_matrix(2), 1.0, 1.0, 1, 5e-4, 5.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.times.size(); ++i) {
    const double t = v.times[i];
    const Complex exact = 0.5 * (Complex(1, 1) * std::exp(t) + Complex(1, -1) * std::exp(-t));
    worst = std::max(worst, std::abs(v.rho[i] - exact) / std::abs(exact));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_FALSE(v.resolution_warning);
}

TEST(Volterra, SecondOrderInDt) {
  const BackgroundSymbol bg = broad();
  const OperatorMatrix u = to_matrix(test::smooth_state(8, 2, 3));
  auto at_end = [&](double dt) { return volterra_solve(bg, u, 1.0, -1.0, 1, dt, 2.0).rho.back(); };
  const Complex ref = at_end(1.25e-4);
  const double e1 = std::abs(at_end(4e-3) - ref), e2 = std::abs(at_end(2e-3) - ref);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
}

TEST(Propagator, ClosedForms) {
  PropagatorInputs in;
  in.gamma_h1s1 = 1.0;
  in.q = 1.0;
  in.c_bilinear = 1.0;
  in.kappa = 1.0;
  in.gamma_l1 = kTwoPi;
  in.eta = 1.0;
  in.epsilon = 1e-3;
  const PropagatorConstants c = propagator_constants(in);
  EXPECT_NEAR(c.a, 1.0, 1e-15);
  EXPECT_NEAR(c.b, 1.0, 1e-15);
  EXPECT_NEAR(c.c_star, 9.0, 1e-14);
  EXPECT_NEAR(c.c_gamma_eta, 3.0, 1e-14);
  EXPECT_NEAR(c.c_gamma, std::pow(8.0 * 81.0, -0.2), 1e-14);
  EXPECT_NEAR(c.t_star, c.c_gamma * std::pow(1e-3, -0.2), 1e-12);

  in.kappa = 1e12;
  EXPECT_NEAR(propagator_constants(in).c_star, 6.0, 1e-9);

  PropagatorInputs twice = in;
  twice.epsilon = 2.0 * in.epsilon;
  EXPECT_NEAR(propagator_constants(twice).t_star / propagator_constants(in).t_star,
              std::pow(2.0, -0.2), 1e-14);

  in.kappa = 0.0;
  EXPECT_THROW(propagator_constants(in), ContractViolation);
  in.kappa = 1.0;
  in.c_bilinear = 0.0;
  EXPECT_THROW(propagator_constants(in), InputError);
}

TEST(Propagator, ConstantsGrowAsMarginShrinks) {
  PropagatorInputs in;
  in.gamma_h1s1 = 2.0;
  in.gamma_l1 = 1.0;
  in.q = -1.0;
  in.c_bilinear = 0.2;
  in.epsilon = 1e-2;
  double previous_c = 0.0, previous_t = kInfinity;
  for (double kappa : {1.0, 0.5, 0.1, 0.01}) {
    in.kappa = kappa;
    const PropagatorConstants c = propagator_constants(in);
    EXPECT_GT(c.c_star, previous_c);
    EXPECT_LT(c.t_star, previous_t);
    EXPECT_GT(c.c_gamma_eta, 1.0);
    previous_c = c.c_star;
    previous_t = c.t_star;
  }
}

TEST(Propagator, WeightedDensityIsBoundedByLineMargin) {
  // With kappa_eta = min over Re lambda = eta and all modes of |F_k|,
  //   sum_k <k>^2 int e^{-2 eta t} |rho(k,t)|^2 dt
  //     <= (2 eta kappa_eta^2)^{-1} sum_k <k>^2 (sum_j |U0(j+k, j)|)^2
  //     <= 4 pi coth(pi) ||U0||^2 / (kappa_eta^2 eta).
  const int N = 6;
  const BackgroundSymbol bg = lab::stable_broad(1.0, 4, 4.0);
  const double eta = 1.0, q = -1.0, dt = 2e-3, T = 20.0;
  MarginScan line;
  line.eta_min = line.eta_max = eta;
  line.eta_count = 1;
  double kappa = kInfinity;
  for (int k = 1; k <= 2 * N; ++k) kappa = std::min(kappa, penrose_margin(bg, 1.0, q, k, line).margin);
  ASSERT_GT(kappa, 0.0);
  const double bound = 4.0 * kPi / std::tanh(kPi);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EnsembleConfig ec;
    ec.cutoff = N;
    auto rng = sample_engine(seed, 0);
    const OperatorMatrix u0 = random_difference(SpectralGrid(N), ec, rng);
    double lhs = 0.0;
    for (int k = -2 * N; k <= 2 * N; ++k) {
      if (k == 0) continue;
      const VolterraSolution v = volterra_solve(bg, u0, 1.0, q, k, dt, T);
      double integral = 0.0;
      for (std::size_t i = 0; i < v.times.size(); ++i) {
        const double w = (i == 0 || i + 1 == v.times.size()) ? 0.5 : 1.0;
        integral += w * std::exp(-2.0 * eta * v.times[i]) * std::norm(v.rho[i]);
      }
      lhs += (1.0 + double(k) * k) * integral * dt;
    }
    const double h1 = sobolev_schatten_norm(u0, 1.0);
    const double ratio = lhs / (h1 * h1 / (kappa * kappa * eta));
    EXPECT_LE(ratio, bound) << "seed " << seed;
    EXPECT_GT(ratio, 0.0);
  }
}

TEST(Serialization, ReportJson) {
  const PenroseReport r = penrose_margin(lab::unstable_single_mode(), 1.0, 1.0, 1);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("k"), 1);
  EXPECT_EQ(j.at("stable"), false);
  EXPECT_FALSE(j.at("zeros").empty());
}

}  // namespace
}  // namespace alber
