#include "alber/penrose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alber/errors.hpp"

namespace alber {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_mode(int k) {
  if (k == 0) throw InputError("penrose: mode k must be nonzero");
}

// (iq / 2pi) applied to the symbol
Complex coupling(double q) { return kI * (q / kTwoPi); }

// Golden-section minimization of f on [a, b].
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, int iters) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

std::vector<KernelTerm> kernel_terms(const BackgroundSymbol& bg, double p, int k) {
  require_mode(k);
  std::vector<KernelTerm> terms;
  const int J = bg.support();
  const int ak = std::abs(k);
  // G(j+k) - G(j) vanishes unless j or j+k lies in the support.
  for (int j = -J - ak; j <= J + ak; ++j) {
    const double w = bg(j + k) - bg(j);
    if (w != 0.0) terms.push_back({w, p * k * (2.0 * j + k)});
  }
  return terms;
}

Complex volterra_kernel(const BackgroundSymbol& bg, double p, int k, double tau) {
  Complex sum = 0.0;
  for (const auto& t : kernel_terms(bg, p, k)) {
    sum += t.weight * std::exp(kI * (t.frequency * tau));
  }
  return sum;
}

Complex laplace_symbol(const BackgroundSymbol& bg, double p, int k, Complex lambda) {
  if (!(lambda.real() > 0.0)) {
    throw InputError("laplace_symbol: requires Re lambda > 0");
  }
  Complex sum = 0.0;
  for (const auto& t : kernel_terms(bg, p, k)) {
    sum += t.weight / (lambda - kI * t.frequency);
  }
  return sum;
}

Complex dispersion(const BackgroundSymbol& bg, double p, double q, int k, Complex lambda) {
  return 1.0 - coupling(q) * laplace_symbol(bg, p, k, lambda);
}

Complex dispersion_derivative(const BackgroundSymbol& bg, double p, double q, int k,
                              Complex lambda) {
  Complex sum = 0.0;
  for (const auto& t : kernel_terms(bg, p, k)) {
    const Complex d = lambda - kI * t.frequency;
    sum -= t.weight / (d * d);
  }
  return -coupling(q) * sum;
}

PenroseReport penrose_margin(const BackgroundSymbol& bg, double p, double q, int k,
                             const MarginScan& scan) {
  require_mode(k);
  if (scan.eta_count < 1 || !(scan.eta_min > 0.0) || scan.eta_max < scan.eta_min ||
      !(scan.s_step > 0.0) || !(scan.s_density > 0.0)) {
    throw InputError("penrose_margin: empty or invalid scan grid");
  }
  const auto terms = kernel_terms(bg, p, k);
  const Complex c = coupling(q);
  auto F = [&](Complex z) {
    Complex s = 0.0;
    for (const auto& t : terms) s += t.weight / (z - kI * t.frequency);
    return 1.0 - c * s;
  };
  auto dF = [&](Complex z) {
    Complex s = 0.0;
    for (const auto& t : terms) {
      const Complex d = z - kI * t.frequency;
      s -= t.weight / (d * d);
    }
    return -c * s;
  };

  // eta lines
  std::vector<double> etas(scan.eta_count);
  for (int i = 0; i < scan.eta_count; ++i) {
    const double u = scan.eta_count == 1 ? 0.0 : double(i) / (scan.eta_count - 1);
    etas[i] = scan.eta_min * std::pow(scan.eta_max / scan.eta_min, u);
  }

  // s samples, symmetric about 0 and densified around every resonance
  double max_res = 0.0;
  for (const auto& t : terms) max_res = std::max(max_res, std::abs(t.frequency));
  const double S = max_res + scan.s_padding;
  std::vector<double> ss;
  const int base = static_cast<int>(std::ceil(S / scan.s_step));
  for (int i = -base; i <= base; ++i) ss.push_back(std::clamp(i * scan.s_step, -S, S));
  const int dense = static_cast<int>(std::ceil(scan.s_density));
  for (const auto& t : terms) {
    for (int i = -dense; i <= dense; ++i) {
      const double s = t.frequency + double(i) / scan.s_density;
      if (std::abs(s) <= S) {
        ss.push_back(s);
        ss.push_back(-s);
      }
    }
  }
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           ss.end());

  const int ne = static_cast<int>(etas.size());
  const int ns = static_cast<int>(ss.size());
  std::vector<double> grid(static_cast<std::size_t>(ne) * ns);
  auto at = [&](int ie, int is) -> double& { return grid[std::size_t(ie) * ns + is]; };

  PenroseReport report;
  report.k = k;
  report.margin = std::numeric_limits<double>::infinity();
  for (int ie = 0; ie < ne; ++ie) {
    for (int is = 0; is < ns; ++is) {
      const Complex z(etas[ie], ss[is]);
      const double v = std::abs(F(z));
      at(ie, is) = v;
      if (v < report.margin) {
        report.margin = v;
        report.argmin_lambda = z;
      }
    }
  }

  // Refine every local minimum along each eta line. Near a resonance |F_k|
  // can dip on a scale ~eta, finer than the grid, so the best grid point is
  // not enough.
  auto refine_line = [&](int ie) {
    const double eta = etas[ie];
    double line_min = std::numeric_limits<double>::infinity();
    for (int is = 0; is < ns; ++is) {
      const double v0 = at(ie, is);
      const bool left = is == 0 || at(ie, is - 1) >= v0;
      const bool right = is == ns - 1 || at(ie, is + 1) >= v0;
      if (!left || !right) continue;
      const double a = ss[std::max(is - 1, 0)];
      const double b = ss[std::min(is + 1, ns - 1)];
      auto [s, v] = golden_min([&](double x) { return std::abs(F(Complex(eta, x))); }, a,
                               b, scan.refine_iters);
      if (v0 < v) {
        s = ss[is];
        v = v0;
      }
      line_min = std::min(line_min, v);
      if (v < report.margin) {
        report.margin = v;
        report.argmin_lambda = Complex(eta, s);
      }
    }
    return line_min;
  };
  for (int ie = 0; ie < std::min(3, ne); ++ie) {
    report.small_eta.push_back({etas[ie], refine_line(ie)});
  }
  for (int ie = 3; ie < ne; ++ie) refine_line(ie);

  // Zero hunting: Newton from every grid-local minimum with |F| < 0.1.
  auto newton = [&](Complex z) {
    for (int it = 0; it < 100; ++it) {
      const Complex f = F(z);
      const Complex d = dF(z);
      if (std::abs(d) == 0.0 || !std::isfinite(std::abs(f))) break;
      const Complex step = f / d;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
  };
  auto try_zero = [&](Complex start) {
    const Complex z = newton(start);
    const double v = std::abs(F(z));
    if (!(v <= scan.zero_tolerance)) return;
    if (!(z.real() > 1e-10 * std::max(1.0, std::abs(z)))) return;
    for (const auto& w : report.zeros) {
      if (std::abs(w - z) <= 1e-6 * std::max(1.0, std::abs(z))) return;
    }
    report.zeros.push_back(z);
    if (v < report.margin) {
      report.margin = v;
      report.argmin_lambda = z;
    }
  };
  for (int ie = 0; ie < ne; ++ie) {
    for (int is = 0; is < ns; ++is) {
      const double v = at(ie, is);
      if (!(v < 0.1)) continue;
      bool local = true;
      for (int de = -1; de <= 1 && local; ++de) {
        for (int ds = -1; ds <= 1 && local; ++ds) {
          if (de == 0 && ds == 0) continue;
          const int je = ie + de;
          const int js = is + ds;
          if (je < 0 || je >= ne || js < 0 || js >= ns) continue;
          if (at(je, js) < v) local = false;
        }
      }
      if (local) try_zero(Complex(etas[ie], ss[is]));
    }
  }
  if (report.margin < 0.1) try_zero(report.argmin_lambda);
  std::sort(report.zeros.begin(), report.zeros.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
  });
  return report;
}

Complex free_density(const OperatorMatrix& u0, double p, int k, double t) {
  require_mode(k);
  const int N = u0.grid().cutoff();
  Complex sum = 0.0;
  for (int j = std::max(-N, -N - k); j <= std::min(N, N - k); ++j) {
    sum += std::exp(kI * (p * k * (2.0 * j + k) * t)) * u0(j + k, j);
  }
  return sum;
}

VolterraSolution volterra_solve(const BackgroundSymbol& bg, const OperatorMatrix& u0,
                                double p, double q, int k, double dt, double horizon) {
  require_mode(k);
  if (!(dt > 0.0) || !(horizon >= 0.0)) {
    throw InputError("volterra_solve: requires dt > 0 and T >= 0");
  }
  const auto terms = kernel_terms(bg, p, k);
  const int n = static_cast<int>(std::llround(horizon / dt));
  const Complex c = coupling(q);

  VolterraSolution out;
  double max_freq = 0.0;
  for (const auto& t : terms) max_freq = std::max(max_freq, std::abs(t.frequency));
  out.resolution_warning = max_freq * dt > 0.1;

  // Per-term weights of the exact integral of e^{z(1-theta)} against the
  // linear interpolant on one step: A (left node) and B (right node).
  const std::size_t m = terms.size();
  std::vector<Complex> decay(m), wa(m), wb(m), hist(m, 0.0);
  Complex self = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Complex z = kI * (terms[j].frequency * dt);
    decay[j] = std::exp(z);
    Complex a, b;
    if (std::abs(z) < 0.1) {
      // A = sum z^r / (r! (r+2)), B = sum z^r / (r+2)!
      Complex zr = 1.0;
      double fact = 1.0;
      a = 0.0;
      b = 0.0;
      for (int r = 0; r < 12; ++r) {
        if (r > 0) {
          zr *= z;
          fact *= r;
        }
        a += zr / (fact * (r + 2));
        b += zr / (fact * (r + 1) * (r + 2));
      }
    } else {
      a = (decay[j] * (z - 1.0) + 1.0) / (z * z);
      b = (decay[j] - 1.0 - z) / (z * z);
    }
    wa[j] = dt * a;
    wb[j] = dt * b;
    self += terms[j].weight * wb[j];
  }
  const Complex denom = 1.0 - c * self;

  out.times.reserve(n + 1);
  out.rho.reserve(n + 1);
  out.times.push_back(0.0);
  out.rho.push_back(free_density(u0, p, k, 0.0));
  for (int i = 1; i <= n; ++i) {
    const double t = i * dt;
    const Complex prev = out.rho.back();
    Complex known = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      hist[j] = decay[j] * hist[j] + wa[j] * prev;
      known += terms[j].weight * hist[j];
    }
    const Complex rho = (free_density(u0, p, k, t) + c * known) / denom;
    for (std::size_t j = 0; j < m; ++j) hist[j] += wb[j] * rho;
    out.times.push_back(t);
    out.rho.push_back(rho);
  }
  return out;
}

PropagatorConstants propagator_constants(const PropagatorInputs& in) {
  if (!(in.kappa > 0.0)) {
    throw ContractViolation("propagator_constants: background is not Penrose-stable (kappa <= 0)");
  }
  if (!(in.eta > 0.0) || !(in.epsilon > 0.0) || !(in.c_bilinear > 0.0)) {
    throw InputError("propagator_constants: requires eta, epsilon, C_bilinear > 0");
  }
  const double aq = std::abs(in.q);
  PropagatorConstants out;
  out.inputs = in;
  out.a = in.c_bilinear * aq * in.gamma_h1s1;
  out.b = aq * in.gamma_l1 / (kTwoPi * in.kappa);
  out.c_gamma_eta = 1.0 + out.a * (1.0 + out.b / in.eta) / in.eta;
  out.c_star = 3.0 * (1.0 + out.a + out.a * out.b);
  const double cq = in.c_bilinear * aq;
  out.c_gamma = std::pow(8.0 * out.c_star * out.c_star * cq, -0.2);
  out.t_star = out.c_gamma * std::pow(in.epsilon, -0.2);
  return out;
}

nlohmann::json to_json(const PenroseReport& r) {
  nlohmann::json zeros = nlohmann::json::array();
  for (const auto& z : r.zeros) zeros.push_back({z.real(), z.imag()});
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : r.small_eta) lines.push_back({{"eta", l.eta}, {"margin", l.margin}});
  return {{"k", r.k},
          {"margin", r.margin},
          {"argmin_lambda", {r.argmin_lambda.real(), r.argmin_lambda.imag()}},
          {"zeros", zeros},
          {"small_eta_lines", lines},
          {"stable", r.stable()}};
}

nlohmann::json to_json(const PropagatorConstants& c) {
  return {{"C_gamma_eta", c.c_gamma_eta},
          {"C_star", c.c_star},
          {"c_gamma", c.c_gamma},
          {"T_star", c.t_star},
          {"A", c.a},
          {"B", c.b},
          {"inputs",
           {{"gamma_h1s1", c.inputs.gamma_h1s1},
            {"gamma_l1", c.inputs.gamma_l1},
            {"kappa", c.inputs.kappa},
            {"abs_q", std::abs(c.inputs.q)},
            {"eta", c.inputs.eta},
            {"epsilon", c.inputs.epsilon},
            {"C_bilinear_estimate", c.inputs.c_bilinear}}}};
}

}  // namespace alber
