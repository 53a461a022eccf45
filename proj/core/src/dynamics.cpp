#include "alber/dynamics.hpp"

#include <cmath>
#include <string>

namespace alber {

namespace {

constexpr double kDivergenceThreshold = 1e12;

}  // namespace

void EvolveConfig::validate() const {
  if (!std::isfinite(p) || !std::isfinite(q) || p * q == 0.0) {
    throw InputError("EvolveConfig: p and q must be finite with pq != 0");
  }
  if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon) {
    throw InputError("EvolveConfig: need 0 < dt <= T");
  }
  if (record_every < 1) throw InputError("EvolveConfig: record_every must be >= 1");
}

int EvolveConfig::step_count() const {
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * ratio) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

MixedState free_step(const MixedState& state, double p, double dt) {
  const SpectralGrid& grid = state.grid();
  const int cutoff = grid.cutoff();
  ComplexVector phase(grid.modes());
  for (int n = -cutoff; n <= cutoff; ++n) {
    phase[n + cutoff] = std::polar(1.0, p * double(n) * n * dt);
  }
  std::vector<FourierField> orbitals = state.orbitals();
  for (auto& psi : orbitals) psi.coeffs() = psi.coeffs().cwiseProduct(phase);
  return MixedState::unchecked(grid, state.weights(), std::move(orbitals), state.gram_tol());
}

MixedState potential_step(const MixedState& state, double q, double dt) {
  const SpectralGrid& grid = state.grid();
  std::vector<ComplexVector> samples;
  samples.reserve(state.rank());
  RealVector rho = RealVector::Zero(grid.points());
  for (int k = 0; k < state.rank(); ++k) {
    samples.push_back(synthesize(state.orbitals()[k]));
    rho += state.weights()[k] * samples.back().cwiseAbs2();
  }
  ComplexVector phase(grid.points());
  for (int j = 0; j < grid.points(); ++j) phase[j] = std::polar(1.0, -q * rho[j] * dt);
  std::vector<FourierField> orbitals;
  orbitals.reserve(state.rank());
  for (auto& s : samples) orbitals.push_back(analyze(grid, s.cwiseProduct(phase)));
  return MixedState::unchecked(grid, state.weights(), std::move(orbitals), state.gram_tol());
}

MixedState strang_step(const MixedState& state, const EvolveConfig& cfg) {
  MixedState half = free_step(state, cfg.p, 0.5 * cfg.dt);
  MixedState kicked = potential_step(half, cfg.q, cfg.dt);
  return free_step(kicked, cfg.p, 0.5 * cfg.dt);
}

TrajectoryRecord monitor(const MixedState& state, double t, double p, double q) {
  TrajectoryRecord rec;
  rec.t = t;
  rec.mass = mass(state);
  // tr gamma^2 = sum_kl mu_k mu_l |<psi_k, psi_l>|^2
  const ComplexMatrix gram = state.gram_matrix();
  double s2 = 0.0;
  for (int k = 0; k < state.rank(); ++k) {
    for (int l = 0; l < state.rank(); ++l) {
      s2 += state.weights()[k] * state.weights()[l] * std::norm(gram(k, l));
    }
  }
  rec.s2_norm = std::sqrt(s2);
  rec.kinetic = kinetic_energy(state);
  const Density rho = density(state);
  const double rho_l2 = lp_norm(rho.samples, 2.0);
  rec.energy = -p * rec.kinetic + 0.5 * q * rho_l2 * rho_l2;
  rec.gram_dev = state.gram_deviation();
  rec.h1s1 = rec.mass + rec.kinetic;
  rec.density_spectrum.resize(rho.field.coeffs().size());
  for (Eigen::Index i = 0; i < rho.field.coeffs().size(); ++i) {
    rec.density_spectrum[i] = std::abs(rho.field.coeffs()[i]);
  }
  return rec;
}

namespace {

bool finite_and_bounded(const MixedState& state) {
  for (const auto& psi : state.orbitals()) {
    for (Eigen::Index i = 0; i < psi.coeffs().size(); ++i) {
      const Complex c = psi.coeffs()[i];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) ||
          std::abs(c) > kDivergenceThreshold) {
        return false;
      }
    }
  }
  return true;
}

bool record_ok(const TrajectoryRecord& r) {
  for (double v : {r.mass, r.s2_norm, r.energy, r.kinetic, r.gram_dev, r.h1s1}) {
    if (!std::isfinite(v) || std::abs(v) > kDivergenceThreshold) return false;
  }
  return true;
}

}  // namespace

Evolution evolve(const MixedState& state, const EvolveConfig& cfg,
                 const EvolveObserver& observer) {
  cfg.validate();
  const int steps = cfg.step_count();
  Evolution out{state, {}};
  out.records.push_back(monitor(state, 0.0, cfg.p, cfg.q));
  if (observer) observer(out.records.back(), state);

  EvolveConfig step_cfg = cfg;
  double t = 0.0;
  for (int i = 1; i <= steps; ++i) {
    step_cfg.dt = i == steps ? cfg.horizon - t : cfg.dt;
    if (step_cfg.dt <= 0.0) break;
    MixedState next = strang_step(out.final_state, step_cfg);
    t = i == steps ? cfg.horizon : i * cfg.dt;
    if (!finite_and_bounded(next)) {
      throw DivergenceError("evolve: divergence at t = " + std::to_string(t), t,
                            out.records.back());
    }
    out.final_state = std::move(next);
    if (i % cfg.record_every == 0 || i == steps) {
      TrajectoryRecord rec = monitor(out.final_state, t, cfg.p, cfg.q);
      if (!record_ok(rec)) {
        throw DivergenceError("evolve: observable diverged at t = " + std::to_string(t),
                              t, out.records.back());
      }
      out.records.push_back(std::move(rec));
      if (observer) observer(out.records.back(), out.final_state);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

OperatorMatrix free_evolve(const OperatorMatrix& u, double p, double t) {
  const int cutoff = u.grid().cutoff();
  ComplexVector phase(u.grid().modes());
  for (int n = -cutoff; n <= cutoff; ++n) {
    phase[n + cutoff] = std::polar(1.0, p * double(n) * n * t);
  }
  return OperatorMatrix(u.grid(), phase.asDiagonal() * u.entries() *
                                      phase.conjugate().asDiagonal());
}

OperatorMatrix potential_matrix(const OperatorMatrix& u) {
  const int cutoff = u.grid().cutoff();
  ComplexVector sums(4 * cutoff + 1);
  for (int k = -2 * cutoff; k <= 2 * cutoff; ++k) sums[k + 2 * cutoff] = u.diagonal_sum(k);
  OperatorMatrix v(u.grid());
  for (int m = -cutoff; m <= cutoff; ++m) {
    for (int n = -cutoff; n <= cutoff; ++n) {
      v(m, n) = sums[m - n + 2 * cutoff] / kTwoPi;
    }
  }
  return v;
}

OperatorMatrix density_commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  const ComplexMatrix v = potential_matrix(a).entries();
  return OperatorMatrix(b.grid(), v * b.entries() - b.entries() * v);
}

OperatorMatrix picard_solve(const OperatorMatrix& gamma0, double p, double q,
                            double horizon, int n_iter, int n_quad) {
  if (!(horizon >= 0.0)) throw InputError("picard_solve: T must be >= 0");
  if (n_iter < 1 || n_quad < 2) {
    throw InputError("picard_solve: need n_iter >= 1 and n_quad >= 2");
  }
  if (horizon == 0.0) return gamma0;
  if (q == 0.0) return free_evolve(gamma0, p, horizon);

  // Interaction picture: gamma(t_i) = S(t_i)(gamma0 - i q C_i) with
  // C_i = int_0^{t_i} S(-tau) N(tau) dtau by the composite trapezoid rule.
  const double h = horizon / (n_quad - 1);
  const SpectralGrid& grid = gamma0.grid();
  std::vector<OperatorMatrix> iterate;
  iterate.reserve(n_quad);
  for (int i = 0; i < n_quad; ++i) iterate.push_back(free_evolve(gamma0, p, i * h));

  const double scale = std::max(gamma0.entries().norm(), 1e-300);
  double previous = std::numeric_limits<double>::infinity();
  for (int sweep = 1; sweep <= n_iter; ++sweep) {
    std::vector<ComplexMatrix> pulled(n_quad);
    for (int i = 0; i < n_quad; ++i) {
      pulled[i] = free_evolve(density_commutator(iterate[i], iterate[i]), p, -i * h).entries();
    }
    ComplexMatrix integral = ComplexMatrix::Zero(grid.modes(), grid.modes());
    double distance = 0.0;
    std::vector<OperatorMatrix> next;
    next.reserve(n_quad);
    next.push_back(gamma0);
    for (int i = 1; i < n_quad; ++i) {
      integral += 0.5 * h * (pulled[i - 1] + pulled[i]);
      OperatorMatrix g = free_evolve(
          OperatorMatrix(grid, gamma0.entries() - Complex(0.0, q) * integral), p, i * h);
      distance = std::max(distance, (g.entries() - iterate[i].entries()).norm());
      next.push_back(std::move(g));
    }
    iterate = std::move(next);
    if (distance <= 1e-15 * scale) break;
    if (sweep > 1 && distance >= previous && distance > 1e-13 * scale) {
      throw NoContractionError("picard_solve: iterate distance did not decrease at sweep " +
                                   std::to_string(sweep) + " (T too large for the datum)",
                               sweep);
    }
    previous = distance;
  }
  return iterate.back();
}

LinearizedTrajectory linearized_evolve(const OperatorMatrix& u0,
                                       const BackgroundSymbol& bg,
                                       const EvolveConfig& cfg, bool keep_states) {
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0) || cfg.record_every < 1) {
    throw InputError("linearized_evolve: need dt > 0, T > 0, record_every >= 1");
  }
  const SpectralGrid& grid = u0.grid();
  const int cutoff = grid.cutoff();
  const int dim = grid.modes();
  if (bg.support() > cutoff) {
    throw InputError("linearized_evolve: grid cutoff must cover the background support");
  }
  const double p = cfg.p;
  const double coupling = cfg.q / kTwoPi;

  RealVector sym(dim);
  for (int n = -cutoff; n <= cutoff; ++n) sym[n + cutoff] = bg(n);

  auto diag_sums = [&](const ComplexMatrix& u) {
    ComplexVector sums = ComplexVector::Zero(4 * cutoff + 1);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) sums[a - b + 2 * cutoff] += u(a, b);
    }
    return sums;
  };
  auto phases = [&](double t) {
    ComplexVector ph(dim);
    for (int n = -cutoff; n <= cutoff; ++n) ph[n + cutoff] = std::polar(1.0, p * double(n) * n * t);
    return ph;
  };
  // W' = i (q/2pi)(G(m) - G(n)) e^{-i p (m^2 - n^2) t} rho_U(m - n)
  auto rhs = [&](double t, const ComplexMatrix& w) {
    const ComplexVector ph = phases(t);
    const ComplexMatrix u = ph.asDiagonal() * w * ph.conjugate().asDiagonal();
    const ComplexVector sums = diag_sums(u);
    ComplexMatrix f(dim, dim);
    for (int b = 0; b < dim; ++b) {
      for (int a = 0; a < dim; ++a) {
        const double dg = sym[a] - sym[b];
        f(a, b) = dg == 0.0 ? Complex(0.0)
                            : Complex(0.0, coupling * dg) * std::conj(ph[a]) * ph[b] *
                                  sums[a - b + 2 * cutoff];
      }
    }
    return f;
  };

  LinearizedTrajectory out;
  out.cutoff = cutoff;
  auto record = [&](double t, const ComplexMatrix& w) {
    const ComplexVector ph = phases(t);
    ComplexMatrix u = ph.asDiagonal() * w * ph.conjugate().asDiagonal();
    out.times.push_back(t);
    out.diagonal_sums.push_back(diag_sums(u));
    if (keep_states) out.states.emplace_back(grid, std::move(u));
  };

  ComplexMatrix w = u0.entries();
  record(0.0, w);
  const int steps = cfg.step_count();
  double t = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double h = i == steps ? cfg.horizon - t : cfg.dt;
    if (h <= 0.0) break;
    const ComplexMatrix half = w + 0.5 * h * rhs(t, w);
    w += h * rhs(t + 0.5 * h, half);
    t = i == steps ? cfg.horizon : i * cfg.dt;
    const double mx = w.cwiseAbs().maxCoeff();
    const bool blown = !std::isfinite(mx) || mx > kDivergenceThreshold;
    if (i % cfg.record_every == 0 || i == steps || blown) record(t, w);
    if (blown) {
      out.growth_flagged = true;
      break;
    }
  }
  return out;
}

}  // namespace alber
