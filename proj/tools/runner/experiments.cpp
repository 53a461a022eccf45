#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include "alber/errors.hpp"
#include "alber/serialization.hpp"
#include "presets.hpp"

namespace alber::lab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(); }

double relative_to(double value, double reference) {
  return reference != 0.0 ? value / std::abs(reference) : value;
}

json record_json(const TrajectoryRecord& r) {
  return {{"t", r.t},           {"mass", r.mass},       {"s2_norm", r.s2_norm},
          {"energy", r.energy}, {"kinetic", r.kinetic}, {"gram_dev", r.gram_dev},
          {"h1s1", r.h1s1}};
}

SpectralGrid run_grid(const RunConfig& cfg) {
  return SpectralGrid(cfg.grid.cutoff, cfg.grid.points);
}

}  // namespace

Drifts measure_drifts(const std::vector<TrajectoryRecord>& records) {
  Drifts d;
  if (records.empty()) return d;
  const auto& r0 = records.front();
  for (const auto& r : records) {
    d.mass = std::max(d.mass, relative_to(std::abs(r.mass - r0.mass), r0.mass));
    d.s2 = std::max(d.s2, relative_to(std::abs(r.s2_norm - r0.s2_norm), r0.s2_norm));
    d.energy = std::max(d.energy, relative_to(std::abs(r.energy - r0.energy), r0.energy));
    d.gram = std::max(d.gram, r.gram_dev);
  }
  return d;
}

// ---------------------------------------------------------------------------
// simulate

namespace {

int simulate(const RunConfig& cfg, OutputDir& out) {
  const MixedState s0 = make_state(cfg);
  const EvolveConfig ecfg = cfg.evolve_config();
  const double ybar = ybar_bound(s0, cfg.p, cfg.q);
  const int N = s0.grid().cutoff();

  std::vector<TrajectoryRecord> records;
  CsvTable traj({"t", "mass", "s2", "energy", "kinetic", "gram_dev", "h1s1", "ybar"});
  json spectra = json::array();
  auto observe = [&](const TrajectoryRecord& r, const MixedState&) {
    records.push_back(r);
    traj.add_row({r.t, r.mass, r.s2_norm, r.energy, r.kinetic, r.gram_dev, r.h1s1, ybar});
    spectra.push_back({{"t", r.t}, {"abs_rho", r.density_spectrum}});
  };

  json summary{{"schema", "alber.simulate/1"}, {"ybar", ybar}};
  int code = kOk;
  std::optional<MixedState> final_state;
  try {
    final_state = evolve(s0, ecfg, observe).final_state;
    summary["status"] = "ok";
  } catch (const DivergenceError& e) {
    summary["status"] = "diverged";
    summary["message"] = e.what();
    summary["divergence_time"] = e.time();
    summary["last_good"] = record_json(e.last_good());
    code = kDivergence;
  }

  const Drifts d = measure_drifts(records);
  summary["drifts"] = {{"mass", d.mass}, {"s2", d.s2}, {"energy", d.energy}, {"gram", d.gram}};
  json violations = json::array();
  auto limit = [&](const char* name, double value, double bound) {
    if (bound >= 0.0 && !(value <= bound)) {
      violations.push_back({{"check", name}, {"value", value}, {"bound", bound}});
    }
  };
  limit("mass_drift", d.mass, cfg.checks.mass_drift);
  limit("s2_drift", d.s2, cfg.checks.s2_drift);
  limit("energy_drift", d.energy, cfg.checks.energy_drift);
  limit("gram", d.gram, cfg.checks.gram);
  if (cfg.checks.apriori) {
    const CheckResult ap = check_apriori(records, ybar);
    summary["apriori"] = to_json(ap);
    if (ap.violations > 0) {
      violations.push_back({{"check", "apriori"}, {"value", ap.worst_ratio}, {"bound", 1.0}});
    }
  }
  summary["violations"] = violations;
  if (code == kOk && !violations.empty()) code = kCheckViolation;

  out.write_csv("trajectory.csv", traj);
  out.write_json("density_spectra.json",
                 {{"schema", "alber.density-spectra/1"}, {"N", N}, {"records", spectra}});
  if (final_state) out.write_json("final_state.json", to_json(*final_state));
  out.write_json("summary.json", summary);
  return code;
}

}  // namespace

// ---------------------------------------------------------------------------
// penrose

ModeScan scan_modes(const BackgroundSymbol& bg, double p, double q, int k_max,
                    const MarginScan& scan) {
  ModeScan out;
  out.kappa = std::numeric_limits<double>::infinity();
  out.stable = true;
  for (int k = 1; k <= k_max; ++k) {
    out.reports.push_back(penrose_margin(bg, p, q, k, scan));
    out.kappa = std::min(out.kappa, out.reports.back().margin);
    if (!out.reports.back().stable()) out.stable = false;
  }
  return out;
}

double estimate_bilinear_constant(const InequalityConfig& cfg) {
  return check_bilinear(cfg.ensemble, 1.0).empirical_constant;
}

PropagatorInputs propagator_inputs(const BackgroundSymbol& bg, double kappa, double q,
                                   double eta, double epsilon, double c_bilinear) {
  PropagatorInputs in;
  in.gamma_h1s1 = bg.h1s1_norm();
  in.gamma_l1 = bg.l1_norm();
  in.kappa = kappa;
  in.q = q;
  in.eta = eta;
  in.epsilon = epsilon;
  in.c_bilinear = c_bilinear;
  return in;
}

namespace {

std::string zeros_field(const std::vector<Complex>& zeros) {
  std::string s;
  for (const auto& z : zeros) {
    if (!s.empty()) s += ';';
    s += format_double(z.real()) + (z.imag() < 0 ? "" : "+") + format_double(z.imag()) + "i";
  }
  return s;
}

double bilinear_constant(const RunConfig& cfg) {
  return cfg.penrose.c_bilinear > 0.0 ? cfg.penrose.c_bilinear
                                      : estimate_bilinear_constant(cfg.inequalities);
}

int penrose_cmd(const RunConfig& cfg, OutputDir& out) {
  const BackgroundSymbol bg = make_background(cfg);
  const ModeScan ms = scan_modes(bg, cfg.p, cfg.q, cfg.penrose.k_max, cfg.penrose.scan);
  CsvTable table({"k", "margin", "argmin_re", "argmin_im", "n_zeros", "zeros", "margin_eta1",
                  "margin_eta2", "margin_eta3"});
  json reports = json::array();
  for (const auto& r : ms.reports) {
    std::vector<Cell> row{std::int64_t(r.k),
                          r.margin,
                          r.argmin_lambda.real(),
                          r.argmin_lambda.imag(),
                          std::int64_t(r.zeros.size()),
                          zeros_field(r.zeros)};
    for (int i = 0; i < 3; ++i) {
      row.emplace_back(i < int(r.small_eta.size()) ? r.small_eta[i].margin : kNaN);
    }
    table.add_row(std::move(row));
    reports.push_back(to_json(r));
  }
  json result{{"schema", "alber.penrose/1"},
              {"k_max", cfg.penrose.k_max},
              {"kappa", ms.kappa},
              {"kappa_scope", "minimum over 1 <= k <= k_max of the scanned margins"},
              {"stable", ms.stable},
              {"eta_min", cfg.penrose.scan.eta_min}};
  if (ms.stable && ms.kappa > 0.0) {
    const double c = bilinear_constant(cfg);
    result["C_bilinear_source"] = cfg.penrose.c_bilinear > 0.0 ? "config" : "ensemble estimate";
    result["constants"] = to_json(propagator_constants(propagator_inputs(
        bg, ms.kappa, cfg.q, cfg.penrose.eta, cfg.penrose.epsilon, c)));
  } else {
    result["constants"] = nullptr;
  }
  out.write_csv("margins.csv", table);
  out.write_json("reports.json", reports);
  out.write_json("constants.json", result);
  return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// perturb

OperatorMatrix perturbation_matrix(const RunConfig& cfg, const BackgroundSymbol& bg,
                                   const SpectralGrid& grid, double epsilon) {
  const auto& pc = cfg.perturb;
  if (pc.perturbation == "sideband") {
    // Rotate the mode-0 orbital of the background towards (e_1 + e_-1)/sqrt 2
    // by the angle epsilon; U0 = (gamma0 - Gamma) / epsilon.
    const double m = bg(0);
    if (!(m > 0.0)) throw InputError("perturb: 'sideband' needs a background with G(0) > 0");
    if (grid.cutoff() < 1) throw InputError("perturb: 'sideband' needs N >= 1");
    const FourierField e0 = FourierField::basis(grid, 0);
    ComplexVector v = (FourierField::basis(grid, 1).coeffs() +
                       FourierField::basis(grid, -1).coeffs()) /
                      std::sqrt(2.0);
    OperatorMatrix u(grid);
    if (epsilon == 0.0) {
      u.entries() = m * (e0.coeffs() * v.adjoint() + v * e0.coeffs().adjoint());
    } else {
      const ComplexVector psi = std::cos(epsilon) * e0.coeffs() + std::sin(epsilon) * v;
      u.entries() = m * (psi * psi.adjoint() - e0.coeffs() * e0.coeffs().adjoint()) / epsilon;
    }
    return u;
  }
  const int band = pc.band > 0 ? pc.band : std::max(1, bg.support());
  std::mt19937_64 rng = sample_engine(cfg.seed, 1);
  const MixedState st =
      random_smooth_state(grid, pc.rank, pc.decay, 1.0, std::min(band, grid.cutoff()), rng);
  OperatorMatrix u = to_matrix(st);
  u *= Complex(1.0 / hs1_norm_nonneg(st, 1.0));
  return u;
}

double fit_log_rate(const std::vector<double>& t, const std::vector<double>& values, double t0,
                    double t1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size() && i < values.size(); ++i) {
    if (t[i] < t0 - 1e-12 || t[i] > t1 + 1e-12 || !(values[i] > 0.0)) continue;
    const double y = std::log(values[i]);
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++n;
  }
  if (n < 3) return kNaN;
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : kNaN;
}

PerturbSeries run_perturbation(const RunConfig& cfg, const BackgroundSymbol& bg,
                               double epsilon,
                               const std::optional<PropagatorConstants>& constants,
                               double horizon) {
  const SpectralGrid grid = run_grid(cfg);
  const OperatorMatrix G = background_to_matrix(bg, grid);
  const OperatorMatrix U0 = perturbation_matrix(cfg, bg, grid, epsilon);

  MixedState s0 = epsilon == 0.0 ? homogeneous_state(bg, grid)
                                 : eigendecompose(G + Complex(epsilon) * U0);
  EvolveConfig ec = cfg.evolve_config();
  ec.horizon = horizon;
  ec.dt = std::min(ec.dt, horizon);

  PerturbSeries out;
  out.epsilon = epsilon;
  if (constants) out.t_star = constants->t_star;
  auto observe = [&](const TrajectoryRecord& r, const MixedState& st) {
    out.t.push_back(r.t);
    out.deviation.push_back(sobolev_schatten_norm(to_matrix(st) - G, 1.0));
    const double env = constants
                           ? 2.0 * constants->c_star * (1.0 + r.t * r.t) * epsilon
                           : kNaN;
    out.envelope.push_back(env);
    if (constants && r.t <= constants->t_star * (1.0 + 1e-12) &&
        out.deviation.back() > env) {
      ++out.envelope_violations;
    }
  };
  (void)evolve(s0, ec, observe);

  out.linear_deviation.assign(out.t.size(), kNaN);
  out.linear_mode.assign(out.t.size(), kNaN);
  if (cfg.perturb.linearized && !bg.is_zero()) {
    const LinearizedTrajectory lt =
        linearized_evolve(Complex(epsilon) * U0, bg, ec, /*keep_states=*/true);
    const int k = cfg.perturb.fit_mode;
    for (std::size_t i = 0; i < lt.times.size() && i < out.t.size(); ++i) {
      out.linear_deviation[i] = sobolev_schatten_norm(lt.states[i], 1.0);
      if (std::abs(k) <= 2 * grid.cutoff()) out.linear_mode[i] = std::abs(lt.mode(i, k));
    }
    out.fit_rate = fit_log_rate(out.t, out.linear_mode, cfg.perturb.fit_start,
                                cfg.perturb.fit_end);
  } else if (cfg.perturb.linearized) {
    // Zero background: the linearized flow is the free flow, an isometry.
    for (std::size_t i = 0; i < out.t.size(); ++i) {
      out.linear_deviation[i] = epsilon * sobolev_schatten_norm(U0, 1.0);
    }
  }
  return out;
}

namespace {

int perturb_cmd(const RunConfig& cfg, OutputDir& out) {
  const BackgroundSymbol bg = make_background(cfg);
  const ModeScan ms = scan_modes(bg, cfg.p, cfg.q, cfg.penrose.k_max, cfg.penrose.scan);
  const bool stable = ms.stable && ms.kappa > 0.0;
  const double c_bil = stable ? bilinear_constant(cfg) : kNaN;

  CsvTable table({"epsilon", "t", "deviation", "linear_deviation", "linear_mode", "envelope",
                  "local_rate"});
  json runs = json::array();
  std::vector<std::pair<double, double>> at_tstar;
  int violations = 0;
  for (double eps : cfg.perturb.epsilons) {
    std::optional<PropagatorConstants> pcst;
    if (stable && eps > 0.0) {
      pcst = propagator_constants(
          propagator_inputs(bg, ms.kappa, cfg.q, cfg.penrose.eta, eps, c_bil));
    }
    const double horizon = cfg.perturb.until_tstar && pcst ? pcst->t_star : cfg.horizon;
    const PerturbSeries s = run_perturbation(cfg, bg, eps, pcst, horizon);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      double rate = kNaN;
      if (i > 0 && i + 1 < s.t.size() && s.deviation[i - 1] > 0.0 && s.deviation[i + 1] > 0.0) {
        rate = (std::log(s.deviation[i + 1]) - std::log(s.deviation[i - 1])) /
               (s.t[i + 1] - s.t[i - 1]);
      }
      table.add_row({eps, s.t[i], s.deviation[i], s.linear_deviation[i], s.linear_mode[i],
                     s.envelope[i], rate});
    }
    violations += s.envelope_violations;
    json run{{"epsilon", eps},
             {"horizon", horizon},
             {"fit_rate", number(s.fit_rate)},
             {"fit_window", {cfg.perturb.fit_start, cfg.perturb.fit_end}},
             {"fit_mode", cfg.perturb.fit_mode},
             {"envelope_violations", s.envelope_violations},
             {"final_deviation", s.deviation.empty() ? json() : json(s.deviation.back())}};
    if (pcst) {
      run["constants"] = to_json(*pcst);
      if (cfg.perturb.until_tstar) at_tstar.emplace_back(eps, s.deviation.back());
    }
    runs.push_back(run);
  }
  json summary{{"schema", "alber.perturb/1"},
               {"kappa", ms.kappa},
               {"stable", stable},
               {"k_max", cfg.penrose.k_max},
               {"runs", runs}};
  if (at_tstar.size() >= 2) {
    // deviation(T_star) ~ eps^{3/5}
    const auto [e1, d1] = at_tstar[0];
    const auto [e2, d2] = at_tstar[1];
    const double observed = d1 / d2;
    const double predicted = std::pow(e1 / e2, 0.6);
    summary["scaling"] = {{"observed_ratio", observed},
                          {"predicted_ratio", predicted},
                          {"factor", std::max(observed / predicted, predicted / observed)}};
  }
  out.write_csv("perturb.csv", table);
  out.write_json("summary.json", summary);
  return violations > 0 ? kCheckViolation : kOk;
}

// ---------------------------------------------------------------------------
// inequalities

CheckResult apriori_ensemble(const InequalityConfig& ic, double p, double q) {
  const EnsembleConfig& ens = ic.ensemble;
  ens.validate();
  const SpectralGrid grid(ens.cutoff);
  CheckResult total;
  total.name = "apriori";
  total.explicit_constant = true;
  total.empirical_constant = kNaN;
  for (int i = 0; i < ens.n_samples; ++i) {
    auto rng = sample_engine(ens.seed, i);
    const MixedState st = random_state(grid, ens, rng);
    for (double sign : {1.0, -1.0}) {
      EvolveConfig ec;
      ec.p = p;
      ec.q = sign * std::abs(q);
      ec.dt = ic.apriori_dt;
      ec.horizon = ic.apriori_horizon;
      ec.record_every = 10;
      const auto records = evolve(st, ec).records;
      const CheckResult r = check_apriori(records, ybar_bound(st, ec.p, ec.q));
      if (r.violations > 0 && total.violations == 0) {
        total.offending = {{"sample", i}, {"q", ec.q}, {"state", to_json(st)}};
      }
      total.violations += r.violations;
      total.worst_ratio = std::max(total.worst_ratio, r.worst_ratio);
    }
    ++total.n_samples;
  }
  return total;
}

int inequalities_cmd(const RunConfig& cfg, OutputDir& out) {
  const InequalityConfig& ic = cfg.inequalities;
  std::vector<CheckResult> results;
  results.push_back(check_bessel(ic.ensemble, ic.s));
  results.push_back(check_gn(ic.ensemble));
  results.push_back(check_hoffmann_ostenhof(ic.ensemble));
  results.push_back(apriori_ensemble(ic, cfg.p, cfg.q == 0.0 ? 1.0 : cfg.q));
  results.push_back(check_trace_estimate(ic.ensemble, ic.s));
  results.push_back(check_conjugation(ic.ensemble, ic.s));
  results.push_back(check_bilinear(ic.ensemble, ic.s));
  results.push_back(check_fourier_summation(ic.ensemble));

  std::vector<double> grown(results.size(), kNaN);
  if (ic.stability) {
    EnsembleConfig big = ic.ensemble;
    big.n_samples *= 4;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const std::string& n = results[i].name;
      if (n == "trace_estimate") grown[i] = check_trace_estimate(big, ic.s).empirical_constant;
      if (n == "conjugation") grown[i] = check_conjugation(big, ic.s).empirical_constant;
      if (n == "bilinear") grown[i] = check_bilinear(big, ic.s).empirical_constant;
      if (n == "fourier_summation") grown[i] = check_fourier_summation(big).empirical_constant;
    }
  }

  CsvTable table({"name", "n_samples", "violations", "worst_ratio", "empirical_constant", "seed",
                  "explicit_constant", "empirical_constant_4x", "relative_change"});
  json docs = json::array();
  int violations = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CheckResult& r = results[i];
    const double change = std::isfinite(grown[i]) && r.empirical_constant > 0.0
                              ? std::abs(grown[i] - r.empirical_constant) / r.empirical_constant
                              : kNaN;
    table.add_row({r.name, std::int64_t(r.n_samples), std::int64_t(r.violations), r.worst_ratio,
                   r.empirical_constant, std::to_string(ic.ensemble.seed),
                   std::string(r.explicit_constant ? "true" : "false"), grown[i], change});
    json d = to_json(r);
    d["empirical_constant_4x"] = number(grown[i]);
    d["relative_change"] = number(change);
    docs.push_back(std::move(d));
    if (r.explicit_constant) violations += r.violations;
  }
  out.write_csv("checks.csv", table);
  out.write_json("checks.json",
                 {{"schema", "alber.checks/1"},
                  {"note", "empirical constants of different checks are not comparable"},
                  {"ensemble",
                   {{"n_samples", ic.ensemble.n_samples},
                    {"N", ic.ensemble.cutoff},
                    {"rank_min", ic.ensemble.rank_min},
                    {"rank_max", ic.ensemble.rank_max},
                    {"decay", ic.ensemble.decay},
                    {"s", ic.s},
                    {"seed", ic.ensemble.seed}}},
                  {"checks", docs}});
  return violations > 0 ? kCheckViolation : kOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// convergence

std::vector<DtRow> dt_convergence(const MixedState& state, const EvolveConfig& base,
                                  const std::vector<double>& dts, double reference_dt) {
  auto final_matrix = [&](double dt) {
    EvolveConfig ec = base;
    ec.dt = dt;
    ec.record_every = std::numeric_limits<int>::max();
    return to_matrix(evolve(state, ec).final_state);
  };
  const OperatorMatrix ref = final_matrix(reference_dt);
  std::vector<DtRow> rows;
  for (double dt : dts) {
    const double err = schatten_norm(final_matrix(dt) - ref, Schatten::two);
    const double ratio = rows.empty() || err == 0.0 ? kNaN : rows.back().error / err;
    rows.push_back({dt, err, ratio});
  }
  return rows;
}

std::vector<GalerkinRow> galerkin_convergence(const OperatorMatrix& reference,
                                              const std::vector<int>& cutoffs) {
  std::vector<GalerkinRow> rows;
  for (int n : cutoffs) {
    const OperatorMatrix t = galerkin_truncate(reference, n);
    rows.push_back({n, sobolev_schatten_norm(reference - t, 1.0), sobolev_schatten_norm(t, 1.0)});
  }
  return rows;
}

namespace {

int convergence_cmd(const RunConfig& cfg, OutputDir& out) {
  const auto& cc = cfg.convergence;
  json summary{{"schema", "alber.convergence/1"}, {"mode", cc.mode}};
  if (cc.mode == "dt") {
    const MixedState s0 = make_state(cfg);
    const auto rows = dt_convergence(s0, cfg.evolve_config(), cc.dts, cc.reference_dt);
    CsvTable table({"dt", "error_s2", "ratio"});
    for (const auto& r : rows) table.add_row({r.dt, r.error, r.ratio});
    out.write_csv("convergence.csv", table);
    summary["reference_dt"] = cc.reference_dt;
    summary["T"] = cfg.horizon;
  } else {
    RunConfig ref = cfg;
    ref.grid.cutoff = cc.reference_cutoff;
    ref.grid.points = 0;
    const MixedState s0 = make_state(ref);
    const auto rows = galerkin_convergence(to_matrix(s0), cc.cutoffs);
    CsvTable table({"N", "error_h1s1", "truncated_norm_h1s1"});
    bool decreasing = true;
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      table.add_row({std::int64_t(rows[i].cutoff), rows[i].error, rows[i].truncated_norm});
      if (i > 0) {
        decreasing = decreasing && rows[i].error < rows[i - 1].error;
        monotone = monotone && rows[i].truncated_norm >= rows[i - 1].truncated_norm;
      }
    }
    out.write_csv("convergence.csv", table);
    summary["reference_N"] = cc.reference_cutoff;
    summary["error_strictly_decreasing"] = decreasing;
    summary["truncated_norm_monotone"] = monotone;
  }
  out.write_json("summary.json", summary);
  return kOk;
}

}  // namespace

int run_subcommand(const std::string& name, const RunConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  int (*fn)(const RunConfig&, OutputDir&) = nullptr;
  if (name == "simulate") fn = simulate;
  if (name == "penrose") fn = penrose_cmd;
  if (name == "perturb") fn = perturb_cmd;
  if (name == "inequalities") fn = inequalities_cmd;
  if (name == "convergence") fn = convergence_cmd;
  if (!fn) {
    std::cerr << "alber-lab: unknown subcommand '" << name << "'\n";
    return kConfigError;
  }
  std::optional<OutputDir> out;
  int code = kOk;
  try {
    out.emplace(cfg.output_dir);
    code = fn(cfg, *out);
  } catch (const DivergenceError& e) {
    std::cerr << "alber-lab: " << e.what() << "\n";
    code = kDivergence;
  } catch (const NumericalError& e) {
    std::cerr << "alber-lab: numerical failure: " << e.what() << "\n";
    code = kDivergence;
  } catch (const NoContractionError& e) {
    std::cerr << "alber-lab: " << e.what() << "\n";
    code = kDivergence;
  } catch (const Error& e) {
    std::cerr << "alber-lab: " << e.what() << "\n";
    code = kConfigError;
  }
  if (out) {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    out->write_manifest(name, cfg.document, cfg.seed, secs, code);
  }
  return code;
}

}  // namespace alber::lab
