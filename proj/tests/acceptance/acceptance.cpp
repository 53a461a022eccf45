// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "alber/dynamics.hpp"
#include "alber/inequality_lab.hpp"
#include "alber/penrose.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "presets.hpp"

#ifndef ALBER_SOURCE_DIR
#error "ALBER_SOURCE_DIR must name the source tree"
#endif

using namespace alber;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("alber-acceptance-" + name);
  fs::remove_all(d);
  return d;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

// The focusing conservation run, shared by criteria 1 and 2.
MixedState conservation_datum() {
  auto rng = sample_engine(7, 0);
  return lab::random_smooth_state(SpectralGrid(64), 4, 4.0, 1.0, 0, rng);
}

EvolveConfig conservation_config(double q) {
  EvolveConfig c;
  c.p = 1.0;
  c.q = q;
  c.dt = 1e-3;
  c.horizon = 10.0;
  c.record_every = 100;
  return c;
}

Outcome conservation() {
  const MixedState s0 = conservation_datum();
  const auto t0 = Clock::now();
  const auto recs = evolve(s0, conservation_config(1.0)).records;
  const double secs = seconds_since(t0);
  const lab::Drifts d = lab::measure_drifts(recs);
  const bool ok = d.mass <= 1e-10 && d.s2 <= 1e-10 && d.energy <= 1e-6 && d.gram <= 1e-10 &&
                  secs <= 60.0;
  return {ok, "mass " + fmt("%.2e", d.mass) + ", S2 " + fmt("%.2e", d.s2) + ", energy " +
                  fmt("%.2e", d.energy) + ", gram " + fmt("%.2e", d.gram) + ", " +
                  fmt("%.1f", secs) + " s"};
}

Outcome apriori() {
  const MixedState s0 = conservation_datum();
  std::string detail;
  bool ok = true;
  for (double q : {1.0, -1.0}) {
    const auto recs = evolve(s0, conservation_config(q)).records;
    const CheckResult r = check_apriori(recs, ybar_bound(s0, 1.0, q));
    ok = ok && r.violations == 0 && r.n_samples == static_cast<int>(recs.size());
    detail += std::string(q > 0 ? "focusing" : "defocusing") + " max h1s1/Ybar " +
              fmt("%.4f", r.worst_ratio) + " (" + std::to_string(r.violations) + " violations)";
    if (q > 0) detail += "; ";
  }
  return {ok, detail};
}

Outcome unstable_growth() {
  const BackgroundSymbol bg = lab::unstable_single_mode();
  OperatorMatrix u0(SpectralGrid(4));
  u0(1, 0) = 1.0;
  EvolveConfig c;
  c.dt = 1e-3;
  c.horizon = 15.0;
  c.record_every = 100;
  const LinearizedTrajectory lt = linearized_evolve(u0, bg, c);
  std::vector<double> amp;
  for (std::size_t i = 0; i < lt.times.size(); ++i) amp.push_back(std::abs(lt.mode(i, 1)));
  const double rate = lab::fit_log_rate(lt.times, amp, 5.0, 15.0);
  const PenroseReport r = penrose_margin(bg, 1.0, 1.0, 1);
  double dist = kInfinity;
  for (const auto& z : r.zeros) dist = std::min(dist, std::abs(z - 1.0));
  const bool ok = std::abs(rate - 1.0) <= 0.05 && dist <= 1e-6;
  return {ok, "fitted rate " + fmt("%.6f", rate) + ", |zero - 1| " + fmt("%.1e", dist)};
}

// max_t |volterra - linearized| / max_t |linearized| for the k = 1 mode.
double oracle_gap(const BackgroundSymbol& bg, double q, const OperatorMatrix& u0) {
  const double T = 10.0, dt_v = 5e-4, dt_l = 2e-4;
  const VolterraSolution v = volterra_solve(bg, u0, 1.0, q, 1, dt_v, T);
  EvolveConfig c;
  c.q = q;
  c.dt = dt_l;
  c.horizon = T;
  c.record_every = 5;  // records every 1e-3, every second Volterra node
  const LinearizedTrajectory lt = linearized_evolve(u0, bg, c);
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < lt.times.size(); ++i) {
    const std::size_t j = static_cast<std::size_t>(std::llround(lt.times[i] / dt_v));
    gap = std::max(gap, std::abs(v.rho[j] - lt.mode(i, 1)));
    scale = std::max(scale, std::abs(lt.mode(i, 1)));
  }
  return gap / scale;
}

Outcome oracles() {
  // The k = 1 diagonal decouples exactly once N >= J + 1.
  const BackgroundSymbol stable = lab::stable_broad(1.0, 8, 4.0);
  auto rng = sample_engine(5, 0);
  const OperatorMatrix u0 =
      to_matrix(lab::random_smooth_state(SpectralGrid(10), 2, 2.0, 1.0, 0, rng));
  const double g_stable = oracle_gap(stable, -1.0, u0);
  OperatorMatrix seed(SpectralGrid(4));
  seed(1, 0) = 1.0;
  seed(2, 1) = 0.5;
  const double g_unstable = oracle_gap(lab::unstable_single_mode(), 1.0, seed);

  auto rng2 = sample_engine(6, 0);
  const MixedState s0 = lab::random_smooth_state(SpectralGrid(8), 2, 4.0, 1.0, 4, rng2);
  const double T = 0.05;
  const OperatorMatrix pic = picard_solve(to_matrix(s0), 1.0, 1.0, T, 40, 201);
  EvolveConfig c;
  c.dt = 5e-5;
  c.horizon = T;
  c.record_every = 1000;
  const double g_picard = (pic.entries() - to_matrix(evolve(s0, c).final_state).entries()).norm();
  const bool ok = g_stable <= 1e-6 && g_unstable <= 1e-6 && g_picard <= 1e-6;
  return {ok, "volterra/linearized stable " + fmt("%.1e", g_stable) + ", unstable " +
                  fmt("%.1e", g_unstable) + "; picard/evolve S2 " + fmt("%.1e", g_picard)};
}

Outcome integrator_order() {
  auto rng = sample_engine(8, 0);
  const MixedState s0 = lab::random_smooth_state(SpectralGrid(16), 2, 4.0, 1.0, 0, rng);
  EvolveConfig base;
  base.horizon = 1.0;
  base.record_every = 1000000;
  const auto rows = lab::dt_convergence(s0, base, {4e-3, 2e-3, 1e-3}, 6.25e-5);
  bool ok = rows.size() == 3;
  std::string detail = "ratios";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ok = ok && rows[i].ratio >= 3.5 && rows[i].ratio <= 4.5;
    detail += " " + fmt("%.3f", rows[i].ratio);
  }
  return {ok, detail};
}

Outcome galerkin() {
  auto rng = sample_engine(9, 0);
  const MixedState ref = lab::random_smooth_state(SpectralGrid(128), 4, 2.0, 1.0, 0, rng);
  const auto rows = lab::galerkin_convergence(to_matrix(ref), {8, 16, 32, 64});
  bool ok = rows.size() == 4;
  std::string detail = "errors";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      ok = ok && rows[i].error < rows[i - 1].error &&
           rows[i].truncated_norm >= rows[i - 1].truncated_norm;
    }
    detail += " " + fmt("%.2e", rows[i].error);
  }
  return {ok, detail};
}

Outcome inequalities() {
  const fs::path out = scratch("inequalities");
  const json doc{{"seed", 3},
                 {"physics", {{"p", 1.0}, {"q", 1.0}}},
                 {"ensemble", {{"n_samples", 200}, {"N", 32}, {"stability", true}}},
                 {"output", {{"dir", out.string()}}}};
  const auto t0 = Clock::now();
  const int code = lab::run_subcommand("inequalities", lab::parse_config(doc));
  const double secs = seconds_since(t0);
  const json checks = read_json(out / "checks.json").at("checks");
  bool ok = code == lab::kOk && secs <= 300.0;
  int explicit_violations = 0;
  double worst_change = 0.0;
  for (const auto& c : checks) {
    if (c.at("explicit_constant").get<bool>()) {
      ok = ok && c.at("n_samples") == 200;
      explicit_violations += c.at("violations").get<int>();
    } else {
      const double change = c.at("relative_change").get<double>();
      worst_change = std::max(worst_change, change);
      ok = ok && change <= 0.2;
    }
  }
  ok = ok && explicit_violations == 0 && checks.size() == 8;
  return {ok, std::to_string(explicit_violations) + " explicit violations, max 4x change " +
                  fmt("%.3f", worst_change) + ", " + fmt("%.1f", secs) + " s"};
}

Outcome stable_window() {
  const fs::path out = scratch("perturb");
  lab::RunConfig cfg =
      lab::load_config(std::string(ALBER_SOURCE_DIR) + "/configs/stable_perturb.json");
  cfg.output_dir = out.string();
  const int code = lab::run_subcommand("perturb", cfg);
  const json s = read_json(out / "summary.json");
  bool ok = code == lab::kOk && s.at("stable").get<bool>() && s.at("kappa").get<double>() > 0.0;
  int violations = 0;
  for (const auto& r : s.at("runs")) violations += r.at("envelope_violations").get<int>();
  ok = ok && violations == 0 && s.contains("scaling");
  const double factor = ok ? s.at("scaling").at("factor").get<double>() : kInfinity;
  ok = ok && factor <= 3.0;
  return {ok, "kappa " + fmt("%.4g", s.at("kappa").get<double>()) + ", " +
                  std::to_string(violations) + " envelope violations, eps^(3/5) factor " +
                  fmt("%.3f", factor)};
}

Outcome homogeneous() {
  const SpectralGrid g(16);
  std::vector<std::pair<std::string, BackgroundSymbol>> cases{
      {"single-mode", lab::unstable_single_mode()},
      {"broad", lab::stable_broad(1.0, 8, 4.0)},
      {"custom", BackgroundSymbol({0.3, 0.0, 2.0, 1.0, 0.0, 0.5, 0.7})}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, bg] : cases) {
    const MixedState s0 = lab::homogeneous_state(bg, g);
    for (double q : {1.0, -1.0}) {
      EvolveConfig c;
      c.q = q;
      c.dt = 1e-3;
      c.horizon = 10.0;
      c.record_every = 10000;
      const double d =
          (to_matrix(evolve(s0, c).final_state).entries() - to_matrix(s0).entries()).norm();
      ok = ok && d <= 1e-10;
      if (q > 0) detail += (detail.empty() ? "" : ", ") + name + " " + fmt("%.1e", d);
    }
  }
  return {ok, "S2 drift " + detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"conservation", conservation},
      {"a-priori bound", apriori},
      {"unstable growth anchor", unstable_growth},
      {"oracle equivalence", oracles},
      {"integrator order", integrator_order},
      {"galerkin convergence", galerkin},
      {"inequality lab", inequalities},
      {"stable window", stable_window},
      {"homogeneous steadiness", homogeneous}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %-24s %s  %s\n", i + 1, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
