#include "presets.hpp"

#include <filesystem>
#include <fstream>

#include "alber/errors.hpp"
#include "alber/serialization.hpp"

namespace alber::lab {

namespace {

nlohmann::json read_json(const std::string& base, const std::string& file) {
  std::filesystem::path path(file);
  if (path.is_relative() && !base.empty()) path = std::filesystem::path(base) / path;
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config: " + path.string() + ": " + e.what());
  }
}

}  // namespace

BackgroundSymbol unstable_single_mode() { return BackgroundSymbol({kTwoPi}); }

BackgroundSymbol stable_broad(double mass, int support, double decay) {
  std::vector<double> v(2 * support + 1);
  double total = 0.0;
  for (int n = -support; n <= support; ++n) {
    v[n + support] = std::pow(bracket(n), -decay);
    total += v[n + support];
  }
  for (double& x : v) x *= mass / total;
  return BackgroundSymbol(std::move(v));
}

BackgroundSymbol make_background(const RunConfig& cfg) {
  const auto& b = cfg.background;
  if (b.preset == "zero") return BackgroundSymbol::zero();
  if (b.preset == "unstable-single-mode") return unstable_single_mode();
  if (b.preset == "stable-broad") return stable_broad(b.mass, b.support, b.decay);
  if (b.preset == "custom") return BackgroundSymbol(b.symbol);
  return background_from_json(read_json(cfg.base_dir, b.file));
}

MixedState random_smooth_state(const SpectralGrid& grid, int rank, double decay, double mass,
                               int band, std::mt19937_64& rng) {
  const int B = band > 0 ? std::min(band, grid.cutoff()) : grid.cutoff();
  if (rank > 2 * B + 1) throw InputError("random state: rank exceeds the band dimension");
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<FourierField> raw;
  for (int k = 0; k < rank; ++k) {
    FourierField f(grid);
    for (int n = -B; n <= B; ++n) {
      const double re = g(rng);
      const double im = g(rng);
      f[n] = Complex(re, im) * std::pow(bracket(n), -decay);
    }
    raw.push_back(std::move(f));
  }
  std::vector<double> w;
  double total = 0.0;
  for (int k = 0; k < rank; ++k) {
    w.push_back(std::abs(g(rng)) * std::pow(0.5, k) + 1e-3);
    total += w.back();
  }
  for (double& x : w) x *= mass / total;
  return MixedState(std::move(w), orthonormalize(raw));
}

MixedState homogeneous_state(const BackgroundSymbol& bg, const SpectralGrid& grid) {
  if (bg.support() > grid.cutoff()) {
    throw InputError("homogeneous state: background support exceeds the grid cutoff");
  }
  std::vector<double> w;
  std::vector<FourierField> orbitals;
  for (int n = -bg.support(); n <= bg.support(); ++n) {
    if (bg(n) > 0.0) {
      w.push_back(bg(n));
      orbitals.push_back(FourierField::basis(grid, n));
    }
  }
  if (w.empty()) return MixedState(grid);
  return MixedState(std::move(w), std::move(orbitals));
}

MixedState make_state(const RunConfig& cfg) {
  const SpectralGrid grid(cfg.grid.cutoff, cfg.grid.points);
  const auto& s = cfg.state;
  if (s.preset == "zero") return MixedState(grid);
  if (s.preset == "homogeneous") return homogeneous_state(make_background(cfg), grid);
  if (s.preset == "plane-wave") {
    if (s.mass == 0.0) return MixedState(grid);
    return MixedState({s.mass}, {FourierField::basis(grid, s.mode)});
  }
  if (s.preset == "file") {
    MixedState st = state_from_json(read_json(cfg.base_dir, s.file));
    if (st.grid().cutoff() != grid.cutoff()) {
      throw InputError("config: state file cutoff differs from grid.N");
    }
    return st;
  }
  std::mt19937_64 rng = sample_engine(cfg.seed, 0);
  return random_smooth_state(grid, s.rank, s.decay, s.mass, s.band, rng);
}

}  // namespace alber::lab
