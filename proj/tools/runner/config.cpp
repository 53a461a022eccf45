#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "alber/errors.hpp"

namespace alber::lab {

using nlohmann::json;

namespace {

// Typed access to one object of the document with path-qualified errors.
class Section {
 public:
  Section(const json* node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_->is_object()) fail("", "must be an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    const json& v = node_->at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) fail(key, "must be a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) fail(key, "must be an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) fail(key, "must be a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) fail(key, "must be a string");
      }
      out = v.get<T>();
    } catch (const json::exception&) {
      fail(key, "has the wrong type");
    }
  }

  void mark(const char* key) { seen_.insert(key); }

  Section child(const char* key) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return Section(nullptr, join(key));
    return Section(&node_->at(key), join(key));
  }

  void finish() const {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      if (!seen_.count(it.key())) fail(it.key(), "is not a recognized field");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw InputError("config: field '" + join(key) + "' " + msg);
  }

  void check(bool ok, const std::string& key, const std::string& msg) const {
    if (!ok) fail(key, msg);
  }

 private:
  std::string join(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

EvolveConfig RunConfig::evolve_config() const {
  EvolveConfig c;
  c.p = p;
  c.q = q;
  c.dt = dt;
  c.horizon = horizon;
  c.record_every = record_every;
  return c;
}

RunConfig parse_config(const json& doc, const std::string& base_dir) {
  RunConfig cfg;
  cfg.document = doc;
  cfg.base_dir = base_dir;
  Section root(&doc, "");
  if (doc.contains("seed")) {
    root.check(doc.at("seed").is_number_unsigned() || doc.at("seed").is_number_integer(), "seed",
               "must be a non-negative integer");
    root.check(!doc.at("seed").is_number_integer() || doc.at("seed").get<std::int64_t>() >= 0,
               "seed", "must be a non-negative integer");
  }
  root.read("seed", cfg.seed);

  {
    Section s = root.child("grid");
    s.read("N", cfg.grid.cutoff);
    s.read("M", cfg.grid.points);
    s.check(cfg.grid.cutoff >= 1, "N", "must be >= 1");
    s.check(cfg.grid.points == 0 || cfg.grid.points >= 2 * (2 * cfg.grid.cutoff + 1), "M",
            "must be 0 (automatic) or >= 2(2N+1)");
    s.finish();
  }
  {
    Section s = root.child("physics");
    s.read("p", cfg.p);
    s.read("q", cfg.q);
    s.check(cfg.p != 0.0, "p", "must be nonzero");
    s.finish();
  }
  {
    Section s = root.child("time");
    s.read("dt", cfg.dt);
    s.read("T", cfg.horizon);
    s.read("record_every", cfg.record_every);
    s.check(cfg.dt > 0.0, "dt", "must be > 0");
    s.check(cfg.horizon >= cfg.dt, "T", "must be >= dt");
    s.check(cfg.record_every >= 1, "record_every", "must be >= 1");
    s.finish();
  }
  {
    Section s = root.child("state");
    auto& st = cfg.state;
    s.read("preset", st.preset);
    s.read("file", st.file);
    s.read("rank", st.rank);
    s.read("decay", st.decay);
    s.read("mass", st.mass);
    s.read("band", st.band);
    s.read("mode", st.mode);
    static const std::set<std::string> presets{"random", "zero", "homogeneous", "plane-wave",
                                               "file"};
    s.check(presets.count(st.preset) == 1, "preset",
            "must be one of random, zero, homogeneous, plane-wave, file");
    s.check(st.preset != "file" || !st.file.empty(), "file", "is required for preset 'file'");
    s.check(st.rank >= 1 && st.rank <= 2 * cfg.grid.cutoff + 1, "rank",
            "must be in 1..2N+1");
    s.check(st.decay >= 0.0, "decay", "must be >= 0");
    s.check(st.mass >= 0.0, "mass", "must be >= 0");
    s.check(st.band >= 0 && st.band <= cfg.grid.cutoff, "band", "must be in 0..N");
    s.check(std::abs(st.mode) <= cfg.grid.cutoff, "mode", "must satisfy |mode| <= N");
    s.finish();
  }
  {
    Section s = root.child("background");
    auto& bg = cfg.background;
    s.read("preset", bg.preset);
    s.read("file", bg.file);
    s.read("symbol", bg.symbol);
    s.read("mass", bg.mass);
    s.read("J", bg.support);
    s.read("decay", bg.decay);
    static const std::set<std::string> presets{"zero", "unstable-single-mode", "stable-broad",
                                               "custom", "file"};
    s.check(presets.count(bg.preset) == 1, "preset",
            "must be one of zero, unstable-single-mode, stable-broad, custom, file");
    s.check(bg.preset != "file" || !bg.file.empty(), "file", "is required for preset 'file'");
    s.check(bg.preset != "custom" || bg.symbol.size() % 2 == 1, "symbol",
            "must have odd length 2J+1 for preset 'custom'");
    s.check(bg.mass > 0.0, "mass", "must be > 0");
    s.check(bg.support >= 0, "J", "must be >= 0");
    s.finish();
  }
  {
    Section s = root.child("checks");
    auto& c = cfg.checks;
    s.read("mass_drift", c.mass_drift);
    s.read("s2_drift", c.s2_drift);
    s.read("energy_drift", c.energy_drift);
    s.read("gram", c.gram);
    s.read("apriori", c.apriori);
    s.finish();
  }
  {
    Section s = root.child("penrose");
    auto& pc = cfg.penrose;
    s.read("k_max", pc.k_max);
    s.read("eta_min", pc.scan.eta_min);
    s.read("eta_max", pc.scan.eta_max);
    s.read("eta_count", pc.scan.eta_count);
    s.read("s_padding", pc.scan.s_padding);
    s.read("s_step", pc.scan.s_step);
    s.read("s_density", pc.scan.s_density);
    s.read("refine_iters", pc.scan.refine_iters);
    s.read("eta", pc.eta);
    s.read("epsilon", pc.epsilon);
    s.read("c_bilinear", pc.c_bilinear);
    s.check(pc.k_max >= 1, "k_max", "must be >= 1");
    s.check(pc.scan.eta_min > 0.0, "eta_min", "must be > 0");
    s.check(pc.scan.eta_max >= pc.scan.eta_min, "eta_max", "must be >= eta_min");
    s.check(pc.scan.eta_count >= 1, "eta_count", "must be >= 1");
    s.check(pc.scan.s_padding >= 0.0, "s_padding", "must be >= 0");
    s.check(pc.scan.s_step > 0.0, "s_step", "must be > 0");
    s.check(pc.scan.s_density > 0.0, "s_density", "must be > 0");
    s.check(pc.scan.refine_iters >= 0, "refine_iters", "must be >= 0");
    s.check(pc.eta > 0.0, "eta", "must be > 0");
    s.check(pc.epsilon > 0.0, "epsilon", "must be > 0");
    s.check(pc.c_bilinear >= 0.0, "c_bilinear", "must be >= 0");
    s.finish();
  }
  {
    Section s = root.child("perturb");
    auto& pc = cfg.perturb;
    if (doc.contains("perturb") && doc.at("perturb").contains("epsilon")) {
      const json& e = doc.at("perturb").at("epsilon");
      if (e.is_number()) {
        pc.epsilons = {e.get<double>()};
      } else if (e.is_array()) {
        try {
          pc.epsilons = e.get<std::vector<double>>();
        } catch (const json::exception&) {
          s.fail("epsilon", "must be a number or an array of numbers");
        }
      } else {
        s.fail("epsilon", "must be a number or an array of numbers");
      }
    }
    std::vector<double> window{pc.fit_start, pc.fit_end};
    s.mark("epsilon");
    s.read("perturbation", pc.perturbation);
    s.read("rank", pc.rank);
    s.read("decay", pc.decay);
    s.read("band", pc.band);
    s.read("linearized", pc.linearized);
    s.read("fit_mode", pc.fit_mode);
    s.read("fit_window", window);
    s.read("until_tstar", pc.until_tstar);
    s.check(!pc.epsilons.empty(), "epsilon", "must not be empty");
    for (double e : pc.epsilons) s.check(e >= 0.0, "epsilon", "entries must be >= 0");
    s.check(pc.perturbation == "random" || pc.perturbation == "sideband", "perturbation",
            "must be 'random' or 'sideband'");
    s.check(pc.rank >= 1, "rank", "must be >= 1");
    s.check(pc.band >= 0 && pc.band <= cfg.grid.cutoff, "band", "must be in 0..N");
    s.check(pc.fit_mode != 0, "fit_mode", "must be nonzero");
    s.check(window.size() == 2 && window[0] < window[1], "fit_window",
            "must be [start, end] with start < end");
    pc.fit_start = window[0];
    pc.fit_end = window[1];
    s.finish();
  }
  {
    Section s = root.child("ensemble");
    auto& ic = cfg.inequalities;
    ic.ensemble.cutoff = 32;
    s.read("n_samples", ic.ensemble.n_samples);
    s.read("N", ic.ensemble.cutoff);
    s.read("rank_min", ic.ensemble.rank_min);
    s.read("rank_max", ic.ensemble.rank_max);
    s.read("decay", ic.ensemble.decay);
    s.read("s", ic.s);
    s.read("stability", ic.stability);
    s.read("apriori_T", ic.apriori_horizon);
    s.read("apriori_dt", ic.apriori_dt);
    s.check(ic.ensemble.n_samples >= 1, "n_samples", "must be >= 1");
    s.check(ic.ensemble.cutoff >= 1, "N", "must be >= 1");
    s.check(ic.ensemble.rank_min >= 1, "rank_min", "must be >= 1");
    s.check(ic.ensemble.rank_max >= ic.ensemble.rank_min &&
                ic.ensemble.rank_max <= 2 * ic.ensemble.cutoff + 1,
            "rank_max", "must be in rank_min..2N+1");
    s.check(ic.ensemble.decay >= 0.0, "decay", "must be >= 0");
    s.check(ic.s > 0.5, "s", "must be > 1/2");
    s.check(ic.apriori_dt > 0.0, "apriori_dt", "must be > 0");
    s.check(ic.apriori_horizon >= ic.apriori_dt, "apriori_T", "must be >= apriori_dt");
    ic.ensemble.seed = cfg.seed;
    s.finish();
  }
  {
    Section s = root.child("convergence");
    auto& cc = cfg.convergence;
    s.read("mode", cc.mode);
    s.read("dts", cc.dts);
    s.read("reference_dt", cc.reference_dt);
    s.read("cutoffs", cc.cutoffs);
    s.read("reference_N", cc.reference_cutoff);
    s.check(cc.mode == "dt" || cc.mode == "galerkin", "mode", "must be 'dt' or 'galerkin'");
    s.check(!cc.dts.empty(), "dts", "must not be empty");
    for (double d : cc.dts) s.check(d > 0.0, "dts", "entries must be > 0");
    s.check(cc.reference_dt > 0.0, "reference_dt", "must be > 0");
    s.check(!cc.cutoffs.empty(), "cutoffs", "must not be empty");
    for (int n : cc.cutoffs) {
      s.check(n >= 1 && n <= cc.reference_cutoff, "cutoffs", "entries must be in 1..reference_N");
    }
    s.finish();
  }
  {
    Section s = root.child("output");
    s.read("dir", cfg.output_dir);
    s.finish();
  }
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InputError("config: " + path + ": " + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path().string();
  return parse_config(doc, base);
}

}  // namespace alber::lab
