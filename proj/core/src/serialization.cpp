#include "alber/serialization.hpp"

#include <cstdio>

#include "alber/errors.hpp"

namespace alber {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key, const char* where) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw InputError(std::string(where) + ": missing field '" + key + "'");
  }
  return doc.at(key);
}

void check_schema(const json& doc, const char* expected, const char* where) {
  if (doc.is_object() && doc.contains("schema") && doc.at("schema") != expected) {
    throw InputError(std::string(where) + ": schema must be '" + expected + "'");
  }
}

}  // namespace

json to_json(const MixedState& state) {
  json orbitals = json::array();
  for (const auto& psi : state.orbitals()) {
    json modes = json::array();
    for (Eigen::Index i = 0; i < psi.coeffs().size(); ++i) {
      modes.push_back({psi.coeffs()[i].real(), psi.coeffs()[i].imag()});
    }
    orbitals.push_back(std::move(modes));
  }
  return json{{"schema", kStateSchema},
              {"grid", {{"N", state.grid().cutoff()}, {"M", state.grid().points()}}},
              {"weights", state.weights()},
              {"orbitals", std::move(orbitals)}};
}

MixedState state_from_json(const json& doc) {
  check_schema(doc, kStateSchema, "state");
  try {
    const json& g = require(doc, "grid", "state");
    const int cutoff = require(g, "N", "state.grid").get<int>();
    const int points = g.contains("M") ? g.at("M").get<int>() : 0;
    SpectralGrid grid(cutoff, points);
    const auto weights = require(doc, "weights", "state").get<std::vector<double>>();
    const json& orbs = require(doc, "orbitals", "state");
    if (!orbs.is_array() || orbs.size() != weights.size()) {
      throw InputError("state: 'orbitals' must be an array with one entry per weight");
    }
    std::vector<FourierField> orbitals;
    for (std::size_t k = 0; k < orbs.size(); ++k) {
      const json& modes = orbs[k];
      if (!modes.is_array() || static_cast<int>(modes.size()) != grid.modes()) {
        throw InputError("state: orbital " + std::to_string(k) + " must list " +
                         std::to_string(grid.modes()) + " [re, im] pairs");
      }
      ComplexVector c(grid.modes());
      for (int i = 0; i < grid.modes(); ++i) {
        const json& pair = modes[i];
        if (!pair.is_array() || pair.size() != 2) {
          throw InputError("state: orbital " + std::to_string(k) + " mode " +
                           std::to_string(i - cutoff) + " is not an [re, im] pair");
        }
        c[i] = Complex(pair[0].get<double>(), pair[1].get<double>());
      }
      orbitals.emplace_back(grid, std::move(c));
    }
    const double gram_tol = doc.value("gram_tol", 1e-10);
    if (orbitals.empty()) return MixedState(grid);
    return MixedState(weights, std::move(orbitals), gram_tol);
  } catch (const json::exception& e) {
    throw InputError(std::string("state: ") + e.what());
  }
}

json to_json(const BackgroundSymbol& bg) {
  return json{{"schema", kBackgroundSchema}, {"J", bg.support()}, {"symbol", bg.values()}};
}

BackgroundSymbol background_from_json(const json& doc) {
  check_schema(doc, kBackgroundSchema, "background");
  try {
    auto values = require(doc, "symbol", "background").get<std::vector<double>>();
    if (doc.contains("J") &&
        static_cast<std::size_t>(2 * doc.at("J").get<int>() + 1) != values.size()) {
      throw InputError("background: 'symbol' must have 2J+1 entries");
    }
    return BackgroundSymbol(std::move(values));
  } catch (const json::exception& e) {
    throw InputError(std::string("background: ") + e.what());
  }
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace alber
