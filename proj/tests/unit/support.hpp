#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "alber/inequality_lab.hpp"
#include "alber/mixed_state.hpp"
#include "presets.hpp"

namespace alber::test {

inline MixedState smooth_state(int cutoff, int rank, std::uint64_t seed, double mass = 1.0,
                               double decay = 4.0, int band = 0) {
  auto rng = sample_engine(seed, 0);
  return lab::random_smooth_state(SpectralGrid(cutoff), rank, decay, mass, band, rng);
}

inline double s2_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
  return (a.entries() - b.entries()).norm();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("alber-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace alber::test
