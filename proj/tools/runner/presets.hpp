#pragma once

#include <random>

#include "config.hpp"

namespace alber::lab {

/// Single mode G(0) = 2 pi: with p = q = 1 the k = 1 density mode grows
/// like e^t (dispersion (lambda^2 - 1)/(lambda^2 + 1)).
BackgroundSymbol unstable_single_mode();

/// G(n) = c <n>^{-decay} on |n| <= J with sum_n G(n) = mass.
BackgroundSymbol stable_broad(double mass, int support, double decay);

BackgroundSymbol make_background(const RunConfig& cfg);

/// Smooth random state: `rank` orthonormal orbitals on |n| <= band with
/// <n>^{-decay} Gaussian profile, weights rescaled to total `mass`.
MixedState random_smooth_state(const SpectralGrid& grid, int rank, double decay, double mass,
                               int band, std::mt19937_64& rng);

/// The homogeneous steady state with symbol `bg` on `grid`.
MixedState homogeneous_state(const BackgroundSymbol& bg, const SpectralGrid& grid);

MixedState make_state(const RunConfig& cfg);

}  // namespace alber::lab
