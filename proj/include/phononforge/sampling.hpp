#pragma once

// Seeded random test states.

#include <cmath>
#include <numbers>
#include <random>

#include "phononforge/fock.hpp"

namespace phononforge::sampling {

/// Complex Gaussian amplitudes on levels 0..support-1 of a dim-level space, normalized.
template <class Rng>
PureState random_state(Rng& rng, std::size_t dim, std::size_t support) {
  if (support == 0 || support > dim) throw InvalidArgument("random_state: support must lie in [1, dim]");
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t n = 0; n < support; ++n) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[static_cast<Eigen::Index>(n)] = cplx{re, im};
  }
  v /= v.norm();
  return PureState(std::move(v));
}

/// Uniform integer in [lo, hi].
template <class Rng>
std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <class Rng>
double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Displacement |alpha| <= 2, squeeze <= 0.6, random angles.
template <class Rng>
GaussianSpec random_gaussian(Rng& rng) {
  GaussianSpec g;
  g.displacement = std::polar(uniform_real(rng, 0.0, 2.0), uniform_real(rng, -std::numbers::pi, std::numbers::pi));
  g.squeeze_magnitude = uniform_real(rng, 0.0, 0.6);
  g.squeeze_angle = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
  return g;
}

}  // namespace phononforge::sampling
