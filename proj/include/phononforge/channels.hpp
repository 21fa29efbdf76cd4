#pragma once

// Heralded measurement operators acting on a single mode:
//   Upsilon_h = (theta/2 b e^{-i phi} + r b^dag e^{i varphi} + mu) / sqrt(2)
// and its v-detection variant (mu -> -mu), the orthogonalizer built from it,
// displaced ladder operators and heralded qubit synthesis.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "phononforge/fock.hpp"

namespace phononforge {

inline constexpr double kHeraldingFloor = 1e-14;
inline constexpr double kWeakDriveWarn = 0.5;
inline constexpr double kWeakDriveMax = 1.0;

enum class Detection { h, v };

struct HeraldSpec {
  double theta_half = 0.0;  // effective beam-splitter parameter
  double r = 0.0;           // effective two-mode-squeezing parameter
  cplx mu{0.0, 0.0};        // identity weight
  double phi = 0.0;         // beam-splitter phase
  double varphi = 0.0;      // two-mode-squeezer phase
  Detection detection = Detection::h;
};

/// Throws InvalidArgument for negative or > 1 strengths; returns warnings
/// for strengths beyond the weak-drive regime (> 0.5).
inline std::vector<std::string> validate(const HeraldSpec& spec) {
  std::vector<std::string> warnings;
  auto check = [&](double value, const char* name) {
    if (!(value >= 0.0)) throw InvalidArgument(std::string("herald spec: ") + name + " must be >= 0");
    if (value > kWeakDriveMax) {
      throw InvalidArgument(std::string("herald spec: ") + name + " = " + std::to_string(value) +
                            " exceeds the weak-drive limit 1");
    }
    if (value > kWeakDriveWarn) {
      warnings.push_back(std::string(name) + " = " + std::to_string(value) +
                         " is outside the weak-drive regime (> 0.5)");
    }
  };
  check(spec.theta_half, "theta_half");
  check(spec.r, "r");
  return warnings;
}

/// The measurement operator as a dim x dim matrix.
inline MatrixOperator herald_op(std::size_t dim, const HeraldSpec& spec) {
  detail::require_dim(dim, 2, "herald_op");
  validate(spec);
  const auto d = static_cast<Eigen::Index>(dim);
  const cplx sub = spec.theta_half * std::polar(1.0, -spec.phi);
  const cplx add = spec.r * std::polar(1.0, spec.varphi);
  const cplx ident = spec.detection == Detection::h ? spec.mu : -spec.mu;
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    m(n, n) = ident;
    if (n > 0) {
      const double s = std::sqrt(static_cast<double>(n));
      m(n - 1, n) = sub * s;
      m(n, n - 1) = add * s;
    }
  }
  return MatrixOperator(m / std::numbers::sqrt2);
}

struct HeraldOutcome {
  PureState state;     // normalized conditional state
  double probability;  // squared norm of the unnormalized conditional state
};

namespace detail {

inline HeraldOutcome condition(const PureState& state, const MatrixOperator& op, const char* who) {
  const Applied out = apply(op, state);
  if (!(out.norm_squared >= kHeraldingFloor)) {
    throw HeraldingImpossible(std::string(who) + ": heralding probability " +
                              std::to_string(out.norm_squared) + " below " +
                              std::to_string(kHeraldingFloor));
  }
  return {out.state.normalized(), out.norm_squared};
}

}  // namespace detail

/// Spec of the orthogonalizer r X_{theta+pi/2} for `state`.
inline HeraldSpec orthogonalizer_spec(const PureState& state, double r_scale) {
  const double angle = mean_angle(state).angle + std::numbers::pi / 2.0;
  HeraldSpec spec;
  spec.theta_half = r_scale;
  spec.r = r_scale;
  spec.phi = angle;
  spec.varphi = angle;
  return spec;
}

/// r X_{theta+pi/2} with theta the angle of <b>; theta = 0 for zero-mean states.
inline MatrixOperator orthogonalizer(const PureState& state, double r_scale) {
  detail::require_normalized(state, "orthogonalizer");
  return herald_op(state.dim(), orthogonalizer_spec(state, r_scale));
}

inline HeraldOutcome apply_herald(const PureState& state, const HeraldSpec& spec) {
  detail::require_normalized(state, "apply_herald");
  if (spec.r != 0.0) require_guard_band(state, "apply_herald");
  return detail::condition(state, herald_op(state.dim(), spec), "apply_herald");
}

enum class Ladder { sub, add };

/// (b - beta) or (b^dag - conj(beta)) with beta = <b>.
inline HeraldOutcome displaced_ladder_orthogonalize(const PureState& state, Ladder which) {
  detail::require_normalized(state, "displaced_ladder_orthogonalize");
  const cplx beta = mean_amplitude(state);
  const auto d = static_cast<Eigen::Index>(state.dim());
  CMatrix m;
  if (which == Ladder::sub) {
    m = detail::lowering(state.dim()) - beta * CMatrix::Identity(d, d);
  } else {
    detail::require_dim(state.dim(), 2, "displaced_ladder_orthogonalize");
    require_guard_band(state, "displaced_ladder_orthogonalize");
    m = detail::lowering(state.dim()).adjoint() - std::conj(beta) * CMatrix::Identity(d, d);
  }
  return detail::condition(state, MatrixOperator(std::move(m)), "displaced_ladder_orthogonalize");
}

/// mu/sqrt(2) + Upsilon_perp: a superposition of the input and an orthogonal state.
inline HeraldOutcome qubit_synthesis(const PureState& state, cplx weight_mu, double r_scale) {
  detail::require_normalized(state, "qubit_synthesis");
  HeraldSpec spec = orthogonalizer_spec(state, r_scale);
  spec.mu = weight_mu;
  return apply_herald(state, spec);
}

/// |<psi|op psi>| / max(||op psi||, 1e-14).
inline double orthogonality_residual(const PureState& state, const MatrixOperator& op) {
  const Applied out = apply(op, state);
  const double n = std::sqrt(out.norm_squared);
  return std::abs(overlap(state, out.state)) / std::max(n, kHeraldingFloor);
}

}  // namespace phononforge
