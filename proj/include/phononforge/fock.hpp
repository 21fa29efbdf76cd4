#pragma once

// Truncated Fock-space linear algebra for a single bosonic mode.
//
// Conventions used throughout the library:
//   X_phi = (b e^{-i phi} + b^dag e^{i phi}) / sqrt(2), vacuum variance 1/2,
//   phase-space point (x, p) <-> alpha = (x + i p) / sqrt(2).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>

#include "phononforge/errors.hpp"
#include "phononforge/expm.hpp"

namespace phononforge {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kMeanDegeneracyTolerance = 1e-12;
inline constexpr double kGuardBandTolerance = 1e-10;
inline constexpr std::size_t kGuardBandLevels = 2;

/// Amplitudes over Fock levels 0..dim-1. Not necessarily normalized.
class PureState {
 public:
  explicit PureState(CVector amps) : amps_(std::move(amps)) {
    if (amps_.size() == 0) throw InvalidArgument("PureState: dim must be >= 1");
  }

  static PureState fock(std::size_t n, std::size_t dim) {
    if (dim == 0) throw InvalidArgument("fock: dim must be >= 1");
    if (n >= dim) {
      throw InvalidArgument("fock: level " + std::to_string(n) + " outside dim " +
                            std::to_string(dim));
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(n)] = 1.0;
    return PureState(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  cplx operator[](std::size_t n) const { return amps_[static_cast<Eigen::Index>(n)]; }

  double norm_squared() const { return amps_.squaredNorm(); }
  bool is_normalized(double tol = kNormTolerance) const {
    return std::abs(norm_squared() - 1.0) < tol;
  }

  PureState normalized() const {
    const double n = amps_.norm();
    if (!(n > 0.0)) throw HeraldingImpossible("cannot normalize a zero vector");
    return PureState(amps_ / n);
  }

  /// Zero-pads or cuts to `dim` levels (no renormalization).
  PureState resized(std::size_t dim) const {
    if (dim == 0) throw InvalidArgument("resized: dim must be >= 1");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    const auto keep = static_cast<Eigen::Index>(std::min(dim, this->dim()));
    v.head(keep) = amps_.head(keep);
    return PureState(std::move(v));
  }

 private:
  CVector amps_;
};

/// Dense operator from a dim_in space to a dim_out space.
class MatrixOperator {
 public:
  explicit MatrixOperator(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.cols() == 0) {
      throw InvalidArgument("MatrixOperator: empty matrix");
    }
  }

  static MatrixOperator identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return MatrixOperator(CMatrix::Identity(d, d));
  }

  std::size_t dim_in() const { return static_cast<std::size_t>(entries_.cols()); }
  std::size_t dim_out() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  cplx operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  MatrixOperator adjoint() const { return MatrixOperator(entries_.adjoint()); }

  friend MatrixOperator operator*(const MatrixOperator& a, const MatrixOperator& b) {
    if (a.dim_in() != b.dim_out()) throw InvalidArgument("operator product: dimension mismatch");
    return MatrixOperator(a.entries_ * b.entries_);
  }
  friend MatrixOperator operator+(const MatrixOperator& a, const MatrixOperator& b) {
    check_same_shape(a, b);
    return MatrixOperator(a.entries_ + b.entries_);
  }
  friend MatrixOperator operator-(const MatrixOperator& a, const MatrixOperator& b) {
    check_same_shape(a, b);
    return MatrixOperator(a.entries_ - b.entries_);
  }
  friend MatrixOperator operator*(cplx s, const MatrixOperator& a) {
    return MatrixOperator(s * a.entries_);
  }

  /// Largest entry modulus.
  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

 private:
  static void check_same_shape(const MatrixOperator& a, const MatrixOperator& b) {
    if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
      throw InvalidArgument("operator sum: dimension mismatch");
    }
  }

  CMatrix entries_;
};

namespace detail {

inline void require_dim(std::size_t dim, std::size_t min, const char* who) {
  if (dim < min) {
    throw InvalidArgument(std::string(who) + ": dim must be >= " + std::to_string(min) +
                          " (got " + std::to_string(dim) + ")");
  }
}

inline void require_normalized(const PureState& s, const char* who) {
  if (!s.is_normalized()) {
    throw InvalidArgument(std::string(who) + ": state is not normalized (norm^2 = " +
                          std::to_string(s.norm_squared()) + ")");
  }
}

inline CMatrix lowering(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}

}  // namespace detail

/// b, with b|n> = sqrt(n)|n-1>.
inline MatrixOperator annihilation_op(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("annihilation_op: invalid dimension 0");
  return MatrixOperator(detail::lowering(dim));
}

inline MatrixOperator creation_op(std::size_t dim) {
  detail::require_dim(dim, 2, "creation_op");
  return MatrixOperator(detail::lowering(dim).adjoint());
}

inline MatrixOperator number_op(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("number_op: invalid dimension 0");
  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
  return MatrixOperator(std::move(m));
}

/// X_phi = (b e^{-i phi} + b^dag e^{i phi}) / sqrt(2). The lower triangle is
/// written as the conjugate of the upper one so the result is exactly Hermitian.
inline MatrixOperator quadrature_op(std::size_t dim, double angle) {
  detail::require_dim(dim, 2, "quadrature_op");
  const auto d = static_cast<Eigen::Index>(dim);
  const cplx phase = std::polar(1.0 / std::numbers::sqrt2, -angle);
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) {
    const cplx upper = std::sqrt(static_cast<double>(n)) * phase;
    m(n - 1, n) = upper;
    m(n, n - 1) = std::conj(upper);
  }
  return MatrixOperator(std::move(m));
}

/// sqrt((n+i)!/n!) as a running product of square roots.
inline double sqrt_factorial_ratio(std::size_t n, std::size_t i) {
  double r = 1.0;
  for (std::size_t k = 1; k <= i; ++k) r *= std::sqrt(static_cast<double>(n + k));
  return r;
}

struct Applied {
  PureState state;  // unnormalized
  double norm_squared;
};

inline Applied apply(const MatrixOperator& op, const PureState& state) {
  if (op.dim_in() != state.dim()) {
    throw InvalidArgument("apply: operator expects dim " + std::to_string(op.dim_in()) +
                          ", state has dim " + std::to_string(state.dim()));
  }
  CVector out = op.entries() * state.amps();
  const double n2 = out.squaredNorm();
  return {PureState(std::move(out)), n2};
}

/// <s1|s2>
inline cplx overlap(const PureState& s1, const PureState& s2) {
  if (s1.dim() != s2.dim()) throw InvalidArgument("overlap: dimension mismatch");
  return s1.amps().dot(s2.amps());
}

inline cplx expectation(const MatrixOperator& op, const PureState& state) {
  if (op.dim_in() != state.dim() || op.dim_out() != state.dim()) {
    throw InvalidArgument("expectation: dimension mismatch");
  }
  return state.amps().dot(op.entries() * state.amps());
}

/// Total probability in the top k levels.
inline double top_occupation(const PureState& state, std::size_t k) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  const auto kk = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), d);
  return state.amps().tail(kk).squaredNorm();
}

/// Index of the highest level with |amp| above `threshold`; 0 for an all-zero vector.
inline std::size_t top_level(const PureState& state, double threshold = 1e-12) {
  for (std::size_t n = state.dim(); n-- > 0;) {
    if (std::abs(state[n]) > threshold) return n;
  }
  return 0;
}

/// Throws TruncationError unless the top guard-band levels are empty enough
/// for an operation that raises the excitation number.
inline void require_guard_band(const PureState& state, const char* who) {
  const double occ = top_occupation(state, kGuardBandLevels);
  if (occ >= kGuardBandTolerance) {
    throw TruncationError(std::string(who) + ": top " + std::to_string(kGuardBandLevels) +
                              " levels hold probability " + std::to_string(occ) +
                              "; enlarge dim",
                          state.dim() + kGuardBandLevels);
  }
}

/// <b> = sum_n conj(a_n) a_{n+1} sqrt(n+1), within the truncation.
inline cplx mean_amplitude(const PureState& state) {
  detail::require_normalized(state, "mean_amplitude");
  cplx acc = 0.0;
  for (std::size_t n = 0; n + 1 < state.dim(); ++n) {
    acc += std::conj(state[n]) * state[n + 1] * std::sqrt(static_cast<double>(n + 1));
  }
  return acc;
}

struct MeanAngle {
  double angle;     // arg<b>; 0 when degenerate
  bool degenerate;  // |<b>| below kMeanDegeneracyTolerance
};

inline MeanAngle mean_angle(const PureState& state) {
  const cplx m = mean_amplitude(state);
  if (std::abs(m) < kMeanDegeneracyTolerance) return {0.0, true};
  return {std::arg(m), false};
}

/// D(alpha) = exp(alpha b^dag - conj(alpha) b) from the truncated generator.
inline MatrixOperator displacement_op(cplx alpha, std::size_t dim) {
  if (dim == 0) throw InvalidArgument("displacement_op: invalid dimension 0");
  const CMatrix b = detail::lowering(dim);
  return MatrixOperator(expm(alpha * b.adjoint() - std::conj(alpha) * b));
}

/// S(z) = exp((conj(z) b^2 - z b^dag^2) / 2), z = r e^{i angle}. For angle 0
/// the X_0 quadrature is squeezed to variance e^{-2r}/2.
inline MatrixOperator squeeze_op(cplx z, std::size_t dim) {
  if (dim == 0) throw InvalidArgument("squeeze_op: invalid dimension 0");
  const CMatrix b = detail::lowering(dim);
  const CMatrix b2 = b * b;
  return MatrixOperator(expm(0.5 * (std::conj(z) * b2 - z * b2.adjoint())));
}

struct GaussianSpec {
  cplx displacement{0.0, 0.0};
  double squeeze_magnitude = 0.0;
  double squeeze_angle = 0.0;
};

namespace detail {

// D S |0> on a working space large enough that its own top levels are empty.
inline CVector gaussian_working_vector(const GaussianSpec& spec, std::size_t min_dim) {
  if (spec.squeeze_magnitude < 0.0) throw InvalidArgument("gaussian_state: squeeze magnitude < 0");
  std::size_t work = 2 * min_dim + 32;
  for (int attempt = 0; attempt < 6; ++attempt, work *= 2) {
    const cplx z = std::polar(spec.squeeze_magnitude, spec.squeeze_angle);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(work));
    v[0] = 1.0;
    if (spec.squeeze_magnitude != 0.0) v = squeeze_op(z, work).entries() * v;
    if (spec.displacement != cplx{0.0, 0.0}) v = displacement_op(spec.displacement, work).entries() * v;
    if (v.tail(work / 4).squaredNorm() < 1e-24) return v;
  }
  throw TruncationError("gaussian_state: parameters too large for working space");
}

}  // namespace detail

/// Probability the ideal state places at or above level dim-2 (outside the
/// guard band of a dim-level truncation).
inline double gaussian_leakage(const GaussianSpec& spec, std::size_t dim) {
  detail::require_dim(dim, kGuardBandLevels + 1, "gaussian_leakage");
  const CVector v = detail::gaussian_working_vector(spec, dim);
  const auto keep = static_cast<Eigen::Index>(dim - kGuardBandLevels);
  return v.tail(v.size() - keep).squaredNorm();
}

/// Normalized truncation of D(alpha) S(z) |0> to `dim` levels.
inline PureState gaussian_state(const GaussianSpec& spec, std::size_t dim) {
  detail::require_dim(dim, kGuardBandLevels + 1, "gaussian_state");
  const CVector v = detail::gaussian_working_vector(spec, dim);
  const auto keep = static_cast<Eigen::Index>(dim - kGuardBandLevels);
  const double leak = v.tail(v.size() - keep).squaredNorm();
  if (leak >= kGuardBandTolerance) {
    std::size_t need = dim;
    while (need - kGuardBandLevels < static_cast<std::size_t>(v.size()) &&
           v.tail(v.size() - static_cast<Eigen::Index>(need - kGuardBandLevels)).squaredNorm() >=
               kGuardBandTolerance) {
      ++need;
    }
    throw TruncationError("gaussian_state: leakage " + std::to_string(leak) +
                              " above tolerance; requires dim >= " + std::to_string(need),
                          need);
  }
  CVector out = v.head(static_cast<Eigen::Index>(dim));
  out /= out.norm();
  return PureState(std::move(out));
}

}  // namespace phononforge
