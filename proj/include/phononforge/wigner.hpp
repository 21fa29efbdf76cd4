#pragma once

// Wigner function of a pure state by displaced parity:
//   W(x, p) = (1/pi) <psi| D(alpha) Pi D(alpha)^dag |psi>,  alpha = (x + i p)/sqrt(2),
// normalized so that the integral over dx dp is 1 (vacuum peak 1/pi).
//
// D(alpha) Pi D(alpha)^dag = D(2 alpha) Pi and D(2 alpha) = e^{2ixp} D(a) D(ic) with
// a = sqrt2 x, c = sqrt2 p, so every grid point is one inner product between a
// per-column vector D(-a)|psi> and a per-row vector D(ic) Pi |psi>. Both
// displacements are exponentials of truncated quadratures, taken through one
// real symmetric eigendecomposition of X on a working space sized to the grid.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "phononforge/fock.hpp"

namespace phononforge {

inline constexpr double kWignerImagTolerance = 1e-10;

class DisplacedParity {
 public:
  /// `reach` bounds max(|x|, |p|) of every point that will be evaluated.
  DisplacedParity(const PureState& state, double reach) : dim_(state.dim()) {
    detail::require_normalized(state, "wigner");
    if (!(reach >= 0.0) || !std::isfinite(reach)) throw InvalidArgument("wigner: non-finite bounds");
    const double s = std::numbers::sqrt2 * reach;
    const double top = static_cast<double>(top_level(state));
    const double need = std::pow(s + std::sqrt(top) + 7.0, 2.0) + 8.0;
    work_ = std::max<std::size_t>(dim_ + 8, static_cast<std::size_t>(std::ceil(need)));
    reach_ = reach;

    const auto w = static_cast<Eigen::Index>(work_);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(w, w);
    for (Eigen::Index n = 1; n < w; ++n) {
      const double e = std::sqrt(static_cast<double>(n) / 2.0);
      x(n - 1, n) = e;
      x(n, n - 1) = e;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    if (es.info() != Eigen::Success) throw NumericalError("wigner: quadrature eigendecomposition failed");
    q_ = es.eigenvectors();
    lambda_ = es.eigenvalues();

    CVector padded = CVector::Zero(w);
    padded.head(static_cast<Eigen::Index>(dim_)) = state.amps();
    // R = diag(i^n) maps X onto the generator of real displacements.
    CVector r_dag_psi(w);
    CVector parity_psi(w);
    for (Eigen::Index n = 0; n < w; ++n) {
      r_dag_psi[n] = std::conj(i_pow(n)) * padded[n];
      parity_psi[n] = (n % 2 == 0 ? 1.0 : -1.0) * padded[n];
    }
    qt_psi_ = q_.transpose() * r_dag_psi;
    qt_parity_psi_ = q_.transpose() * parity_psi;
  }

  std::size_t working_dim() const { return work_; }

  /// D(-a)|psi> for real a.
  CVector column_vector(double x) const {
    const double a = std::numbers::sqrt2 * x;
    CVector v(lambda_.size());
    for (Eigen::Index k = 0; k < lambda_.size(); ++k) {
      v[k] = std::polar(1.0, a * std::numbers::sqrt2 * lambda_[k]) * qt_psi_[k];
    }
    CVector out = q_ * v;
    for (Eigen::Index n = 0; n < out.size(); ++n) out[n] *= i_pow(n);
    return out;
  }

  /// D(ic) Pi |psi> for real c.
  CVector row_vector(double p) const {
    const double c = std::numbers::sqrt2 * p;
    CVector v(lambda_.size());
    for (Eigen::Index k = 0; k < lambda_.size(); ++k) {
      v[k] = std::polar(1.0, c * std::numbers::sqrt2 * lambda_[k]) * qt_parity_psi_[k];
    }
    return q_ * v;
  }

  static double combine(double x, double p, const CVector& col, const CVector& row) {
    const cplx w = std::polar(1.0 / std::numbers::pi, 2.0 * x * p) * col.dot(row);
    if (std::abs(w.imag()) > kWignerImagTolerance) {
      throw NumericalError("wigner: imaginary residue " + std::to_string(w.imag()) + " at (" +
                           std::to_string(x) + ", " + std::to_string(p) + ")");
    }
    return w.real();
  }

  double operator()(double x, double p) const {
    if (std::max(std::abs(x), std::abs(p)) > reach_ * (1.0 + 1e-12)) {
      throw InvalidArgument("wigner: point outside the evaluator reach");
    }
    return combine(x, p, column_vector(x), row_vector(p));
  }

 private:
  static cplx i_pow(Eigen::Index n) {
    switch (n % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  std::size_t dim_;
  std::size_t work_ = 0;
  double reach_ = 0.0;
  Eigen::MatrixXd q_;
  Eigen::VectorXd lambda_;
  CVector qt_psi_;
  CVector qt_parity_psi_;
};

inline double wigner_point(const PureState& state, double x, double p) {
  return DisplacedParity(state, std::max(std::abs(x), std::abs(p)))(x, p);
}

struct GridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  double step = 0.05;

  static GridSpec square(double bound, double step) { return {-bound, bound, -bound, bound, step}; }
};

/// Samples are integer multiples of `step`, so the origin is on the grid
/// whenever the bounds straddle it. values is row-major with rows over x.
struct PhaseSpaceGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double step = 0.0;
  std::vector<double> xs;
  std::vector<double> ps;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * ps.size() + j]; }
};

namespace detail {

inline std::vector<double> axis(double lo, double hi, double step) {
  const auto k0 = static_cast<long long>(std::ceil(lo / step - 1e-9));
  const auto k1 = static_cast<long long>(std::floor(hi / step + 1e-9));
  std::vector<double> out;
  for (long long k = k0; k <= k1; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

}  // namespace detail

inline PhaseSpaceGrid wigner_grid(const PureState& state, const GridSpec& spec) {
  if (!(spec.step > 0.0) || !std::isfinite(spec.step)) throw InvalidArgument("wigner_grid: step must be > 0");
  for (double b : {spec.x_min, spec.x_max, spec.p_min, spec.p_max}) {
    if (!std::isfinite(b)) throw InvalidArgument("wigner_grid: bounds must be finite");
  }
  if (spec.x_min > spec.x_max || spec.p_min > spec.p_max) throw InvalidArgument("wigner_grid: empty bounds");
  PhaseSpaceGrid g;
  g.x_min = spec.x_min;
  g.x_max = spec.x_max;
  g.p_min = spec.p_min;
  g.p_max = spec.p_max;
  g.step = spec.step;
  g.xs = detail::axis(spec.x_min, spec.x_max, spec.step);
  g.ps = detail::axis(spec.p_min, spec.p_max, spec.step);
  if (g.xs.empty() || g.ps.empty()) throw InvalidArgument("wigner_grid: no sample points inside bounds");

  double reach = 0.0;
  for (double v : {spec.x_min, spec.x_max, spec.p_min, spec.p_max}) reach = std::max(reach, std::abs(v));
  const DisplacedParity eval(state, reach);
  std::vector<CVector> rows;
  rows.reserve(g.ps.size());
  for (double p : g.ps) rows.push_back(eval.row_vector(p));
  g.values.resize(g.xs.size() * g.ps.size());
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    const CVector col = eval.column_vector(g.xs[i]);
    for (std::size_t j = 0; j < g.ps.size(); ++j) {
      g.values[i * g.ps.size() + j] = DisplacedParity::combine(g.xs[i], g.ps[j], col, rows[j]);
    }
  }
  return g;
}

/// Trapezoidal estimate of the integral of W over the grid rectangle.
inline double grid_integral(const PhaseSpaceGrid& g) {
  auto weight = [](std::size_t k, std::size_t n) { return (n > 1 && (k == 0 || k + 1 == n)) ? 0.5 : 1.0; };
  double acc = 0.0;
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    for (std::size_t j = 0; j < g.ps.size(); ++j) {
      acc += weight(i, g.xs.size()) * weight(j, g.ps.size()) * g.at(i, j);
    }
  }
  return acc * g.step * g.step;
}

}  // namespace phononforge
