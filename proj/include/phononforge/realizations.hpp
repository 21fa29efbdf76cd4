#pragma once

// Exact small-space oracles for the physical schemes behind the heralded
// operators: a qubit coupled by Jaynes-Cummings, and two polarization modes
// scattering off a mechanical mode followed by a wave-plate and projection.
//
// Tensor ordering is fixed with the leftmost factor varying slowest:
//   (qubit, oscillator) and (a_h, a_v, b).

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "phononforge/channels.hpp"
#include "phononforge/expm.hpp"
#include "phononforge/fock.hpp"

namespace phononforge {

struct QubitAmplitudes {
  cplx A{1.0, 0.0};  // weight of |g>
  cplx B{0.0, 0.0};  // weight of |e>
};

/// Tensor product of truncated spaces, leftmost factor slowest-varying.
class CompositeSpace {
 public:
  explicit CompositeSpace(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims)) {
    if (dims_.empty()) throw InvalidArgument("CompositeSpace: no factors");
    for (auto d : dims_) {
      if (d == 0) throw InvalidArgument("CompositeSpace: factor dim must be >= 1");
    }
  }

  const std::vector<std::size_t>& factor_dims() const { return dims_; }
  std::size_t total_dim() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  }

  /// Flat index of a product basis vector.
  std::size_t index(std::span<const std::size_t> levels) const {
    if (levels.size() != dims_.size()) throw InvalidArgument("CompositeSpace: wrong level count");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (levels[k] >= dims_[k]) throw InvalidArgument("CompositeSpace: level out of range");
      idx = idx * dims_[k] + levels[k];
    }
    return idx;
  }

  /// `op` acting on factor `which`, identity elsewhere.
  CMatrix embed(const CMatrix& op, std::size_t which) const {
    if (which >= dims_.size()) throw InvalidArgument("CompositeSpace: factor out of range");
    if (static_cast<std::size_t>(op.rows()) != dims_[which]) {
      throw InvalidArgument("CompositeSpace: operator does not match factor dim");
    }
    CMatrix out = CMatrix::Identity(1, 1);
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const auto d = static_cast<Eigen::Index>(dims_[k]);
      const CMatrix factor = k == which ? op : CMatrix::Identity(d, d);
      out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
  }

 private:
  std::vector<std::size_t> dims_;
};

namespace detail {

inline void require_qubit(const QubitAmplitudes& q) {
  if (std::abs(std::norm(q.A) + std::norm(q.B) - 1.0) > kNormTolerance) {
    throw InvalidArgument("qubit amplitudes must satisfy |A|^2 + |B|^2 = 1");
  }
}

/// Oscillator block <qo| U |qi> of an operator on (qubit, oscillator).
inline CMatrix qubit_block(const CMatrix& u, std::size_t osc_dim, int qo, int qi) {
  const auto d = static_cast<Eigen::Index>(osc_dim);
  return u.block(qo * d, qi * d, d, d);
}

}  // namespace detail

/// Exact exp(-i H tau) with H = -i Omega (b sigma_+ - b^dag sigma_-), projected
/// on input A|g> + B|e> and output B*|g> - A*|e>.
inline MatrixOperator jc_conditional_map(const QubitAmplitudes& q, double omega_tau, std::size_t dim) {
  detail::require_qubit(q);
  if (!(omega_tau > 0.0 && omega_tau <= 0.1)) {
    throw InvalidArgument("jc_conditional_map: omega_tau must lie in (0, 0.1]");
  }
  detail::require_dim(dim, 3, "jc_conditional_map");
  const CompositeSpace space({2, dim});
  CMatrix sigma_plus = CMatrix::Zero(2, 2);
  sigma_plus(1, 0) = 1.0;  // |e><g|, basis (g, e)
  const CMatrix b = detail::lowering(dim);
  const CMatrix gen = space.embed(sigma_plus, 0) * space.embed(b, 1) -
                      space.embed(sigma_plus.adjoint(), 0) * space.embed(b.adjoint(), 1);
  const CMatrix u = expm(-omega_tau * gen);
  // <out| = B <g| - A <e|
  const cplx out_g = q.B;
  const cplx out_e = -q.A;
  const CMatrix m = out_g * (detail::qubit_block(u, dim, 0, 0) * q.A + detail::qubit_block(u, dim, 0, 1) * q.B) +
                    out_e * (detail::qubit_block(u, dim, 1, 0) * q.A + detail::qubit_block(u, dim, 1, 1) * q.B);
  return MatrixOperator(m);
}

/// Omega tau (A^2 b + B^2 b^dag).
inline MatrixOperator jc_first_order(const QubitAmplitudes& q, double omega_tau, std::size_t dim) {
  detail::require_dim(dim, 2, "jc_first_order");
  const CMatrix b = detail::lowering(dim);
  return MatrixOperator(omega_tau * (q.A * q.A * b + q.B * q.B * b.adjoint()));
}

enum class OpticalPort { vacuum, h, v };

/// Full evolution on (a_h, a_v, b): wave-plate after exp of the generator
///   theta/2 a_h^dag b e^{-i phi} - r a_v^dag b^dag e^{i varphi} + mu a_h^dag - H.c.
class OptomechEvolution {
 public:
  OptomechEvolution(const HeraldSpec& spec, std::size_t optical_dim, std::size_t mech_dim)
      : space_({optical_dim, optical_dim, mech_dim}), mech_dim_(mech_dim) {
    detail::require_dim(optical_dim, 3, "optomech: optical_dim");
    detail::require_dim(mech_dim, 2, "optomech: mech_dim");
    for (double p : {spec.theta_half, spec.r, std::abs(spec.mu)}) {
      if (!(p >= 0.0 && p <= 0.1)) throw InvalidArgument("optomech: spec parameters must lie in [0, 0.1]");
    }
    const CMatrix a = detail::lowering(optical_dim);
    const CMatrix ah = space_.embed(a, 0);
    const CMatrix av = space_.embed(a, 1);
    const CMatrix b = space_.embed(detail::lowering(mech_dim), 2);
    const CMatrix raise = spec.theta_half * std::polar(1.0, -spec.phi) * ah.adjoint() * b -
                          spec.r * std::polar(1.0, spec.varphi) * av.adjoint() * b.adjoint() +
                          spec.mu * ah.adjoint();
    const CMatrix gen = raise - raise.adjoint();
    // a_h^dag -> (a_h^dag + a_v^dag)/sqrt2, a_v^dag -> (a_v^dag - a_h^dag)/sqrt2
    const CMatrix plate_gen = ah.adjoint() * av - av.adjoint() * ah;
    const CMatrix plate = expm(-(std::numbers::pi / 4.0) * plate_gen);
    unitary_ = plate * expm(gen);
  }

  const CMatrix& unitary() const { return unitary_; }
  const CompositeSpace& space() const { return space_; }

  /// Mechanical operator <port| U |0_h, 0_v>.
  MatrixOperator conditional_map(OpticalPort port) const {
    std::size_t nh = 0;
    std::size_t nv = 0;
    if (port == OpticalPort::h) nh = 1;
    if (port == OpticalPort::v) nv = 1;
    const auto d = static_cast<Eigen::Index>(mech_dim_);
    const std::size_t row_levels[] = {nh, nv, 0};
    const std::size_t col_levels[] = {0, 0, 0};
    const auto row = static_cast<Eigen::Index>(space_.index(row_levels));
    const auto col = static_cast<Eigen::Index>(space_.index(col_levels));
    return MatrixOperator(unitary_.block(row, col, d, d));
  }

  struct Outcomes {
    double vacuum = 0.0;
    double one_h = 0.0;
    double one_v = 0.0;
    double multi = 0.0;  // two or more photons in total
  };

  /// Optical detection statistics for optical vacuum input and a mechanical probe.
  Outcomes outcomes(const PureState& probe) const {
    if (probe.dim() != mech_dim_) throw InvalidArgument("optomech: probe dim mismatch");
    const std::size_t od = space_.factor_dims()[0];
    CVector in = CVector::Zero(static_cast<Eigen::Index>(space_.total_dim()));
    in.head(static_cast<Eigen::Index>(mech_dim_)) = probe.amps();
    const CVector out = unitary_ * in;
    Outcomes o;
    for (std::size_t nh = 0; nh < od; ++nh) {
      for (std::size_t nv = 0; nv < od; ++nv) {
        const std::size_t lv[] = {nh, nv, 0};
        const auto start = static_cast<Eigen::Index>(space_.index(lv));
        const double p = out.segment(start, static_cast<Eigen::Index>(mech_dim_)).squaredNorm();
        const std::size_t total = nh + nv;
        if (total == 0) o.vacuum += p;
        else if (total >= 2) o.multi += p;
        else if (nh == 1) o.one_h += p;
        else o.one_v += p;
      }
    }
    return o;
  }

 private:
  CompositeSpace space_;
  std::size_t mech_dim_;
  CMatrix unitary_;
};

inline MatrixOperator optomech_conditional_map(const HeraldSpec& spec, std::size_t optical_dim,
                                               std::size_t mech_dim,
                                               OpticalPort port = OpticalPort::h) {
  return OptomechEvolution(spec, optical_dim, mech_dim).conditional_map(port);
}

/// Probability of two or more photons across both optical outputs.
inline double multiphoton_leakage(const HeraldSpec& spec, std::size_t optical_dim, std::size_t mech_dim,
                                  const PureState& probe) {
  detail::require_normalized(probe, "multiphoton_leakage");
  return OptomechEvolution(spec, optical_dim, mech_dim).outcomes(probe).multi;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InvalidArgument("loglog_slope: need >= 2 matched points");
  double mx = 0.0;
  double my = 0.0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && ys[i] > 0.0)) throw InvalidArgument("loglog_slope: values must be positive");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

struct ConvergenceReport {
  std::vector<double> eps;
  std::vector<double> residuals;  // max-norm ||exact - first order||
  double slope = 0.0;
};

inline ConvergenceReport jc_convergence(const QubitAmplitudes& q, std::size_t dim,
                                        std::span<const double> eps) {
  ConvergenceReport rep;
  for (double e : eps) {
    rep.eps.push_back(e);
    rep.residuals.push_back((jc_conditional_map(q, e, dim) - jc_first_order(q, e, dim)).max_abs());
  }
  rep.slope = loglog_slope(rep.eps, rep.residuals);
  return rep;
}

/// Scales theta/2, r and |mu| of `shape` (taken as unit-strength weights) by each eps
/// and compares the chosen port against herald_op with the matching detection.
inline ConvergenceReport optomech_convergence(const HeraldSpec& shape, std::size_t optical_dim,
                                              std::size_t mech_dim, std::span<const double> eps,
                                              OpticalPort port = OpticalPort::h) {
  ConvergenceReport rep;
  for (double e : eps) {
    HeraldSpec s = shape;
    s.theta_half *= e;
    s.r *= e;
    s.mu *= e;
    s.detection = port == OpticalPort::v ? Detection::v : Detection::h;
    const MatrixOperator exact = optomech_conditional_map(s, optical_dim, mech_dim, port);
    rep.eps.push_back(e);
    rep.residuals.push_back((exact - herald_op(mech_dim, s)).max_abs());
  }
  rep.slope = loglog_slope(rep.eps, rep.residuals);
  return rep;
}

}  // namespace phononforge
