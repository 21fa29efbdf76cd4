#pragma once

// Complex polynomial roots: Aberth-Ehrlich simultaneous iteration with a
// companion-matrix eigenvalue fallback.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "phononforge/errors.hpp"

namespace phononforge {

struct RootOptions {
  double tolerance = 1e-13;
  int max_iterations = 500;
  std::uint64_t seed = 0;
};

struct RootResult {
  std::vector<std::complex<double>> roots;  // ascending |x|, ties by ascending arg
  int iterations = 0;
  bool used_fallback = false;
};

namespace detail {

using cd = std::complex<double>;

// Horner for p and p' with ascending coefficients.
inline void horner(std::span<const cd> c, cd x, cd& p, cd& dp) {
  p = c.back();
  dp = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[k];
  }
}

inline void sort_roots(std::vector<cd>& roots) {
  std::stable_sort(roots.begin(), roots.end(), [](cd a, cd b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max({1.0, ma, mb})) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
}

inline std::vector<cd> companion_roots(std::span<const cd> c) {
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) return {};
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

}  // namespace detail

/// Roots of sum_i c[i] x^i. Leading coefficient must be nonzero; exact zero
/// low-order coefficients are returned as zero roots without iteration.
inline RootResult find_roots(std::span<const std::complex<double>> coeffs, const RootOptions& opt = {}) {
  using detail::cd;
  if (coeffs.empty() || coeffs.back() == cd{0.0, 0.0}) {
    throw InvalidArgument("find_roots: leading coefficient must be nonzero");
  }
  RootResult res;
  std::size_t zeros = 0;
  while (zeros + 1 < coeffs.size() && coeffs[zeros] == cd{0.0, 0.0}) ++zeros;
  res.roots.assign(zeros, cd{0.0, 0.0});
  const std::span<const cd> c = coeffs.subspan(zeros);
  const std::size_t n = c.size() - 1;
  if (n == 0) return res;
  if (n == 1) {
    res.roots.push_back(-c[0] / c[1]);
    detail::sort_roots(res.roots);
    return res;
  }

  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i] / c[n]));
  radius += 1.0;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<cd> z(n);
  const double offset = 0.4;
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5 + jitter(rng)) /
                           static_cast<double>(n) + offset;
    z[k] = std::polar(radius * (1.0 + 0.1 * jitter(rng)), ang);
  }

  bool converged = false;
  int it = 0;
  for (; it < opt.max_iterations && !converged; ++it) {
    converged = true;
    for (std::size_t k = 0; k < n; ++k) {
      cd p;
      cd dp;
      detail::horner(c, z[k], p, dp);
      if (p == cd{0.0, 0.0}) continue;
      const cd ratio = p / dp;
      cd sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      const cd step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      if (!(std::abs(step) <= opt.tolerance * std::max(1.0, std::abs(z[k])))) converged = false;
    }
  }
  res.iterations = it;

  if (!converged) {
    std::vector<cd> fallback = detail::companion_roots(c);
    if (fallback.size() != n) {
      throw NonConvergence("find_roots: Aberth iteration did not converge after " + std::to_string(it) +
                           " iterations (degree " + std::to_string(n) +
                           ") and companion eigenvalues failed");
    }
    z = std::move(fallback);
    res.used_fallback = true;
  }
  res.roots.insert(res.roots.end(), z.begin(), z.end());
  detail::sort_roots(res.roots);
  return res;
}

/// Ascending coefficients of scale * prod_j (mu_j + nu_j x).
inline std::vector<std::complex<double>> expand_linear_factors(
    std::span<const std::pair<std::complex<double>, std::complex<double>>> factors,
    std::complex<double> scale) {
  std::vector<std::complex<double>> poly{scale};
  for (const auto& [mu, nu] : factors) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i] * mu;
      next[i + 1] += poly[i] * nu;
    }
    poly = std::move(next);
  }
  return poly;
}

}  // namespace phononforge
