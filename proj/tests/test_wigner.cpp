#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phononforge/channels.hpp"
#include "phononforge/sampling.hpp"
#include "phononforge/wigner.hpp"

namespace pf = phononforge;
using pf::cplx;
using std::numbers::pi;

namespace {

// W_n(x, p) = (-1)^n / pi exp(-(x^2 + p^2)) L_n(2(x^2 + p^2)), Laguerre by recurrence.
double fock_wigner(std::size_t n, double x, double p) {
  const double r2 = x * x + p * p;
  const double t = 2.0 * r2;
  double l0 = 1.0;
  double l1 = 1.0 - t;
  double ln = n == 0 ? l0 : l1;
  for (std::size_t k = 1; k < n; ++k) {
    ln = ((2.0 * k + 1.0 - t) * l1 - static_cast<double>(k) * l0) / (k + 1.0);
    l0 = l1;
    l1 = ln;
  }
  return (n % 2 == 0 ? 1.0 : -1.0) / pi * std::exp(-r2) * ln;
}

}  // namespace

TEST(WignerPoint, VacuumAndOne) {
  EXPECT_NEAR(pf::wigner_point(pf::PureState::fock(0, 8), 0.0, 0.0), 0.3183098862, 1e-10);
  EXPECT_NEAR(pf::wigner_point(pf::PureState::fock(1, 8), 0.0, 0.0), -0.3183098862, 1e-10);
}

TEST(WignerPoint, CoherentPeak) {
  const pf::PureState s = pf::gaussian_state({1.0, 0.0, 0.0}, 30);
  EXPECT_NEAR(pf::wigner_point(s, std::numbers::sqrt2, 0.0), 1.0 / pi, 1e-10);
  EXPECT_LT(pf::wigner_point(s, std::numbers::sqrt2 + 0.1, 0.0), 1.0 / pi);
}

TEST(WignerPoint, FockParityAtOrigin) {
  for (std::size_t n = 0; n <= 6; ++n) {
    EXPECT_NEAR(pf::wigner_point(pf::PureState::fock(n, 30), 0.0, 0.0), (n % 2 == 0 ? 1.0 : -1.0) / pi, 1e-9);
  }
}

TEST(WignerPoint, MatchesLaguerreClosedForm) {
  std::mt19937_64 rng(6);
  for (std::size_t n = 0; n <= 8; ++n) {
    const pf::PureState s = pf::PureState::fock(n, 12);
    const pf::DisplacedParity w(s, 4.0);
    for (int k = 0; k < 20; ++k) {
      const double x = pf::sampling::uniform_real(rng, -4.0, 4.0);
      const double p = pf::sampling::uniform_real(rng, -4.0, 4.0);
      EXPECT_NEAR(w(x, p), fock_wigner(n, x, p), 1e-11) << n << " " << x << " " << p;
    }
  }
}

TEST(WignerPoint, DisplacementCovariance) {
  std::mt19937_64 rng(7);
  const pf::PureState psi = pf::sampling::random_state(rng, 6, 6);
  const cplx alpha{0.7, -0.4};
  const pf::PureState moved(pf::displacement_op(alpha, 60).entries() * psi.resized(60).amps());
  const double dx = std::numbers::sqrt2 * alpha.real();
  const double dp = std::numbers::sqrt2 * alpha.imag();
  for (int k = 0; k < 10; ++k) {
    const double x = pf::sampling::uniform_real(rng, -2.0, 2.0);
    const double p = pf::sampling::uniform_real(rng, -2.0, 2.0);
    EXPECT_NEAR(pf::wigner_point(moved.normalized(), x + dx, p + dp), pf::wigner_point(psi, x, p), 1e-8);
  }
}

TEST(WignerPoint, ColumnAndRowVectorsMatchExpm) {
  const pf::PureState psi = pf::gaussian_state({{0.3, 0.2}, 0.2, 0.5}, 20);
  const pf::DisplacedParity w(psi, 2.0);
  const std::size_t d = w.working_dim();
  const pf::CVector padded = psi.resized(d).amps();
  const double x = 1.3;
  const double p = -0.7;
  const pf::CVector col = pf::displacement_op(-std::numbers::sqrt2 * x, d).entries() * padded;
  pf::CVector parity = padded;
  for (std::size_t n = 1; n < d; n += 2) parity[static_cast<Eigen::Index>(n)] *= -1.0;
  const pf::CVector row = pf::displacement_op(cplx{0.0, std::numbers::sqrt2 * p}, d).entries() * parity;
  EXPECT_LT((w.column_vector(x) - col).head(60).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((w.row_vector(p) - row).head(60).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WignerPoint, OutsideReachRejected) {
  const pf::DisplacedParity w(pf::PureState::fock(0, 4), 1.0);
  EXPECT_THROW(w(1.5, 0.0), pf::InvalidArgument);
  EXPECT_THROW(pf::wigner_point(pf::PureState(pf::CVector::Ones(3)), 0.0, 0.0), pf::InvalidArgument);
}

TEST(WignerGrid, VacuumNormalization) {
  const pf::PhaseSpaceGrid g = pf::wigner_grid(pf::PureState::fock(0, 8), pf::GridSpec::square(6.0, 0.05));
  EXPECT_EQ(g.xs.size(), 241u);
  EXPECT_EQ(g.values.size(), g.xs.size() * g.ps.size());
  EXPECT_NEAR(pf::grid_integral(g), 1.0, 1e-6);
}

TEST(WignerGrid, HalfPlane) {
  const pf::PhaseSpaceGrid g = pf::wigner_grid(pf::PureState::fock(0, 8), {0.0, 6.0, -6.0, 6.0, 0.05});
  EXPECT_NEAR(pf::grid_integral(g), 0.5, 1e-6);
}

TEST(WignerGrid, ZeroValues) {
  pf::PhaseSpaceGrid g;
  g.step = 0.1;
  g.xs = {0.0, 0.1, 0.2};
  g.ps = {0.0, 0.1};
  g.values.assign(6, 0.0);
  EXPECT_EQ(pf::grid_integral(g), 0.0);
}

TEST(WignerGrid, NormalizationFockAndGaussian) {
  for (std::size_t n = 0; n <= 4; ++n) {
    const pf::PhaseSpaceGrid g = pf::wigner_grid(pf::PureState::fock(n, 12), pf::GridSpec::square(7.0, 0.05));
    EXPECT_NEAR(pf::grid_integral(g), 1.0, 1e-5) << n;
  }
  const pf::PureState s = pf::gaussian_state({{0.5, -0.5}, 0.3, 1.0}, 30);
  EXPECT_NEAR(pf::grid_integral(pf::wigner_grid(s, pf::GridSpec::square(7.0, 0.05))), 1.0, 1e-5);
}

TEST(WignerGrid, FockOneRadialAndMinimum) {
  const pf::PhaseSpaceGrid g = pf::wigner_grid(pf::PureState::fock(1, 8), pf::GridSpec::square(3.0, 0.1));
  double lo = 1.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.values[k] < lo) {
      lo = g.values[k];
      at = k;
    }
  }
  EXPECT_NEAR(lo, -1.0 / pi, 1e-12);
  EXPECT_EQ(g.xs[at / g.ps.size()], 0.0);
  EXPECT_EQ(g.ps[at % g.ps.size()], 0.0);
  // swapping x and p is a rotation by pi/2
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    for (std::size_t j = 0; j < g.ps.size(); ++j) EXPECT_NEAR(g.at(i, j), g.at(j, i), 1e-12);
  }
}

TEST(WignerGrid, OriginOnAxes) {
  const pf::PhaseSpaceGrid g = pf::wigner_grid(pf::PureState::fock(0, 4), {-1.03, 2.0, -0.5, 0.77, 0.1});
  EXPECT_NE(std::find(g.xs.begin(), g.xs.end(), 0.0), g.xs.end());
  EXPECT_NE(std::find(g.ps.begin(), g.ps.end(), 0.0), g.ps.end());
  EXPECT_NEAR(g.xs.front(), -1.0, 1e-15);
  EXPECT_NEAR(g.ps.back(), 0.7, 1e-15);
}

TEST(WignerGrid, OrthogonalizedStateNegative) {
  const pf::PureState psi = pf::gaussian_state({std::polar(1.5, pi / 4.0), 0.5, 0.0}, 48);
  const pf::HeraldOutcome out = pf::apply_herald(psi, pf::orthogonalizer_spec(psi, 0.1));
  const pf::PhaseSpaceGrid g = pf::wigner_grid(out.state, pf::GridSpec::square(5.0, 0.1));
  EXPECT_LT(*std::min_element(g.values.begin(), g.values.end()), 0.0);
  // the input is Gaussian up to the truncation tail (amplitudes ~1e-5)
  const pf::PhaseSpaceGrid g0 = pf::wigner_grid(psi, pf::GridSpec::square(5.0, 0.1));
  EXPECT_GT(*std::min_element(g0.values.begin(), g0.values.end()), -1e-6);
}

TEST(WignerGrid, PointwiseAgreesWithGrid) {
  const pf::PureState s = pf::PureState::fock(3, 8);
  const pf::PhaseSpaceGrid g = pf::wigner_grid(s, pf::GridSpec::square(2.0, 0.5));
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    for (std::size_t j = 0; j < g.ps.size(); ++j) {
      EXPECT_NEAR(g.at(i, j), pf::wigner_point(s, g.xs[i], g.ps[j]), 1e-12);
    }
  }
}

TEST(WignerGrid, BadSpecs) {
  const pf::PureState s = pf::PureState::fock(0, 4);
  EXPECT_THROW(pf::wigner_grid(s, {-1.0, 1.0, -1.0, 1.0, 0.0}), pf::InvalidArgument);
  EXPECT_THROW(pf::wigner_grid(s, {1.0, -1.0, -1.0, 1.0, 0.1}), pf::InvalidArgument);
  EXPECT_THROW(pf::wigner_grid(s, {-1.0, INFINITY, -1.0, 1.0, 0.1}), pf::InvalidArgument);
}
