#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phononforge/sampling.hpp"
#include "phononforge/transform.hpp"

namespace pf = phononforge;
using pf::cplx;

namespace {

pf::PureState superposition(std::size_t dim, std::initializer_list<std::pair<std::size_t, cplx>> terms) {
  pf::CVector v = pf::CVector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& [n, a] : terms) v[static_cast<Eigen::Index>(n)] = a;
  return pf::PureState(v / v.norm());
}

pf::PureState paper_target() { return superposition(5, {{1, 1.0}, {4, 1.0}}); }

}  // namespace

TEST(Solve, FockFourExample) {
  const std::vector<cplx> c = pf::solve_coefficients(pf::PureState::fock(4, 5), paper_target());
  ASSERT_EQ(c.size(), 5u);
  EXPECT_LT(std::abs(c[1]), 1e-12);
  EXPECT_LT(std::abs(c[2]), 1e-12);
  EXPECT_LT(std::abs(c[4]), 1e-12);
  EXPECT_LT(std::abs(c[0] / c[3] - std::sqrt(24.0)), 1e-10);
}

TEST(Solve, IdentityTransformation) {
  std::mt19937_64 rng(1);
  const pf::PureState psi = pf::sampling::random_state(rng, 6, 6);
  const std::vector<cplx> c = pf::solve_coefficients(psi, psi);
  EXPECT_LT(std::abs(c[0] - 1.0), 1e-12);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(std::abs(c[i]), 1e-12);
}

TEST(Solve, DoubleSubtraction) {
  const pf::PureState psi = superposition(3, {{0, 1.0}, {2, 1.0}});
  const std::vector<cplx> c = pf::solve_coefficients(psi, pf::PureState::fock(0, 3));
  EXPECT_LT(std::abs(c[0]), 1e-15);
  EXPECT_LT(std::abs(c[1]), 1e-15);
  EXPECT_LT(std::abs(c[2] - 1.0), 1e-15);
}

TEST(Solve, UnsolvableWithoutTopLevel) {
  EXPECT_THROW(pf::solve_coefficients(pf::PureState::fock(2, 5), paper_target()), pf::InvalidArgument);
}

TEST(Solve, SystemTriangularWithDiagonal) {
  std::mt19937_64 rng(2);
  const pf::PureState psi = pf::sampling::random_state(rng, 6, 6);
  const pf::CMatrix m = pf::coefficient_system(psi);
  const std::size_t N = 5;
  for (std::size_t row = 0; row <= N; ++row) {
    const std::size_t n = N - row;
    for (std::size_t col = row + 1; col <= N; ++col) EXPECT_EQ(m(row, col), cplx{});
    EXPECT_LT(std::abs(m(row, row) - psi[N] * pf::sqrt_factorial_ratio(n, N - n)), 1e-14);
  }
  const pf::PureState phi = pf::sampling::random_state(rng, 6, 6);
  EXPECT_LT(pf::coefficient_residual(psi, phi, pf::solve_coefficients(psi, phi)), 1e-10);
}

TEST(Factor, PaperExampleStepEquations) {
  const std::vector<cplx> c = pf::solve_coefficients(pf::PureState::fock(4, 5), paper_target());
  const pf::TransformPlan plan = pf::factor_plan(c);
  ASSERT_EQ(plan.degree, 3u);
  ASSERT_EQ(plan.steps.size(), 3u);
  const cplx n1 = plan.steps[0].nu, n2 = plan.steps[1].nu, n3 = plan.steps[2].nu;
  for (const auto& s : plan.steps) EXPECT_EQ(s.mu, cplx{1.0});
  EXPECT_LT(std::abs(n1 + n2 + n3), 1e-9);
  EXPECT_LT(std::abs(n1 * n2 + n1 * n3 + n2 * n3), 1e-9);
  EXPECT_LT(std::abs(std::sqrt(24.0) * n1 * n2 * n3 - 1.0), 1e-9);
  EXPECT_LT(pf::expansion_error(plan), 1e-9);
}

TEST(Factor, PureDoubleSubtraction) {
  const pf::TransformPlan plan = pf::factor_plan({0.0, 0.0, 1.0});
  ASSERT_EQ(plan.steps.size(), 2u);
  for (const auto& s : plan.steps) {
    EXPECT_EQ(s.mu, cplx{});
    EXPECT_EQ(s.nu, cplx{1.0});
  }
  EXPECT_LT(pf::expansion_error(plan), 1e-15);
}

TEST(Factor, RandomPolynomialsReexpand) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::size_t deg = 1 + static_cast<std::size_t>(k % 10);
    std::vector<cplx> c(deg + 1);
    for (auto& v : c) v = {g(rng), g(rng)};
    for (auto norm : {pf::StepNormalization::unit_identity, pf::StepNormalization::unit_max}) {
      pf::FactorOptions opt;
      opt.normalization = norm;
      opt.seed = static_cast<std::uint64_t>(k);
      const pf::TransformPlan plan = pf::factor_plan(c, opt);
      EXPECT_EQ(plan.steps.size(), deg);
      EXPECT_LT(pf::expansion_error(plan), 1e-9);
      if (norm == pf::StepNormalization::unit_max) {
        for (const auto& s : plan.steps) EXPECT_LE(std::max(std::abs(s.mu), std::abs(s.nu)), 1.0 + 1e-15);
      }
    }
  }
}

TEST(Factor, TrimsAndPads) {
  pf::FactorOptions opt;
  opt.pad_to = 4;
  const pf::TransformPlan plan = pf::factor_plan({1.0, 2.0, 1e-14}, opt);
  EXPECT_EQ(plan.degree, 1u);
  ASSERT_EQ(plan.steps.size(), 4u);
  for (std::size_t j = 1; j < 4; ++j) {
    EXPECT_EQ(plan.steps[j].mu, cplx{1.0});
    EXPECT_EQ(plan.steps[j].nu, cplx{});
  }
  EXPECT_THROW(pf::factor_plan({0.0, 0.0}), pf::InvalidArgument);
}

TEST(Execute, PaperExample) {
  const pf::PureState psi = pf::PureState::fock(4, 5);
  const pf::TransformPlan plan = pf::plan_transformation(psi, paper_target());
  const pf::ExecutionTrace t = pf::execute_plan(psi, plan, paper_target());
  EXPECT_GT(*t.final_fidelity, 1.0 - 1e-10);
  double prod = 1.0;
  for (const auto& s : t.per_step) prod *= s.probability;
  EXPECT_LT(std::abs(prod - t.total_probability) / t.total_probability, 1e-12);
  // total = ||prod_j (mu_j + nu_j b)/sqrt2 psi||^2
  pf::CVector v = psi.amps();
  for (const auto& s : plan.steps) v = pf::step_operator(s, 5).entries() * v;
  EXPECT_LT(std::abs(v.squaredNorm() - t.total_probability) / t.total_probability, 1e-12);
}

TEST(Execute, PermutationChangesStepsNotTotal) {
  const pf::PureState psi = pf::PureState::fock(4, 5);
  const pf::TransformPlan plan = pf::plan_transformation(psi, paper_target());
  pf::TransformPlan rev = plan;
  std::reverse(rev.steps.begin(), rev.steps.end());
  const pf::ExecutionTrace a = pf::execute_plan(psi, plan);
  const pf::ExecutionTrace b = pf::execute_plan(psi, rev);
  EXPECT_LT(std::abs(a.total_probability - b.total_probability) / a.total_probability, 1e-12);
  // nu_j here are the three cube roots of one number, so every ordering sees
  // the same per-step probabilities.
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.per_step[j].probability, b.per_step[j].probability, 1e-12);

  std::mt19937_64 rng(11);
  const pf::PureState x = pf::sampling::random_state(rng, 6, 6);
  const pf::PureState y = pf::sampling::random_state(rng, 6, 6);
  const pf::TransformPlan p2 = pf::plan_transformation(x, y);
  pf::TransformPlan r2 = p2;
  std::reverse(r2.steps.begin(), r2.steps.end());
  const pf::ExecutionTrace c = pf::execute_plan(x, p2);
  const pf::ExecutionTrace d = pf::execute_plan(x, r2);
  EXPECT_LT(std::abs(c.total_probability - d.total_probability) / c.total_probability, 1e-12);
  EXPECT_GT(std::abs(c.per_step[0].probability - d.per_step[0].probability), 1e-6);
}

TEST(Execute, IdentityPlan) {
  std::mt19937_64 rng(4);
  const pf::PureState psi = pf::sampling::random_state(rng, 5, 5);
  pf::TransformPlan plan;
  plan.steps = {{1.0, 0.0}};
  const pf::ExecutionTrace t = pf::execute_plan(psi, plan, psi);
  EXPECT_NEAR(t.total_probability, 0.5, 1e-15);
  EXPECT_NEAR(*t.final_fidelity, 1.0, 1e-14);
}

TEST(Execute, ZeroNormStepIsImpossible) {
  pf::TransformPlan plan;
  plan.steps = {{0.0, 1.0}};
  EXPECT_THROW(pf::execute_plan(pf::PureState::fock(0, 4), plan), pf::HeraldingImpossible);
}

TEST(Execute, RandomRoundTrip) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = pf::sampling::uniform_size(rng, 3, 8);
    pf::PureState psi = pf::sampling::random_state(rng, d, d);
    while (std::abs(psi[d - 1]) <= 0.05) psi = pf::sampling::random_state(rng, d, d);
    const pf::PureState phi = pf::sampling::random_state(rng, d, d);
    const pf::ExecutionTrace t = pf::execute_plan(psi, pf::plan_transformation(psi, phi), phi);
    EXPECT_GT(*t.final_fidelity, 1.0 - 1e-9);
  }
}

TEST(Predicted, SingleSubtractionExact) {
  const double th = 0.1;
  pf::TransformPlan plan;
  plan.steps = {{0.0, th * std::polar(1.0, -0.4)}};
  const pf::PureState one = pf::PureState::fock(1, 4);
  const double p = pf::predicted_success(one, plan);
  EXPECT_NEAR(p, th * th / 2.0, 1e-17);
  EXPECT_NEAR(pf::execute_plan(one, plan).total_probability, p, 1e-17);
}

TEST(Predicted, IdentityStep) {
  pf::TransformPlan plan;
  plan.steps = {{1.0, 0.0}};
  EXPECT_DOUBLE_EQ(pf::predicted_success(pf::PureState::fock(2, 4), plan), 0.5);
}

TEST(Predicted, PaperExampleDiffersFromExact) {
  const pf::PureState psi = pf::PureState::fock(4, 5);
  const pf::TransformPlan plan = pf::plan_transformation(psi, paper_target());
  const double exact = pf::execute_plan(psi, plan).total_probability;
  EXPECT_NEAR(exact, 0.25, 1e-12);
  EXPECT_GT(std::abs(plan.predicted_probability - exact), 0.1);
}

TEST(DimensionMatch, RaiseFockTwo) {
  const pf::DimensionMatch m = pf::dimension_match(pf::PureState::fock(2, 3), 5);
  EXPECT_EQ(m.operations.size(), 2u);
  EXPECT_EQ(m.state.dim(), 5u);
  EXPECT_NEAR(std::abs(m.state[4]), 1.0, 1e-15);
}

TEST(DimensionMatch, RaiseSuperposition) {
  const pf::DimensionMatch m = pf::dimension_match(superposition(2, {{0, 1.0}, {1, 1.0}}), 3);
  ASSERT_EQ(m.operations.size(), 1u);
  EXPECT_EQ(m.operations[0], pf::Ladder::add);
  EXPECT_NEAR(m.state[0].real(), 0.0, 1e-15);
  EXPECT_NEAR(m.state[1].real(), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(m.state[2].real(), std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(DimensionMatch, LowersAndThenSolves) {
  const pf::PureState psi = superposition(7, {{1, 1.0}, {6, 1.0}});
  const pf::DimensionMatch m = pf::dimension_match(psi, 5);
  EXPECT_EQ(m.operations.size(), 2u);
  EXPECT_EQ(m.operations[0], pf::Ladder::sub);
  EXPECT_EQ(pf::top_level(m.state), 4u);
  EXPECT_NO_THROW(pf::plan_transformation(m.state, paper_target()));
}

TEST(DimensionMatch, LoweringVacuumImpossible) {
  EXPECT_THROW(pf::ladder_step(pf::PureState::fock(0, 4), pf::Ladder::sub), pf::HeraldingImpossible);
}
