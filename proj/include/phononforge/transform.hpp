#pragma once

// Arbitrary state transformation by repeated identity-plus-subtraction
// heralding: find Phi = sum_i C_i b^i with Phi|psi> = |phi>, factor Phi into
// prod_j (mu_j + nu_j b)/sqrt(2), then apply the factors one by one.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phononforge/channels.hpp"
#include "phononforge/fock.hpp"
#include "phononforge/roots.hpp"

namespace phononforge {

inline constexpr double kLeadingAmplitudeFloor = 1e-12;
inline constexpr double kCoefficientTrim = 1e-12;
inline constexpr double kExpansionTolerance = 1e-9;

/// Rows ordered n = N..0, columns i = 0..N; entry psi_{i+n} sqrt((i+n)!/n!)
/// for i <= N-n. Lower triangular with diagonal psi_N sqrt(N!/n!).
inline CMatrix coefficient_system(const PureState& psi) {
  const std::size_t N = psi.dim() - 1;
  const auto d = static_cast<Eigen::Index>(psi.dim());
  CMatrix m = CMatrix::Zero(d, d);
  for (std::size_t row = 0; row <= N; ++row) {
    const std::size_t n = N - row;
    for (std::size_t i = 0; i + n <= N; ++i) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) =
          psi[i + n] * sqrt_factorial_ratio(n, i);
    }
  }
  return m;
}

/// C_0..C_N with sum_i C_i psi_{i+n} sqrt((i+n)!/n!) = phi_n, by back-substitution from n = N.
inline std::vector<cplx> solve_coefficients(const PureState& psi, const PureState& phi) {
  detail::require_normalized(psi, "solve_coefficients");
  detail::require_normalized(phi, "solve_coefficients");
  if (psi.dim() != phi.dim()) throw InvalidArgument("solve_coefficients: psi and phi dims differ");
  const std::size_t N = psi.dim() - 1;
  if (!(std::abs(psi[N]) > kLeadingAmplitudeFloor)) {
    throw InvalidArgument("solve_coefficients: |psi_N| = " + std::to_string(std::abs(psi[N])) +
                          " is zero; bring the top occupied level to N with dimension_match");
  }
  std::vector<cplx> c(N + 1, 0.0);
  for (std::size_t k = 0; k <= N; ++k) {
    const std::size_t n = N - k;  // equation n solves for C_k
    cplx rhs = phi[n];
    for (std::size_t i = 0; i < k; ++i) rhs -= c[i] * psi[i + n] * sqrt_factorial_ratio(n, i);
    c[k] = rhs / (psi[N] * sqrt_factorial_ratio(n, k));
  }
  return c;
}

/// Largest |<n|Phi|psi> - phi_n| over all n.
inline double coefficient_residual(const PureState& psi, const PureState& phi, const std::vector<cplx>& c) {
  const std::size_t N = psi.dim() - 1;
  double worst = 0.0;
  for (std::size_t n = 0; n <= N; ++n) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i + n <= N && i < c.size(); ++i) acc += c[i] * psi[i + n] * sqrt_factorial_ratio(n, i);
    worst = std::max(worst, std::abs(acc - phi[n]));
  }
  return worst;
}

enum class StepNormalization { unit_identity, unit_max };

struct FactorStep {
  cplx mu{1.0, 0.0};
  cplx nu{0.0, 0.0};
};

struct TransformPlan {
  std::size_t degree = 0;
  std::vector<cplx> coeffs;
  std::vector<FactorStep> steps;
  cplx scale{1.0, 0.0};  // scale * prod_j (mu_j + nu_j x)/sqrt2 = sum_i C_i x^i
  double predicted_probability = 0.0;
};

struct FactorOptions {
  StepNormalization normalization = StepNormalization::unit_identity;
  std::uint64_t seed = 0;
  std::size_t pad_to = 0;  // append identity steps up to this many
};

/// Ascending coefficients of plan.scale * prod_j (mu_j + nu_j x)/sqrt2.
inline std::vector<cplx> expand_plan(const TransformPlan& plan) {
  std::vector<std::pair<cplx, cplx>> f;
  for (const auto& s : plan.steps) f.emplace_back(s.mu / std::numbers::sqrt2, s.nu / std::numbers::sqrt2);
  return expand_linear_factors(f, plan.scale);
}

/// max_i |expanded_i - C_i| / max_i |C_i|.
inline double expansion_error(const TransformPlan& plan) {
  const std::vector<cplx> e = expand_plan(plan);
  double cmax = 0.0;
  for (auto v : plan.coeffs) cmax = std::max(cmax, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < std::max(e.size(), plan.coeffs.size()); ++i) {
    const cplx a = i < e.size() ? e[i] : cplx{};
    const cplx b = i < plan.coeffs.size() ? plan.coeffs[i] : cplx{};
    worst = std::max(worst, std::abs(a - b));
  }
  return worst / cmax;
}

inline TransformPlan factor_plan(const std::vector<cplx>& coeffs, const FactorOptions& opt = {}) {
  double cmax = 0.0;
  for (auto v : coeffs) cmax = std::max(cmax, std::abs(v));
  if (!(cmax > 0.0)) throw InvalidArgument("factor_plan: coefficients are all zero");

  std::vector<cplx> cleaned(coeffs);
  for (auto& v : cleaned) {
    if (std::abs(v) < kCoefficientTrim * cmax) v = 0.0;
  }
  std::size_t degree = cleaned.size() - 1;
  while (degree > 0 && cleaned[degree] == cplx{}) --degree;
  cleaned.resize(degree + 1);

  TransformPlan plan;
  plan.degree = degree;
  plan.coeffs = coeffs;
  RootOptions ropt;
  ropt.seed = opt.seed;
  const RootResult roots = find_roots(cleaned, ropt);
  for (cplx x : roots.roots) {
    FactorStep s;
    if (x == cplx{}) {
      s = {0.0, 1.0};
    } else if (opt.normalization == StepNormalization::unit_max && std::abs(x) <= 1.0) {
      s = {-x, 1.0};
    } else {
      s = {1.0, -1.0 / x};
    }
    plan.steps.push_back(s);
  }
  while (plan.steps.size() < opt.pad_to) plan.steps.push_back({1.0, 0.0});

  plan.scale = 1.0;
  const std::vector<cplx> unit = expand_plan(plan);
  plan.scale = cleaned[degree] / unit[degree];

  const double err = expansion_error(plan);
  if (!(err < kExpansionTolerance)) {
    throw NonConvergence("factor_plan: re-expansion error " + std::to_string(err) + " after " +
                         std::to_string(roots.iterations) + " root iterations" +
                         (roots.used_fallback ? " (companion fallback)" : ""));
  }
  return plan;
}

inline MatrixOperator step_operator(const FactorStep& s, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return MatrixOperator((s.mu * CMatrix::Identity(d, d) + s.nu * detail::lowering(dim)) / std::numbers::sqrt2);
}

struct StepRecord {
  PureState state;  // normalized state after the step
  double probability;
};

struct ExecutionTrace {
  std::vector<StepRecord> per_step;
  double total_probability = 1.0;
  std::optional<double> final_fidelity;
  PureState final_state{CVector::Ones(1)};
};

inline ExecutionTrace execute_plan(const PureState& psi, const TransformPlan& plan,
                                   const std::optional<PureState>& target = std::nullopt) {
  detail::require_normalized(psi, "execute_plan");
  ExecutionTrace trace;
  PureState current = psi;
  // The total is taken from the unnormalized product, carried in long double so
  // it does not depend on step order beyond rounding.
  using lcplx = std::complex<long double>;
  std::vector<lcplx> acc(psi.dim());
  for (std::size_t n = 0; n < psi.dim(); ++n) acc[n] = lcplx(psi[n].real(), psi[n].imag());
  for (std::size_t j = 0; j < plan.steps.size(); ++j) {
    const Applied out = apply(step_operator(plan.steps[j], current.dim()), current);
    if (!(out.norm_squared >= kHeraldingFloor)) {
      throw HeraldingImpossible("execute_plan: step " + std::to_string(j + 1) + " has probability " +
                                std::to_string(out.norm_squared));
    }
    current = out.state.normalized();
    trace.per_step.push_back({current, out.norm_squared});
    const lcplx mu(plan.steps[j].mu.real(), plan.steps[j].mu.imag());
    const lcplx nu(plan.steps[j].nu.real(), plan.steps[j].nu.imag());
    for (std::size_t n = 0; n < acc.size(); ++n) {
      acc[n] = mu * acc[n];
      if (n + 1 < acc.size()) acc[n] += nu * std::sqrt(static_cast<long double>(n + 1)) * acc[n + 1];
      acc[n] /= std::sqrt(2.0L);
    }
  }
  long double total = 0.0L;
  for (const lcplx& a : acc) total += std::norm(a);
  trace.total_probability = static_cast<double>(total);
  trace.final_state = current;
  if (target) trace.final_fidelity = std::norm(overlap(*target, current));
  return trace;
}

/// prod_j [|nu_j|^2 <b^dag b>_j + |mu_j|^2] / 2 over the intermediate states.
/// Exact only when every intermediate state has <b> = 0.
inline double predicted_success(const PureState& psi, const TransformPlan& plan) {
  detail::require_normalized(psi, "predicted_success");
  const MatrixOperator number = number_op(psi.dim());
  double total = 1.0;
  PureState current = psi;
  for (const auto& s : plan.steps) {
    const double n = expectation(number, current).real();
    total *= (std::norm(s.nu) * n + std::norm(s.mu)) / 2.0;
    const Applied out = apply(step_operator(s, current.dim()), current);
    if (!(out.norm_squared >= kHeraldingFloor)) break;
    current = out.state.normalized();
  }
  return total;
}

/// solve_coefficients + factor_plan + predicted_success.
inline TransformPlan plan_transformation(const PureState& psi, const PureState& phi, const FactorOptions& opt = {}) {
  TransformPlan plan = factor_plan(solve_coefficients(psi, phi), opt);
  plan.predicted_probability = predicted_success(psi, plan);
  return plan;
}

/// One application of b (sub) or b^dag (add), renormalized. Same dimension;
/// raising requires the guard band.
inline PureState ladder_step(const PureState& state, Ladder which) {
  const CMatrix b = detail::lowering(state.dim());
  if (which == Ladder::add) require_guard_band(state, "ladder_step");
  CVector out = which == Ladder::sub ? CVector(b * state.amps()) : CVector(b.adjoint() * state.amps());
  if (!(out.squaredNorm() >= kHeraldingFloor)) {
    throw HeraldingImpossible("ladder_step: the operation annihilates the state");
  }
  out /= out.norm();
  return PureState(std::move(out));
}

struct DimensionMatch {
  PureState state;  // dim == target_dim, top occupied level == target_dim - 1
  std::vector<Ladder> operations;
};

/// Raise (b^dag) or lower (b) until the top occupied level is target_dim - 1.
inline DimensionMatch dimension_match(const PureState& psi, std::size_t target_dim) {
  detail::require_normalized(psi, "dimension_match");
  if (target_dim == 0) throw InvalidArgument("dimension_match: target_dim must be >= 1");
  const std::size_t work = std::max(psi.dim(), target_dim) + kGuardBandLevels;
  PureState current = psi.resized(work);
  DimensionMatch res{current, {}};
  std::size_t top = top_level(current);
  while (top != target_dim - 1) {
    const Ladder op = top < target_dim - 1 ? Ladder::add : Ladder::sub;
    current = ladder_step(current, op);
    res.operations.push_back(op);
    top = top_level(current);
  }
  res.state = current.resized(target_dim);
  return res;
}

}  // namespace phononforge
