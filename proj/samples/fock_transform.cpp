// |4> -> (|1> + |4>)/sqrt2 using three identity-plus-subtraction heralds.

#include <cmath>
#include <cstdio>

#include "phononforge/transform.hpp"

int main() {
  namespace pf = phononforge;
  const pf::PureState psi = pf::PureState::fock(4, 5);
  pf::CVector t = pf::CVector::Zero(5);
  t[1] = t[4] = 1.0 / std::sqrt(2.0);
  const pf::PureState phi(t);

  const pf::TransformPlan plan = pf::plan_transformation(psi, phi);
  for (std::size_t i = 0; i < plan.coeffs.size(); ++i) {
    std::printf("C_%zu = %+.6f %+.6fi\n", i, plan.coeffs[i].real(), plan.coeffs[i].imag());
  }
  for (const auto& s : plan.steps) {
    std::printf("step (%.3f%+.3fi) + (%.4f%+.4fi) b\n", s.mu.real(), s.mu.imag(), s.nu.real(), s.nu.imag());
  }
  const pf::ExecutionTrace trace = pf::execute_plan(psi, plan, phi);
  std::printf("fidelity %.12f, total probability %.6f\n", *trace.final_fidelity, trace.total_probability);
}
