// Orthogonalize a coherent state with a weak quadrature herald, then build a
// qubit-like superposition of the input and its orthogonal partner.

#include <cstdio>

#include "phononforge/channels.hpp"
#include "phononforge/fock.hpp"
#include "phononforge/wigner.hpp"

int main() {
  namespace pf = phononforge;
  const pf::PureState psi = pf::gaussian_state({{1.0, 0.5}, 0.0, 0.0}, 30);

  const pf::HeraldOutcome perp = pf::apply_herald(psi, pf::orthogonalizer_spec(psi, 0.1));
  std::printf("P(herald)        = %.6e\n", perp.probability);
  std::printf("|<psi|psi_perp>| = %.3e\n", std::abs(pf::overlap(psi, perp.state)));
  std::printf("W(0,0) after     = %.6f\n", pf::wigner_point(perp.state, 0.0, 0.0));

  const pf::HeraldOutcome q = pf::qubit_synthesis(psi, {0.1, 0.0}, 0.1);
  std::printf("qubit overlap    = %.6f  (P = %.3e)\n", std::norm(pf::overlap(psi, q.state)), q.probability);
}
