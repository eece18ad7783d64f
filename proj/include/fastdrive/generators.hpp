#ifndef FASTDRIVE_GENERATORS_HPP
#define FASTDRIVE_GENERATORS_HPP

#include <vector>

#include "fastdrive/hamiltonian_family.hpp"

namespace fastdrive {

enum class GeneratorKind { Unitary, Relaxation };

// Markovian generator L_lambda acting on density matrices.
//   Unitary:    L[rho] = -i [H(lambda), rho]
//   Relaxation: L[rho] = (pi(lambda) tr rho - rho) / tau_eq
struct GeneratorSpec {
  GeneratorKind kind;
  HamiltonianFamily family;
  double tau_eq = 1.0;  // only meaningful for Relaxation

  static GeneratorSpec unitary(HamiltonianFamily family);
  static GeneratorSpec relaxation(HamiltonianFamily family, double tau_eq);
};

Matrix apply_generator(const GeneratorSpec& spec, const ControlPoint& lambda,
                       const Matrix& rho);

// Heisenberg-picture adjoint: tr(O L[rho]) = tr(L^dag[O] rho).
Matrix apply_adjoint(const GeneratorSpec& spec, const ControlPoint& lambda,
                     const Matrix& observable);

// Superoperator as a dim^2 x dim^2 matrix acting on column-major vec(rho).
Matrix superoperator(const GeneratorSpec& spec, const ControlPoint& lambda);

// Conservative lower bound on the characteristic timescale tau_c.
// Relaxation: tau_eq / 2. Unitary: 1 / (2 max ||H(lambda)||_inf) with the
// max taken over the boundary endpoints plus any extra candidate points.
double characteristic_timescale(const GeneratorSpec& spec, const Boundary& boundary,
                                const std::vector<ControlPoint>& extra_points = {});

}  // namespace fastdrive

#endif
