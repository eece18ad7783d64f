#ifndef FASTDRIVE_HAMILTONIAN_FAMILY_HPP
#define FASTDRIVE_HAMILTONIAN_FAMILY_HPP

#include <vector>

#include "fastdrive/operator_core.hpp"

namespace fastdrive {

// Control point lambda in R^d. Plain Eigen vector; helpers validate length.
using ControlPoint = Vector;

// H(lambda) = h0 + sum_j lambda_j * forces[j], at inverse temperature beta.
struct HamiltonianFamily {
  Matrix h0;
  std::vector<Matrix> forces;
  double beta = 1.0;

  HamiltonianFamily(Matrix h0_in, std::vector<Matrix> forces_in, double beta_in);

  int dim() const { return static_cast<int>(h0.rows()); }
  int controls() const { return static_cast<int>(forces.size()); }
};

struct Boundary {
  ControlPoint lambda_a;
  ControlPoint lambda_b;
  double tau = 1.0;

  Boundary(ControlPoint a, ControlPoint b, double tau_in);
};

Matrix hamiltonian_at(const HamiltonianFamily& family, const ControlPoint& lambda);

// exp(-beta H)/Z, overflow-guarded by spectrum shifting.
Matrix gibbs_state(const HamiltonianFamily& family, const ControlPoint& lambda);

// log tr exp(-beta H) via log-sum-exp over eigenvalues.
double log_partition(const HamiltonianFamily& family, const ControlPoint& lambda);
double free_energy(const HamiltonianFamily& family, const ControlPoint& lambda);

// tr rho1 (log rho1 - log rho2), in nats. rho2 must be full rank.
double relative_entropy(const Matrix& rho1, const Matrix& rho2);

// tr rho1 (log rho1 - log rho2)^2 - S(rho1||rho2)^2.
double relative_entropy_variance(const Matrix& rho1, const Matrix& rho2);

// Principal logarithm of a strictly positive Hermitian matrix.
Matrix hermitian_log(const Matrix& a);

}  // namespace fastdrive

#endif
