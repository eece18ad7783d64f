#include "fastdrive/generators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace fastdrive {

namespace {

const Complex kImag(0.0, 1.0);

void check_dim(const GeneratorSpec& spec, const Matrix& m, const char* what) {
  if (m.rows() != spec.family.dim() || m.cols() != spec.family.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

double spectral_norm_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

GeneratorSpec GeneratorSpec::unitary(HamiltonianFamily family) {
  return GeneratorSpec{GeneratorKind::Unitary, std::move(family), 0.0};
}

GeneratorSpec GeneratorSpec::relaxation(HamiltonianFamily family, double tau_eq) {
  if (!(tau_eq > 0.0) || !std::isfinite(tau_eq)) {
    throw std::invalid_argument("GeneratorSpec: tau_eq must be finite and positive");
  }
  return GeneratorSpec{GeneratorKind::Relaxation, std::move(family), tau_eq};
}

Matrix apply_generator(const GeneratorSpec& spec, const ControlPoint& lambda,
                       const Matrix& rho) {
  check_dim(spec, rho, "apply_generator");
  if (spec.kind == GeneratorKind::Unitary) {
    return -kImag * commutator(hamiltonian_at(spec.family, lambda), rho);
  }
  return (gibbs_state(spec.family, lambda) * rho.trace() - rho) / spec.tau_eq;
}

Matrix apply_adjoint(const GeneratorSpec& spec, const ControlPoint& lambda,
                     const Matrix& observable) {
  check_dim(spec, observable, "apply_adjoint");
  if (spec.kind == GeneratorKind::Unitary) {
    return kImag * commutator(hamiltonian_at(spec.family, lambda), observable);
  }
  Complex mean = (observable * gibbs_state(spec.family, lambda)).trace();
  int n = spec.family.dim();
  return (mean * Matrix::Identity(n, n) - observable) / spec.tau_eq;
}

Matrix superoperator(const GeneratorSpec& spec, const ControlPoint& lambda) {
  int n = spec.family.dim();
  Matrix id = Matrix::Identity(n, n);
  if (spec.kind == GeneratorKind::Unitary) {
    Matrix h = hamiltonian_at(spec.family, lambda);
    // vec(H rho) = (I (x) H) vec(rho), vec(rho H) = (H^T (x) I) vec(rho)
    Matrix left = Eigen::kroneckerProduct(id, h).eval();
    Matrix right = Eigen::kroneckerProduct(h.transpose(), id).eval();
    return -kImag * (left - right);
  }
  Matrix pi = gibbs_state(spec.family, lambda);
  Matrix super = Matrix::Zero(n * n, n * n);
  // tr(rho) = vec(I)^T vec(rho); L = (vec(pi) vec(I)^T - I) / tau_eq
  Eigen::Map<const Eigen::VectorXcd> pi_vec(pi.data(), n * n);
  Eigen::Map<const Eigen::VectorXcd> id_vec(id.data(), n * n);
  super = pi_vec * id_vec.transpose();
  super -= Matrix::Identity(n * n, n * n);
  return super / spec.tau_eq;
}

double characteristic_timescale(const GeneratorSpec& spec, const Boundary& boundary,
                                const std::vector<ControlPoint>& extra_points) {
  if (spec.kind == GeneratorKind::Relaxation) {
    // ||L[O]||_1 <= 2 ||O||_1 / tau_eq
    return 0.5 * spec.tau_eq;
  }
  // ||[H, O]||_1 <= 2 ||H||_inf ||O||_1
  double max_norm = 0.0;
  auto consider = [&](const ControlPoint& lambda) {
    max_norm = std::max(max_norm,
                        spectral_norm_hermitian(hamiltonian_at(spec.family, lambda)));
  };
  consider(boundary.lambda_a);
  consider(boundary.lambda_b);
  for (const ControlPoint& p : extra_points) consider(p);
  if (max_norm == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 0.5 / max_norm;
}

}  // namespace fastdrive
