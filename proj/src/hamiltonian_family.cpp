#include "fastdrive/hamiltonian_family.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fastdrive {

namespace {

void check_lambda(const HamiltonianFamily& family, const ControlPoint& lambda) {
  if (lambda.size() != family.controls()) {
    throw std::invalid_argument("control point length does not match family");
  }
  if (!lambda.allFinite()) {
    throw std::invalid_argument("control point has non-finite entries");
  }
}

}  // namespace

HamiltonianFamily::HamiltonianFamily(Matrix h0_in, std::vector<Matrix> forces_in,
                                     double beta_in)
    : h0(std::move(h0_in)), forces(std::move(forces_in)), beta(beta_in) {
  if (h0.rows() != h0.cols() || h0.rows() < 1) {
    throw std::invalid_argument("HamiltonianFamily: h0 must be square");
  }
  if (forces.empty()) {
    throw std::invalid_argument("HamiltonianFamily: need at least one force");
  }
  for (const Matrix& x : forces) {
    if (x.rows() != h0.rows() || x.cols() != h0.cols()) {
      throw std::invalid_argument("HamiltonianFamily: force dimension mismatch");
    }
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("HamiltonianFamily: beta must be finite and positive");
  }
}

Boundary::Boundary(ControlPoint a, ControlPoint b, double tau_in)
    : lambda_a(std::move(a)), lambda_b(std::move(b)), tau(tau_in) {
  if (lambda_a.size() != lambda_b.size()) {
    throw std::invalid_argument("Boundary: endpoint dimension mismatch");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("Boundary: tau must be finite and positive");
  }
}

Matrix hamiltonian_at(const HamiltonianFamily& family, const ControlPoint& lambda) {
  check_lambda(family, lambda);
  Matrix h = family.h0;
  for (int j = 0; j < family.controls(); ++j) {
    h += lambda[j] * family.forces[j];
  }
  return h;
}

Matrix gibbs_state(const HamiltonianFamily& family, const ControlPoint& lambda) {
  Matrix h = hamiltonian_at(family, lambda);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  // Shift by the smallest eigenvalue so the largest Boltzmann weight is 1.
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd w = (-family.beta * (ev.array() - ev.minCoeff())).exp();
  w /= w.sum();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double log_partition(const HamiltonianFamily& family, const ControlPoint& lambda) {
  Matrix h = hamiltonian_at(family, lambda);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()),
                                           Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  double shift = -family.beta * ev.minCoeff();
  return shift + std::log((-family.beta * ev.array() - shift).exp().sum());
}

double free_energy(const HamiltonianFamily& family, const ControlPoint& lambda) {
  return -log_partition(family, lambda) / family.beta;
}

Matrix hermitian_log(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    throw std::invalid_argument("hermitian_log: matrix not strictly positive");
  }
  Eigen::VectorXd lg = ev.array().max(1e-300).log();
  return es.eigenvectors() * lg.asDiagonal() * es.eigenvectors().adjoint();
}

double relative_entropy(const Matrix& rho1, const Matrix& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  // log rho1 needs care at zero eigenvalues: x log x -> 0.
  Eigen::SelfAdjointEigenSolver<Matrix> es1(0.5 * (rho1 + rho1.adjoint()));
  double s1 = 0.0;
  for (int i = 0; i < es1.eigenvalues().size(); ++i) {
    double p = es1.eigenvalues()[i];
    if (p > 1e-300) s1 += p * std::log(p);
  }
  Matrix log2 = hermitian_log(rho2);
  double s2 = (rho1 * log2).trace().real();
  return s1 - s2;
}

double relative_entropy_variance(const Matrix& rho1, const Matrix& rho2) {
  // Spectral decomposition of rho1 lets us define log rho1 on its support.
  Eigen::SelfAdjointEigenSolver<Matrix> es1(0.5 * (rho1 + rho1.adjoint()));
  Eigen::VectorXd p = es1.eigenvalues();
  Eigen::VectorXd lg1(p.size());
  for (int i = 0; i < p.size(); ++i) {
    lg1[i] = (p[i] > 1e-300) ? std::log(p[i]) : 0.0;
  }
  Matrix log1 = es1.eigenvectors() * lg1.asDiagonal() * es1.eigenvectors().adjoint();
  Matrix diff = log1 - hermitian_log(rho2);
  double second = (rho1 * diff * diff).trace().real();
  double s = (rho1 * diff).trace().real();
  return second - s * s;
}

}  // namespace fastdrive
