#include "fastdrive/operator_core.hpp"

#include <iostream>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace fastdrive {

namespace {

std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> handler =
      [](const std::string& msg) { std::cerr << "[fastdrive] " << msg << "\n"; };
  return handler;
}

std::mutex warn_mutex;

void check_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

void check_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

void check_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  std::lock_guard<std::mutex> lock(warn_mutex);
  warning_handler() = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(warn_mutex);
  warning_handler()(message);
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

HermitianOperator::HermitianOperator(Matrix entries) {
  check_square(entries, "HermitianOperator");
  check_finite(entries, "HermitianOperator");
  Matrix sym = 0.5 * (entries + entries.adjoint());
  double scale = entries.cwiseAbs().maxCoeff();
  double correction = (entries - sym).cwiseAbs().maxCoeff();
  if (scale > 0.0 && correction > 1e-8 * scale) {
    warn("HermitianOperator: symmetrization correction " +
         std::to_string(correction / scale) + " (relative)");
  }
  entries_ = std::move(sym);
}

DensityMatrix::DensityMatrix(Matrix entries) : HermitianOperator(std::move(entries)) {
  double tr = matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(tr - 1.0));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

Matrix hermitian_exponential(const Matrix& a, double scale) {
  check_square(a, "hermitian_exponential");
  check_finite(a, "hermitian_exponential");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  Eigen::VectorXd ev = (scale * es.eigenvalues()).array().exp();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix matrix_exponential(const Matrix& a) {
  check_square(a, "matrix_exponential");
  check_finite(a, "matrix_exponential");
  if (is_hermitian(a)) {
    // Hermitian arguments keep real spectra; the eigendecomposition route is
    // exact for Gibbs weights.
    Matrix sym = 0.5 * (a + a.adjoint());
    return hermitian_exponential(sym);
  }
  return a.exp();
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  check_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
  check_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

double trace_norm(const Matrix& a) {
  check_square(a, "trace_norm");
  check_finite(a, "trace_norm");
  if (is_hermitian(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

Matrix shifted_observable(const Matrix& a, const Matrix& rho) {
  check_same_dim(a, rho, "shifted_observable");
  Complex mean = (a * rho).trace();
  return a - mean * Matrix::Identity(a.rows(), a.cols());
}

}  // namespace fastdrive
