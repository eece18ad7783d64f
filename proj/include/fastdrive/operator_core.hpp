#ifndef FASTDRIVE_OPERATOR_CORE_HPP
#define FASTDRIVE_OPERATOR_CORE_HPP

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace fastdrive {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Units: hbar = k_B = 1 throughout.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;

// Warning sink for non-fatal numerical issues (hermiticity corrections etc).
// Default prints to stderr; tests may swap it out.
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

// Dense Hermitian operator. The constructor symmetrizes its argument and
// warns if the anti-Hermitian part exceeds 1e-8 relative to the largest entry.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

// Hermitian operator with unit trace and non-negative spectrum.
class DensityMatrix : public HermitianOperator {
 public:
  explicit DensityMatrix(Matrix entries);
};

// exp(A) for a general complex square matrix. Hermitian inputs go through an
// eigendecomposition; everything else through scaling-and-squaring Pade.
Matrix matrix_exponential(const Matrix& a);

// exp(scale * A) for Hermitian A, via eigendecomposition.
Matrix hermitian_exponential(const Matrix& a, double scale = 1.0);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

// Sum of singular values, tr sqrt(A^dag A).
double trace_norm(const Matrix& a);

// A - tr(A rho) * identity.
Matrix shifted_observable(const Matrix& a, const Matrix& rho);

bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

}  // namespace fastdrive

#endif
