#ifndef FASTDRIVE_FAST_DRIVING_HPP
#define FASTDRIVE_FAST_DRIVING_HPP

#include <variant>
#include <vector>

#include "fastdrive/generators.hpp"

namespace fastdrive {

// lambda(t) = jump_point on (0, tau), with boundary values at the endpoints.
struct JumpShape {
  ControlPoint jump_point;
};

// Piecewise-linear path through (times[i], points[i]); times[0] = 0,
// times.back() = tau, strictly increasing.
struct SampledShape {
  std::vector<double> times;
  std::vector<ControlPoint> points;
};

struct Protocol {
  Boundary boundary;
  std::variant<JumpShape, SampledShape> shape;

  static Protocol jump(Boundary boundary, ControlPoint jump_point);
  // Linear ramp lambda_A -> lambda_B sampled on n nodes (n >= 3).
  static Protocol linear(Boundary boundary, int nodes);
  static Protocol sampled(Boundary boundary, std::vector<double> times,
                          std::vector<ControlPoint> points);

  bool is_jump() const { return std::holds_alternative<JumpShape>(shape); }
  // lambda at interior time t in (0, tau).
  ControlPoint at(double t) const;
};

struct FastCoefficients {
  Vector r;
  RealMatrix g;
  RealMatrix b;  // raw (unsymmetrized)
};

struct SavingsReport {
  double p_save = 0.0;
  double c_save = 0.0;
  double quench_work = 0.0;  // k_B T S(pi_A || pi_B)
  double quench_var = 0.0;   // k_B^2 T^2 V(pi_A || pi_B)
  double w_ex_approx = 0.0;
  double var_approx = 0.0;
  double tau = 0.0;
};

// Coefficient provider for the first-order fast-driving functionals. The
// matrix pipeline and the per-spin chain formulas both implement this, so the
// jump optimizer works on either.
class FastModel {
 public:
  virtual ~FastModel() = default;

  virtual int dims() const = 0;
  virtual Vector ifrr(const ControlPoint& lambda) const = 0;
  virtual RealMatrix g_matrix(const ControlPoint& lambda) const = 0;
  virtual RealMatrix b_matrix(const ControlPoint& lambda) const = 0;
  virtual double quench_work() const = 0;
  virtual double quench_var() const = 0;
  virtual const Boundary& boundary() const = 0;

  // [lambda_B - lambda]^T R(lambda); time-integrand of the excess-work
  // correction.
  double power_integrand(const ControlPoint& lambda) const;
  // [lambda_B - lambda]^T G [lambda_B - lambda]
  //   + [lambda_B - lambda]^T B [lambda - lambda_A]
  double variance_integrand(const ControlPoint& lambda) const;

  double excess_work_fast(const Protocol& protocol) const;
  double variance_fast(const Protocol& protocol) const;
  SavingsReport savings(const Protocol& protocol) const;
  // Savings of the jump protocol holding at the given point.
  SavingsReport savings_at_jump(const ControlPoint& point) const;
};

// Matrix pipeline: R/G/B from the adjoint generator, quench baselines from
// the Gibbs states at the boundary. Precomputes pi_A and <X>_A.
class FastEvaluator : public FastModel {
 public:
  FastEvaluator(GeneratorSpec spec, Boundary boundary);

  int dims() const override;
  Vector ifrr(const ControlPoint& lambda) const override;
  RealMatrix g_matrix(const ControlPoint& lambda) const override;
  RealMatrix b_matrix(const ControlPoint& lambda) const override;
  double quench_work() const override { return quench_work_; }
  double quench_var() const override { return quench_var_; }
  const Boundary& boundary() const override { return boundary_; }

  FastCoefficients coefficients(const ControlPoint& lambda) const;

  const GeneratorSpec& spec() const { return spec_; }
  const Matrix& initial_state() const { return pi_a_; }

  // Closed forms for cross-checks against the generic adjoint route.
  // Relaxation: R from Gibbs means, G from the covariance metric plus the
  // R R^T term, B = -2 F(lambda_A) / tau_eq.
  FastCoefficients relaxation_closed_form(const ControlPoint& lambda) const;
  // Unitary: commutator expressions evaluated in pi_A.
  FastCoefficients unitary_closed_form(const ControlPoint& lambda) const;

  // Symmetric covariance metric F_jk(lambda) = <{X_j, X_k}>/2 - <X_j><X_k>
  // in the Gibbs state at lambda.
  RealMatrix covariance_metric(const ControlPoint& lambda) const;

 private:
  GeneratorSpec spec_;
  Boundary boundary_;
  Matrix pi_a_;
  std::vector<Matrix> shifted_forces_;  // Delta X_j = X_j - <X_j>_A
  double quench_work_ = 0.0;
  double quench_var_ = 0.0;
};

// Composite Simpson over a SampledShape path of f(t, lambda(t)); the grid is
// refined to even spacing using the piecewise-linear interpolant.
double simpson_path_integral(const Protocol& protocol,
                             const std::function<double(const ControlPoint&)>& f);

}  // namespace fastdrive

#endif
