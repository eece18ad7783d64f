#ifndef FASTDRIVE_JUMP_OPTIMIZER_HPP
#define FASTDRIVE_JUMP_OPTIMIZER_HPP

#include <optional>

#include "fastdrive/fast_driving.hpp"

namespace fastdrive {

struct SearchBox {
  Vector lo;
  Vector hi;

  static SearchBox around(const Boundary& boundary, double margin = 0.5);
  bool contains(const Vector& x, double tol = 0.0) const;
  Vector clamp(const Vector& x) const;
  bool on_edge(const Vector& x, double tol = 1e-9) const;
};

struct ObjectiveSpec {
  enum class Kind { Power, Constancy, Pareto };
  Kind kind = Kind::Power;
  double weight = 1.0;  // Pareto weight on P_save; 1 -> Power, 0 -> Constancy

  static ObjectiveSpec power() { return {Kind::Power, 1.0}; }
  static ObjectiveSpec constancy() { return {Kind::Constancy, 0.0}; }
  static ObjectiveSpec pareto(double weight);
};

struct OptimizationProblem {
  const FastModel* model = nullptr;
  ObjectiveSpec objective;
  SearchBox box;
  int starts = 8;
  unsigned seed = 1;
  // Divide C_save by quench_var/quench_work in the Pareto objective so both
  // terms carry the same units. Off reproduces the unscaled weighted sum.
  bool pareto_homogenize = true;
};

struct ValidityDiagnostic {
  double delta_h = 0.0;
  double tau_over_tau_c = 0.0;
  bool warning = false;  // tau/tau_c > 0.1
};

struct JumpSolution {
  ControlPoint optimum;
  double objective_value = 0.0;
  double el_residual_norm = 0.0;
  SavingsReport savings;
  bool converged = false;
  bool box_limited = false;
  std::optional<ValidityDiagnostic> validity;
};

// Central finite-difference gradient of the excess-work integrand
// [lambda_B - lambda]^T R(lambda); zero at its stationary points.
Vector el_residual_power(const FastModel& model, const ControlPoint& lambda);

// Gradient of the full variance integrand.
Vector el_residual_constancy(const FastModel& model, const ControlPoint& lambda);

// Weighted residual matching the ObjectiveSpec (Pareto mixes the two).
Vector el_residual(const FastModel& model, const ObjectiveSpec& objective,
                   const ControlPoint& lambda, bool homogenize = true);

// P*_save and C*_save at a candidate point (Power objective at the point,
// Constancy objective at the point). Returned as {p_save, c_save}.
std::pair<double, double> max_savings(const FastModel& model, const ControlPoint& point);

// Multistart damped Newton on the EL residual with a projected
// gradient-ascent fallback, constrained to the search box.
JumpSolution solve_jump(const OptimizationProblem& problem);

// Error-magnitude diagnostic for the matrix pipeline:
// Delta h = 2 max(||H(pt)-H_A||_1, ||H_B-H(pt)||_1) and tau/tau_c.
ValidityDiagnostic validity_check(const GeneratorSpec& spec, const Boundary& boundary,
                                  const ControlPoint& point, double tau);

// Scalar objective value w P_save + (1-w) C_save/scale evaluated at a jump
// point (scale = quench_var/quench_work when homogenizing, else 1).
double jump_objective(const FastModel& model, const ObjectiveSpec& objective,
                      const ControlPoint& point, bool homogenize = true);

}  // namespace fastdrive

#endif
