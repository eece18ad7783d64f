#ifndef FASTDRIVE_EXACT_REFERENCE_HPP
#define FASTDRIVE_EXACT_REFERENCE_HPP

#include "fastdrive/fast_driving.hpp"

namespace fastdrive {

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;
};

// Numerically converged evolution under the generator. Jump protocols use a
// single superoperator exponential (exact piecewise-constant propagation);
// sampled protocols use fixed-step RK4 on the interpolated path.
Trajectory propagate(const GeneratorSpec& spec, const Protocol& protocol,
                     const Matrix& rho0, int steps);

// Exact average excess work <W> - dF. Jump protocols collapse to the two
// quench terms; sampled protocols integrate dlambda^T/dt <X> by quadrature.
double work_mean_exact(const GeneratorSpec& spec, const Protocol& protocol, int steps);

// Exact work variance from the two-time correlator. Jump protocols collapse
// to three terms; sampled protocols use a trapezoidal double quadrature over
// cached segment propagators.
double work_variance_exact(const GeneratorSpec& spec, const Protocol& protocol,
                           int steps, bool parallel = true);

struct ErrorScaling {
  std::vector<double> taus;
  std::vector<double> work_errors;
  std::vector<double> var_errors;
  double work_slope = 0.0;
  double var_slope = 0.0;
  bool work_at_floor = false;
  bool var_at_floor = false;
};

// Log-log slopes of |W_ex^exact - W_ex^fast| and |var^exact - var^fast|
// against tau for the jump protocol holding at jump_point.
ErrorScaling error_scaling(const GeneratorSpec& spec, const Boundary& boundary,
                           const ControlPoint& jump_point,
                           const std::vector<double>& tau_list, int steps = 1);

// Least-squares slope of log(y) vs log(x), skipping entries below the floor.
// Returns {slope, at_floor}.
std::pair<double, bool> loglog_slope(const std::vector<double>& x,
                                     const std::vector<double>& y,
                                     double floor = 1e-12);

}  // namespace fastdrive

#endif
