#include "fastdrive/exact_reference.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fastdrive {

namespace {

Matrix apply_map(const Matrix& super, const Matrix& rho) {
  int n = static_cast<int>(rho.rows());
  Eigen::Map<const Eigen::VectorXcd> v(rho.data(), n * n);
  Eigen::VectorXcd out = super * v;
  return Eigen::Map<const Matrix>(out.data(), n, n);
}

void check_trace(const Matrix& rho, const char* what) {
  if (std::abs(rho.trace().real() - 1.0) > 1e-7 || std::abs(rho.trace().imag()) > 1e-7) {
    throw std::runtime_error(std::string(what) + ": trace drift exceeds 1e-7");
  }
}

Matrix rk4_step(const GeneratorSpec& spec, const Protocol& protocol, const Matrix& rho,
                double t, double dt) {
  Matrix k1 = apply_generator(spec, protocol.at(t), rho);
  Matrix k2 = apply_generator(spec, protocol.at(t + 0.5 * dt), rho + 0.5 * dt * k1);
  Matrix k3 = apply_generator(spec, protocol.at(t + 0.5 * dt), rho + 0.5 * dt * k2);
  Matrix k4 = apply_generator(spec, protocol.at(t + dt), rho + dt * k3);
  return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Time derivative of H along the sampled path, by central differences of the
// interpolant (exact for the piecewise-linear segments away from kinks).
Matrix h_dot(const GeneratorSpec& spec, const Protocol& protocol, double t, double dt) {
  double lo = std::max(0.0, t - 0.49 * dt);
  double hi = std::min(protocol.boundary.tau, t + 0.49 * dt);
  ControlPoint dl = (protocol.at(hi) - protocol.at(lo)) / (hi - lo);
  Matrix out = Matrix::Zero(spec.family.dim(), spec.family.dim());
  for (int j = 0; j < spec.family.controls(); ++j) {
    out += dl[j] * spec.family.forces[j];
  }
  return out;
}

}  // namespace

Trajectory propagate(const GeneratorSpec& spec, const Protocol& protocol,
                     const Matrix& rho0, int steps) {
  if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");
  if (rho0.rows() != spec.family.dim() || rho0.cols() != spec.family.dim()) {
    throw std::invalid_argument("propagate: state dimension mismatch");
  }
  double tau = protocol.boundary.tau;
  double dt = tau / steps;
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  if (protocol.is_jump()) {
    const ControlPoint& xi = std::get<JumpShape>(protocol.shape).jump_point;
    Matrix segment = matrix_exponential(dt * superoperator(spec, xi));
    for (int i = 1; i <= steps; ++i) {
      traj.times.push_back(i * dt);
      traj.states.push_back(apply_map(segment, traj.states.back()));
    }
  } else {
    for (int i = 1; i <= steps; ++i) {
      traj.times.push_back(i * dt);
      traj.states.push_back(rk4_step(spec, protocol, traj.states.back(), (i - 1) * dt, dt));
    }
  }
  check_trace(traj.states.back(), "propagate");
  return traj;
}

double work_mean_exact(const GeneratorSpec& spec, const Protocol& protocol, int steps) {
  const Boundary& bd = protocol.boundary;
  Matrix pi_a = gibbs_state(spec.family, bd.lambda_a);
  double delta_f = free_energy(spec.family, bd.lambda_b) -
                   free_energy(spec.family, bd.lambda_a);
  Matrix h_a = hamiltonian_at(spec.family, bd.lambda_a);
  Matrix h_b = hamiltonian_at(spec.family, bd.lambda_b);

  if (protocol.is_jump()) {
    const ControlPoint& xi = std::get<JumpShape>(protocol.shape).jump_point;
    Matrix h_xi = hamiltonian_at(spec.family, xi);
    Matrix rho_tau = propagate(spec, protocol, pi_a, 1).states.back();
    double work = ((h_xi - h_a) * pi_a).trace().real() +
                  ((h_b - h_xi) * rho_tau).trace().real();
    return work - delta_f;
  }

  Trajectory traj = propagate(spec, protocol, pi_a, steps);
  double dt = bd.tau / steps;
  double work = 0.0;
  for (int i = 0; i <= steps; ++i) {
    double weight = (i == 0 || i == steps) ? 0.5 : 1.0;
    Matrix hd = h_dot(spec, protocol, traj.times[i], dt);
    work += weight * dt * (hd * traj.states[i]).trace().real();
  }
  return work - delta_f;
}

double work_variance_exact(const GeneratorSpec& spec, const Protocol& protocol,
                           int steps, bool parallel) {
  const Boundary& bd = protocol.boundary;
  Matrix pi_a = gibbs_state(spec.family, bd.lambda_a);
  Matrix h_a = hamiltonian_at(spec.family, bd.lambda_a);
  Matrix h_b = hamiltonian_at(spec.family, bd.lambda_b);

  if (protocol.is_jump()) {
    const ControlPoint& xi = std::get<JumpShape>(protocol.shape).jump_point;
    Matrix h_xi = hamiltonian_at(spec.family, xi);
    Matrix dh1 = h_xi - h_a;
    Matrix dh2 = h_b - h_xi;
    Matrix super = matrix_exponential(bd.tau * superoperator(spec, xi));
    Matrix rho_tau = apply_map(super, pi_a);
    check_trace(rho_tau, "work_variance_exact");

    double var1 = (dh1 * dh1 * pi_a).trace().real() -
                  std::pow((dh1 * pi_a).trace().real(), 2);
    double var2 = (dh2 * dh2 * rho_tau).trace().real() -
                  std::pow((dh2 * rho_tau).trace().real(), 2);
    Matrix kernel = shifted_observable(dh1, pi_a) * pi_a;
    double cross = 2.0 * (dh2 * apply_map(super, kernel)).trace().real();
    return var1 + var2 + cross;
  }

  // Trapezoidal double quadrature on a uniform grid with cached segment
  // propagators; the inner kernel for each t' is pushed forward segment by
  // segment.
  int n = steps;
  double dt = bd.tau / n;
  int dim = spec.family.dim();

  std::vector<Matrix> segments(n);
  std::vector<Matrix> states(n + 1);
  states[0] = pi_a;
  for (int i = 0; i < n; ++i) {
    ControlPoint mid = protocol.at((i + 0.5) * dt);
    segments[i] = matrix_exponential(dt * superoperator(spec, mid));
    states[i + 1] = apply_map(segments[i], states[i]);
  }
  check_trace(states[n], "work_variance_exact");

  std::vector<Matrix> hdots(n + 1);
  for (int i = 0; i <= n; ++i) {
    hdots[i] = h_dot(spec, protocol, i * dt, dt);
  }
  auto node_weight = [n](int i) { return (i == 0 || i == n) ? 0.5 : 1.0; };

  double total = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : total) schedule(dynamic) if (parallel)
#endif
  for (int j = 0; j <= n; ++j) {
    Matrix kernel = shifted_observable(hdots[j], states[j]) * states[j];
    double local = 0.5 * node_weight(j) * node_weight(j) *
                   (hdots[j] * kernel).trace().real();  // diagonal t = t'
    for (int i = j + 1; i <= n; ++i) {
      kernel = apply_map(segments[i - 1], kernel);
      local += node_weight(i) * node_weight(j) * (hdots[i] * kernel).trace().real();
    }
    total += local;
  }
  (void)dim;
  return 2.0 * dt * dt * total;
}

std::pair<double, bool> loglog_slope(const std::vector<double>& x,
                                     const std::vector<double>& y, double floor) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 3) return {0.0, true};
  double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, false};
}

ErrorScaling error_scaling(const GeneratorSpec& spec, const Boundary& boundary,
                           const ControlPoint& jump_point,
                           const std::vector<double>& tau_list, int steps) {
  ErrorScaling result;
  result.taus = tau_list;
  for (double tau : tau_list) {
    Boundary bd(boundary.lambda_a, boundary.lambda_b, tau);
    FastEvaluator fast(spec, bd);
    Protocol protocol = Protocol::jump(bd, jump_point);
    double w_fast = fast.excess_work_fast(protocol);
    double v_fast = fast.variance_fast(protocol);
    double w_exact = work_mean_exact(spec, protocol, steps);
    double v_exact = work_variance_exact(spec, protocol, steps);
    result.work_errors.push_back(std::abs(w_exact - w_fast));
    result.var_errors.push_back(std::abs(v_exact - v_fast));
  }
  std::tie(result.work_slope, result.work_at_floor) =
      loglog_slope(result.taus, result.work_errors);
  std::tie(result.var_slope, result.var_at_floor) =
      loglog_slope(result.taus, result.var_errors);
  return result;
}

}  // namespace fastdrive
