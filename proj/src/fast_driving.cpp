#include "fastdrive/fast_driving.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastdrive {

Protocol Protocol::jump(Boundary boundary, ControlPoint jump_point) {
  if (jump_point.size() != boundary.lambda_a.size()) {
    throw std::invalid_argument("Protocol::jump: jump point dimension mismatch");
  }
  return Protocol{std::move(boundary), JumpShape{std::move(jump_point)}};
}

Protocol Protocol::linear(Boundary boundary, int nodes) {
  if (nodes < 3) {
    throw std::invalid_argument("Protocol::linear: need at least 3 nodes");
  }
  std::vector<double> times(nodes);
  std::vector<ControlPoint> points(nodes);
  for (int i = 0; i < nodes; ++i) {
    double s = static_cast<double>(i) / (nodes - 1);
    times[i] = s * boundary.tau;
    points[i] = (1.0 - s) * boundary.lambda_a + s * boundary.lambda_b;
  }
  return Protocol{std::move(boundary), SampledShape{std::move(times), std::move(points)}};
}

Protocol Protocol::sampled(Boundary boundary, std::vector<double> times,
                           std::vector<ControlPoint> points) {
  if (times.size() < 3) {
    throw std::invalid_argument("Protocol::sampled: need at least 3 nodes");
  }
  if (times.size() != points.size()) {
    throw std::invalid_argument("Protocol::sampled: times/points size mismatch");
  }
  if (times.front() != 0.0 || std::abs(times.back() - boundary.tau) > 1e-12 * boundary.tau) {
    throw std::invalid_argument("Protocol::sampled: grid must span [0, tau]");
  }
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("Protocol::sampled: grid must be strictly increasing");
    }
  }
  for (const ControlPoint& p : points) {
    if (p.size() != boundary.lambda_a.size()) {
      throw std::invalid_argument("Protocol::sampled: point dimension mismatch");
    }
  }
  return Protocol{std::move(boundary), SampledShape{std::move(times), std::move(points)}};
}

ControlPoint Protocol::at(double t) const {
  if (const auto* jump = std::get_if<JumpShape>(&shape)) {
    return jump->jump_point;
  }
  const auto& s = std::get<SampledShape>(shape);
  if (t <= s.times.front()) return s.points.front();
  if (t >= s.times.back()) return s.points.back();
  auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  size_t i = static_cast<size_t>(it - s.times.begin());
  double u = (t - s.times[i - 1]) / (s.times[i] - s.times[i - 1]);
  return (1.0 - u) * s.points[i - 1] + u * s.points[i];
}

double simpson_path_integral(const Protocol& protocol,
                             const std::function<double(const ControlPoint&)>& f) {
  const auto& s = std::get<SampledShape>(protocol.shape);
  double total = 0.0;
  for (size_t i = 0; i + 1 < s.times.size(); ++i) {
    double h = s.times[i + 1] - s.times[i];
    ControlPoint mid = 0.5 * (s.points[i] + s.points[i + 1]);
    total += h / 6.0 * (f(s.points[i]) + 4.0 * f(mid) + f(s.points[i + 1]));
  }
  return total;
}

double FastModel::power_integrand(const ControlPoint& lambda) const {
  const Boundary& bd = boundary();
  return (bd.lambda_b - lambda).dot(ifrr(lambda));
}

double FastModel::variance_integrand(const ControlPoint& lambda) const {
  const Boundary& bd = boundary();
  Vector to_b = bd.lambda_b - lambda;
  Vector from_a = lambda - bd.lambda_a;
  return to_b.dot(g_matrix(lambda) * to_b) + to_b.dot(b_matrix(lambda) * from_a);
}

double FastModel::excess_work_fast(const Protocol& protocol) const {
  double correction;
  if (protocol.is_jump()) {
    correction = protocol.boundary.tau *
                 power_integrand(std::get<JumpShape>(protocol.shape).jump_point);
  } else {
    correction = simpson_path_integral(
        protocol, [this](const ControlPoint& l) { return power_integrand(l); });
  }
  return quench_work() + correction;
}

double FastModel::variance_fast(const Protocol& protocol) const {
  double correction;
  if (protocol.is_jump()) {
    correction = protocol.boundary.tau *
                 variance_integrand(std::get<JumpShape>(protocol.shape).jump_point);
  } else {
    correction = simpson_path_integral(
        protocol, [this](const ControlPoint& l) { return variance_integrand(l); });
  }
  return quench_var() + correction;
}

SavingsReport FastModel::savings(const Protocol& protocol) const {
  SavingsReport report;
  report.tau = protocol.boundary.tau;
  report.quench_work = quench_work();
  report.quench_var = quench_var();
  report.w_ex_approx = excess_work_fast(protocol);
  report.var_approx = variance_fast(protocol);
  report.p_save = (report.quench_work - report.w_ex_approx) / report.tau;
  report.c_save = (report.quench_var - report.var_approx) / report.tau;
  return report;
}

SavingsReport FastModel::savings_at_jump(const ControlPoint& point) const {
  return savings(Protocol::jump(boundary(), point));
}

FastEvaluator::FastEvaluator(GeneratorSpec spec, Boundary boundary)
    : spec_(std::move(spec)), boundary_(std::move(boundary)) {
  if (boundary_.lambda_a.size() != spec_.family.controls()) {
    throw std::invalid_argument("FastEvaluator: boundary dimension mismatch");
  }
  pi_a_ = gibbs_state(spec_.family, boundary_.lambda_a);
  shifted_forces_.reserve(spec_.family.forces.size());
  for (const Matrix& x : spec_.family.forces) {
    shifted_forces_.push_back(shifted_observable(x, pi_a_));
  }
  Matrix pi_b = gibbs_state(spec_.family, boundary_.lambda_b);
  double beta = spec_.family.beta;
  quench_work_ = relative_entropy(pi_a_, pi_b) / beta;
  quench_var_ = relative_entropy_variance(pi_a_, pi_b) / (beta * beta);
}

int FastEvaluator::dims() const { return spec_.family.controls(); }

Vector FastEvaluator::ifrr(const ControlPoint& lambda) const {
  int d = dims();
  Vector r(d);
  for (int j = 0; j < d; ++j) {
    Matrix adj = apply_adjoint(spec_, lambda, spec_.family.forces[j]);
    r[j] = (adj * pi_a_).trace().real();
  }
  return r;
}

RealMatrix FastEvaluator::g_matrix(const ControlPoint& lambda) const {
  int d = dims();
  RealMatrix g(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      Matrix pair = anticommutator(shifted_forces_[j], shifted_forces_[k]);
      Matrix adj = apply_adjoint(spec_, lambda, pair);
      g(j, k) = 0.5 * (adj * pi_a_).trace().real();
      g(k, j) = g(j, k);
    }
  }
  return g;
}

RealMatrix FastEvaluator::b_matrix(const ControlPoint& lambda) const {
  int d = dims();
  RealMatrix b(d, d);
  for (int j = 0; j < d; ++j) {
    Matrix adj = apply_adjoint(spec_, lambda, shifted_forces_[j]);
    for (int k = 0; k < d; ++k) {
      b(j, k) = (anticommutator(adj, shifted_forces_[k]) * pi_a_).trace().real();
    }
  }
  return b;
}

FastCoefficients FastEvaluator::coefficients(const ControlPoint& lambda) const {
  return FastCoefficients{ifrr(lambda), g_matrix(lambda), b_matrix(lambda)};
}

RealMatrix FastEvaluator::covariance_metric(const ControlPoint& lambda) const {
  int d = dims();
  Matrix pi = gibbs_state(spec_.family, lambda);
  Vector means(d);
  for (int j = 0; j < d; ++j) {
    means[j] = (spec_.family.forces[j] * pi).trace().real();
  }
  RealMatrix f(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      double sym = 0.5 * (anticommutator(spec_.family.forces[j], spec_.family.forces[k]) * pi)
                             .trace()
                             .real();
      f(j, k) = sym - means[j] * means[k];
      f(k, j) = f(j, k);
    }
  }
  return f;
}

FastCoefficients FastEvaluator::relaxation_closed_form(const ControlPoint& lambda) const {
  if (spec_.kind != GeneratorKind::Relaxation) {
    throw std::logic_error("relaxation_closed_form: generator is not Relaxation");
  }
  int d = dims();
  double tau_eq = spec_.tau_eq;
  Matrix pi = gibbs_state(spec_.family, lambda);
  Vector mean_lambda(d), mean_a(d);
  for (int j = 0; j < d; ++j) {
    mean_lambda[j] = (spec_.family.forces[j] * pi).trace().real();
    mean_a[j] = (spec_.family.forces[j] * pi_a_).trace().real();
  }
  FastCoefficients c;
  c.r = (mean_lambda - mean_a) / tau_eq;
  RealMatrix f_lambda = covariance_metric(lambda);
  RealMatrix f_a = covariance_metric(boundary_.lambda_a);
  c.g = (f_lambda - f_a) / tau_eq + tau_eq * (c.r * c.r.transpose());
  c.b = -2.0 / tau_eq * f_a;
  return c;
}

FastCoefficients FastEvaluator::unitary_closed_form(const ControlPoint& lambda) const {
  if (spec_.kind != GeneratorKind::Unitary) {
    throw std::logic_error("unitary_closed_form: generator is not Unitary");
  }
  const Complex kImag(0.0, 1.0);
  int d = dims();
  Matrix h = hamiltonian_at(spec_.family, lambda);
  FastCoefficients c;
  c.r.resize(d);
  c.g.resize(d, d);
  c.b.resize(d, d);
  for (int j = 0; j < d; ++j) {
    c.r[j] = (-kImag * commutator(spec_.family.forces[j], h) * pi_a_).trace().real();
    for (int k = 0; k < d; ++k) {
      Matrix pair = anticommutator(shifted_forces_[j], shifted_forces_[k]);
      c.g(j, k) = (-0.5 * kImag * commutator(pair, h) * pi_a_).trace().real();
      Matrix moved = commutator(shifted_forces_[j], h);
      c.b(j, k) =
          (-kImag * anticommutator(moved, shifted_forces_[k]) * pi_a_).trace().real();
    }
  }
  return c;
}

}  // namespace fastdrive
