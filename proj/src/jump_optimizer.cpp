#include "fastdrive/jump_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace fastdrive {

namespace {

double fd_step(const ControlPoint& lambda) { return 1e-5 * (1.0 + lambda.norm()); }

Vector fd_gradient(const std::function<double(const ControlPoint&)>& f,
                   const ControlPoint& x) {
  double h = fd_step(x);
  Vector g(x.size());
  ControlPoint xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  if (!g.allFinite()) {
    throw std::runtime_error("el_residual: non-finite integrand gradient");
  }
  return g;
}

RealMatrix fd_hessian(const std::function<double(const ControlPoint&)>& f,
                      const ControlPoint& x) {
  double h = fd_step(x);
  int d = static_cast<int>(x.size());
  RealMatrix hess(d, d);
  ControlPoint xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    Vector gp = fd_gradient(f, xp);
    Vector gm = fd_gradient(f, xm);
    hess.col(j) = (gp - gm) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return 0.5 * (hess + hess.transpose());
}

struct LocalResult {
  ControlPoint x;
  double f = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Minimize f inside the box: damped Newton on the gradient with a projected
// backtracking gradient-descent fallback.
LocalResult minimize_local(const std::function<double(const ControlPoint&)>& f,
                           const SearchBox& box, ControlPoint x0, double grad_tol) {
  const int max_iter = 400;
  ControlPoint x = box.clamp(std::move(x0));
  double fx = f(x);
  for (int iter = 0; iter < max_iter; ++iter) {
    Vector g = fd_gradient(f, x);
    if (g.norm() <= grad_tol) {
      return {x, fx, g.norm(), true};
    }
    bool stepped = false;

    RealMatrix hess = fd_hessian(f, x);
    double mu = 1e-12 * (1.0 + hess.cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8 && !stepped; ++attempt) {
      RealMatrix damped = hess + mu * RealMatrix::Identity(x.size(), x.size());
      Eigen::LDLT<RealMatrix> ldlt(damped);
      if (ldlt.info() == Eigen::Success) {
        Vector step = ldlt.solve(-g);
        if (step.allFinite() && step.norm() > 0.0) {
          ControlPoint cand = box.clamp(x + step);
          double fc = f(cand);
          Vector gc = fd_gradient(f, cand);
          if (fc <= fx + 1e-14 * std::abs(fx) && gc.norm() < g.norm()) {
            x = cand;
            fx = fc;
            stepped = true;
          }
        }
      }
      mu = std::max(mu * 10.0, 1e-10);
    }

    if (!stepped) {
      // Projected gradient descent with backtracking.
      double box_diag = (box.hi - box.lo).norm();
      double step = std::max(box_diag, 1e-6) / std::max(g.norm(), 1e-30);
      for (int bt = 0; bt < 60; ++bt) {
        ControlPoint cand = box.clamp(x - step * g);
        double fc = f(cand);
        if (fc < fx - 1e-16 * std::abs(fx)) {
          x = cand;
          fx = fc;
          stepped = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!stepped) {
      Vector g_final = fd_gradient(f, x);
      return {x, fx, g_final.norm(), g_final.norm() <= grad_tol};
    }
  }
  Vector g_final = fd_gradient(f, x);
  return {x, fx, g_final.norm(), g_final.norm() <= grad_tol};
}

double pareto_scale(const FastModel& model, bool homogenize) {
  if (!homogenize) return 1.0;
  double qw = model.quench_work();
  double qv = model.quench_var();
  if (std::abs(qw) < 1e-300 || std::abs(qv) < 1e-300) return 1.0;
  return qv / qw;
}

std::function<double(const ControlPoint&)> integrand_function(
    const FastModel& model, const ObjectiveSpec& objective, bool homogenize) {
  switch (objective.kind) {
    case ObjectiveSpec::Kind::Power:
      return [&model](const ControlPoint& l) { return model.power_integrand(l); };
    case ObjectiveSpec::Kind::Constancy:
      return [&model](const ControlPoint& l) { return model.variance_integrand(l); };
    case ObjectiveSpec::Kind::Pareto: {
      double w = objective.weight;
      double scale = pareto_scale(model, homogenize);
      return [&model, w, scale](const ControlPoint& l) {
        return w * model.power_integrand(l) +
               (1.0 - w) * model.variance_integrand(l) / scale;
      };
    }
  }
  throw std::logic_error("unknown objective kind");
}

std::vector<ControlPoint> make_seeds(const OptimizationProblem& problem) {
  const Boundary& bd = problem.model->boundary();
  std::vector<ControlPoint> seeds;
  seeds.push_back(bd.lambda_a);
  seeds.push_back(bd.lambda_b);
  seeds.push_back(0.5 * (bd.lambda_a + bd.lambda_b));
  int d = problem.model->dims();
  if (d == 1) {
    // Coarse bracketing grid plus log-spaced offsets from each endpoint;
    // chain models develop stationary points in thin layers near lambda_A.
    double lo = problem.box.lo[0], hi = problem.box.hi[0];
    for (int i = 1; i < 32; ++i) {
      ControlPoint p(1);
      p[0] = lo + (hi - lo) * i / 32.0;
      seeds.push_back(p);
    }
    double span = hi - lo;
    for (int k = 2; k <= 9; ++k) {
      double off = span * std::pow(10.0, -k);
      ControlPoint pa(1), pb(1);
      pa[0] = bd.lambda_a[0] + off;
      pb[0] = bd.lambda_b[0] - off;
      seeds.push_back(pa);
      seeds.push_back(pb);
    }
  } else {
    std::mt19937_64 rng(problem.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int extra = std::max(problem.starts - 3, 0);
    for (int s = 0; s < extra; ++s) {
      ControlPoint p(d);
      for (int i = 0; i < d; ++i) {
        p[i] = problem.box.lo[i] + unif(rng) * (problem.box.hi[i] - problem.box.lo[i]);
      }
      seeds.push_back(p);
    }
  }
  return seeds;
}

}  // namespace

SearchBox SearchBox::around(const Boundary& boundary, double margin) {
  Vector lo = boundary.lambda_a.cwiseMin(boundary.lambda_b);
  Vector hi = boundary.lambda_a.cwiseMax(boundary.lambda_b);
  Vector pad = margin * (hi - lo).cwiseMax(Vector::Ones(lo.size()));
  return SearchBox{lo - pad, hi + pad};
}

bool SearchBox::contains(const Vector& x, double tol) const {
  return ((x - lo).array() >= -tol).all() && ((hi - x).array() >= -tol).all();
}

Vector SearchBox::clamp(const Vector& x) const { return x.cwiseMax(lo).cwiseMin(hi); }

bool SearchBox::on_edge(const Vector& x, double tol) const {
  Vector span = (hi - lo).cwiseMax(1e-300);
  for (int i = 0; i < x.size(); ++i) {
    double rel = tol * span[i];
    if (x[i] - lo[i] <= rel || hi[i] - x[i] <= rel) return true;
  }
  return false;
}

ObjectiveSpec ObjectiveSpec::pareto(double weight) {
  if (weight < 0.0 || weight > 1.0) {
    throw std::invalid_argument("Pareto weight must be in [0, 1]");
  }
  return {Kind::Pareto, weight};
}

Vector el_residual_power(const FastModel& model, const ControlPoint& lambda) {
  return fd_gradient(
      [&model](const ControlPoint& l) { return model.power_integrand(l); }, lambda);
}

Vector el_residual_constancy(const FastModel& model, const ControlPoint& lambda) {
  return fd_gradient(
      [&model](const ControlPoint& l) { return model.variance_integrand(l); }, lambda);
}

Vector el_residual(const FastModel& model, const ObjectiveSpec& objective,
                   const ControlPoint& lambda, bool homogenize) {
  return fd_gradient(integrand_function(model, objective, homogenize), lambda);
}

std::pair<double, double> max_savings(const FastModel& model, const ControlPoint& point) {
  return {-model.power_integrand(point), -model.variance_integrand(point)};
}

double jump_objective(const FastModel& model, const ObjectiveSpec& objective,
                      const ControlPoint& point, bool homogenize) {
  return -integrand_function(model, objective, homogenize)(point);
}

ValidityDiagnostic validity_check(const GeneratorSpec& spec, const Boundary& boundary,
                                  const ControlPoint& point, double tau) {
  Matrix h_pt = hamiltonian_at(spec.family, point);
  Matrix h_a = hamiltonian_at(spec.family, boundary.lambda_a);
  Matrix h_b = hamiltonian_at(spec.family, boundary.lambda_b);
  ValidityDiagnostic diag;
  diag.delta_h = 2.0 * std::max(trace_norm(h_pt - h_a), trace_norm(h_b - h_pt));
  double tau_c = characteristic_timescale(spec, boundary, {point});
  diag.tau_over_tau_c = tau / tau_c;
  diag.warning = diag.tau_over_tau_c > 0.1;
  return diag;
}

JumpSolution solve_jump(const OptimizationProblem& problem) {
  if (problem.model == nullptr) {
    throw std::invalid_argument("solve_jump: missing model");
  }
  const FastModel& model = *problem.model;
  auto f = integrand_function(model, problem.objective, problem.pareto_homogenize);

  std::vector<ControlPoint> seeds = make_seeds(problem);
  double grad_scale = 0.0;
  for (const ControlPoint& s : seeds) {
    grad_scale = std::max(grad_scale, fd_gradient(f, problem.box.clamp(s)).norm());
  }
  double grad_tol = 1e-9 * std::max(grad_scale, 1e-30);

  std::optional<LocalResult> best;
  for (const ControlPoint& seed : seeds) {
    LocalResult local = minimize_local(f, problem.box, seed, grad_tol);
    bool better = false;
    if (!best) {
      better = true;
    } else if (local.f < best->f - 1e-14 * std::abs(best->f)) {
      better = true;
    } else if (std::abs(local.f - best->f) <= 1e-12 * std::max(1.0, std::abs(best->f))) {
      better = (local.x - model.boundary().lambda_a).norm() <
               (best->x - model.boundary().lambda_a).norm();
    }
    if (better) best = local;
  }

  JumpSolution solution;
  solution.optimum = best->x;
  solution.objective_value = -best->f;
  solution.el_residual_norm = best->grad_norm;
  solution.converged = best->converged;
  solution.box_limited = !best->converged && problem.box.on_edge(best->x);
  solution.savings = model.savings_at_jump(best->x);
  if (const auto* evaluator = dynamic_cast<const FastEvaluator*>(&model)) {
    solution.validity = validity_check(evaluator->spec(), evaluator->boundary(),
                                       best->x, evaluator->boundary().tau);
  }
  return solution;
}

}  // namespace fastdrive
