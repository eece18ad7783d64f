#include "fastdrive/analytic_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fastdrive/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fastdrive {

namespace {

double log_2cosh(double x) {
  double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) ;
}

double sech2(double x) {
  double ax = std::abs(x);
  if (ax > 300.0) return 4.0 * std::exp(-2.0 * ax);
  double c = std::cosh(x);
  return 1.0 / (c * c);
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Qubit

std::pair<double, double> qubit_savings_analytic(const QubitModel& model) {
  double na = model.lambda_a.norm();
  double nb = model.lambda_b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("qubit_savings_analytic: boundary points must be nonzero");
  }
  double cos_phi = model.lambda_a.dot(model.lambda_b) / (na * nb);
  double sin2_phi = model.lambda_a.cross(model.lambda_b).squaredNorm() / (na * na * nb * nb);
  double j = model.j_coupling;
  double th = std::tanh(model.beta * j * na);
  double p_star = 2.0 * model.alpha * j * j * sin2_phi * na * nb * nb * th;
  double bracket = 1.0 - th * th * (1.0 - (nb / na) * cos_phi);
  double c_star = 4.0 * model.alpha * j * j * j * sin2_phi * na * na * nb * nb * bracket;
  return {p_star, c_star};
}

double qubit_alpha_bound(const QubitModel& model, double tau) {
  double na = model.lambda_a.norm();
  double nb = model.lambda_b.norm();
  double sin_phi = model.lambda_a.cross(model.lambda_b).norm() / (na * nb);
  if (sin_phi == 0.0) return std::numeric_limits<double>::infinity();
  double bound = 1.0 / (model.j_coupling * tau * sin_phi * na * nb);
  if (model.alpha > 0.1 * bound) {
    warn("qubit jump magnitude alpha=" + std::to_string(model.alpha) +
         " is not small against the validity bound " + std::to_string(bound));
  }
  return bound;
}

HamiltonianFamily qubit_family(const QubitModel& model) {
  double j = model.j_coupling;
  return HamiltonianFamily(Matrix::Zero(2, 2),
                           {j * pauli_x(), j * pauli_y(), j * pauli_z()}, model.beta);
}

GeneratorSpec qubit_generator(const QubitModel& model) {
  return GeneratorSpec::unitary(qubit_family(model));
}

Boundary qubit_boundary(const QubitModel& model, double tau) {
  return Boundary(model.lambda_a, model.lambda_b, tau);
}

ControlPoint qubit_jump_point(const QubitModel& model) {
  Eigen::Vector3d p = model.alpha * model.lambda_a.cross(model.lambda_b);
  return p;
}

// ---------------------------------------------------------------------------
// Dot

double dot_transcendental_residual(const DotModel& model, double x) {
  double b = model.beta * model.eps_b;
  double ex = std::exp(x);
  return (0.5 - 1.0 / (1.0 + ex)) - (b - x) * ex / ((1.0 + ex) * (1.0 + ex));
}

DotOptima dot_optimal_points(const DotModel& model) {
  double b = model.beta * model.eps_b;
  if (!(b > 0.0)) {
    throw std::invalid_argument("dot_optimal_points: beta*eps_b must be positive");
  }
  DotOptima out;
  out.xi_asymptotic = std::log(2.0 * b) / model.beta;
  out.lambda = 0.5 * model.eps_b;

  double lo = 0.0, hi = b;
  double flo = dot_transcendental_residual(model, lo);
  double fhi = dot_transcendental_residual(model, hi);
  if (flo * fhi > 0.0) {
    throw std::runtime_error("dot_optimal_points: root bracket failure");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = dot_transcendental_residual(model, mid);
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  out.xi_exact = 0.5 * (lo + hi) / model.beta;
  return out;
}

HamiltonianFamily dot_family(const DotModel& model) {
  return HamiltonianFamily(Matrix::Zero(2, 2), {0.5 * pauli_z()}, model.beta);
}

GeneratorSpec dot_generator(const DotModel& model) {
  return GeneratorSpec::relaxation(dot_family(model), model.tau_eq);
}

Boundary dot_boundary(const DotModel& model, double tau) {
  ControlPoint a(1), b(1);
  a << 0.0;
  b << model.eps_b;
  return Boundary(a, b, tau);
}

// ---------------------------------------------------------------------------
// Scalar per-spin model

ScalarFastModel::ScalarFastModel(ScalarThermodynamics thermo, Boundary boundary)
    : thermo_(std::move(thermo)), boundary_(std::move(boundary)) {
  if (boundary_.lambda_a.size() != 1) {
    throw std::invalid_argument("ScalarFastModel: expects a single control");
  }
  double a = boundary_.lambda_a[0];
  double b = boundary_.lambda_b[0];
  mean_a_ = thermo_.mean_force(a);
  var_a_ = thermo_.var_force(a);
  double beta = thermo_.beta;
  // Quench identities from log Z: the force is exactly (H_B - H_A)/(b - a),
  // so the relative entropy and its variance reduce to first and second
  // cumulants of the force in the initial state.
  quench_work_ = (b - a) * mean_a_ + (thermo_.log_z(b) - thermo_.log_z(a)) / beta;
  quench_var_ = (b - a) * (b - a) * var_a_;
}

double ScalarFastModel::scalar_r(double lambda) const {
  return (thermo_.mean_force(lambda) - mean_a_) / thermo_.tau_eq;
}

double ScalarFastModel::scalar_g(double lambda) const {
  double r = scalar_r(lambda);
  return (thermo_.var_force(lambda) - var_a_) / thermo_.tau_eq + thermo_.tau_eq * r * r;
}

double ScalarFastModel::scalar_b() const { return -2.0 * var_a_ / thermo_.tau_eq; }

Vector ScalarFastModel::ifrr(const ControlPoint& lambda) const {
  Vector r(1);
  r[0] = scalar_r(lambda[0]);
  return r;
}

RealMatrix ScalarFastModel::g_matrix(const ControlPoint& lambda) const {
  RealMatrix g(1, 1);
  g(0, 0) = scalar_g(lambda[0]);
  return g;
}

RealMatrix ScalarFastModel::b_matrix(const ControlPoint& lambda) const {
  RealMatrix b(1, 1);
  b(0, 0) = scalar_b();
  return b;
}

// ---------------------------------------------------------------------------
// Classical Ising chain

ScalarThermodynamics classical_ising_thermodynamics(const ClassicalIsingModel& model) {
  double a = model.beta * model.j_coupling;
  double c = std::exp(-4.0 * a);
  double j = model.j_coupling;
  ScalarThermodynamics thermo;
  thermo.beta = model.beta;
  thermo.tau_eq = model.tau_eq;
  thermo.log_z = [a, j, beta = model.beta](double eps) {
    double s = std::sinh(a * eps);
    double c0 = std::exp(-4.0 * a);
    return beta * j + std::log(std::cosh(a * eps) + std::sqrt(s * s + c0));
  };
  thermo.mean_force = [a, c, j](double eps) {
    double s = std::sinh(a * eps);
    return -j * s / std::sqrt(s * s + c);
  };
  thermo.var_force = [a, c, j](double eps) {
    double s = std::sinh(a * eps);
    double den = s * s + c;
    return j * j * c * std::cosh(a * eps) / (den * std::sqrt(den));
  };
  return thermo;
}

ChainCoefficients classical_ising_coefficients(const ClassicalIsingModel& model,
                                               double eps) {
  ScalarThermodynamics thermo = classical_ising_thermodynamics(model);
  ControlPoint pa(1), pb(1);
  pa << model.eps_a;
  pb << model.eps_b;
  ScalarFastModel scalar(thermo, Boundary(pa, pb, 1.0));
  return {scalar.scalar_r(eps), scalar.scalar_g(eps), scalar.scalar_b()};
}

// ---------------------------------------------------------------------------
// TFIM chain

double tfim_dispersion(const TfimModel& model, double g, double k) {
  return 2.0 * model.j_coupling * std::sqrt(1.0 + g * g - 2.0 * g * std::cos(k));
}

double tfim_dispersion_dg(const TfimModel& model, double g, double k) {
  double u = 1.0 + g * g - 2.0 * g * std::cos(k);
  if (u <= 0.0) return 0.0;
  return 2.0 * model.j_coupling * (g - std::cos(k)) / std::sqrt(u);
}

double tfim_dispersion_d2g(const TfimModel& model, double g, double k) {
  double u = 1.0 + g * g - 2.0 * g * std::cos(k);
  if (u <= 0.0) return 0.0;
  double sk = std::sin(k);
  return 2.0 * model.j_coupling * sk * sk / (u * std::sqrt(u));
}

namespace {

double tfim_integral(const TfimModel& model, const std::function<double(double)>& f,
                     const char* what) {
  int n0 = std::max(model.quadrature_nodes, 64);
  auto [value, converged] = integrate_adaptive(f, 0.0, 2.0 * M_PI, n0, 1e-8, 4096);
  if (!converged) {
    auto [value6, converged6] = integrate_adaptive(f, 0.0, 2.0 * M_PI, n0, 1e-6, 4096);
    if (!converged6) {
      throw std::runtime_error(std::string(what) +
                               ": quadrature did not converge under node doubling");
    }
    return value6;
  }
  return value;
}

}  // namespace

ScalarThermodynamics tfim_thermodynamics(const TfimModel& model) {
  ScalarThermodynamics thermo;
  thermo.beta = model.beta;
  thermo.tau_eq = model.tau_eq;
  double beta = model.beta;
  // Verbatim convention: no 1/(2 pi) in front of the k-integrals. All
  // relative savings divide it out again.
  thermo.log_z = [model, beta](double g) {
    return tfim_integral(
        model,
        [&](double k) { return log_2cosh(0.5 * beta * tfim_dispersion(model, g, k)); },
        "tfim log_z");
  };
  thermo.mean_force = [model, beta](double g) {
    return tfim_integral(
        model,
        [&](double k) {
          return -0.5 * tfim_dispersion_dg(model, g, k) *
                 std::tanh(0.5 * beta * tfim_dispersion(model, g, k));
        },
        "tfim mean_force");
  };
  thermo.var_force = [model, beta](double g) {
    return tfim_integral(
        model,
        [&](double k) {
          double e = tfim_dispersion(model, g, k);
          double de = tfim_dispersion_dg(model, g, k);
          double dde = tfim_dispersion_d2g(model, g, k);
          return (0.5 / beta) * (dde * std::tanh(0.5 * beta * e) +
                                 0.5 * beta * de * de * sech2(0.5 * beta * e));
        },
        "tfim var_force");
  };
  return thermo;
}

ChainCoefficients tfim_coefficients(const TfimModel& model, double g) {
  ScalarThermodynamics thermo = tfim_thermodynamics(model);
  ControlPoint pa(1), pb(1);
  pa << model.g_a;
  pb << model.g_b;
  ScalarFastModel scalar(thermo, Boundary(pa, pb, 1.0));
  return {scalar.scalar_r(g), scalar.scalar_g(g), scalar.scalar_b()};
}

// ---------------------------------------------------------------------------
// Temperature scan

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log_spaced: need n >= 2 and 0 < lo < hi");
  }
  std::vector<double> out(n);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  }
  return out;
}

std::vector<ChainScanRow> chain_jump_scan(
    const std::function<ScalarThermodynamics(double beta)>& thermo_at_beta,
    double control_a, double control_b, double tau_eq,
    const std::vector<double>& temperatures, bool parallel) {
  int n = static_cast<int>(temperatures.size());
  std::vector<ChainScanRow> rows(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int i = 0; i < n; ++i) {
    ChainScanRow row;
    row.temperature = temperatures[i];
    try {
      double beta = 1.0 / temperatures[i];
      ScalarThermodynamics thermo = thermo_at_beta(beta);
      ControlPoint pa(1), pb(1);
      pa << control_a;
      pb << control_b;
      Boundary boundary(pa, pb, 1e-3 * tau_eq);
      ScalarFastModel model(thermo, boundary);

      SearchBox box{Vector::Constant(1, std::min(control_a, control_b)),
                    Vector::Constant(1, std::max(control_a, control_b))};
      OptimizationProblem power{&model, ObjectiveSpec::power(), box};
      OptimizationProblem constancy{&model, ObjectiveSpec::constancy(), box};
      JumpSolution sol_p = solve_jump(power);
      JumpSolution sol_c = solve_jump(constancy);

      row.xi = sol_p.optimum[0];
      row.lambda = sol_c.optimum[0];
      row.p_save_opt = sol_p.savings.p_save;
      row.c_save_at_xi = sol_p.savings.c_save;
      row.c_save_opt = sol_c.savings.c_save;
      row.p_save_at_lambda = sol_c.savings.p_save;

      SavingsReport linear = model.savings(Protocol::linear(boundary, 65));
      row.p_save_linear = linear.p_save;
      row.c_save_linear = linear.c_save;

      row.quench_work = model.quench_work();
      row.quench_var = model.quench_var();
      row.rel_p_opt = row.quench_work != 0.0
                          ? row.p_save_opt * tau_eq / row.quench_work
                          : 0.0;
      row.rel_c_opt =
          row.quench_var != 0.0 ? row.c_save_opt * tau_eq / row.quench_var : 0.0;
      row.solver_ok = true;
    } catch (const std::exception& e) {
      row.solver_ok = false;
      warn("chain_jump_scan: temperature " + std::to_string(row.temperature) +
           " failed: " + e.what());
    }
    rows[i] = row;
  }
  return rows;
}

}  // namespace fastdrive
