#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fastdrive/analytic_models.hpp"
#include "fastdrive/operator_core.hpp"
#include "test_helpers.hpp"

using namespace fastdrive;
using namespace fastdrive::testing;

namespace {

QubitModel xz_qubit(double alpha) {
  QubitModel m;
  m.j_coupling = 1.0;
  m.beta = 1.0;
  m.lambda_a = Eigen::Vector3d(1.0, 0.0, 0.0);
  m.lambda_b = Eigen::Vector3d(0.0, 0.0, 1.0);
  m.alpha = alpha;
  return m;
}

Boundary scalar_boundary(double a, double b, double tau) {
  ControlPoint pa(1), pb(1);
  pa << a;
  pb << b;
  return Boundary(pa, pb, tau);
}

double central_derivative(const std::function<double(double)>& f, double x,
                          double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("qubit savings vanish for collinear boundary fields") {
  QubitModel m = xz_qubit(0.05);
  m.lambda_b = 2.0 * m.lambda_a;
  auto [p, c] = qubit_savings_analytic(m);
  CHECK(p == doctest::Approx(0.0));
  CHECK(c == doctest::Approx(0.0));
  CHECK(qubit_jump_point(m).norm() == doctest::Approx(0.0));
}

TEST_CASE("qubit closed forms at orthogonal unit fields") {
  // a = x, b = z, J = beta = 1: P* = 2 alpha tanh(1),
  // C* = 4 alpha (1 - tanh^2(1)) since cos(phi) = 0.
  double alpha = 0.05;
  QubitModel m = xz_qubit(alpha);
  auto [p, c] = qubit_savings_analytic(m);
  double t = std::tanh(1.0);
  CHECK(p == doctest::Approx(2.0 * alpha * t).epsilon(1e-13));
  CHECK(c == doctest::Approx(4.0 * alpha * (1.0 - t * t)).epsilon(1e-13));
}

TEST_CASE("qubit closed forms match the matrix pipeline") {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    QubitModel m;
    m.j_coupling = 0.8;
    m.beta = 1.3;
    m.lambda_a = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    m.lambda_b = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
    m.alpha = 0.07;
    FastEvaluator fast(qubit_generator(m), qubit_boundary(m, 1.0));
    SavingsReport rep = fast.savings_at_jump(qubit_jump_point(m));
    auto [p, c] = qubit_savings_analytic(m);
    CHECK(rep.p_save == doctest::Approx(p).epsilon(1e-9));
    CHECK(rep.c_save == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("qubit alpha bound warns only when alpha is too large") {
  std::vector<std::string> captured;
  set_warning_handler([&](const std::string& msg) { captured.push_back(msg); });

  QubitModel small = xz_qubit(0.01);
  double bound = qubit_alpha_bound(small, 1.0);
  CHECK(bound == doctest::Approx(1.0).epsilon(1e-12));  // 1/(J tau |sin| |a||b|)
  CHECK(captured.empty());

  QubitModel big = xz_qubit(0.5);
  qubit_alpha_bound(big, 1.0);
  CHECK(!captured.empty());
  set_warning_handler(nullptr);
}

TEST_CASE("dot stationary points solve the transcendental condition") {
  DotModel m;
  m.beta = 1.0;
  m.eps_b = 10.0;
  m.tau_eq = 1.0;
  DotOptima opt = dot_optimal_points(m);
  CHECK(std::abs(dot_transcendental_residual(m, m.beta * opt.xi_exact)) < 1e-12);
  CHECK(opt.lambda == doctest::Approx(5.0));
  CHECK(opt.xi_asymptotic == doctest::Approx(std::log(20.0)));

  // Deep in the asymptotic regime the exact root approaches ln(2 beta eps_B)
  // from below.
  DotModel deep = m;
  deep.eps_b = 50.0;
  DotOptima deep_opt = dot_optimal_points(deep);
  CHECK(deep_opt.xi_exact < deep_opt.xi_asymptotic);
  CHECK(std::abs(deep_opt.xi_exact - deep_opt.xi_asymptotic) /
            deep_opt.xi_asymptotic <
        0.1);
}

TEST_CASE("dot matrix pipeline matches the two-level scalar thermodynamics") {
  DotModel m;
  m.beta = 1.4;
  m.eps_b = 8.0;
  m.tau_eq = 0.7;
  double beta = m.beta;
  ScalarThermodynamics thermo;
  thermo.beta = beta;
  thermo.tau_eq = m.tau_eq;
  thermo.log_z = [beta](double e) { return std::log(2.0 * std::cosh(beta * e / 2.0)); };
  thermo.mean_force = [beta](double e) { return -0.5 * std::tanh(beta * e / 2.0); };
  thermo.var_force = [beta](double e) {
    double s = 1.0 / std::cosh(beta * e / 2.0);
    return 0.25 * s * s;
  };
  Boundary bd = scalar_boundary(0.0, m.eps_b, 1e-3);
  ScalarFastModel scalar(thermo, bd);
  FastEvaluator fast(dot_generator(m), dot_boundary(m, 1e-3));
  for (double eps : {0.5, 2.0, 5.5}) {
    ControlPoint pt(1);
    pt << eps;
    CHECK(fast.ifrr(pt)[0] == doctest::Approx(scalar.ifrr(pt)[0]).epsilon(1e-10));
    CHECK(fast.g_matrix(pt)(0, 0) ==
          doctest::Approx(scalar.g_matrix(pt)(0, 0)).epsilon(1e-10));
    CHECK(fast.b_matrix(pt)(0, 0) ==
          doctest::Approx(scalar.b_matrix(pt)(0, 0)).epsilon(1e-10));
  }
  CHECK(fast.quench_work() == doctest::Approx(scalar.quench_work()).epsilon(1e-10));
  CHECK(fast.quench_var() == doctest::Approx(scalar.quench_var()).epsilon(1e-10));
  // The dot has G identically zero and a constant B.
  ControlPoint pt(1);
  pt << 3.0;
  CHECK(std::abs(fast.g_matrix(pt)(0, 0)) < 1e-12);
  CHECK(fast.b_matrix(pt)(0, 0) == doctest::Approx(-0.5 / m.tau_eq).epsilon(1e-10));
}

TEST_CASE("classical Ising thermodynamics are internally consistent") {
  ClassicalIsingModel m;
  m.j_coupling = 1.3;
  m.beta = 0.8;
  ScalarThermodynamics thermo = classical_ising_thermodynamics(m);
  for (double eps : {0.3, 1.0, 4.0}) {
    // mean = -(1/beta) d log Z / d eps, var = -(1/beta) d mean / d eps.
    double dlogz = central_derivative(thermo.log_z, eps);
    CHECK(thermo.mean_force(eps) == doctest::Approx(-dlogz / m.beta).epsilon(1e-7));
    double dmean = central_derivative(thermo.mean_force, eps);
    CHECK(thermo.var_force(eps) == doctest::Approx(-dmean / m.beta).epsilon(1e-6));
    CHECK(thermo.var_force(eps) > 0.0);
  }
}

TEST_CASE("classical Ising coefficients vanish at the initial field") {
  ClassicalIsingModel m;
  m.eps_a = 0.0;
  m.eps_b = 10.0;
  ChainCoefficients at_a = classical_ising_coefficients(m, m.eps_a);
  CHECK(std::abs(at_a.r) < 1e-14);
  CHECK(std::abs(at_a.g) < 1e-14);
  CHECK(at_a.b < 0.0);  // -2 var(eps_A)/tau_eq

  // High-temperature linearization: R -> -beta J^2 eps.
  ClassicalIsingModel hot = m;
  hot.beta = 1e-4;
  double eps = 2.0;
  ChainCoefficients c = classical_ising_coefficients(hot, eps);
  CHECK(c.r == doctest::Approx(-hot.beta * hot.j_coupling * hot.j_coupling * eps)
                   .epsilon(1e-3));
}

TEST_CASE("TFIM dispersion derivatives match finite differences") {
  TfimModel m;
  m.j_coupling = 1.2;
  for (double g : {0.4, 1.5}) {
    for (double k : {0.7, 2.4}) {
      double fd1 = central_derivative(
          [&](double gg) { return tfim_dispersion(m, gg, k); }, g);
      CHECK(tfim_dispersion_dg(m, g, k) == doctest::Approx(fd1).epsilon(1e-7));
      double fd2 = central_derivative(
          [&](double gg) { return tfim_dispersion_dg(m, gg, k); }, g);
      CHECK(tfim_dispersion_d2g(m, g, k) == doctest::Approx(fd2).epsilon(1e-6));
    }
  }
}

TEST_CASE("TFIM coefficients behave at the anchors and the critical point") {
  TfimModel m;
  m.j_coupling = 1.0;
  m.beta = 1.0;
  m.g_a = 0.0;
  m.g_b = 3.0;
  ChainCoefficients at_a = tfim_coefficients(m, m.g_a);
  CHECK(std::abs(at_a.r) < 1e-10);
  CHECK(std::abs(at_a.g) < 1e-10);
  CHECK(at_a.b < 0.0);
  CHECK_NOTHROW(tfim_coefficients(m, 1.0));  // gapless point of the dispersion

  // Large transverse field: <X>_g -> -2 pi J.
  ScalarThermodynamics thermo = tfim_thermodynamics(m);
  CHECK(thermo.mean_force(100.0) ==
        doctest::Approx(-2.0 * M_PI * m.j_coupling).epsilon(0.02));

  // Node count is a starting resolution only; results are converged.
  TfimModel fine = m;
  fine.quadrature_nodes = 128;
  ChainCoefficients coarse = tfim_coefficients(m, 2.0);
  ChainCoefficients refined = tfim_coefficients(fine, 2.0);
  CHECK(coarse.r == doctest::Approx(refined.r).epsilon(1e-8));
  CHECK(coarse.g == doctest::Approx(refined.g).epsilon(1e-8));
  CHECK(coarse.b == doctest::Approx(refined.b).epsilon(1e-8));
}

TEST_CASE("chain scan is deterministic across serial and parallel runs") {
  ClassicalIsingModel base;
  base.j_coupling = 1.0;
  base.eps_a = 0.0;
  base.eps_b = 10.0;
  base.tau_eq = 1.0;
  auto thermo_at_beta = [&](double beta) {
    ClassicalIsingModel m = base;
    m.beta = beta;
    return classical_ising_thermodynamics(m);
  };
  std::vector<double> temps = log_spaced(0.5, 5.0, 4);
  auto par = chain_jump_scan(thermo_at_beta, base.eps_a, base.eps_b, base.tau_eq,
                             temps, true);
  auto ser = chain_jump_scan(thermo_at_beta, base.eps_a, base.eps_b, base.tau_eq,
                             temps, false);
  REQUIRE(par.size() == ser.size());
  for (size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].solver_ok);
    CHECK(par[i].xi == doctest::Approx(ser[i].xi).epsilon(1e-12));
    CHECK(par[i].lambda == doctest::Approx(ser[i].lambda).epsilon(1e-12));
    CHECK(par[i].p_save_opt == doctest::Approx(ser[i].p_save_opt).epsilon(1e-12));
    CHECK(par[i].c_save_opt == doctest::Approx(ser[i].c_save_opt).epsilon(1e-12));
    // Optimal jumps never lose to the linear ramp.
    CHECK(par[i].p_save_opt >= par[i].p_save_linear - 1e-10);
    CHECK(par[i].c_save_opt >= par[i].c_save_linear - 1e-10);
  }
}

TEST_CASE("log_spaced spans the requested decade grid") {
  std::vector<double> pts = log_spaced(0.1, 10.0, 5);
  REQUIRE(pts.size() == 5);
  CHECK(pts.front() == doctest::Approx(0.1));
  CHECK(pts.back() == doctest::Approx(10.0));
  for (size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i] / pts[i - 1] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
  }
}
