#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fastdrive/analytic_models.hpp"
#include "fastdrive/exact_reference.hpp"
#include "test_helpers.hpp"

using namespace fastdrive;
using namespace fastdrive::testing;

namespace {

Boundary scalar_boundary(double a, double b, double tau) {
  ControlPoint pa(1), pb(1);
  pa << a;
  pb << b;
  return Boundary(pa, pb, tau);
}

}  // namespace

TEST_CASE("propagate holds the relaxation fixed point") {
  std::mt19937_64 rng(41);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  GeneratorSpec spec = GeneratorSpec::relaxation(fam, 0.7);
  ControlPoint pt = random_point(2, rng);
  Boundary bd(random_point(2, rng), random_point(2, rng), 2.0);
  Protocol jump = Protocol::jump(bd, pt);
  Matrix pi = gibbs_state(fam, pt);
  Trajectory traj = propagate(spec, jump, pi, 8);
  CHECK(traj.times.back() == doctest::Approx(2.0));
  for (const Matrix& rho : traj.states) {
    CHECK((rho - pi).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("propagate matches the analytic relaxation to a held point") {
  // Under L[rho] = (pi(xi) - rho)/tau_eq the solution is an exponential
  // interpolation between the initial state and the target Gibbs state.
  std::mt19937_64 rng(42);
  HamiltonianFamily fam = random_family(3, 2, 0.9, rng);
  double tau_eq = 0.6;
  GeneratorSpec spec = GeneratorSpec::relaxation(fam, tau_eq);
  Boundary bd(random_point(2, rng), random_point(2, rng), 1.5);
  ControlPoint pt = random_point(2, rng);
  Protocol jump = Protocol::jump(bd, pt);
  Matrix pia = gibbs_state(fam, bd.lambda_a);
  Matrix pix = gibbs_state(fam, pt);
  Trajectory traj = propagate(spec, jump, pia, 16);
  REQUIRE(traj.times.size() == traj.states.size());
  for (size_t i = 0; i < traj.times.size(); ++i) {
    double decay = std::exp(-traj.times[i] / tau_eq);
    Matrix analytic = decay * pia + (1.0 - decay) * pix;
    CHECK((traj.states[i] - analytic).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("unitary propagation preserves the state spectrum") {
  std::mt19937_64 rng(43);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  GeneratorSpec spec = GeneratorSpec::unitary(fam);
  Boundary bd(random_point(2, rng), random_point(2, rng), 1.0);
  Protocol lin = Protocol::linear(bd, 9);
  Matrix rho0 = gibbs_state(fam, bd.lambda_a);
  Trajectory traj = propagate(spec, lin, rho0, 400);
  Eigen::SelfAdjointEigenSolver<Matrix> es0(rho0);
  Eigen::SelfAdjointEigenSolver<Matrix> es1(traj.states.back());
  CHECK((es0.eigenvalues() - es1.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs(traj.states.back().trace().real() - 1.0) < 1e-10);
}

TEST_CASE("RK4 stepping converges at fourth order") {
  std::mt19937_64 rng(44);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  GeneratorSpec spec = GeneratorSpec::unitary(fam);
  Boundary bd(random_point(2, rng), random_point(2, rng), 1.0);
  Protocol lin = Protocol::linear(bd, 3);
  Matrix rho0 = gibbs_state(fam, bd.lambda_a);
  Matrix ref = propagate(spec, lin, rho0, 1024).states.back();
  double e1 = (propagate(spec, lin, rho0, 16).states.back() - ref).cwiseAbs().maxCoeff();
  double e2 = (propagate(spec, lin, rho0, 32).states.back() - ref).cwiseAbs().maxCoeff();
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("quench limit of the exact work is the relative entropy") {
  // As tau -> 0 the state has no time to move, so <W> - dF -> S(pi_A||pi_B)/beta
  // for any jump point, and the variance -> V(pi_A||pi_B)/beta^2 even when the
  // boundary Hamiltonians do not commute.
  std::mt19937_64 rng(45);
  HamiltonianFamily fam = random_family(3, 2, 0.8, rng);
  GeneratorSpec spec = GeneratorSpec::relaxation(fam, 1.0);
  Boundary bd(random_point(2, rng), random_point(2, rng), 1e-10);
  Matrix pia = gibbs_state(fam, bd.lambda_a);
  Matrix pib = gibbs_state(fam, bd.lambda_b);
  ControlPoint mid = 0.5 * (bd.lambda_a + bd.lambda_b);
  Protocol jump = Protocol::jump(bd, mid);
  CHECK(work_mean_exact(spec, jump, 1) ==
        doctest::Approx(relative_entropy(pia, pib) / fam.beta).epsilon(1e-8));
  CHECK(work_variance_exact(spec, jump, 1) ==
        doctest::Approx(relative_entropy_variance(pia, pib) / (fam.beta * fam.beta))
            .epsilon(1e-8));
}

TEST_CASE("commuting families match the classical two-point work oracle") {
  // Diagonal H_A, H_B: in the quench limit the work distribution is
  // p_i = pi_A(i), W_i = E_B(i) - E_A(i).
  std::mt19937_64 rng(46);
  for (int dim : {2, 4}) {
    HamiltonianFamily fam = random_commuting_family(dim, 2, 1.2, rng);
    GeneratorSpec spec = GeneratorSpec::relaxation(fam, 1.0);
    Boundary bd(random_point(2, rng), random_point(2, rng), 1e-9);
    Matrix ha = hamiltonian_at(fam, bd.lambda_a);
    Matrix hb = hamiltonian_at(fam, bd.lambda_b);
    Matrix pia = gibbs_state(fam, bd.lambda_a);
    double mean = 0.0, second = 0.0;
    for (int i = 0; i < dim; ++i) {
      double w = (hb(i, i) - ha(i, i)).real();
      double p = pia(i, i).real();
      mean += p * w;
      second += p * w * w;
    }
    Protocol jump = Protocol::jump(bd, bd.lambda_b);
    double df = free_energy(fam, bd.lambda_b) - free_energy(fam, bd.lambda_a);
    CHECK(work_mean_exact(spec, jump, 1) == doctest::Approx(mean - df).epsilon(1e-8));
    CHECK(work_variance_exact(spec, jump, 1) ==
          doctest::Approx(second - mean * mean).epsilon(1e-8));
  }
}

TEST_CASE("parallel and serial exact variance agree") {
  std::mt19937_64 rng(47);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  GeneratorSpec spec = GeneratorSpec::relaxation(fam, 0.5);
  Boundary bd(random_point(2, rng), random_point(2, rng), 0.8);
  Protocol lin = Protocol::linear(bd, 9);
  double par = work_variance_exact(spec, lin, 48, true);
  double ser = work_variance_exact(spec, lin, 48, false);
  CHECK(par == doctest::Approx(ser).epsilon(1e-12));
}

TEST_CASE("loglog_slope recovers power laws and flags the floor") {
  std::vector<double> x{1e-3, 1e-2, 1e-1};
  std::vector<double> quadratic{3e-6, 3e-4, 3e-2};
  auto [slope, at_floor] = loglog_slope(x, quadratic);
  CHECK(slope == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(!at_floor);

  std::vector<double> tiny{1e-15, 1e-14, 1e-15};
  auto [floor_slope, floored] = loglog_slope(x, tiny);
  (void)floor_slope;
  CHECK(floored);
}

TEST_CASE("fast-driving errors of the dot shrink quadratically in tau") {
  DotModel m;
  m.beta = 1.0;
  m.eps_b = 10.0;
  m.tau_eq = 1.0;
  GeneratorSpec spec = dot_generator(m);
  Boundary bd = dot_boundary(m, 1.0);
  ControlPoint pt(1);
  pt << dot_optimal_points(m).xi_exact;
  ErrorScaling scaling =
      error_scaling(spec, bd, pt, {1e-3, 3e-3, 1e-2, 3e-2});
  CHECK(!scaling.work_at_floor);
  CHECK(!scaling.var_at_floor);
  CHECK(scaling.work_slope > 1.9);
  CHECK(scaling.var_slope > 1.9);
}
