#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fastdrive/generators.hpp"
#include "test_helpers.hpp"

using namespace fastdrive;
using namespace fastdrive::testing;

namespace {

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

HamiltonianFamily gap_family(double beta) {
  return HamiltonianFamily(Matrix::Zero(2, 2), {0.5 * pauli_z()}, beta);
}

Eigen::VectorXcd vec(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

}  // namespace

TEST_CASE("HamiltonianFamily constructor validates its inputs") {
  std::mt19937_64 rng(21);
  Matrix h2 = random_hermitian(2, rng);
  Matrix h3 = random_hermitian(3, rng);
  CHECK_THROWS_AS(HamiltonianFamily(h2, {h3}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianFamily(h2, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HamiltonianFamily(h2, {h2}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Boundary(Vector::Zero(1), Vector::Zero(2), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Boundary(Vector::Zero(1), Vector::Zero(1), 0.0),
                  std::invalid_argument);
}

TEST_CASE("gibbs_state matches the explicit two-level formula") {
  double beta = 1.3, eps = 2.1;
  HamiltonianFamily fam = gap_family(beta);
  ControlPoint lam(1);
  lam << eps;
  Matrix pi = gibbs_state(fam, lam);
  double z = std::exp(-beta * eps / 2.0) + std::exp(beta * eps / 2.0);
  CHECK(pi(0, 0).real() == doctest::Approx(std::exp(-beta * eps / 2.0) / z).epsilon(1e-14));
  CHECK(pi(1, 1).real() == doctest::Approx(std::exp(beta * eps / 2.0) / z).epsilon(1e-14));
  CHECK(std::abs(pi(0, 1)) < 1e-15);
}

TEST_CASE("gibbs_state and log_partition survive huge spectra") {
  HamiltonianFamily fam = gap_family(1.0);
  ControlPoint lam(1);
  lam << 2.0e4;
  Matrix pi = gibbs_state(fam, lam);
  CHECK(pi.allFinite());
  CHECK(std::abs(pi.trace().real() - 1.0) < 1e-14);
  // log Z -> -beta * E_min for large gaps.
  CHECK(log_partition(fam, lam) == doctest::Approx(1.0e4).epsilon(1e-12));
  CHECK(free_energy(fam, lam) == doctest::Approx(-1.0e4).epsilon(1e-12));
}

TEST_CASE("log_partition matches the eigenvalue sum oracle") {
  std::mt19937_64 rng(22);
  HamiltonianFamily fam = random_family(4, 2, 0.8, rng);
  ControlPoint lam = random_point(2, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian_at(fam, lam));
  double direct = std::log((-0.8 * es.eigenvalues().array()).exp().sum());
  CHECK(log_partition(fam, lam) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("relative entropy and its variance match the classical oracle") {
  // Diagonal states: S = sum p ln(p/q), V = sum p ln^2(p/q) - S^2.
  Eigen::Vector3d p(0.5, 0.3, 0.2), q(0.2, 0.5, 0.3);
  Matrix rho1 = Matrix::Zero(3, 3), rho2 = Matrix::Zero(3, 3);
  double s = 0.0, second = 0.0;
  for (int i = 0; i < 3; ++i) {
    rho1(i, i) = p[i];
    rho2(i, i) = q[i];
    double l = std::log(p[i] / q[i]);
    s += p[i] * l;
    second += p[i] * l * l;
  }
  CHECK(relative_entropy(rho1, rho2) == doctest::Approx(s).epsilon(1e-13));
  CHECK(relative_entropy_variance(rho1, rho2) ==
        doctest::Approx(second - s * s).epsilon(1e-13));
  CHECK(relative_entropy(rho1, rho1) == doctest::Approx(0.0));
  CHECK(relative_entropy_variance(rho1, rho1) == doctest::Approx(0.0));
}

TEST_CASE("relative entropy is non-negative on random Gibbs pairs") {
  std::mt19937_64 rng(23);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a = gibbs_state(fam, random_point(2, rng));
    Matrix b = gibbs_state(fam, random_point(2, rng));
    CHECK(relative_entropy(a, b) >= -1e-12);
    CHECK(relative_entropy_variance(a, b) >= -1e-12);
  }
}

TEST_CASE("quench work identity ties relative entropy to energy differences") {
  // S(pi_A || pi_B)/beta = tr[(H_B - H_A) pi_A] - (F_B - F_A), for any family.
  std::mt19937_64 rng(24);
  HamiltonianFamily fam = random_family(4, 3, 0.9, rng);
  ControlPoint la = random_point(3, rng), lb = random_point(3, rng);
  Matrix pia = gibbs_state(fam, la);
  double lhs = relative_entropy(pia, gibbs_state(fam, lb)) / fam.beta;
  double rhs = ((hamiltonian_at(fam, lb) - hamiltonian_at(fam, la)) * pia)
                   .trace()
                   .real() -
               (free_energy(fam, lb) - free_energy(fam, la));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("generator and adjoint satisfy the trace pairing") {
  std::mt19937_64 rng(25);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  for (GeneratorSpec spec : {GeneratorSpec::unitary(fam),
                             GeneratorSpec::relaxation(fam, 0.7)}) {
    for (int trial = 0; trial < 5; ++trial) {
      ControlPoint lam = random_point(2, rng);
      Matrix obs = random_hermitian(3, rng);
      Matrix rho = gibbs_state(fam, random_point(2, rng));
      Complex lhs = (obs * apply_generator(spec, lam, rho)).trace();
      Complex rhs = (apply_adjoint(spec, lam, obs) * rho).trace();
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("relaxation generator vanishes at its fixed point") {
  std::mt19937_64 rng(26);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  GeneratorSpec spec = GeneratorSpec::relaxation(fam, 0.5);
  ControlPoint lam = random_point(2, rng);
  Matrix pi = gibbs_state(fam, lam);
  CHECK(apply_generator(spec, lam, pi).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("unitary generator preserves trace and hermiticity") {
  std::mt19937_64 rng(27);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  GeneratorSpec spec = GeneratorSpec::unitary(fam);
  ControlPoint lam = random_point(2, rng);
  Matrix rho = gibbs_state(fam, random_point(2, rng));
  Matrix out = apply_generator(spec, lam, rho);
  CHECK(std::abs(out.trace()) < 1e-13);
  CHECK(is_hermitian(out, 1e-12));
}

TEST_CASE("superoperator reproduces the generator on vectorized states") {
  std::mt19937_64 rng(28);
  HamiltonianFamily fam = random_family(3, 2, 1.0, rng);
  for (GeneratorSpec spec : {GeneratorSpec::unitary(fam),
                             GeneratorSpec::relaxation(fam, 1.2)}) {
    ControlPoint lam = random_point(2, rng);
    Matrix super = superoperator(spec, lam);
    Matrix rho = gibbs_state(fam, random_point(2, rng));
    Eigen::VectorXcd lhs = super * vec(rho);
    Eigen::VectorXcd rhs = vec(apply_generator(spec, lam, rho));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("characteristic timescale bounds") {
  HamiltonianFamily fam = gap_family(1.0);
  ControlPoint a(1), b(1);
  a << 0.0;
  b << 2.0;
  Boundary bd(a, b, 0.01);
  CHECK(characteristic_timescale(GeneratorSpec::relaxation(fam, 0.8), bd) ==
        doctest::Approx(0.4));
  // Unitary: 1 / (2 max ||H||) with ||H(2)|| = 1.
  CHECK(characteristic_timescale(GeneratorSpec::unitary(fam), bd) ==
        doctest::Approx(0.5));
  ControlPoint big(1);
  big << 10.0;
  CHECK(characteristic_timescale(GeneratorSpec::unitary(fam), bd, {big}) ==
        doctest::Approx(0.1));
}
