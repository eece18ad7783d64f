#ifndef FASTDRIVE_TEST_HELPERS_HPP
#define FASTDRIVE_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "fastdrive/hamiltonian_family.hpp"

namespace fastdrive::testing {

inline Matrix random_complex(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      m(r, c) = Complex(gauss(rng), gauss(rng));
    }
  }
  return m;
}

inline Matrix random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  Matrix m = random_complex(dim, rng, scale);
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_real_diagonal(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix m = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = gauss(rng);
  return m;
}

inline HamiltonianFamily random_family(int dim, int controls, double beta,
                                       std::mt19937_64& rng, double scale = 1.0) {
  std::vector<Matrix> forces;
  for (int j = 0; j < controls; ++j) forces.push_back(random_hermitian(dim, rng, scale));
  return HamiltonianFamily(random_hermitian(dim, rng, scale), std::move(forces), beta);
}

// All operators diagonal in the same basis: the commuting case.
inline HamiltonianFamily random_commuting_family(int dim, int controls, double beta,
                                                 std::mt19937_64& rng,
                                                 double scale = 1.0) {
  std::vector<Matrix> forces;
  for (int j = 0; j < controls; ++j) {
    forces.push_back(random_real_diagonal(dim, rng, scale));
  }
  return HamiltonianFamily(random_real_diagonal(dim, rng, scale), std::move(forces), beta);
}

inline ControlPoint random_point(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  ControlPoint p(d);
  for (int i = 0; i < d; ++i) p[i] = gauss(rng);
  return p;
}

}  // namespace fastdrive::testing

#endif
