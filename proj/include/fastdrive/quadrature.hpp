#ifndef FASTDRIVE_QUADRATURE_HPP
#define FASTDRIVE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fastdrive {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [a, b], by Newton iteration on the
// Legendre polynomial. Rules are cached per (n, a, b is rescaled).
QuadratureRule gauss_legendre(int n, double a, double b);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

// Integrate with node doubling starting from n until the relative change is
// below tol or n exceeds max_nodes. Returns {value, converged}.
std::pair<double, bool> integrate_adaptive(const std::function<double(double)>& f,
                                           double a, double b, int n, double tol,
                                           int max_nodes = 4096);

}  // namespace fastdrive

#endif
