// Timing comparison between the serial and OpenMP code paths for the two
// parallel kernels: the chain temperature scan and the exact work-variance
// double quadrature. Run manually; not part of the test suite.

#include <chrono>
#include <cstdio>

#include "fastdrive/analytic_models.hpp"
#include "fastdrive/exact_reference.hpp"

using namespace fastdrive;

namespace {

template <typename F>
double time_seconds(F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main() {
  // Chain scan: TFIM, 48 temperatures.
  TfimModel tfim{1.0, 1.0, 0.0, 3.0, 1.0, 64};
  auto thermo_at_beta = [&](double beta) {
    TfimModel m = tfim;
    m.beta = beta;
    return tfim_thermodynamics(m);
  };
  std::vector<double> temps = log_spaced(0.1, 10.0, 48);
  double scan_serial = time_seconds([&] {
    chain_jump_scan(thermo_at_beta, tfim.g_a, tfim.g_b, tfim.tau_eq, temps, false);
  });
  double scan_parallel = time_seconds([&] {
    chain_jump_scan(thermo_at_beta, tfim.g_a, tfim.g_b, tfim.tau_eq, temps, true);
  });
  std::printf("tfim scan, 48 temperatures: serial %.3f s, parallel %.3f s, speedup %.2fx\n",
              scan_serial, scan_parallel, scan_serial / scan_parallel);

  // Exact variance: relaxation dynamics on a 4-level system, linear ramp.
  QubitModel q;  // reuse the qubit family builder for a dense 2-level case
  q.lambda_a = Eigen::Vector3d(1.0, 0.0, 0.0);
  q.lambda_b = Eigen::Vector3d(0.0, 0.0, 1.0);
  GeneratorSpec spec = GeneratorSpec::relaxation(qubit_family(q), 0.5);
  Boundary bd = qubit_boundary(q, 0.8);
  Protocol lin = Protocol::linear(bd, 17);
  int steps = 160;
  double var_serial = 0.0, var_parallel = 0.0;
  double t_serial = time_seconds(
      [&] { var_serial = work_variance_exact(spec, lin, steps, false); });
  double t_parallel = time_seconds(
      [&] { var_parallel = work_variance_exact(spec, lin, steps, true); });
  std::printf("exact variance, %d steps: serial %.3f s, parallel %.3f s, speedup %.2fx\n",
              steps, t_serial, t_parallel, t_serial / t_parallel);
  std::printf("serial/parallel results agree to %.2e\n",
              std::abs(var_serial - var_parallel));
  return 0;
}
