#ifndef FASTDRIVE_ANALYTIC_MODELS_HPP
#define FASTDRIVE_ANALYTIC_MODELS_HPP

#include "fastdrive/fast_driving.hpp"
#include "fastdrive/jump_optimizer.hpp"

namespace fastdrive {

// ---------------------------------------------------------------------------
// Driven qubit, H(lambda) = J lambda . sigma, unitary dynamics.

struct QubitModel {
  double j_coupling = 1.0;
  double beta = 1.0;
  Eigen::Vector3d lambda_a;
  Eigen::Vector3d lambda_b;
  double alpha = 0.1;  // jump magnitude along lambda_A ^ lambda_B
};

// Closed-form (P*_save, C*_save) for the jump to alpha * lambda_A ^ lambda_B.
std::pair<double, double> qubit_savings_analytic(const QubitModel& model);

// Magnitude bound on alpha from the error-scaling condition at duration tau;
// warns when model.alpha is not small against it.
double qubit_alpha_bound(const QubitModel& model, double tau);

// Matrix pipeline ingredients for the same system.
HamiltonianFamily qubit_family(const QubitModel& model);
GeneratorSpec qubit_generator(const QubitModel& model);
Boundary qubit_boundary(const QubitModel& model, double tau);
ControlPoint qubit_jump_point(const QubitModel& model);

// ---------------------------------------------------------------------------
// Two-level dot erasure, H = eps/2 sigma^z, relaxation dynamics, eps_A = 0.

struct DotModel {
  double beta = 1.0;
  double eps_b = 10.0;
  double tau_eq = 1.0;
};

struct DotOptima {
  double xi_asymptotic = 0.0;  // ln(2 beta eps_B) / beta
  double xi_exact = 0.0;       // root of the transcendental stationarity equation
  double lambda = 0.0;         // eps_B / 2
};

DotOptima dot_optimal_points(const DotModel& model);

// Residual of the power stationarity condition at dimensionless x = beta*eps:
// (1/2 - 1/(1+e^x)) - (beta eps_B - x) e^x / (1+e^x)^2.
double dot_transcendental_residual(const DotModel& model, double x);

HamiltonianFamily dot_family(const DotModel& model);
GeneratorSpec dot_generator(const DotModel& model);
Boundary dot_boundary(const DotModel& model, double tau);

// ---------------------------------------------------------------------------
// Scalar per-spin fast-driving model built from log Z of a chain in the
// thermodynamic limit (or any single-control system with closed-form
// thermodynamics). Implements the FastModel interface with d = 1.

struct ScalarThermodynamics {
  std::function<double(double)> log_z;       // per spin
  std::function<double(double)> mean_force;  // <X>_lambda per spin
  std::function<double(double)> var_force;   // Var(X)_lambda per spin
  double beta = 1.0;
  double tau_eq = 1.0;
};

class ScalarFastModel : public FastModel {
 public:
  ScalarFastModel(ScalarThermodynamics thermo, Boundary boundary);

  int dims() const override { return 1; }
  Vector ifrr(const ControlPoint& lambda) const override;
  RealMatrix g_matrix(const ControlPoint& lambda) const override;
  RealMatrix b_matrix(const ControlPoint& lambda) const override;
  double quench_work() const override { return quench_work_; }
  double quench_var() const override { return quench_var_; }
  const Boundary& boundary() const override { return boundary_; }

  double scalar_r(double lambda) const;
  double scalar_g(double lambda) const;
  double scalar_b() const;

 private:
  ScalarThermodynamics thermo_;
  Boundary boundary_;
  double mean_a_ = 0.0;
  double var_a_ = 0.0;
  double quench_work_ = 0.0;
  double quench_var_ = 0.0;
};

// ---------------------------------------------------------------------------
// Classical Ising chain in a longitudinal field, thermodynamic limit.

struct ClassicalIsingModel {
  double j_coupling = 1.0;
  double beta = 1.0;
  double eps_a = 0.0;
  double eps_b = 10.0;
  double tau_eq = 1.0;
};

// (R, G, B) per spin at field eps.
struct ChainCoefficients {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

ChainCoefficients classical_ising_coefficients(const ClassicalIsingModel& model,
                                               double eps);
ScalarThermodynamics classical_ising_thermodynamics(const ClassicalIsingModel& model);

// ---------------------------------------------------------------------------
// Transverse-field Ising chain, thermodynamic limit via the free-fermion
// dispersion eps_k = 2J sqrt(1 + g^2 - 2 g cos k).

struct TfimModel {
  double j_coupling = 1.0;
  double beta = 1.0;
  double g_a = 0.0;
  double g_b = 3.0;
  double tau_eq = 1.0;
  int quadrature_nodes = 64;
};

double tfim_dispersion(const TfimModel& model, double g, double k);
double tfim_dispersion_dg(const TfimModel& model, double g, double k);
double tfim_dispersion_d2g(const TfimModel& model, double g, double k);

// Throws if node doubling fails to converge below 1e-6 relative.
ChainCoefficients tfim_coefficients(const TfimModel& model, double g);
ScalarThermodynamics tfim_thermodynamics(const TfimModel& model);

// ---------------------------------------------------------------------------
// Temperature scan of the jump optima for a chain model.

struct ChainScanRow {
  double temperature = 0.0;  // k_B T / J
  double xi = 0.0;           // power-optimal field
  double lambda = 0.0;       // constancy-optimal field
  double p_save_opt = 0.0;   // P_save at xi
  double c_save_at_xi = 0.0;
  double c_save_opt = 0.0;  // C_save at Lambda
  double p_save_at_lambda = 0.0;
  double p_save_linear = 0.0;
  double c_save_linear = 0.0;
  double quench_work = 0.0;
  double quench_var = 0.0;
  double rel_p_opt = 0.0;  // P_save(xi) * tau_eq / quench_work
  double rel_c_opt = 0.0;  // C_save(Lambda) * tau_eq / quench_var
  bool solver_ok = true;
};

// thermo_at_beta builds the scalar thermodynamics of the chain at a given
// inverse temperature; the scan solves both EL problems per temperature.
std::vector<ChainScanRow> chain_jump_scan(
    const std::function<ScalarThermodynamics(double beta)>& thermo_at_beta,
    double control_a, double control_b, double tau_eq,
    const std::vector<double>& temperatures, bool parallel = true);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace fastdrive

#endif
