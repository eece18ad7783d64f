#include "fastdrive/cli_runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "fastdrive/analytic_models.hpp"
#include "fastdrive/exact_reference.hpp"
#include "fastdrive/model_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fastdrive {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands = {"qubit",          "erasure", "ising-classical",
                                         "ising-quantum",  "optimize", "exact",
                                         "sweep"};

// ---------------------------------------------------------------------------
// Validation helpers

struct Validator {
  const json& raw;
  json out;
  std::vector<std::string> errors;

  void fail(const std::string& msg) { errors.push_back(msg); }

  double number(const char* key, double fallback, bool positive = false) {
    double v = fallback;
    if (raw.contains(key)) {
      if (!raw[key].is_number()) {
        fail(std::string(key) + ": expected a number");
        return fallback;
      }
      v = raw[key].get<double>();
    }
    if (!std::isfinite(v)) fail(std::string(key) + ": must be finite");
    if (positive && !(v > 0.0)) fail(std::string(key) + ": must be positive");
    out[key] = v;
    return v;
  }

  int integer(const char* key, int fallback, int min_value) {
    int v = fallback;
    if (raw.contains(key)) {
      if (!raw[key].is_number_integer()) {
        fail(std::string(key) + ": expected an integer");
        return fallback;
      }
      v = raw[key].get<int>();
    }
    if (v < min_value) {
      fail(std::string(key) + ": must be >= " + std::to_string(min_value));
    }
    out[key] = v;
    return v;
  }

  bool flag(const char* key, bool fallback) {
    bool v = fallback;
    if (raw.contains(key)) {
      if (!raw[key].is_boolean()) {
        fail(std::string(key) + ": expected a boolean");
        return fallback;
      }
      v = raw[key].get<bool>();
    }
    out[key] = v;
    return v;
  }

  std::string choice(const char* key, const std::string& fallback,
                     const std::set<std::string>& allowed) {
    std::string v = fallback;
    if (raw.contains(key)) {
      if (!raw[key].is_string()) {
        fail(std::string(key) + ": expected a string");
        return fallback;
      }
      v = raw[key].get<std::string>();
    }
    if (!allowed.count(v)) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
      fail(std::string(key) + ": must be one of " + opts);
    }
    out[key] = v;
    return v;
  }

  std::vector<double> vector3(const char* key, std::vector<double> fallback) {
    std::vector<double> v = std::move(fallback);
    if (raw.contains(key)) {
      if (!raw[key].is_array() || raw[key].size() != 3) {
        fail(std::string(key) + ": expected a 3-vector");
      } else {
        v = raw[key].get<std::vector<double>>();
      }
    }
    out[key] = v;
    return v;
  }

  void copy_json(const char* key, bool required) {
    if (raw.contains(key)) {
      out[key] = raw[key];
    } else if (required) {
      fail(std::string(key) + ": required");
    }
  }

  void reject_unknown(const char* what) {
    for (auto it = raw.begin(); it != raw.end(); ++it) {
      if (!out.contains(it.key())) {
        fail(std::string(what) + ": unknown key '" + it.key() + "'");
      }
    }
  }
};

json validate_params(const std::string& command, const json& raw,
                     std::vector<std::string>& errors) {
  Validator v{raw, json::object(), {}};
  if (command == "qubit") {
    v.number("beta_j", 1.0, true);
    v.number("tau_j", 1.0, true);
    v.number("j", 1.0, true);
    v.number("alpha_min", 0.01, true);
    double amax = v.number("alpha_max", 1.0, true);
    if (raw.contains("alpha_min") || raw.contains("alpha_max")) {
      if (v.out["alpha_min"].get<double>() >= amax) {
        v.fail("alpha_min: must be below alpha_max");
      }
    }
    v.integer("points", 50, 2);
    v.integer("steps", 200, 1);
    v.vector3("lambda_a", {1.0, 0.0, 0.0});
    v.vector3("lambda_b", {0.0, 0.0, 1.0});
  } else if (command == "erasure") {
    v.number("beta", 1.0, true);
    v.number("eps_b", 10.0, true);
    v.number("tau_eq", 1.0, true);
    v.number("tau", 0.001, true);
    v.choice("objective", "power", {"power", "constancy", "pareto"});
    double w = v.number("weight", 0.5);
    if (w < 0.0 || w > 1.0) v.fail("weight: must lie in [0, 1]");
  } else if (command == "ising-classical") {
    v.number("j", 1.0, true);
    v.number("eps_a", 0.0);
    v.number("eps_b", 10.0);
    v.number("tau_eq", 1.0, true);
    double tmin = v.number("t_min", 0.1, true);
    double tmax = v.number("t_max", 10.0, true);
    if (tmax <= tmin) v.fail("t_max: must exceed t_min");
    v.integer("points", 40, 2);
    v.flag("serial", false);
  } else if (command == "ising-quantum") {
    v.number("j", 1.0, true);
    v.number("g_a", 0.0);
    v.number("g_b", 3.0);
    v.number("tau_eq", 1.0, true);
    double tmin = v.number("t_min", 0.1, true);
    double tmax = v.number("t_max", 10.0, true);
    if (tmax <= tmin) v.fail("t_max: must exceed t_min");
    v.integer("points", 40, 2);
    v.integer("nodes", 64, 64);
    v.flag("serial", false);
  } else if (command == "optimize") {
    v.copy_json("model", true);
    v.copy_json("boundary", true);
    v.choice("objective", "power", {"power", "constancy", "pareto"});
    double w = v.number("weight", 0.5);
    if (w < 0.0 || w > 1.0) v.fail("weight: must lie in [0, 1]");
    v.number("box_margin", 0.5, true);
    v.copy_json("box_lo", false);
    v.copy_json("box_hi", false);
    v.integer("starts", 8, 1);
    v.flag("pareto_homogenize", true);
  } else if (command == "exact") {
    v.choice("model", "dot", {"dot", "qubit"});
    v.choice("protocol", "jump", {"jump", "linear"});
    std::string sweep = raw.contains("tau_sweep") && raw["tau_sweep"].is_string()
                            ? raw["tau_sweep"].get<std::string>()
                            : "1e-3:1e-1:15";
    double lo = 0.0, hi = 0.0;
    int n = 0;
    if (std::sscanf(sweep.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || !(lo > 0.0) ||
        !(hi > lo) || n < 3) {
      v.fail("tau_sweep: expected lo:hi:n with 0 < lo < hi, n >= 3");
    }
    v.out["tau_sweep"] = sweep;
    v.integer("steps", 200, 1);
    v.number("beta", 1.0, true);
    v.number("eps_b", 10.0, true);
    v.number("tau_eq", 1.0, true);
    v.number("j", 1.0, true);
    v.number("alpha", 0.05, true);
  } else if (command == "sweep") {
    v.number("beta", 1.0, true);
    v.number("eps_b", 10.0, true);
    v.number("tau_eq", 1.0, true);
    v.number("tau", 0.001, true);
    if (raw.contains("weights")) {
      if (!raw["weights"].is_array() || raw["weights"].size() < 2) {
        v.fail("weights: expected an array of at least two values in [0, 1]");
      } else {
        for (const auto& w : raw["weights"]) {
          double x = w.is_number() ? w.get<double>() : -1.0;
          if (x < 0.0 || x > 1.0) v.fail("weights: entries must lie in [0, 1]");
        }
        v.out["weights"] = raw["weights"];
      }
    } else {
      v.out["weights"] = {0.0, 0.25, 0.5, 0.75, 1.0};
    }
    v.flag("pareto_homogenize", true);
  }
  v.reject_unknown(command.c_str());
  errors.insert(errors.end(), v.errors.begin(), v.errors.end());
  return v.out;
}

// ---------------------------------------------------------------------------
// Output helpers

struct WarningCollector {
  std::vector<std::string> messages;
  std::mutex mutex;

  WarningCollector() {
    set_warning_handler([this](const std::string& msg) {
      std::lock_guard<std::mutex> lock(mutex);
      messages.push_back(msg);
    });
  }
  ~WarningCollector() { set_warning_handler(nullptr); }
};

void write_csv_header(std::ostream& out, const ExperimentConfig& config,
                      const std::vector<std::string>& column_docs,
                      const std::vector<std::string>& extra,
                      const std::vector<std::string>& warnings) {
  out << "# " << kToolVersion << "\n";
  out << "# config: " << config_to_json(config).dump() << "\n";
  out << "# units: hbar = k_B = 1\n";
  if (config.timestamps) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated: " << buf << "\n";
  }
  for (const auto& line : extra) out << "# " << line << "\n";
  for (const auto& line : column_docs) out << "# column " << line << "\n";
  for (const auto& w : warnings) out << "# warning: " << w << "\n";
}

void write_csv_row(std::ostream& out, const std::vector<double>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    out << (i ? "," : "") << format_double(row[i]);
  }
  out << "\n";
}

json result_envelope(const ExperimentConfig& config, json result,
                     const std::vector<std::string>& warnings) {
  json j;
  j["tool"] = kToolVersion;
  j["config"] = config_to_json(config);
  j["units"] = "hbar = k_B = 1";
  j["warnings"] = warnings;
  j["result"] = std::move(result);
  return j;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Command implementations

int run_qubit(const ExperimentConfig& config, std::ostream& out,
              WarningCollector& warnings) {
  const json& p = config.params;
  QubitModel model;
  model.j_coupling = p["j"].get<double>();
  model.beta = p["beta_j"].get<double>() / model.j_coupling;
  auto la = p["lambda_a"].get<std::vector<double>>();
  auto lb = p["lambda_b"].get<std::vector<double>>();
  model.lambda_a = Eigen::Vector3d(la[0], la[1], la[2]);
  model.lambda_b = Eigen::Vector3d(lb[0], lb[1], lb[2]);
  double tau = p["tau_j"].get<double>() / model.j_coupling;
  int steps = p["steps"].get<int>();

  GeneratorSpec spec = qubit_generator(model);
  Boundary boundary = qubit_boundary(model, tau);
  FastEvaluator fast(spec, boundary);
  double tau_c = characteristic_timescale(spec, boundary);

  std::vector<double> alphas =
      linear_grid(p["alpha_min"].get<double>(), p["alpha_max"].get<double>(), p["points"].get<int>());

  std::vector<std::vector<double>> rows(alphas.size());
  for (size_t i = 0; i < alphas.size(); ++i) {
    QubitModel at = model;
    at.alpha = alphas[i];
    ControlPoint xi = qubit_jump_point(at);
    SavingsReport fast_report = fast.savings_at_jump(xi);
    Protocol jump = Protocol::jump(boundary, xi);
    double w_exact = work_mean_exact(spec, jump, steps);
    double v_exact = work_variance_exact(spec, jump, steps);
    double p_exact = (fast_report.quench_work - w_exact) / tau;
    double c_exact = (fast_report.quench_var - v_exact) / tau;
    rows[i] = {alphas[i], fast_report.p_save, p_exact, fast_report.c_save, c_exact};
  }

  write_csv_header(out, config,
                   {"1: alpha (jump magnitude along lambda_A x lambda_B)",
                    "2: p_save_fast", "3: p_save_exact", "4: c_save_fast",
                    "5: c_save_exact"},
                   {"tau_c estimate: " + format_double(tau_c),
                    "tau/tau_c: " + format_double(tau / tau_c)},
                   warnings.messages);
  out << "alpha,p_save_fast,p_save_exact,c_save_fast,c_save_exact\n";
  for (const auto& row : rows) write_csv_row(out, row);
  return 0;
}

int run_erasure(const ExperimentConfig& config, std::ostream& out,
                WarningCollector& warnings) {
  const json& p = config.params;
  DotModel model{p["beta"].get<double>(), p["eps_b"].get<double>(),
                 p["tau_eq"].get<double>()};
  GeneratorSpec spec = dot_generator(model);
  Boundary boundary = dot_boundary(model, p["tau"].get<double>());
  FastEvaluator fast(spec, boundary);
  DotOptima optima = dot_optimal_points(model);

  ControlPoint xi(1), lam(1);
  xi << optima.xi_exact;
  lam << optima.lambda;
  SavingsReport at_xi = fast.savings_at_jump(xi);
  SavingsReport at_lam = fast.savings_at_jump(lam);

  std::string objective = p["objective"].get<std::string>();
  ObjectiveSpec obj = objective == "power"     ? ObjectiveSpec::power()
                      : objective == "constancy" ? ObjectiveSpec::constancy()
                                                 : ObjectiveSpec::pareto(p["weight"].get<double>());
  OptimizationProblem problem{&fast, obj, SearchBox::around(boundary), 8, config.seed};
  JumpSolution solution = solve_jump(problem);

  json result;
  result["xi_asymptotic"] = optima.xi_asymptotic;
  result["xi_exact"] = optima.xi_exact;
  result["lambda"] = optima.lambda;
  result["p_save_at_xi"] = at_xi.p_save;
  result["c_save_at_xi"] = at_xi.c_save;
  result["p_save_at_lambda"] = at_lam.p_save;
  result["c_save_at_lambda"] = at_lam.c_save;
  result["quench_work"] = at_xi.quench_work;
  result["quench_var"] = at_xi.quench_var;
  result["tau_c"] = characteristic_timescale(spec, boundary);
  result["solution"] = solution_to_json(solution);
  out << result_envelope(config, result, warnings.messages).dump(2) << "\n";
  return solution.converged || solution.box_limited ? 0 : 1;
}

int run_chain_scan(const ExperimentConfig& config, std::ostream& out,
                   WarningCollector& warnings) {
  const json& p = config.params;
  double tau_eq = p["tau_eq"].get<double>();
  double j = p["j"].get<double>();
  bool parallel = !p["serial"].get<bool>();
  std::vector<double> temperatures =
      log_spaced(p["t_min"].get<double>() * j, p["t_max"].get<double>() * j,
                 p["points"].get<int>());

  std::function<ScalarThermodynamics(double)> thermo_at_beta;
  double control_a = 0.0, control_b = 0.0;
  if (config.command == "ising-classical") {
    control_a = p["eps_a"].get<double>();
    control_b = p["eps_b"].get<double>();
    thermo_at_beta = [=](double beta) {
      return classical_ising_thermodynamics(
          {j, beta, control_a, control_b, tau_eq});
    };
  } else {
    control_a = p["g_a"].get<double>();
    control_b = p["g_b"].get<double>();
    int nodes = p["nodes"].get<int>();
    thermo_at_beta = [=](double beta) {
      return tfim_thermodynamics({j, beta, control_a, control_b, tau_eq, nodes});
    };
  }

  std::vector<ChainScanRow> rows =
      chain_jump_scan(thermo_at_beta, control_a, control_b, tau_eq, temperatures, parallel);

  write_csv_header(
      out, config,
      {"1: temperature (k_B T / J)", "2: xi (power-optimal control)",
       "3: lambda (constancy-optimal control)", "4: p_save_opt", "5: c_save_at_xi",
       "6: c_save_opt", "7: p_save_at_lambda", "8: p_save_linear", "9: c_save_linear",
       "10: quench_work per spin", "11: quench_var per spin",
       "12: rel_p_opt = p_save_opt * tau_eq / quench_work",
       "13: rel_c_opt = c_save_opt * tau_eq / quench_var",
       "14: solver_ok (1 = converged)"},
      {"per-spin quantities, thermodynamic limit",
       "tau_c estimate: " + format_double(tau_eq / 2.0)},
      warnings.messages);
  out << "temperature,xi,lambda,p_save_opt,c_save_at_xi,c_save_opt,p_save_at_lambda,"
         "p_save_linear,c_save_linear,quench_work,quench_var,rel_p_opt,rel_c_opt,"
         "solver_ok\n";
  bool all_ok = true;
  for (const auto& r : rows) {
    write_csv_row(out, {r.temperature / j, r.xi, r.lambda, r.p_save_opt, r.c_save_at_xi,
                        r.c_save_opt, r.p_save_at_lambda, r.p_save_linear,
                        r.c_save_linear, r.quench_work, r.quench_var, r.rel_p_opt,
                        r.rel_c_opt, r.solver_ok ? 1.0 : 0.0});
    all_ok = all_ok && r.solver_ok;
  }
  return all_ok ? 0 : 1;
}

int run_optimize(const ExperimentConfig& config, std::ostream& out,
                 WarningCollector& warnings) {
  const json& p = config.params;
  GeneratorSpec spec = generator_from_json(p["model"]);
  Boundary boundary = boundary_from_json(p["boundary"]);
  FastEvaluator fast(spec, boundary);

  std::string objective = p["objective"].get<std::string>();
  ObjectiveSpec obj = objective == "power"     ? ObjectiveSpec::power()
                      : objective == "constancy" ? ObjectiveSpec::constancy()
                                                 : ObjectiveSpec::pareto(p["weight"].get<double>());
  SearchBox box = SearchBox::around(boundary, p["box_margin"].get<double>());
  if (p.contains("box_lo") && p.contains("box_hi")) {
    auto lo = p["box_lo"].get<std::vector<double>>();
    auto hi = p["box_hi"].get<std::vector<double>>();
    if (static_cast<int>(lo.size()) != boundary.lambda_a.size() ||
        static_cast<int>(hi.size()) != boundary.lambda_a.size()) {
      throw ConfigError("box_lo/box_hi: dimension mismatch with boundary");
    }
    box.lo = Eigen::Map<const Vector>(lo.data(), lo.size());
    box.hi = Eigen::Map<const Vector>(hi.data(), hi.size());
  }
  OptimizationProblem problem{&fast,      obj,
                              box,        p["starts"].get<int>(),
                              config.seed, p["pareto_homogenize"].get<bool>()};
  JumpSolution solution = solve_jump(problem);
  out << result_envelope(config, solution_to_json(solution), warnings.messages).dump(2)
      << "\n";
  return solution.converged || solution.box_limited ? 0 : 1;
}

int run_exact(const ExperimentConfig& config, std::ostream& out,
              WarningCollector& warnings) {
  const json& p = config.params;
  double lo = 0.0, hi = 0.0;
  int n = 0;
  std::sscanf(p["tau_sweep"].get<std::string>().c_str(), "%lf:%lf:%d", &lo, &hi, &n);
  std::vector<double> taus = log_spaced(lo, hi, n);
  int steps = p["steps"].get<int>();
  std::string protocol_kind = p["protocol"].get<std::string>();

  GeneratorSpec spec = [&] {
    if (p["model"].get<std::string>() == "dot") {
      return dot_generator({p["beta"].get<double>(), p["eps_b"].get<double>(),
                            p["tau_eq"].get<double>()});
    }
    QubitModel qm;
    qm.j_coupling = p["j"].get<double>();
    qm.beta = p["beta"].get<double>();
    qm.lambda_a = Eigen::Vector3d::UnitX();
    qm.lambda_b = Eigen::Vector3d::UnitZ();
    qm.alpha = p["alpha"].get<double>();
    return qubit_generator(qm);
  }();
  Boundary base = [&] {
    if (p["model"].get<std::string>() == "dot") {
      return dot_boundary({p["beta"].get<double>(), p["eps_b"].get<double>(),
                           p["tau_eq"].get<double>()},
                          taus.front());
    }
    QubitModel qm;
    qm.lambda_a = Eigen::Vector3d::UnitX();
    qm.lambda_b = Eigen::Vector3d::UnitZ();
    return qubit_boundary(qm, taus.front());
  }();
  ControlPoint hold = [&]() -> ControlPoint {
    if (p["model"].get<std::string>() == "dot") {
      ControlPoint c(1);
      c << 0.5 * p["eps_b"].get<double>();
      return c;
    }
    QubitModel qm;
    qm.lambda_a = Eigen::Vector3d::UnitX();
    qm.lambda_b = Eigen::Vector3d::UnitZ();
    qm.alpha = p["alpha"].get<double>();
    return qubit_jump_point(qm);
  }();

  std::vector<std::vector<double>> rows;
  std::vector<double> w_err, v_err;
  for (double tau : taus) {
    Boundary bd(base.lambda_a, base.lambda_b, tau);
    FastEvaluator fast(spec, bd);
    Protocol protocol = protocol_kind == "jump" ? Protocol::jump(bd, hold)
                                                : Protocol::linear(bd, 65);
    double w_fast = fast.excess_work_fast(protocol);
    double v_fast = fast.variance_fast(protocol);
    double w_exact = work_mean_exact(spec, protocol, steps);
    double v_exact = work_variance_exact(spec, protocol, steps);
    rows.push_back({tau, w_exact, w_fast, v_exact, v_fast});
    w_err.push_back(std::abs(w_exact - w_fast));
    v_err.push_back(std::abs(v_exact - v_fast));
  }
  auto [w_slope, w_floor] = loglog_slope(taus, w_err);
  auto [v_slope, v_floor] = loglog_slope(taus, v_err);

  double tau_c = characteristic_timescale(spec, base, {hold});
  write_csv_header(
      out, config,
      {"1: tau", "2: w_ex_exact", "3: w_ex_fast", "4: var_exact", "5: var_fast"},
      {"tau_c estimate: " + format_double(tau_c),
       "work error slope: " + (w_floor ? std::string("at numerical floor")
                                       : format_double(w_slope)),
       "variance error slope: " + (v_floor ? std::string("at numerical floor")
                                           : format_double(v_slope))},
      warnings.messages);
  out << "tau,w_ex_exact,w_ex_fast,var_exact,var_fast\n";
  for (const auto& row : rows) write_csv_row(out, row);
  return 0;
}

int run_sweep(const ExperimentConfig& config, std::ostream& out,
              WarningCollector& warnings) {
  const json& p = config.params;
  DotModel model{p["beta"].get<double>(), p["eps_b"].get<double>(),
                 p["tau_eq"].get<double>()};
  GeneratorSpec spec = dot_generator(model);
  Boundary boundary = dot_boundary(model, p["tau"].get<double>());
  FastEvaluator fast(spec, boundary);
  SearchBox box = SearchBox::around(boundary);
  bool homogenize = p["pareto_homogenize"].get<bool>();

  bool all_ok = true;
  std::vector<std::vector<double>> rows;
  for (double w : p["weights"].get<std::vector<double>>()) {
    OptimizationProblem problem{&fast, ObjectiveSpec::pareto(w), box, 8, config.seed,
                                homogenize};
    JumpSolution solution = solve_jump(problem);
    all_ok = all_ok && (solution.converged || solution.box_limited);
    rows.push_back({w, solution.optimum[0], solution.savings.p_save,
                    solution.savings.c_save, solution.converged ? 1.0 : 0.0});
  }
  write_csv_header(out, config,
                   {"1: weight (on p_save; 1 = pure power objective)",
                    "2: optimum (hold control)", "3: p_save", "4: c_save",
                    "5: converged (1 = yes)"},
                   {"pareto_homogenize: " + std::string(homogenize ? "true" : "false"),
                    "tau_c estimate: " +
                        format_double(characteristic_timescale(spec, boundary))},
                   warnings.messages);
  out << "weight,optimum,p_save,c_save,converged\n";
  for (const auto& row : rows) write_csv_row(out, row);
  return all_ok ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

ExperimentConfig validate_config(const nlohmann::json& raw) {
  std::vector<std::string> errors;
  if (!raw.is_object() || raw.empty()) {
    throw ConfigError("config: expected a non-empty object with a 'command' key");
  }
  for (auto it = raw.begin(); it != raw.end(); ++it) {
    static const std::set<std::string> top = {"command", "params", "output",
                                              "format",  "seed",   "jobs",
                                              "timestamps"};
    if (!top.count(it.key())) errors.push_back("config: unknown key '" + it.key() + "'");
  }

  ExperimentConfig config;
  if (!raw.contains("command") || !raw["command"].is_string() ||
      !kCommands.count(raw["command"].get<std::string>())) {
    errors.push_back("command: required, one of qubit|erasure|ising-classical|"
                     "ising-quantum|optimize|exact|sweep");
  } else {
    config.command = raw["command"].get<std::string>();
  }
  if (raw.contains("output")) config.output = raw["output"].get<std::string>();
  if (raw.contains("format")) {
    config.format = raw["format"].get<std::string>();
    if (config.format != "csv" && config.format != "json") {
      errors.push_back("format: must be csv or json");
    }
  }
  if (raw.contains("seed")) config.seed = raw["seed"].get<unsigned>();
  if (raw.contains("jobs")) {
    config.jobs = raw["jobs"].get<int>();
    if (config.jobs < 0) errors.push_back("jobs: must be >= 0");
  } else if (const char* env = std::getenv("FASTDRIVE_JOBS")) {
    config.jobs = std::atoi(env);
    if (config.jobs < 0) config.jobs = 0;
  }
  if (raw.contains("timestamps")) config.timestamps = raw["timestamps"].get<bool>();

  if (!config.command.empty()) {
    config.params = validate_params(config.command, raw.value("params", json::object()),
                                    errors);
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  json j;
  j["command"] = config.command;
  j["params"] = config.params;
  j["output"] = config.output;
  j["format"] = config.format;
  j["seed"] = config.seed;
  j["jobs"] = config.jobs;
  j["timestamps"] = config.timestamps;
  return j;
}

int run(const ExperimentConfig& config, std::ostream& out) {
#ifdef _OPENMP
  if (config.jobs > 0) omp_set_num_threads(config.jobs);
#endif
  WarningCollector warnings;
  try {
    if (config.command == "qubit") return run_qubit(config, out, warnings);
    if (config.command == "erasure") return run_erasure(config, out, warnings);
    if (config.command == "ising-classical" || config.command == "ising-quantum") {
      return run_chain_scan(config, out, warnings);
    }
    if (config.command == "optimize") return run_optimize(config, out, warnings);
    if (config.command == "exact") return run_exact(config, out, warnings);
    if (config.command == "sweep") return run_sweep(config, out, warnings);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::exception& e) {
    out << "# error: " << e.what() << "\n";
    return 1;
  }
  throw ConfigError("command: unrecognized '" + config.command + "'");
}

int run_to_output(const ExperimentConfig& config) {
  if (config.output.empty()) return run(config, std::cout);
  std::ofstream file(config.output);
  if (!file) throw ConfigError("output: cannot open '" + config.output + "'");
  return run(config, file);
}

}  // namespace fastdrive
