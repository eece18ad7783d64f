#include "fastdrive/model_io.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace fastdrive {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument(std::string(what) + ": unknown key '" + it.key() + "'");
    }
  }
}

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

nlohmann::json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      out.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return out;
}

Matrix matrix_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim * dim) {
    throw std::invalid_argument("matrix_from_json: expected " + std::to_string(dim * dim) +
                                " row-major [re, im] entries");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const json& e = j[r * dim + c];
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("matrix_from_json: entries must be [re, im] pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

nlohmann::json generator_to_json(const GeneratorSpec& spec) {
  json j;
  j["dim"] = spec.family.dim();
  j["beta"] = spec.family.beta;
  j["h0"] = matrix_to_json(spec.family.h0);
  json forces = json::array();
  for (const Matrix& x : spec.family.forces) forces.push_back(matrix_to_json(x));
  j["forces"] = forces;
  if (spec.kind == GeneratorKind::Unitary) {
    j["generator"] = "unitary";
  } else {
    j["generator"] = "relaxation";
    j["tau_eq"] = spec.tau_eq;
  }
  return j;
}

GeneratorSpec generator_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"dim", "beta", "h0", "forces", "generator", "tau_eq"},
                      "model descriptor");
  for (const char* key : {"dim", "beta", "h0", "forces", "generator"}) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("model descriptor: missing key '") + key + "'");
    }
  }
  int dim = j["dim"].get<int>();
  if (dim < 1) throw std::invalid_argument("model descriptor: dim must be >= 1");
  Matrix h0 = matrix_from_json(j["h0"], dim);
  std::vector<Matrix> forces;
  for (const auto& f : j["forces"]) forces.push_back(matrix_from_json(f, dim));
  HamiltonianFamily family(std::move(h0), std::move(forces), j["beta"].get<double>());

  std::string kind = j["generator"].get<std::string>();
  if (kind == "unitary") {
    if (j.contains("tau_eq")) {
      throw std::invalid_argument("model descriptor: tau_eq is only valid for relaxation");
    }
    return GeneratorSpec::unitary(std::move(family));
  }
  if (kind == "relaxation") {
    double tau_eq = j.value("tau_eq", 1.0);
    if (!(tau_eq > 0.0)) {
      throw std::invalid_argument("model descriptor: tau_eq must be positive");
    }
    return GeneratorSpec::relaxation(std::move(family), tau_eq);
  }
  throw std::invalid_argument("model descriptor: generator must be 'unitary' or 'relaxation'");
}

nlohmann::json boundary_to_json(const Boundary& boundary) {
  json j;
  j["lambda_a"] = vector_to_json(boundary.lambda_a);
  j["lambda_b"] = vector_to_json(boundary.lambda_b);
  j["tau"] = boundary.tau;
  return j;
}

Boundary boundary_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"lambda_a", "lambda_b", "tau"}, "boundary");
  for (const char* key : {"lambda_a", "lambda_b", "tau"}) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("boundary: missing key '") + key + "'");
    }
  }
  return Boundary(vector_from_json(j["lambda_a"], "boundary.lambda_a"),
                  vector_from_json(j["lambda_b"], "boundary.lambda_b"),
                  j["tau"].get<double>());
}

nlohmann::json savings_to_json(const SavingsReport& report) {
  json j;
  j["p_save"] = report.p_save;
  j["c_save"] = report.c_save;
  j["quench_work"] = report.quench_work;
  j["quench_var"] = report.quench_var;
  j["w_ex_approx"] = report.w_ex_approx;
  j["var_approx"] = report.var_approx;
  j["tau"] = report.tau;
  return j;
}

nlohmann::json solution_to_json(const JumpSolution& solution) {
  json j;
  j["optimum"] = vector_to_json(solution.optimum);
  j["objective_value"] = solution.objective_value;
  j["el_residual_norm"] = solution.el_residual_norm;
  j["savings"] = savings_to_json(solution.savings);
  j["converged"] = solution.converged;
  j["box_limited"] = solution.box_limited;
  if (solution.validity) {
    json v;
    v["delta_h"] = solution.validity->delta_h;
    v["tau_over_tau_c"] = solution.validity->tau_over_tau_c;
    v["warning"] = solution.validity->warning;
    j["validity"] = v;
  }
  return j;
}

}  // namespace fastdrive
