#ifndef FASTDRIVE_MODEL_IO_HPP
#define FASTDRIVE_MODEL_IO_HPP

#include <json.hpp>

#include "fastdrive/jump_optimizer.hpp"

namespace fastdrive {

// Matrices serialize row-major as a flat list of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, int dim);

// Model descriptor: {"dim": n, "h0": [[re,im],...], "forces": [...], "beta": x}
// plus generator selection {"generator": "unitary"} or
// {"generator": "relaxation", "tau_eq": x}. Unknown keys are rejected.
nlohmann::json generator_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const nlohmann::json& j);

// {"lambda_a": [...], "lambda_b": [...], "tau": x}
nlohmann::json boundary_to_json(const Boundary& boundary);
Boundary boundary_from_json(const nlohmann::json& j);

nlohmann::json savings_to_json(const SavingsReport& report);
nlohmann::json solution_to_json(const JumpSolution& solution);

}  // namespace fastdrive

#endif
