#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "fastdrive/cli_runner.hpp"
#include "fastdrive/model_io.hpp"
#include "test_helpers.hpp"

using namespace fastdrive;
using namespace fastdrive::testing;
using nlohmann::json;

TEST_CASE("matrices round-trip through JSON") {
  std::mt19937_64 rng(61);
  Matrix m = random_complex(3, rng);
  json j = matrix_to_json(m);
  Matrix back = matrix_from_json(j, 3);
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(matrix_from_json(j, 2), std::invalid_argument);
}

TEST_CASE("generator specs round-trip and reject malformed input") {
  std::mt19937_64 rng(62);
  HamiltonianFamily fam = random_family(2, 2, 1.1, rng);
  for (GeneratorSpec spec : {GeneratorSpec::unitary(fam),
                             GeneratorSpec::relaxation(fam, 0.4)}) {
    json j = generator_to_json(spec);
    GeneratorSpec back = generator_from_json(j);
    CHECK(back.kind == spec.kind);
    CHECK(back.tau_eq == spec.tau_eq);
    CHECK(back.family.beta == spec.family.beta);
    ControlPoint pt = random_point(2, rng);
    CHECK((hamiltonian_at(back.family, pt) - hamiltonian_at(spec.family, pt))
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }

  json good = generator_to_json(GeneratorSpec::relaxation(fam, 0.4));
  json unknown = good;
  unknown["extra"] = 1;
  CHECK_THROWS_AS(generator_from_json(unknown), std::invalid_argument);
  json missing = good;
  missing.erase("forces");
  CHECK_THROWS_AS(generator_from_json(missing), std::invalid_argument);
  json bad_kind = good;
  bad_kind["generator"] = "lindblad";
  CHECK_THROWS_AS(generator_from_json(bad_kind), std::invalid_argument);
  json unitary_tau = generator_to_json(GeneratorSpec::unitary(fam));
  unitary_tau["tau_eq"] = 1.0;
  CHECK_THROWS_AS(generator_from_json(unitary_tau), std::invalid_argument);
}

TEST_CASE("boundaries round-trip through JSON") {
  std::mt19937_64 rng(63);
  Boundary bd(random_point(3, rng), random_point(3, rng), 0.25);
  Boundary back = boundary_from_json(boundary_to_json(bd));
  CHECK((back.lambda_a - bd.lambda_a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.lambda_b - bd.lambda_b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.tau == bd.tau);
  json no_tau = boundary_to_json(bd);
  no_tau.erase("tau");
  CHECK_THROWS_AS(boundary_from_json(no_tau), std::invalid_argument);
}

TEST_CASE("validate_config rejects bad configurations with named fields") {
  CHECK_THROWS_AS(validate_config(json::object()), ConfigError);
  CHECK_THROWS_AS(validate_config({{"command", "unknown-thing"}}), ConfigError);

  json stray = {{"command", "erasure"}, {"stray", 1}};
  CHECK_THROWS_WITH_AS(validate_config(stray),
                       doctest::Contains("unknown key 'stray'"), ConfigError);

  json bad_param = {{"command", "erasure"}, {"params", {{"tau_eq", -1.0}}}};
  CHECK_THROWS_WITH_AS(validate_config(bad_param), doctest::Contains("tau_eq"),
                       ConfigError);

  json bad_format = {{"command", "erasure"}, {"format", "xml"}};
  CHECK_THROWS_WITH_AS(validate_config(bad_format),
                       doctest::Contains("format"), ConfigError);
}

TEST_CASE("validated configs are idempotent under re-validation") {
  json raw = {{"command", "erasure"},
              {"params", {{"beta", 1.0}, {"eps_b", 10.0}}}};
  ExperimentConfig config = validate_config(raw);
  CHECK(config.params["tau_eq"].get<double>() == 1.0);  // default filled
  CHECK(config.params["objective"].get<std::string>() == "power");
  ExperimentConfig again = validate_config(config_to_json(config));
  CHECK(config_to_json(again) == config_to_json(config));
}

TEST_CASE("runs are deterministic byte for byte") {
  ExperimentConfig config = validate_config(
      {{"command", "erasure"}, {"format", "json"},
       {"params", {{"eps_b", 10.0}}}});
  std::ostringstream first, second;
  CHECK(run(config, first) == 0);
  CHECK(run(config, second) == 0);
  CHECK(first.str() == second.str());
  CHECK(!first.str().empty());
}

TEST_CASE("erasure output carries the documented keys and values") {
  ExperimentConfig config = validate_config(
      {{"command", "erasure"}, {"format", "json"},
       {"params", {{"beta", 1.0}, {"eps_b", 10.0}, {"tau_eq", 1.0}}}});
  std::ostringstream out;
  CHECK(run(config, out) == 0);
  json result = json::parse(out.str());
  REQUIRE(result.contains("result"));
  const json& r = result["result"];
  for (const char* key : {"xi_asymptotic", "xi_exact", "lambda", "p_save_at_xi",
                          "c_save_at_lambda", "quench_work", "quench_var",
                          "tau_c", "solution"}) {
    CHECK(r.contains(key));
  }
  CHECK(r["lambda"].get<double>() == doctest::Approx(5.0));
  CHECK(r["xi_asymptotic"].get<double>() == doctest::Approx(std::log(20.0)));
  // C*_save = eps_B^2 / (8 tau_eq) exactly for this model.
  CHECK(r["c_save_at_lambda"].get<double>() == doctest::Approx(12.5).epsilon(1e-10));
  CHECK(r["solution"].contains("validity"));
}

TEST_CASE("chain scan output format") {
  ExperimentConfig config = validate_config(
      {{"command", "ising-classical"},
       {"params",
        {{"t_min", 0.5}, {"t_max", 5.0}, {"points", 3}, {"serial", true}}}});
  std::ostringstream out;
  CHECK(run(config, out) == 0);
  std::string text = out.str();
  CHECK(text.find(kToolVersion) != std::string::npos);
  CHECK(text.find("# units: hbar = k_B = 1") != std::string::npos);
  CHECK(text.find("temperature,xi,lambda,") != std::string::npos);
  // Header comments + column line + 3 data rows; every data row ends solver_ok=1.
  std::istringstream lines(text);
  std::string line;
  int data_rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    ++data_rows;
    CHECK(line.substr(line.rfind(',') + 1) == "1");
  }
  CHECK(data_rows == 3);
}

TEST_CASE("format_double uses 12 significant digits") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(1e-12) == "1e-12");
}
