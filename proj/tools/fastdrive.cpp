#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fastdrive/cli_runner.hpp"

namespace {

using nlohmann::json;

void opt_num(CLI::App* sub, json& p, const std::string& flag, const std::string& key,
             const std::string& desc) {
  sub->add_option_function<double>(flag, [&p, key](double v) { p[key] = v; }, desc);
}

void opt_int(CLI::App* sub, json& p, const std::string& flag, const std::string& key,
             const std::string& desc) {
  sub->add_option_function<int>(flag, [&p, key](int v) { p[key] = v; }, desc);
}

void opt_str(CLI::App* sub, json& p, const std::string& flag, const std::string& key,
             const std::string& desc) {
  sub->add_option_function<std::string>(
      flag, [&p, key](const std::string& v) { p[key] = v; }, desc);
}

void opt_flag(CLI::App* sub, json& p, const std::string& flag, const std::string& key,
              const std::string& desc) {
  sub->add_flag_function(flag, [&p, key](std::int64_t) { p[key] = true; }, desc);
}

void opt_vec(CLI::App* sub, json& p, const std::string& flag, const std::string& key,
             const std::string& desc) {
  sub->add_option_function<std::vector<double>>(
      flag, [&p, key](const std::vector<double>& v) { p[key] = v; }, desc);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fastdrive::ConfigError("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast-driving work/fluctuation estimates and optimal jump protocols"};
  app.require_subcommand(0, 1);

  std::string config_file;
  app.add_option("--config", config_file,
                 "Load a full JSON experiment config instead of a subcommand");

  json top;  // output/format/seed/jobs/timestamps shared by all subcommands
  app.add_option_function<std::string>(
      "-o,--output", [&](const std::string& v) { top["output"] = v; },
      "Output file (default stdout)");
  app.add_option_function<std::string>(
      "--format", [&](const std::string& v) { top["format"] = v; }, "csv or json");
  app.add_option_function<unsigned>(
      "--seed", [&](unsigned v) { top["seed"] = v; }, "Multistart RNG seed");
  app.add_option_function<int>(
      "--jobs", [&](int v) { top["jobs"] = v; },
      "Worker threads (default $FASTDRIVE_JOBS or all)");
  app.add_flag_function(
      "--timestamps", [&](std::int64_t) { top["timestamps"] = true; },
      "Include a generation timestamp in output headers");

  std::map<std::string, json> params;

  CLI::App* qubit = app.add_subcommand(
      "qubit", "Driven qubit: fast vs exact savings against the jump magnitude");
  opt_num(qubit, params["qubit"], "--beta-j", "beta_j", "beta * J");
  opt_num(qubit, params["qubit"], "--tau-j", "tau_j", "tau * J");
  opt_num(qubit, params["qubit"], "--j", "j", "coupling J");
  opt_num(qubit, params["qubit"], "--alpha-min", "alpha_min", "smallest jump magnitude");
  opt_num(qubit, params["qubit"], "--alpha-max", "alpha_max", "largest jump magnitude");
  opt_int(qubit, params["qubit"], "--points", "points", "grid points in alpha");
  opt_int(qubit, params["qubit"], "--steps", "steps", "integrator steps");
  opt_vec(qubit, params["qubit"], "--lambda-a", "lambda_a", "initial control 3-vector");
  opt_vec(qubit, params["qubit"], "--lambda-b", "lambda_b", "final control 3-vector");

  CLI::App* erasure = app.add_subcommand(
      "erasure", "Two-level dot erasure: optimal jump points and savings");
  opt_num(erasure, params["erasure"], "--beta", "beta", "inverse temperature");
  opt_num(erasure, params["erasure"], "--eps-b", "eps_b", "final gap");
  opt_num(erasure, params["erasure"], "--beta-eps-b", "eps_b",
          "final gap in units of k_B T (shorthand for --eps-b at beta = 1)");
  opt_num(erasure, params["erasure"], "--tau-eq", "tau_eq", "equilibration time");
  opt_num(erasure, params["erasure"], "--tau", "tau", "protocol duration");
  opt_str(erasure, params["erasure"], "--objective", "objective",
          "power | constancy | pareto");
  opt_num(erasure, params["erasure"], "--weight", "weight", "Pareto weight on p_save");

  CLI::App* ising_c = app.add_subcommand(
      "ising-classical", "Classical Ising chain: jump optima over temperature");
  opt_num(ising_c, params["ising-classical"], "--j", "j", "coupling J");
  opt_num(ising_c, params["ising-classical"], "--eps-a", "eps_a", "initial field");
  opt_num(ising_c, params["ising-classical"], "--eps-b", "eps_b", "final field");
  opt_num(ising_c, params["ising-classical"], "--tau-eq", "tau_eq", "equilibration time");
  opt_num(ising_c, params["ising-classical"], "--t-min", "t_min", "lowest k_B T / J");
  opt_num(ising_c, params["ising-classical"], "--t-max", "t_max", "highest k_B T / J");
  opt_int(ising_c, params["ising-classical"], "--points", "points", "temperature points");
  opt_flag(ising_c, params["ising-classical"], "--serial", "serial",
           "disable parallel scan");

  CLI::App* ising_q = app.add_subcommand(
      "ising-quantum", "Transverse-field Ising chain: jump optima over temperature");
  opt_num(ising_q, params["ising-quantum"], "--j", "j", "coupling J");
  opt_num(ising_q, params["ising-quantum"], "--g-a", "g_a", "initial transverse field");
  opt_num(ising_q, params["ising-quantum"], "--g-b", "g_b", "final transverse field");
  opt_num(ising_q, params["ising-quantum"], "--tau-eq", "tau_eq", "equilibration time");
  opt_num(ising_q, params["ising-quantum"], "--t-min", "t_min", "lowest k_B T / J");
  opt_num(ising_q, params["ising-quantum"], "--t-max", "t_max", "highest k_B T / J");
  opt_int(ising_q, params["ising-quantum"], "--points", "points", "temperature points");
  opt_int(ising_q, params["ising-quantum"], "--nodes", "nodes",
          "starting Gauss-Legendre nodes");
  opt_flag(ising_q, params["ising-quantum"], "--serial", "serial",
           "disable parallel scan");

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Solve the jump problem for a JSON model descriptor");
  std::string model_file, boundary_file;
  optimize->add_option("--model", model_file, "model descriptor JSON file")->required();
  optimize->add_option("--boundary", boundary_file, "boundary JSON file")->required();
  opt_str(optimize, params["optimize"], "--objective", "objective",
          "power | constancy | pareto");
  opt_num(optimize, params["optimize"], "--weight", "weight", "Pareto weight");
  opt_num(optimize, params["optimize"], "--box-margin", "box_margin",
          "search box margin around the boundary points");
  opt_vec(optimize, params["optimize"], "--box-lo", "box_lo", "explicit box lower corner");
  opt_vec(optimize, params["optimize"], "--box-hi", "box_hi", "explicit box upper corner");
  opt_int(optimize, params["optimize"], "--starts", "starts", "multistart seeds");
  optimize->add_flag_function(
      "--raw-pareto",
      [&](std::int64_t) { params["optimize"]["pareto_homogenize"] = false; },
      "add the weighted objectives without unit homogenization");

  CLI::App* exact = app.add_subcommand(
      "exact", "Exact-integrator sweep: fast vs exact over protocol durations");
  opt_str(exact, params["exact"], "--model", "model", "dot | qubit");
  opt_str(exact, params["exact"], "--tau-sweep", "tau_sweep", "lo:hi:n (log-spaced)");
  opt_int(exact, params["exact"], "--steps", "steps", "integrator steps");
  opt_str(exact, params["exact"], "--protocol", "protocol", "jump | linear");
  opt_num(exact, params["exact"], "--beta", "beta", "inverse temperature");
  opt_num(exact, params["exact"], "--eps-b", "eps_b", "dot final gap");
  opt_num(exact, params["exact"], "--tau-eq", "tau_eq", "dot equilibration time");
  opt_num(exact, params["exact"], "--j", "j", "qubit coupling");
  opt_num(exact, params["exact"], "--alpha", "alpha", "qubit jump magnitude");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Pareto weight sweep for the dot model");
  opt_num(sweep, params["sweep"], "--beta", "beta", "inverse temperature");
  opt_num(sweep, params["sweep"], "--eps-b", "eps_b", "final gap");
  opt_num(sweep, params["sweep"], "--tau-eq", "tau_eq", "equilibration time");
  opt_num(sweep, params["sweep"], "--tau", "tau", "protocol duration");
  opt_vec(sweep, params["sweep"], "--weights", "weights", "Pareto weights in [0, 1]");
  sweep->add_flag_function(
      "--raw-pareto", [&](std::int64_t) { params["sweep"]["pareto_homogenize"] = false; },
      "add the weighted objectives without unit homogenization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json raw;
    if (!config_file.empty()) {
      raw = load_json_file(config_file);
    } else {
      auto subs = app.get_subcommands();
      if (subs.empty()) {
        std::cerr << "error: a subcommand or --config is required\n"
                  << app.help() << "\n";
        return 2;
      }
      const std::string name = subs[0]->get_name();
      raw = top;
      raw["command"] = name;
      raw["params"] = params[name];
      if (name == "optimize") {
        raw["params"]["model"] = load_json_file(model_file);
        raw["params"]["boundary"] = load_json_file(boundary_file);
        raw["format"] = "json";
      }
    }
    fastdrive::ExperimentConfig config = fastdrive::validate_config(raw);
    return fastdrive::run_to_output(config);
  } catch (const fastdrive::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
