// Copyright 2026 The lindctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lindctl - command-line front end for single runs, sweeps and plots.
//
// Exit codes: 0 success, 1 a run/sweep cell failed, 2 configuration error.

#include "lindctl/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace lindctl;

constexpr int kExitCellFailure = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config;
  std::vector<std::string> scenarios;
  std::vector<std::string> methods;
  std::string noise;
  std::string gamma;
  std::string setup;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> generations;
  std::optional<std::size_t> population;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> max_iters;
  std::string topology;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config; explicit flags override it");
  cmd->add_option("--scenario", f.scenarios, "scenario id(s) a..f")->delimiter(',');
  cmd->add_option("--method", f.methods, "ga, split_gradient, machnes_gradient")->delimiter(',');
  cmd->add_option("--noise", f.noise, "amplitude_damping or phase_damping");
  cmd->add_option("--gamma", f.gamma, "gamma list (comma separated) or log:lo:hi:n");
  cmd->add_option("--setup", f.setup, "equal_steps or equal_time");
  cmd->add_option("--seed", f.seeds, "seed(s)")->delimiter(',');
  cmd->add_option("--out", f.out, "CSV output path");
  cmd->add_option("--jobs", f.jobs, "parallel workers");
  cmd->add_option("--generations", f.generations, "GA generations");
  cmd->add_option("--population", f.population, "GA population size");
  cmd->add_option("--restarts", f.restarts, "gradient-method random restarts");
  cmd->add_option("--max-iters", f.max_iters, "L-BFGS-B iterations per restart");
  cmd->add_option("--topology", f.topology, "chain or triangle");
}

ExperimentConfig build_config(const CommonFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  nlohmann::json overrides = nlohmann::json::object();
  if (!f.scenarios.empty()) overrides["scenarios"] = f.scenarios;
  if (!f.methods.empty()) overrides["methods"] = f.methods;
  if (!f.noise.empty()) cfg.noise = parse_noise_kind(f.noise);
  if (!f.gamma.empty()) cfg.gammas = parse_gamma_grid(f.gamma);
  if (!f.setup.empty()) cfg.setup = parse_setup(f.setup);
  if (!f.seeds.empty()) cfg.seeds = f.seeds;
  if (!f.out.empty()) cfg.output = f.out;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.generations) cfg.ga_generations = *f.generations;
  if (f.population) cfg.ga.population_size = *f.population;
  if (f.restarts) cfg.gradient.restarts = *f.restarts;
  if (f.max_iters) cfg.gradient.max_iters = *f.max_iters;
  if (!f.topology.empty()) overrides["topology"] = f.topology;
  if (!overrides.empty()) {
    const auto parsed = config_from_json(overrides);
    if (overrides.contains("scenarios")) cfg.scenarios = parsed.scenarios;
    if (overrides.contains("methods")) cfg.methods = parsed.methods;
    if (overrides.contains("topology")) cfg.topology = parsed.topology;
  }
  cfg.normalize();
  return cfg;
}

int write_outputs(const ExperimentConfig& cfg, const std::vector<SweepRecord>& records) {
  emit_csv(records, cfg.output);
  write_pulse_sidecars(records, cfg.output);
  std::cout << format_csv(records);
  return 0;
}

int cmd_run(const CommonFlags& f) {
  ExperimentConfig cfg = build_config(f);
  if (cfg.scenarios.size() != 1 || cfg.methods.size() != 1 || cfg.gammas.size() != 1 ||
      cfg.seeds.size() != 1) {
    throw ConfigError("run needs exactly one scenario, method, gamma and seed (use sweep)");
  }
  // A single cell parallelizes inside the GA instead.
  cfg.ga.threads = cfg.jobs;
  const Cell cell{cfg.scenarios[0], cfg.methods[0], cfg.gammas[0], cfg.seeds[0]};
  SweepRecord rec;
  try {
    rec = run_single(cfg, cell);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "lindctl: " << e.what() << '\n';
    return kExitCellFailure;
  }
  return write_outputs(cfg, {rec});
}

int cmd_sweep(const CommonFlags& f, const std::string& plot_path) {
  const ExperimentConfig cfg = build_config(f);
  const auto outcome = sweep(cfg);
  write_outputs(cfg, outcome.records);
  if (!plot_path.empty() && !outcome.records.empty()) emit_plot(outcome.records, plot_path);
  for (const auto& failure : outcome.failures) {
    std::cerr << "lindctl: " << failure.message << '\n';
  }
  return outcome.failures.empty() ? 0 : kExitCellFailure;
}

int cmd_scenarios(bool as_json, const std::string& topology) {
  Topology topo = Topology::chain;
  if (topology == "triangle") {
    topo = Topology::triangle;
  } else if (!topology.empty() && topology != "chain") {
    throw ConfigError("unknown topology '" + topology + "'");
  }
  const auto catalog = scenario_catalog(topo);
  if (as_json) {
    auto arr = nlohmann::json::array();
    for (const auto& s : catalog) arr.push_back(scenario_to_json(s));
    std::cout << arr.dump(2) << '\n';
    return 0;
  }
  std::cout << "id  qubits  control  target_sites  ancilla  pulses  T     h_max\n";
  for (const auto& s : catalog) {
    auto list = [](const std::vector<std::size_t>& v) {
      std::ostringstream o;
      o << '{';
      for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
      o << '}';
      return o.str();
    };
    char line[160];
    std::snprintf(line, sizeof line, "%-3c %-7zu %-8zu %-13s %-8s %-7zu %-5.2f %.0f\n", s.id,
                  s.num_qubits(), s.control_site, list(s.target_sites).c_str(),
                  list(s.ancilla_sites).c_str(), s.num_pulses, s.total_time, s.h_max);
    std::cout << line;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Control-pulse optimization for noisy Heisenberg spin chains"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "optimize a single (scenario, method, gamma, seed) cell");
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  std::string plot_path;
  auto* sw = app.add_subcommand("sweep", "run the full scenario x method x gamma x seed grid");
  add_common(sw, sweep_flags);
  sw->add_option("--plot", plot_path, "also write an SVG chart");

  std::string plot_in;
  std::string plot_out = "results.svg";
  auto* plot = app.add_subcommand("plot", "render a results CSV as an SVG chart");
  plot->add_option("csv", plot_in, "results CSV")->required();
  plot->add_option("--out", plot_out, "SVG output path");

  bool as_json = false;
  std::string topology;
  auto* list = app.add_subcommand("scenarios", "list the scenario catalog");
  list->add_flag("--json", as_json, "print full scenario definitions as JSON");
  list->add_option("--topology", topology, "chain or triangle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sw) return cmd_sweep(sweep_flags, plot_path);
    if (*plot) {
      emit_plot(read_csv(plot_in), plot_out);
      return 0;
    }
    if (*list) return cmd_scenarios(as_json, topology);
  } catch (const ConfigError& e) {
    std::cerr << "lindctl: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lindctl: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "lindctl: " << e.what() << '\n';
    return kExitCellFailure;
  }
  return 0;
}
