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

// harness.hpp - experiment configuration, single runs, sweeps and their
// CSV / SVG / pulse-sidecar outputs.

#pragma once

#include "lindctl/lindblad.hpp"
#include "lindctl/optimizers.hpp"
#include "lindctl/spin_model.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lindctl {

/// Raised for anything wrong with a configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { ga, machnes_gradient, split_gradient };
enum class Setup { equal_steps, equal_time };

std::string_view to_string(Method method);
std::string_view to_string(Setup setup);
Method parse_method(std::string_view name);
Setup parse_setup(std::string_view name);

struct StepPlan {
  std::size_t num_pulses = 0;
  double dt = 0.0;
};

/// Pulse count and interval for a scenario under a comparison setup. Equal
/// steps uses 32 (2 qubits) / 128 (3 qubits) pulses for every method; equal
/// time keeps those for the GA and gives the gradient methods four times as
/// many. The total time is the scenario's (2.1 for the catalog).
StepPlan resolve_setup(const Scenario& scenario, Setup setup, Method method);

/// "log:lo:hi:n" gives n log-spaced points; otherwise a comma-separated list.
std::vector<double> parse_gamma_grid(std::string_view spec);

struct GradientOptions {
  std::size_t restarts = 8;
  std::size_t max_iters = 200;
  double tol = 1e-8;
};

struct ExperimentConfig {
  std::vector<char> scenarios{'a'};
  std::vector<Method> methods{Method::ga};
  NoiseKind noise = NoiseKind::phase_damping;
  std::vector<double> gammas;
  Setup setup = Setup::equal_steps;
  std::vector<std::uint64_t> seeds{1};
  Topology topology = Topology::chain;

  GaConfig ga;
  /// When unset: 300 generations for 2 qubits, 600 for 3.
  std::optional<std::size_t> ga_generations;
  GradientOptions gradient;

  std::string output = "results.csv";
  std::size_t jobs = 1;

  ExperimentConfig();

  /// Sorts and dedupes every axis and checks ranges; throws ConfigError.
  void normalize();
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Cell {
  char scenario = 'a';
  Method method = Method::ga;
  double gamma = 0.0;
  std::uint64_t seed = 1;
};

struct SweepRecord {
  char scenario = 'a';
  Method method = Method::ga;
  NoiseKind noise = NoiseKind::phase_damping;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::size_t num_pulses = 0;
  double dt = 0.0;
  double superop_fidelity = 0.0;
  double state_fitness = 0.0;
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
  /// Optimized amplitudes, hx then hy. Not part of the CSV.
  std::vector<double> pulses;
};

/// The scenario a cell runs on: catalog entry with the setup's pulse count
/// and the configured noise on every qubit.
Scenario cell_scenario(const ExperimentConfig& cfg, const Cell& cell);

/// Scores that the harness reports for a pulse vector, always from exact
/// propagation: superoperator fidelity against the full-system target and
/// the reduced-channel state fitness.
struct Scores {
  double superop_fidelity = 0.0;
  double state_fitness = 0.0;
};
Scores evaluate_pulses(const Scenario& scenario, std::span<const double> pulses);

/// Optimizes one cell and re-evaluates the result exactly. Optimizer errors
/// are rethrown as std::runtime_error naming the cell.
SweepRecord run_single(const ExperimentConfig& cfg, const Cell& cell);

/// Scenarios x methods x gammas x seeds in the normalized config order.
std::vector<Cell> expand_cells(const ExperimentConfig& cfg);

struct CellFailure {
  Cell cell;
  std::string message;
};

struct SweepOutcome {
  std::vector<SweepRecord> records;
  std::vector<CellFailure> failures;
};

/// Runs every cell on cfg.jobs workers. Record order is the cell order
/// regardless of scheduling; failed cells are reported and skipped.
SweepOutcome sweep(const ExperimentConfig& cfg);

// Reporting -----------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "scenario,method,noise,gamma,seed,num_pulses,dt,superop_fidelity,state_fitness,"
    "iterations,wall_time_s";

std::string format_csv(const std::vector<SweepRecord>& records);
void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path);
std::vector<SweepRecord> parse_csv(std::string_view text);
std::vector<SweepRecord> read_csv(const std::filesystem::path& path);

/// <csv>.pulses/<scenario>_<method>_<noise>_g<gamma>_s<seed>.txt
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path,
                                   const SweepRecord& record);
/// One value per line, 17 significant digits.
void write_pulse_sidecars(const std::vector<SweepRecord>& records,
                          const std::filesystem::path& csv_path);
std::vector<double> read_pulses(const std::filesystem::path& path);

/// Fidelity-vs-gamma chart: one panel per (scenario, noise), one polyline per
/// method through the seed-averaged state fitness at each positive gamma.
/// Throws std::invalid_argument on an empty record list.
std::string render_svg(const std::vector<SweepRecord>& records);
void emit_plot(const std::vector<SweepRecord>& records, const std::filesystem::path& path);

}  // namespace lindctl
