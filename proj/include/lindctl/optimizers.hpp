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

// optimizers.hpp - the two search engines over flat parameter vectors
// (hx pulses followed by hy pulses): a projected limited-memory BFGS for box
// constraints and a real-valued genetic algorithm.
//
// Both maximize.

#pragma once

#include "lindctl/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace lindctl {

struct ScoreGradient {
  double score = 0.0;
  std::vector<double> gradient;
};

struct Objective {
  std::function<double(std::span<const double>)> evaluate;
  /// Optional; gradient length must equal the parameter count.
  std::function<ScoreGradient(std::span<const double>)> evaluate_with_gradient;
};

/// Same box [lower, upper] for every parameter.
struct Bounds {
  double lower = -1.0;
  double upper = 1.0;

  static Bounds symmetric(double h_max) { return {-h_max, h_max}; }
  double clamp(double x) const;
  bool contains(double x) const { return x >= lower && x <= upper; }
  void validate() const;
};

// ---------------------------------------------------------------------------
// L-BFGS-B

struct LbfgsbOptions {
  std::size_t max_iters = 200;
  /// Stop when the projected-gradient infinity norm falls below this.
  double pg_tol = 1e-8;
  /// Stop when |f_new - f_old| <= rel_tol * max(|f_new|, |f_old|, 1).
  double rel_tol = 1e-12;
  std::size_t history = 10;
};

struct LbfgsbResult {
  std::vector<double> best;
  double score = 0.0;
  std::size_t iters = 0;
};

/// Projected L-BFGS with an Armijo backtracking search along the projected
/// path. Throws std::invalid_argument without a gradient and
/// std::runtime_error on a non-finite score.
LbfgsbResult lbfgs_b_maximize(const Objective& obj, const Bounds& bounds,
                              std::span<const double> start,
                              const LbfgsbOptions& options = {});

// ---------------------------------------------------------------------------
// Genetic algorithm

using Genome = std::vector<double>;

struct Tournament {
  std::size_t k = 3;
};
struct Truncation {
  double fraction = 0.25;
};
using Selection = std::variant<Tournament, Truncation>;

struct GaConfig {
  std::size_t population_size = 64;
  std::size_t generations = 300;
  /// Per-gene probability of keeping a gene during mutation.
  double keep_probability = 0.95;
  Selection selection = Tournament{3};
  std::size_t elitism = 2;
  std::uint64_t seed = 1;
  /// Worker threads for fitness evaluation; results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

/// Keeps each gene with probability p, otherwise draws it uniformly from the
/// bounds. Consumes exactly two draws per gene: the keep decision, then the
/// replacement value (drawn even when the gene is kept).
Genome mutate(const Genome& g, double p, Rng& rng, const Bounds& bounds);

/// Two-point cut with explicit 0-based cut indices c1 < c2: child one keeps
/// x at i <= c1 and i >= c2 and takes y strictly between; child two is the
/// complement.
std::pair<Genome, Genome> crossover_at(const Genome& x, const Genome& y,
                                       std::size_t c1, std::size_t c2);

/// Draws c1 < c2 uniformly from the valid index pairs, then crossover_at().
/// Genomes shorter than two genes are returned unchanged.
std::pair<Genome, Genome> crossover_two_point(const Genome& x, const Genome& y, Rng& rng);

struct ScoredGenome {
  Genome genome;
  double fitness = 0.0;
};

/// Index of the selected member. Ties resolve to the lower index.
std::size_t select_index(std::span<const ScoredGenome> population, const Selection& selection,
                         Rng& rng);
Genome select(std::span<const ScoredGenome> population, const Selection& selection, Rng& rng);

struct GaResult {
  Genome best;
  double score = 0.0;
  /// Best fitness of each generation's population.
  std::vector<double> history;
  std::size_t generations = 0;
};

/// Genomes have 2 * num_pulses genes. Fully determined by cfg.seed for a
/// deterministic objective, whatever cfg.threads is.
GaResult ga_maximize(const Objective& obj, const Bounds& bounds, std::size_t num_pulses,
                     const GaConfig& cfg);

}  // namespace lindctl
