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

#include "lindctl/optimizers.hpp"

#include "lindctl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace lindctl {

namespace {

// Population indices ordered by decreasing fitness, ties by lower index.
std::vector<std::size_t> ranking(std::span<const ScoredGenome> population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].fitness > population[b].fitness;
  });
  return order;
}

// Scores members [first, size); earlier members carry their fitness over.
void evaluate_population(const Objective& obj, std::vector<ScoredGenome>& pop,
                         std::size_t first, std::size_t threads) {
  auto eval_one = [&](std::size_t i) { pop[i].fitness = obj.evaluate(pop[i].genome); };
  threads = std::max<std::size_t>(1, std::min(threads, pop.size()));
  if (threads == 1) {
    for (std::size_t i = first; i < pop.size(); ++i) eval_one(i);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = first + t; i < pop.size(); i += threads) eval_one(i);
      });
    }
  }
  for (std::size_t i = first; i < pop.size(); ++i) {
    if (!std::isfinite(pop[i].fitness)) {
      warn("ga_maximize: discarding genome " + std::to_string(i) +
           " with non-finite fitness");
      pop[i].fitness = -std::numeric_limits<double>::infinity();
    }
  }
}

}  // namespace

void GaConfig::validate() const {
  if (population_size < 4 || population_size % 2 != 0) {
    throw std::invalid_argument("GA population size must be even and >= 4");
  }
  if (!(keep_probability >= 0.0 && keep_probability <= 1.0)) {
    throw std::invalid_argument("GA keep probability must lie in [0, 1]");
  }
  if (elitism >= population_size) {
    throw std::invalid_argument("GA elitism must be smaller than the population");
  }
  if (const auto* t = std::get_if<Tournament>(&selection); t && t->k == 0) {
    throw std::invalid_argument("tournament size must be >= 1");
  }
  if (const auto* t = std::get_if<Truncation>(&selection);
      t && !(t->fraction > 0.0 && t->fraction <= 1.0)) {
    throw std::invalid_argument("truncation fraction must lie in (0, 1]");
  }
}

Genome mutate(const Genome& g, double p, Rng& rng, const Bounds& bounds) {
  Genome out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double keep = rng.uniform();
    const double fresh = rng.uniform(bounds.lower, bounds.upper);
    out[i] = keep < p ? g[i] : fresh;
  }
  return out;
}

std::pair<Genome, Genome> crossover_at(const Genome& x, const Genome& y, std::size_t c1,
                                       std::size_t c2) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("crossover: parents have lengths " + std::to_string(x.size()) +
                                " and " + std::to_string(y.size()));
  }
  if (!(c1 < c2)) throw std::invalid_argument("crossover: cut indices need c1 < c2");
  Genome a = x;
  Genome b = y;
  for (std::size_t i = c1 + 1; i < c2 && i < x.size(); ++i) std::swap(a[i], b[i]);
  return {std::move(a), std::move(b)};
}

std::pair<Genome, Genome> crossover_two_point(const Genome& x, const Genome& y, Rng& rng) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("crossover: parents have lengths " + std::to_string(x.size()) +
                                " and " + std::to_string(y.size()));
  }
  const auto n = x.size();
  if (n < 2) return {x, y};
  auto a = static_cast<std::size_t>(rng.below(n));
  auto b = static_cast<std::size_t>(rng.below(n - 1));
  if (b >= a) ++b;
  return crossover_at(x, y, std::min(a, b), std::max(a, b));
}

std::size_t select_index(std::span<const ScoredGenome> population, const Selection& selection,
                         Rng& rng) {
  if (population.empty()) throw std::invalid_argument("select: empty population");
  const auto n = population.size();
  if (const auto* t = std::get_if<Tournament>(&selection)) {
    std::size_t best = static_cast<std::size_t>(rng.below(n));
    for (std::size_t draw = 1; draw < t->k; ++draw) {
      const auto c = static_cast<std::size_t>(rng.below(n));
      const double fc = population[c].fitness;
      const double fb = population[best].fitness;
      if (fc > fb || (fc == fb && c < best)) best = c;
    }
    return best;
  }
  const auto& trunc = std::get<Truncation>(selection);
  const auto order = ranking(population);
  const auto top = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(trunc.fraction * static_cast<double>(n))), 1, n);
  return order[static_cast<std::size_t>(rng.below(top))];
}

Genome select(std::span<const ScoredGenome> population, const Selection& selection, Rng& rng) {
  return population[select_index(population, selection, rng)].genome;
}

GaResult ga_maximize(const Objective& obj, const Bounds& bounds, std::size_t num_pulses,
                     const GaConfig& cfg) {
  cfg.validate();
  bounds.validate();
  if (!obj.evaluate) throw std::invalid_argument("ga_maximize: objective has no evaluate");
  const std::size_t genes = 2 * num_pulses;

  // Stream (seed, 0, i) initializes member i; (seed, g + 1, j) breeds pair j
  // of generation g + 1.
  std::vector<ScoredGenome> pop(cfg.population_size);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto rng = Rng::stream(cfg.seed, 0, i);
    pop[i].genome.resize(genes);
    for (double& v : pop[i].genome) v = rng.uniform(bounds.lower, bounds.upper);
  }

  GaResult result;
  result.score = -std::numeric_limits<double>::infinity();
  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    evaluate_population(obj, pop, gen == 0 ? 0 : cfg.elitism, cfg.threads);
    const auto order = ranking(pop);
    const auto& leader = pop[order.front()];
    result.history.push_back(leader.fitness);
    if (result.best.empty() || leader.fitness > result.score) {
      result.best = leader.genome;
      result.score = leader.fitness;
    }
    result.generations = gen + 1;
    if (gen + 1 == cfg.generations) break;

    std::vector<ScoredGenome> next;
    next.reserve(pop.size());
    for (std::size_t e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[e]]);
    for (std::size_t pair = 0; next.size() < pop.size(); ++pair) {
      auto rng = Rng::stream(cfg.seed, gen + 1, pair);
      const auto& mom = pop[select_index(pop, cfg.selection, rng)].genome;
      const auto& dad = pop[select_index(pop, cfg.selection, rng)].genome;
      auto [sister, brother] = crossover_two_point(mom, dad, rng);
      next.push_back({mutate(sister, cfg.keep_probability, rng, bounds), 0.0});
      if (next.size() < pop.size()) {
        next.push_back({mutate(brother, cfg.keep_probability, rng, bounds), 0.0});
      }
    }
    pop = std::move(next);
  }
  return result;
}

}  // namespace lindctl
