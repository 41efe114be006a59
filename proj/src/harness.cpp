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

#include "lindctl/harness.hpp"

#include "lindctl/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace lindctl {

namespace {

constexpr std::size_t kBasePulses2 = 32;
constexpr std::size_t kBasePulses3 = 128;
constexpr std::size_t kEqualTimeFactor = 4;

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view s) {
  const auto t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + t + "'");
  }
  if (used != t.size()) throw ConfigError("not a number: '" + t + "'");
  return v;
}

Selection parse_selection(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto colon = s.find(':');
    const auto kind = s.substr(0, colon);
    const auto arg = colon == std::string::npos ? std::string{} : s.substr(colon + 1);
    if (kind == "tournament") {
      return Tournament{arg.empty() ? 3 : static_cast<std::size_t>(parse_double(arg))};
    }
    if (kind == "truncation") return Truncation{arg.empty() ? 0.25 : parse_double(arg)};
    throw ConfigError("unknown selection '" + s + "'");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "tournament") return Tournament{j.value("k", std::size_t{3})};
  if (kind == "truncation") return Truncation{j.value("fraction", 0.25)};
  throw ConfigError("unknown selection kind '" + kind + "'");
}

nlohmann::json selection_to_json(const Selection& s) {
  if (const auto* t = std::get_if<Tournament>(&s)) return {{"kind", "tournament"}, {"k", t->k}};
  return {{"kind", "truncation"}, {"fraction", std::get<Truncation>(s).fraction}};
}

std::size_t default_generations(std::size_t num_qubits) {
  return num_qubits <= 2 ? 300 : 600;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::ga:
      return "ga";
    case Method::machnes_gradient:
      return "machnes_gradient";
    case Method::split_gradient:
      return "split_gradient";
  }
  return "?";
}

std::string_view to_string(Setup setup) {
  return setup == Setup::equal_steps ? "equal_steps" : "equal_time";
}

Method parse_method(std::string_view name) {
  if (name == "ga") return Method::ga;
  if (name == "machnes_gradient") return Method::machnes_gradient;
  if (name == "split_gradient") return Method::split_gradient;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

Setup parse_setup(std::string_view name) {
  if (name == "equal_steps") return Setup::equal_steps;
  if (name == "equal_time") return Setup::equal_time;
  throw ConfigError("unknown setup '" + std::string(name) + "'");
}

StepPlan resolve_setup(const Scenario& scenario, Setup setup, Method method) {
  std::size_t m = scenario.num_qubits() <= 2 ? kBasePulses2 : kBasePulses3;
  if (setup == Setup::equal_time && method != Method::ga) m *= kEqualTimeFactor;
  return {m, scenario.total_time / static_cast<double>(m)};
}

std::vector<double> parse_gamma_grid(std::string_view spec) {
  std::vector<double> out;
  if (spec.starts_with("log:")) {
    std::vector<std::string> parts;
    std::stringstream ss{std::string(spec.substr(4))};
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("gamma grid must look like log:lo:hi:n");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double n = parse_double(parts[2]);
    if (!(lo > 0.0 && hi >= lo) || n < 1 || n != std::floor(n)) {
      throw ConfigError("log gamma grid needs 0 < lo <= hi and an integer count >= 1");
    }
    const auto count = static_cast<std::size_t>(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(std::pow(10.0, a + t * (b - a)));
    }
    return out;
  }
  std::stringstream ss{std::string(spec)};
  for (std::string part; std::getline(ss, part, ',');) {
    if (!trim(part).empty()) out.push_back(parse_double(part));
  }
  if (out.empty()) throw ConfigError("empty gamma grid");
  return out;
}

ExperimentConfig::ExperimentConfig() : gammas(parse_gamma_grid("log:1e-4:1:13")) {}

void ExperimentConfig::normalize() {
  sort_unique(scenarios);
  sort_unique(methods);
  sort_unique(gammas);
  sort_unique(seeds);
  if (scenarios.empty()) throw ConfigError("no scenarios selected");
  if (methods.empty()) throw ConfigError("no methods selected");
  if (gammas.empty()) throw ConfigError("no gamma values selected");
  if (seeds.empty()) throw ConfigError("no seeds selected");
  for (char id : scenarios) {
    if (id < 'a' || id > 'f') throw ConfigError(std::string("unknown scenario '") + id + "'");
  }
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("gamma values must be >= 0");
  }
  if (jobs == 0) jobs = 1;
  try {
    ga.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (gradient.restarts == 0) throw ConfigError("gradient restarts must be >= 1");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("scenarios")) {
      cfg.scenarios.clear();
      for (const auto& s : j.at("scenarios")) {
        const auto id = s.get<std::string>();
        if (id.size() != 1) throw ConfigError("scenario ids are single letters");
        cfg.scenarios.push_back(id[0]);
      }
    }
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("noise")) cfg.noise = parse_noise_kind(j.at("noise").get<std::string>());
    if (j.contains("gammas")) {
      const auto& g = j.at("gammas");
      cfg.gammas = g.is_string() ? parse_gamma_grid(g.get<std::string>())
                                 : g.get<std::vector<double>>();
    }
    if (j.contains("setup")) cfg.setup = parse_setup(j.at("setup").get<std::string>());
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("topology")) {
      const auto t = j.at("topology").get<std::string>();
      if (t == "chain") {
        cfg.topology = Topology::chain;
      } else if (t == "triangle") {
        cfg.topology = Topology::triangle;
      } else {
        throw ConfigError("unknown topology '" + t + "'");
      }
    }
    if (j.contains("ga")) {
      const auto& g = j.at("ga");
      cfg.ga.population_size = g.value("population_size", cfg.ga.population_size);
      if (g.contains("generations")) cfg.ga_generations = g.at("generations").get<std::size_t>();
      cfg.ga.keep_probability = g.value("keep_probability", cfg.ga.keep_probability);
      if (g.contains("selection")) cfg.ga.selection = parse_selection(g.at("selection"));
      cfg.ga.elitism = g.value("elitism", cfg.ga.elitism);
      cfg.ga.threads = g.value("threads", cfg.ga.threads);
    }
    if (j.contains("gradient")) {
      const auto& g = j.at("gradient");
      cfg.gradient.restarts = g.value("restarts", cfg.gradient.restarts);
      cfg.gradient.max_iters = g.value("max_iters", cfg.gradient.max_iters);
      cfg.gradient.tol = g.value("tol", cfg.gradient.tol);
    }
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  auto ids = nlohmann::json::array();
  for (char c : cfg.scenarios) ids.push_back(std::string(1, c));
  j["scenarios"] = ids;
  auto methods = nlohmann::json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  j["noise"] = std::string(to_string(cfg.noise));
  j["gammas"] = cfg.gammas;
  j["setup"] = std::string(to_string(cfg.setup));
  j["seeds"] = cfg.seeds;
  j["topology"] = cfg.topology == Topology::chain ? "chain" : "triangle";
  j["ga"] = {{"population_size", cfg.ga.population_size},
             {"keep_probability", cfg.ga.keep_probability},
             {"selection", selection_to_json(cfg.ga.selection)},
             {"elitism", cfg.ga.elitism},
             {"threads", cfg.ga.threads}};
  if (cfg.ga_generations) j["ga"]["generations"] = *cfg.ga_generations;
  j["gradient"] = {{"restarts", cfg.gradient.restarts},
                   {"max_iters", cfg.gradient.max_iters},
                   {"tol", cfg.gradient.tol}};
  j["output"] = cfg.output;
  j["jobs"] = cfg.jobs;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

Scenario cell_scenario(const ExperimentConfig& cfg, const Cell& cell) {
  Scenario s = scenario_by_id(cell.scenario, cfg.topology);
  s.num_pulses = resolve_setup(s, cfg.setup, cell.method).num_pulses;
  s.noise.kind = cfg.noise;
  s.noise.gamma = cell.gamma;
  s.validate();
  return s;
}

Scores evaluate_pulses(const Scenario& scenario, std::span<const double> pulses) {
  const auto gen = make_generator(scenario);
  const auto seq = PulseSequence::from_flat(pulses, scenario.dt());
  const auto channel = total_propagator_exact(gen, seq);
  const auto target = unitary_superoperator(full_target_unitary(scenario));
  return {superop_fidelity(channel, target, scenario.num_qubits()),
          state_fitness(channel, scenario)};
}

SweepRecord run_single(const ExperimentConfig& cfg, const Cell& cell) {
  const auto started = std::chrono::steady_clock::now();
  const Scenario scenario = cell_scenario(cfg, cell);
  const Generator gen = make_generator(scenario);
  const double dt = scenario.dt();
  const auto bounds = Bounds::symmetric(scenario.h_max);
  const Propagator target = unitary_superoperator(full_target_unitary(scenario));

  SweepRecord rec;
  rec.scenario = cell.scenario;
  rec.method = cell.method;
  rec.noise = cfg.noise;
  rec.gamma = cell.gamma;
  rec.seed = cell.seed;
  rec.num_pulses = scenario.num_pulses;
  rec.dt = dt;

  try {
    if (cell.method == Method::ga) {
      Objective obj;
      obj.evaluate = [&](std::span<const double> p) {
        const auto seq = PulseSequence::from_flat(p, dt);
        return state_fitness(total_propagator_exact(gen, seq), scenario);
      };
      GaConfig ga = cfg.ga;
      ga.seed = cell.seed;
      ga.generations = cfg.ga_generations.value_or(default_generations(scenario.num_qubits()));
      auto res = ga_maximize(obj, bounds, scenario.num_pulses, ga);
      rec.pulses = std::move(res.best);
      rec.iterations = res.generations;
    } else {
      const bool split = cell.method == Method::split_gradient;
      if (!split) {
        const auto check = dt_validity_check(gen, scenario.h_max, dt);
        if (!check.ok) {
          std::ostringstream msg;
          msg << "scenario " << cell.scenario << ": dt = " << dt
              << " violates the first-order gradient validity bound (dt << " << check.bound
              << ")";
          warn(msg.str());
        }
      }
      Objective obj;
      obj.evaluate_with_gradient = [&](std::span<const double> p) {
        const auto seq = PulseSequence::from_flat(p, dt);
        const auto fg = split ? split_gradient(gen, seq, target)
                              : machnes_gradient(gen, seq, target);
        return ScoreGradient{fg.fidelity, fg.gradient};
      };
      LbfgsbOptions opts;
      opts.max_iters = cfg.gradient.max_iters;
      opts.pg_tol = cfg.gradient.tol;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < cfg.gradient.restarts; ++r) {
        auto rng = Rng::stream(cell.seed, 0x5eed, r);
        std::vector<double> start(2 * scenario.num_pulses);
        for (double& v : start) v = rng.uniform(bounds.lower, bounds.upper);
        auto res = lbfgs_b_maximize(obj, bounds, start, opts);
        rec.iterations += res.iters;
        if (res.score > best) {
          best = res.score;
          rec.pulses = std::move(res.best);
        }
      }
    }
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "cell (" << cell.scenario << ", " << to_string(cell.method) << ", gamma=" << cell.gamma
        << ", seed=" << cell.seed << ") failed: " << e.what();
    throw std::runtime_error(msg.str());
  }

  const auto scores = evaluate_pulses(scenario, rec.pulses);
  rec.superop_fidelity = scores.superop_fidelity;
  rec.state_fitness = scores.state_fitness;
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

std::vector<Cell> expand_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (char s : cfg.scenarios) {
    for (auto m : cfg.methods) {
      for (double g : cfg.gammas) {
        for (auto seed : cfg.seeds) cells.push_back({s, m, g, seed});
      }
    }
  }
  return cells;
}

SweepOutcome sweep(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  cfg.normalize();
  const auto cells = expand_cells(cfg);

  std::vector<std::optional<SweepRecord>> slots(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        slots[i] = run_single(cfg, cells[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const auto workers = std::min(cfg.jobs, std::max<std::size_t>(cells.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  SweepOutcome out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (slots[i]) {
      out.records.push_back(std::move(*slots[i]));
    } else {
      out.failures.push_back({cells[i], errors[i]});
    }
  }
  return out;
}

}  // namespace lindctl
