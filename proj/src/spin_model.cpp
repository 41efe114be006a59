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

#include "lindctl/spin_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace lindctl {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool sorted_unique(const std::vector<std::size_t>& v) {
  return std::adjacent_find(v.begin(), v.end(),
                            [](auto a, auto b) { return a >= b; }) == v.end();
}

std::vector<std::size_t> all_sites(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t s = 0; s < n; ++s) out[s] = s;
  return out;
}

Scenario make_scenario(char id, std::size_t n, Topology topology,
                       std::size_t control, ComplexMatrix target,
                       std::vector<std::size_t> ancilla) {
  Scenario s;
  s.id = id;
  s.system = SpinSystem::with_topology(n, topology);
  s.control_site = control;
  s.target_unitary = std::move(target);
  s.ancilla_sites = std::move(ancilla);
  for (std::size_t q = 0; q < n; ++q) {
    if (std::find(s.ancilla_sites.begin(), s.ancilla_sites.end(), q) ==
        s.ancilla_sites.end()) {
      s.target_sites.push_back(q);
    }
  }
  s.num_pulses = n == 2 ? 32 : 128;
  s.total_time = 2.1;
  s.h_max = 100.0;
  s.noise = NoiseSpec{NoiseKind::phase_damping, 0.0, all_sites(n)};
  return s;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix named_gate(const std::string& name) {
  const auto n = lower(name);
  if (n == "not" || n == "x") return pauli(PauliAxis::x);
  if (n == "swap") return swap_gate();
  if (n == "not_i" || n == "not1") return kron(pauli(PauliAxis::x), identity(2));
  if (n == "not_i_i" || n == "not11") {
    return kron(kron(pauli(PauliAxis::x), identity(2)), identity(2));
  }
  if (n == "i_swap" || n == "1swap") return kron(identity(2), swap_gate());
  throw std::invalid_argument("unknown target gate '" + name + "'");
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (j.is_string()) return named_gate(j.get<std::string>());
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("target must be a gate name or a matrix of [re, im] pairs");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("target matrix rows have unequal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else {
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
  }
  return m;
}

}  // namespace

ComplexMatrix pauli(PauliAxis axis) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case PauliAxis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliAxis::y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case PauliAxis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliAxis::minus:
      m(0, 1) = 1.0;
      break;
  }
  return m;
}

SpinSystem SpinSystem::chain(std::size_t n) {
  SpinSystem s;
  s.num_qubits = n;
  for (std::size_t i = 0; i + 1 < n; ++i) s.couplings.push_back({i, i + 1, 1.0});
  return s;
}

SpinSystem SpinSystem::all_to_all(std::size_t n) {
  SpinSystem s;
  s.num_qubits = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s.couplings.push_back({i, j, 1.0});
  }
  return s;
}

SpinSystem SpinSystem::with_topology(std::size_t n, Topology topology) {
  return topology == Topology::chain ? chain(n) : all_to_all(n);
}

void SpinSystem::validate() const {
  if (num_qubits == 0) throw std::invalid_argument("spin system needs at least one qubit");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& c : couplings) {
    if (!(c.i < c.j && c.j < num_qubits)) {
      throw std::invalid_argument("coupling (" + std::to_string(c.i) + ", " +
                                  std::to_string(c.j) + ") violates 0 <= i < j < N");
    }
    if (!seen.emplace(c.i, c.j).second) {
      throw std::invalid_argument("duplicate coupling (" + std::to_string(c.i) +
                                  ", " + std::to_string(c.j) + ")");
    }
  }
}

std::string_view to_string(NoiseKind kind) {
  return kind == NoiseKind::amplitude_damping ? "amplitude_damping" : "phase_damping";
}

NoiseKind parse_noise_kind(std::string_view name) {
  const auto n = lower(name);
  if (n == "amplitude_damping" || n == "amplitude") return NoiseKind::amplitude_damping;
  if (n == "phase_damping" || n == "phase") return NoiseKind::phase_damping;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

void NoiseSpec::validate(std::size_t num_qubits) const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("noise gamma must be >= 0");
  for (auto s : sites) {
    if (s >= num_qubits) {
      throw std::invalid_argument("noise site " + std::to_string(s) + " out of range");
    }
  }
}

void Scenario::validate() const {
  system.validate();
  const auto n = system.num_qubits;
  if (control_site >= n) throw std::invalid_argument("control site out of range");
  if (!sorted_unique(ancilla_sites) || !sorted_unique(target_sites)) {
    throw std::invalid_argument("ancilla/target sites must be sorted and unique");
  }
  std::vector<std::size_t> merged;
  std::merge(ancilla_sites.begin(), ancilla_sites.end(), target_sites.begin(),
             target_sites.end(), std::back_inserter(merged));
  if (merged != all_sites(n)) {
    throw std::invalid_argument("ancilla and target sites must partition all sites");
  }
  const auto td = Eigen::Index{1} << target_sites.size();
  if (target_unitary.rows() != td || target_unitary.cols() != td) {
    throw std::invalid_argument("target unitary must be " + std::to_string(td) +
                                "x" + std::to_string(td));
  }
  if (!(h_max > 0.0)) throw std::invalid_argument("h_max must be > 0");
  if (num_pulses < 1) throw std::invalid_argument("num_pulses must be >= 1");
  if (!(total_time > 0.0)) throw std::invalid_argument("total_time must be > 0");
  noise.validate(n);
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits) {
  if (site >= n_qubits) {
    throw std::out_of_range("embed: site " + std::to_string(site) +
                            " out of range for " + std::to_string(n_qubits) + " qubits");
  }
  ComplexMatrix out = identity(1);
  for (std::size_t s = 0; s < n_qubits; ++s) {
    out = kron(out, s == site ? op : identity(2));
  }
  return out;
}

ComplexMatrix embed_on_sites(const ComplexMatrix& op,
                             const std::vector<std::size_t>& sites,
                             std::size_t n_qubits) {
  const auto k = sites.size();
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw std::invalid_argument("embed_on_sites: operator size does not match site count");
  }
  for (auto s : sites) {
    if (s >= n_qubits) throw std::out_of_range("embed_on_sites: site out of range");
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  std::vector<bool> on(n_qubits, false);
  for (auto s : sites) on[s] = true;

  // Split a full index into (sub-index on `sites`, index over the rest).
  auto split = [&](Eigen::Index idx) {
    Eigen::Index sub = 0;
    Eigen::Index rest = 0;
    for (std::size_t s = 0; s < n_qubits; ++s) {
      const auto bit = (idx >> (n_qubits - 1 - s)) & 1;
      if (on[s]) {
        sub = (sub << 1) | bit;
      } else {
        rest = (rest << 1) | bit;
      }
    }
    return std::pair{sub, rest};
  };

  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto [rs, rr] = split(r);
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto [cs, cr] = split(c);
      if (rr == cr) out(r, c) = op(rs, cs);
    }
  }
  return out;
}

ComplexMatrix build_drift(const SpinSystem& system) {
  system.validate();
  const auto n = system.num_qubits;
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (const auto& c : system.couplings) {
    for (auto axis : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
      h += c.strength * embed(pauli(axis), c.i, n) * embed(pauli(axis), c.j, n);
    }
  }
  return h;
}

std::pair<ComplexMatrix, ComplexMatrix> build_controls(const SpinSystem& system,
                                                       std::size_t control_site) {
  return {embed(pauli(PauliAxis::x), control_site, system.num_qubits),
          embed(pauli(PauliAxis::y), control_site, system.num_qubits)};
}

std::vector<CollapseOp> build_collapse_ops(const SpinSystem& system,
                                           const NoiseSpec& noise) {
  noise.validate(system.num_qubits);
  const auto axis =
      noise.kind == NoiseKind::amplitude_damping ? PauliAxis::minus : PauliAxis::z;
  std::vector<CollapseOp> ops;
  ops.reserve(noise.sites.size());
  for (auto s : noise.sites) {
    ops.push_back({embed(pauli(axis), s, system.num_qubits), noise.gamma});
  }
  return ops;
}

ComplexMatrix swap_gate() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) m(2 * i + j, 2 * j + i) = 1.0;
  }
  return m;
}

std::vector<Scenario> scenario_catalog(Topology topology) {
  const auto x = pauli(PauliAxis::x);
  const auto i2 = identity(2);
  std::vector<Scenario> out;
  out.push_back(make_scenario('a', 2, topology, 1, x, {0}));
  out.push_back(make_scenario('b', 2, topology, 0, kron(x, i2), {}));
  out.push_back(make_scenario('c', 2, topology, 0, x, {0}));
  out.push_back(make_scenario('d', 3, topology, 1, kron(kron(x, i2), i2), {}));
  out.push_back(make_scenario('e', 3, topology, 0, swap_gate(), {0}));
  out.push_back(make_scenario('f', 3, topology, 0, kron(i2, swap_gate()), {}));
  return out;
}

Scenario scenario_by_id(char id, Topology topology) {
  for (auto& s : scenario_catalog(topology)) {
    if (s.id == id) return s;
  }
  throw std::invalid_argument(std::string("unknown scenario id '") + id + "'");
}

ComplexMatrix full_target_unitary(const Scenario& scenario) {
  return embed_on_sites(scenario.target_unitary, scenario.target_sites,
                        scenario.num_qubits());
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["id"] = std::string(1, s.id);
  j["num_qubits"] = s.system.num_qubits;
  auto couplings = nlohmann::json::array();
  for (const auto& c : s.system.couplings) couplings.push_back({c.i, c.j, c.strength});
  j["couplings"] = couplings;
  j["control_site"] = s.control_site;
  j["target"] = matrix_to_json(s.target_unitary);
  j["ancilla_sites"] = s.ancilla_sites;
  j["num_pulses"] = s.num_pulses;
  j["total_time"] = s.total_time;
  j["h_max"] = s.h_max;
  j["noise"] = {{"kind", std::string(to_string(s.noise.kind))},
                {"gamma", s.noise.gamma},
                {"sites", s.noise.sites}};
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    Scenario s;
    const auto id = j.at("id").get<std::string>();
    if (id.size() != 1) throw std::invalid_argument("scenario id must be one character");
    s.id = id[0];
    s.system.num_qubits = j.at("num_qubits").get<std::size_t>();
    if (j.contains("couplings")) {
      for (const auto& c : j.at("couplings")) {
        s.system.couplings.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>(),
                                      c.size() > 2 ? c.at(2).get<double>() : 1.0});
      }
    } else {
      s.system = SpinSystem::chain(s.system.num_qubits);
    }
    s.control_site = j.at("control_site").get<std::size_t>();
    s.target_unitary = matrix_from_json(j.at("target"));
    s.ancilla_sites = j.value("ancilla_sites", std::vector<std::size_t>{});
    std::sort(s.ancilla_sites.begin(), s.ancilla_sites.end());
    for (std::size_t q = 0; q < s.system.num_qubits; ++q) {
      if (!std::binary_search(s.ancilla_sites.begin(), s.ancilla_sites.end(), q)) {
        s.target_sites.push_back(q);
      }
    }
    s.num_pulses = j.value("num_pulses", s.system.num_qubits == 2 ? 32u : 128u);
    s.total_time = j.value("total_time", 2.1);
    s.h_max = j.value("h_max", 100.0);
    s.noise.sites = all_sites(s.system.num_qubits);
    if (j.contains("noise")) {
      const auto& nz = j.at("noise");
      if (nz.contains("kind")) s.noise.kind = parse_noise_kind(nz.at("kind").get<std::string>());
      s.noise.gamma = nz.value("gamma", 0.0);
      if (nz.contains("sites")) s.noise.sites = nz.at("sites").get<std::vector<std::size_t>>();
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
  }
}

}  // namespace lindctl
