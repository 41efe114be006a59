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

// spin_model.hpp - isotropic Heisenberg spin networks with a single
// Zeeman-like control site, noise channels and the built-in scenario catalog.
//
// Units: J = 1, times in 1/J, amplitudes in J. Spin operators are the full
// Pauli matrices. Tensor slot 0 is the leftmost Kronecker factor.

#pragma once

#include "lindctl/linalg.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lindctl {

enum class PauliAxis { x, y, z, minus };

/// 2x2 Pauli matrix; `minus` is sigma_- = |0><1|.
ComplexMatrix pauli(PauliAxis axis);

struct Coupling {
  std::size_t i = 0;
  std::size_t j = 1;
  double strength = 1.0;
};

enum class Topology { chain, triangle };

struct SpinSystem {
  std::size_t num_qubits = 1;
  std::vector<Coupling> couplings;

  /// Open chain (i, i+1, 1).
  static SpinSystem chain(std::size_t n);
  /// Every pair coupled with unit strength (the triangle for n = 3).
  static SpinSystem all_to_all(std::size_t n);
  static SpinSystem with_topology(std::size_t n, Topology topology);

  /// Throws std::invalid_argument unless 0 <= i < j < N with no duplicates.
  void validate() const;
};

enum class NoiseKind { amplitude_damping, phase_damping };

std::string_view to_string(NoiseKind kind);
/// Accepts the canonical names plus the short forms "amplitude"/"phase".
NoiseKind parse_noise_kind(std::string_view name);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::phase_damping;
  double gamma = 0.0;
  std::vector<std::size_t> sites;

  void validate(std::size_t num_qubits) const;
};

/// A collapse operator L together with its rate gamma.
struct CollapseOp {
  ComplexMatrix op;
  double rate = 0.0;
};

struct Scenario {
  char id = 'a';
  SpinSystem system;
  std::size_t control_site = 0;
  /// Acts on target_sites only, in increasing site order.
  ComplexMatrix target_unitary;
  std::vector<std::size_t> ancilla_sites;
  std::vector<std::size_t> target_sites;
  std::size_t num_pulses = 32;
  double total_time = 2.1;
  double h_max = 100.0;
  NoiseSpec noise;

  std::size_t num_qubits() const { return system.num_qubits; }
  std::size_t dim() const { return std::size_t{1} << system.num_qubits; }
  double dt() const { return total_time / static_cast<double>(num_pulses); }

  void validate() const;
};

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at tensor slot `site`.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t site,
                    std::size_t n_qubits);

/// Places `op` (acting on `sites` in increasing order) into the n-qubit
/// space with identity on every other site.
ComplexMatrix embed_on_sites(const ComplexMatrix& op,
                             const std::vector<std::size_t>& sites,
                             std::size_t n_qubits);

/// Sum over couplings of J (XX + YY + ZZ).
ComplexMatrix build_drift(const SpinSystem& system);

/// (S_x, S_y) at the control site.
std::pair<ComplexMatrix, ComplexMatrix> build_controls(const SpinSystem& system,
                                                       std::size_t control_site);

std::vector<CollapseOp> build_collapse_ops(const SpinSystem& system,
                                           const NoiseSpec& noise);

/// SWAP = sum_ij |i><j| ⊗ |j><i| on two qubits.
ComplexMatrix swap_gate();

/// The six reference configurations a..f.
std::vector<Scenario> scenario_catalog(Topology topology = Topology::chain);
Scenario scenario_by_id(char id, Topology topology = Topology::chain);

/// Target unitary lifted to the full system (identity on the ancillas).
ComplexMatrix full_target_unitary(const Scenario& scenario);

nlohmann::json scenario_to_json(const Scenario& scenario);
/// Throws std::invalid_argument on missing or malformed fields.
Scenario scenario_from_json(const nlohmann::json& j);

}  // namespace lindctl
