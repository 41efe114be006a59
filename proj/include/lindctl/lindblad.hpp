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

// lindblad.hpp - superoperator form of the Lindblad master equation
//
//   d rho/dt = -i[H, rho] + sum_j g_j (L_j rho L_j^† - 1/2 {L_j^† L_j, rho})
//
// in the row-major vectorization of linalg.hpp, where every generator part
// is stored with its sign folded in: d res(rho)/dt = G res(rho) with
//
//   G = K(H0) + hx K(Sx) + hy K(Sy) + D,   K(H) = -i (H ⊗ I - I ⊗ conj(H)).
//
// Propagators over piecewise-constant pulses are built either exactly
// (one expm of G per interval) or by the dissipator/jump/coherent splitting
//   exp(dt G) ≈ A(dt) B(dt) C(dt),
// and both routes come with fidelity gradients.

#pragma once

#include "lindctl/linalg.hpp"
#include "lindctl/spin_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lindctl {

/// A superoperator acting on res(rho).
using Propagator = ComplexMatrix;

/// Piecewise-constant controls: interval k applies (hx[k], hy[k]) for dt.
struct PulseSequence {
  std::vector<double> hx;
  std::vector<double> hy;
  double dt = 0.0;

  std::size_t size() const { return hx.size(); }

  /// Throws std::invalid_argument unless sizes agree, M >= 1, dt > 0 and
  /// every amplitude lies in [-h_max, h_max].
  void validate(double h_max) const;

  /// hx pulses followed by hy pulses.
  std::vector<double> flatten() const;
  static PulseSequence from_flat(std::span<const double> params, double dt);
};

/// The assembled Lindbladian, split into its constituent parts.
struct Generator {
  std::size_t num_qubits = 0;
  Eigen::Index dim = 0;  ///< Hilbert dimension 2^N

  ComplexMatrix drift_hamiltonian;
  ComplexMatrix control_x;  ///< S_x at the control site
  ComplexMatrix control_y;

  ComplexMatrix dissipator;  ///< full dissipative part D
  ComplexMatrix drift_comm;  ///< K(H0)
  ComplexMatrix control_comm_x;
  ComplexMatrix control_comm_y;

  /// -1/2 sum g (L^†L ⊗ I + I ⊗ conj(L^†L)), exponentiated into A(dt).
  ComplexMatrix anticommutator_part;
  /// sum g L ⊗ conj(L), exponentiated into B(dt).
  ComplexMatrix jump_part;

  Eigen::Index super_dim() const { return dim * dim; }

  /// G(hx, hy).
  ComplexMatrix full(double hx, double hy) const;
  ComplexMatrix hamiltonian(double hx, double hy) const;
};

Generator make_generator(const ComplexMatrix& drift,
                         const std::pair<ComplexMatrix, ComplexMatrix>& controls,
                         std::span<const CollapseOp> collapse_ops);

/// Generator for a scenario using its own noise specification.
Generator make_generator(const Scenario& scenario);

/// sum_j g_j (L_j ⊗ conj(L_j) - 1/2 [(L_j^†L_j) ⊗ I + I ⊗ conj(L_j^†L_j)]).
/// Throws std::invalid_argument when operators differ in dimension. An empty
/// list gives an empty matrix.
ComplexMatrix assemble_dissipator(std::span<const CollapseOp> collapse_ops);

/// K(H) = -i (H ⊗ I - I ⊗ conj(H)). Warns when H is not Hermitian to 1e-10.
ComplexMatrix assemble_hamiltonian_super(const ComplexMatrix& h);

/// kron(U, conj(U)): the superoperator of rho -> U rho U^†.
Propagator unitary_superoperator(const ComplexMatrix& u);

/// unres(prop * res(rho)).
ComplexMatrix apply(const Propagator& prop, const ComplexMatrix& rho);

Propagator step_propagator_exact(const Generator& gen, double hx, double hy, double dt);

/// X_{M-1} ... X_1 X_0 (later intervals multiply on the left).
Propagator total_propagator_exact(const Generator& gen, const PulseSequence& pulses);

struct SplitFactors {
  Propagator a;  ///< anticommutator (decay) part
  Propagator b;  ///< jump part
  Propagator c;  ///< coherent part, the only control-dependent factor
};

SplitFactors split_factors(const Generator& gen, double hx, double hy, double dt);

/// prod over intervals of A(dt) B(dt) C_k(dt), interval 0 applied first.
Propagator split_propagator(const Generator& gen, const PulseSequence& pulses);

struct FidelityGradient {
  double fidelity = 0.0;
  /// d f / d hx[k] for every k, then d f / d hy[k].
  std::vector<double> gradient;
};

/// Fidelity of the split propagator and its exact gradient. The derivative
/// of each coherent factor C_k is the Fréchet derivative of exp(-i dt H_k)
/// from the eigendecomposition of H_k, lifted to the superoperator.
FidelityGradient split_gradient(const Generator& gen, const PulseSequence& pulses,
                                const Propagator& target);

/// Fidelity of the exact propagator with the first-order gradient
///   dX_k/dh ≈ dt K(dH/dh) X_k.
/// Only meaningful while dt_validity_check() passes; callers are expected to
/// check once per run. An empty pulse sequence yields an empty gradient.
FidelityGradient machnes_gradient(const Generator& gen, const PulseSequence& pulses,
                                  const Propagator& target);

struct ValidityCheck {
  bool ok = true;
  /// 1 / ||G||_2 at the worst-case amplitude corner; +inf for G = 0.
  double bound = 0.0;
};

/// ok iff dt <= bound / 10.
ValidityCheck dt_validity_check(const Generator& gen, double h_max, double dt);

/// Re Tr(target^† a) / 4^N.
double superop_fidelity(const Propagator& a, const Propagator& target,
                        std::size_t n_qubits);

/// Average overlap between the reduced output of every matrix unit E_i of
/// the full system and its ideal image U_T Tr_A(E_i) U_T^†, normalized so a
/// channel U_T ⊗ W (any unitary W on the ancilla) scores exactly 1.
double state_fitness(const Propagator& channel, const Scenario& scenario);

}  // namespace lindctl
