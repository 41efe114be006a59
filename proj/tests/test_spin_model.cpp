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

#include <gtest/gtest.h>

#include "lindctl/spin_model.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace lindctl;

namespace {

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

const ComplexMatrix kX = m2(0, 1, 1, 0);
const ComplexMatrix kY = m2(0, -kI, kI, 0);
const ComplexMatrix kZ = m2(1, 0, 0, -1);

}  // namespace

TEST(Pauli, Matrices) {
  EXPECT_EQ(pauli(PauliAxis::x), kX);
  EXPECT_EQ(pauli(PauliAxis::y), kY);
  EXPECT_EQ(pauli(PauliAxis::z), kZ);
  EXPECT_EQ(pauli(PauliAxis::minus), m2(0, 1, 0, 0));
}

TEST(Pauli, InvolutionAndAlgebra) {
  for (auto axis : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
    const auto p = pauli(axis);
    EXPECT_EQ(ComplexMatrix(p * p), identity(2));
    EXPECT_TRUE(is_hermitian(p, 0.0));
  }
  // σx σy = i σz
  EXPECT_LT(max_abs_diff(pauli(PauliAxis::x) * pauli(PauliAxis::y), kI * kZ), 1e-15);
}

TEST(Embed, Definition) {
  EXPECT_EQ(embed(kX, 0, 2), kron(kX, identity(2)));
  EXPECT_EQ(embed(kZ, 1, 2), kron(identity(2), kZ));
  EXPECT_EQ(embed(kX, 1, 3), kron(identity(2), kron(kX, identity(2))));
  EXPECT_EQ(embed(kZ, 0, 1), kZ);
}

TEST(Embed, DifferentSitesCommute) {
  const auto a = embed(kY, 1, 3);
  const auto b = embed(kX, 0, 3);
  EXPECT_LT(max_abs_diff(a * b, b * a), 1e-15);
  // Same site anticommutes.
  const auto c = embed(kX, 1, 3);
  EXPECT_LT(max_abs_diff(a * c, -(c * a)), 1e-15);
}

TEST(Embed, SiteOutOfRangeThrows) {
  EXPECT_THROW(embed(kX, 2, 2), std::out_of_range);
}

TEST(Embed, PreservesSpectralNorm) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto op = testutil::random_matrix(2, 2, gen);
    const double base = testutil::largest_singular_value(op);
    for (std::size_t site = 0; site < 3; ++site) {
      EXPECT_NEAR(testutil::largest_singular_value(embed(op, site, 3)), base, 1e-12);
    }
  }
}

TEST(EmbedOnSites, MatchesKronForContiguousSites) {
  std::mt19937_64 gen(2);
  const auto op = testutil::random_matrix(4, 4, gen);
  EXPECT_LT(max_abs_diff(embed_on_sites(op, {1, 2}, 3), kron(identity(2), op)), 1e-15);
  EXPECT_LT(max_abs_diff(embed_on_sites(op, {0, 1}, 3), kron(op, identity(2))), 1e-15);
}

TEST(EmbedOnSites, NonContiguousSitesFactorize) {
  // A⊗B placed on sites {0, 2} equals embed(A,0)·embed(B,2).
  std::mt19937_64 gen(3);
  const auto a = testutil::random_matrix(2, 2, gen);
  const auto b = testutil::random_matrix(2, 2, gen);
  const ComplexMatrix expected = embed(a, 0, 3) * embed(b, 2, 3);
  EXPECT_LT(max_abs_diff(embed_on_sites(kron(a, b), {0, 2}, 3), expected), 1e-14);
}

TEST(Drift, TwoQubitSpectrum) {
  const auto h = build_drift(SpinSystem::chain(2));
  // Oracle: σ·σ = 2 SWAP − I, eigenvalues +1 (triplet) and −3 (singlet).
  EXPECT_LT(max_abs_diff(h, 2.0 * swap_gate() - identity(4)), 1e-15);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const auto ev = eig.eigenvalues();
  EXPECT_NEAR(ev(0), -3.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-12);
}

TEST(Drift, SingleQubitIsZero) {
  EXPECT_EQ(build_drift(SpinSystem::chain(1)), ComplexMatrix::Zero(2, 2));
}

TEST(Drift, HermitianAndTraceless) {
  for (auto sys : {SpinSystem::chain(2), SpinSystem::chain(3), SpinSystem::all_to_all(3)}) {
    const auto h = build_drift(sys);
    EXPECT_TRUE(is_hermitian(h, 1e-14));
    EXPECT_LT(std::abs(h.trace()), 1e-14);
  }
}

TEST(Drift, ChainAndTriangleDifferByClosingBond) {
  const auto chain = build_drift(SpinSystem::chain(3));
  const auto tri = build_drift(SpinSystem::all_to_all(3));
  ComplexMatrix bond = ComplexMatrix::Zero(8, 8);
  for (const auto& p : {kX, kY, kZ}) bond += embed(p, 0, 3) * embed(p, 2, 3);
  EXPECT_LT(max_abs_diff(tri - chain, bond), 1e-14);
}

TEST(Drift, ScalesWithCouplingStrength) {
  SpinSystem s{2, {{0, 1, 0.5}}};
  EXPECT_LT(max_abs_diff(build_drift(s), 0.5 * build_drift(SpinSystem::chain(2))), 1e-15);
}

TEST(SpinSystem, ValidateRejectsBadCouplings) {
  EXPECT_THROW((SpinSystem{2, {{1, 0, 1.0}}}.validate()), std::invalid_argument);
  EXPECT_THROW((SpinSystem{2, {{0, 2, 1.0}}}.validate()), std::invalid_argument);
  EXPECT_THROW((SpinSystem{3, {{0, 1, 1.0}, {0, 1, 2.0}}}.validate()), std::invalid_argument);
  EXPECT_NO_THROW(SpinSystem::all_to_all(3).validate());
}

TEST(Controls, TwoQubitSiteZero) {
  const auto [cx, cy] = build_controls(SpinSystem::chain(2), 0);
  EXPECT_EQ(cx, kron(kX, identity(2)));
  EXPECT_EQ(cy, kron(kY, identity(2)));
  EXPECT_TRUE(is_hermitian(cx, 0.0));
  EXPECT_TRUE(is_hermitian(cy, 0.0));
}

TEST(Controls, ThreeQubitMiddleSite) {
  const auto [cx, cy] = build_controls(SpinSystem::chain(3), 1);
  EXPECT_EQ(cx, kron(identity(2), kron(kX, identity(2))));
  EXPECT_THROW(build_controls(SpinSystem::chain(3), 3), std::out_of_range);
}

TEST(Collapse, AmplitudeSingleQubit) {
  const auto ops = build_collapse_ops(SpinSystem::chain(1),
                                      NoiseSpec{NoiseKind::amplitude_damping, 0.5, {0}});
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0].op, m2(0, 1, 0, 0));
  EXPECT_EQ(ops[0].rate, 0.5);
}

TEST(Collapse, PhaseTwoQubits) {
  const auto ops = build_collapse_ops(SpinSystem::chain(2),
                                      NoiseSpec{NoiseKind::phase_damping, 1.0, {0, 1}});
  ASSERT_EQ(ops.size(), 2u);
  EXPECT_EQ(ops[0].op, kron(kZ, identity(2)));
  EXPECT_EQ(ops[1].op, kron(identity(2), kZ));
  EXPECT_EQ(ops[0].rate, 1.0);
  EXPECT_EQ(ops[1].rate, 1.0);
}

TEST(Collapse, ZeroRateKept) {
  const auto ops = build_collapse_ops(SpinSystem::chain(2),
                                      NoiseSpec{NoiseKind::phase_damping, 0.0, {0, 1}});
  ASSERT_EQ(ops.size(), 2u);
  for (const auto& op : ops) EXPECT_EQ(op.rate, 0.0);
}

TEST(Noise, ParseAndValidate) {
  EXPECT_EQ(parse_noise_kind("amplitude_damping"), NoiseKind::amplitude_damping);
  EXPECT_EQ(parse_noise_kind("phase"), NoiseKind::phase_damping);
  EXPECT_EQ(to_string(NoiseKind::phase_damping), "phase_damping");
  EXPECT_THROW(parse_noise_kind("depolarizing"), std::invalid_argument);
  EXPECT_THROW((NoiseSpec{NoiseKind::phase_damping, -1.0, {0}}.validate(1)),
               std::invalid_argument);
  EXPECT_THROW((NoiseSpec{NoiseKind::phase_damping, 0.1, {2}}.validate(2)),
               std::invalid_argument);
}

TEST(Swap, ExchangesBasisStates) {
  const auto s = swap_gate();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ComplexVector in = ComplexVector::Zero(4), out = ComplexVector::Zero(4);
      in(2 * i + j) = 1.0;
      out(2 * j + i) = 1.0;
      EXPECT_EQ(ComplexVector(s * in), out);
    }
}

TEST(Catalog, SixScenariosWithExpectedShape) {
  const auto cat = scenario_catalog();
  ASSERT_EQ(cat.size(), 6u);
  const char ids[] = {'a', 'b', 'c', 'd', 'e', 'f'};
  const std::size_t qubits[] = {2, 2, 2, 3, 3, 3};
  const std::size_t controls[] = {1, 0, 0, 1, 0, 0};
  const std::size_t ancillas[] = {1, 0, 1, 0, 1, 0};
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& s = cat[i];
    EXPECT_EQ(s.id, ids[i]);
    EXPECT_EQ(s.num_qubits(), qubits[i]);
    EXPECT_EQ(s.control_site, controls[i]);
    EXPECT_EQ(s.ancilla_sites.size(), ancillas[i]);
    EXPECT_EQ(s.num_pulses, qubits[i] == 2 ? 32u : 128u);
    EXPECT_DOUBLE_EQ(s.total_time, 2.1);
    EXPECT_EQ(s.h_max, 100.0);
    EXPECT_TRUE(is_unitary(s.target_unitary, 1e-14));
    EXPECT_NO_THROW(s.validate());
  }
}

TEST(Catalog, TargetsMatchGateDefinitions) {
  EXPECT_EQ(scenario_by_id('b').target_unitary, kron(kX, identity(2)));
  EXPECT_EQ(scenario_by_id('a').target_unitary, kX);
  EXPECT_EQ(scenario_by_id('d').target_unitary, kron(kX, identity(4)));
  EXPECT_EQ(scenario_by_id('e').target_unitary, swap_gate());
  EXPECT_EQ(scenario_by_id('f').target_unitary, kron(identity(2), swap_gate()));
  EXPECT_EQ(scenario_by_id('e').target_sites, (std::vector<std::size_t>{1, 2}));
  EXPECT_THROW(scenario_by_id('z'), std::invalid_argument);
}

TEST(Catalog, TimeStepFromTable) {
  const auto a = scenario_by_id('a');
  EXPECT_NEAR(a.dt(), 0.065625, 1e-15);
  EXPECT_NEAR(static_cast<double>(a.num_pulses) * a.dt(), 2.1, 1e-14);
}

TEST(Catalog, FullTargetOnAncillaScenario) {
  // a: NOT on qubit 1, ancilla qubit 0 left as identity.
  EXPECT_EQ(full_target_unitary(scenario_by_id('a')), kron(identity(2), kX));
  EXPECT_EQ(full_target_unitary(scenario_by_id('e')), kron(identity(2), swap_gate()));
}

TEST(Catalog, TriangleTopology) {
  for (const auto& s : scenario_catalog(Topology::triangle)) {
    if (s.num_qubits() == 3) {
      EXPECT_EQ(s.system.couplings.size(), 3u);
    } else {
      EXPECT_EQ(s.system.couplings.size(), 1u);
    }
  }
}

TEST(ScenarioValidate, RejectsBrokenPartition) {
  auto s = scenario_by_id('a');
  s.target_sites = {0, 1};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = scenario_by_id('a');
  s.h_max = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = scenario_by_id('a');
  s.target_unitary = identity(4);
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(ScenarioJson, RoundTripAllCatalog) {
  for (auto topo : {Topology::chain, Topology::triangle}) {
    for (const auto& s : scenario_catalog(topo)) {
      const auto back = scenario_from_json(scenario_to_json(s));
      EXPECT_EQ(back.id, s.id);
      EXPECT_EQ(back.num_qubits(), s.num_qubits());
      ASSERT_EQ(back.system.couplings.size(), s.system.couplings.size());
      for (std::size_t k = 0; k < s.system.couplings.size(); ++k) {
        EXPECT_EQ(back.system.couplings[k].i, s.system.couplings[k].i);
        EXPECT_EQ(back.system.couplings[k].j, s.system.couplings[k].j);
        EXPECT_EQ(back.system.couplings[k].strength, s.system.couplings[k].strength);
      }
      EXPECT_EQ(back.control_site, s.control_site);
      EXPECT_EQ(back.target_unitary, s.target_unitary);
      EXPECT_EQ(back.ancilla_sites, s.ancilla_sites);
      EXPECT_EQ(back.target_sites, s.target_sites);
      EXPECT_EQ(back.num_pulses, s.num_pulses);
      EXPECT_EQ(back.total_time, s.total_time);
      EXPECT_EQ(back.h_max, s.h_max);
      EXPECT_EQ(back.noise.kind, s.noise.kind);
      EXPECT_EQ(back.noise.gamma, s.noise.gamma);
      EXPECT_EQ(back.noise.sites, s.noise.sites);
    }
  }
}

TEST(ScenarioJson, GateNamesAndErrors) {
  const auto j = nlohmann::json::parse(R"({
    "id": "x", "num_qubits": 2, "control_site": 0, "target": "swap",
    "noise": {"kind": "amplitude_damping", "gamma": 0.25}
  })");
  const auto s = scenario_from_json(j);
  EXPECT_EQ(s.target_unitary, swap_gate());
  EXPECT_EQ(s.noise.kind, NoiseKind::amplitude_damping);
  EXPECT_EQ(s.noise.gamma, 0.25);
  EXPECT_EQ(s.noise.sites, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.num_pulses, 32u);

  auto bad = j;
  bad["target"] = "toffoli";
  EXPECT_THROW(scenario_from_json(bad), std::invalid_argument);
  bad = j;
  bad.erase("control_site");
  EXPECT_THROW(scenario_from_json(bad), std::invalid_argument);
  bad = j;
  bad["target"] = "not";  // 2x2 target needs one ancilla
  EXPECT_THROW(scenario_from_json(bad), std::invalid_argument);
}
