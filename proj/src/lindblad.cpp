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

#include "lindctl/lindblad.hpp"

#include "lindctl/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lindctl {

namespace {

// Re Tr(a^† b) without forming the product.
double re_trace_adjoint_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

// Re Tr(q * m) without forming the product.
double re_trace_product(const ComplexMatrix& q, const ComplexMatrix& m) {
  return (q.cwiseProduct(m.transpose())).sum().real();
}

// (e^z - 1) / z, accurate near z = 0.
Complex phi1(Complex z) {
  if (std::abs(z) < 1e-2) {
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  }
  return (std::exp(z) - 1.0) / z;
}

// exp(-i dt H) together with its Fréchet derivatives along Sx and Sy.
struct CoherentStep {
  ComplexMatrix u;
  ComplexMatrix du_x;
  ComplexMatrix du_y;
};

CoherentStep coherent_step(const Generator& gen, double hx, double hy, double dt,
                           bool with_derivatives) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gen.hamiltonian(hx, hy));
  const auto& v = eig.eigenvectors();
  const auto& lambda = eig.eigenvalues();
  const auto d = gen.dim;

  Eigen::VectorXcd phase(d);
  for (Eigen::Index a = 0; a < d; ++a) phase(a) = std::exp(-kI * dt * lambda(a));

  CoherentStep out;
  out.u = v * phase.asDiagonal() * v.adjoint();
  if (!with_derivatives) return out;

  // Divided differences of f(x) = exp(-i dt x) on the spectrum.
  ComplexMatrix gamma(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const Complex z = -kI * dt * (lambda(a) - lambda(b));
      gamma(a, b) = phase(b) * (-kI * dt) * phi1(z);
    }
  }
  out.du_x = v * (gamma.cwiseProduct(v.adjoint() * gen.control_x * v)) * v.adjoint();
  out.du_y = v * (gamma.cwiseProduct(v.adjoint() * gen.control_y * v)) * v.adjoint();
  return out;
}

void check_target(const Generator& gen, const Propagator& target) {
  if (target.rows() != gen.super_dim() || target.cols() != gen.super_dim()) {
    throw std::invalid_argument("target superoperator is " + std::to_string(target.rows()) +
                                "x" + std::to_string(target.cols()) + ", expected " +
                                std::to_string(gen.super_dim()));
  }
}

void check_pulses(const PulseSequence& pulses) {
  if (pulses.hx.size() != pulses.hy.size()) {
    throw std::invalid_argument("pulse sequence hx/hy lengths differ");
  }
  if (!(pulses.dt > 0.0)) throw std::invalid_argument("pulse interval dt must be > 0");
}

}  // namespace

void PulseSequence::validate(double h_max) const {
  check_pulses(*this);
  if (hx.empty()) throw std::invalid_argument("pulse sequence is empty");
  for (std::size_t k = 0; k < hx.size(); ++k) {
    if (!(std::abs(hx[k]) <= h_max) || !(std::abs(hy[k]) <= h_max)) {
      throw std::invalid_argument("pulse " + std::to_string(k) + " exceeds h_max");
    }
  }
}

std::vector<double> PulseSequence::flatten() const {
  std::vector<double> out(hx);
  out.insert(out.end(), hy.begin(), hy.end());
  return out;
}

PulseSequence PulseSequence::from_flat(std::span<const double> params, double dt) {
  if (params.size() % 2 != 0) {
    throw std::invalid_argument("flat pulse vector must have even length");
  }
  const auto m = params.size() / 2;
  PulseSequence p;
  p.hx.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(m));
  p.hy.assign(params.begin() + static_cast<std::ptrdiff_t>(m), params.end());
  p.dt = dt;
  return p;
}

ComplexMatrix Generator::full(double hx, double hy) const {
  return drift_comm + hx * control_comm_x + hy * control_comm_y + dissipator;
}

ComplexMatrix Generator::hamiltonian(double hx, double hy) const {
  return drift_hamiltonian + hx * control_x + hy * control_y;
}

ComplexMatrix assemble_dissipator(std::span<const CollapseOp> collapse_ops) {
  if (collapse_ops.empty()) return ComplexMatrix{};
  const auto d = collapse_ops.front().op.rows();
  const auto id = identity(d);
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& c : collapse_ops) {
    if (c.op.rows() != d || c.op.cols() != d) {
      throw std::invalid_argument("collapse operators must share one square dimension");
    }
    const ComplexMatrix ldl = c.op.adjoint() * c.op;
    out += c.rate * (kron(c.op, c.op.conjugate()) -
                     0.5 * (kron(ldl, id) + kron(id, ldl.conjugate())));
  }
  return out;
}

ComplexMatrix assemble_hamiltonian_super(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("assemble_hamiltonian_super: H must be square");
  }
  if (!is_hermitian(h, 1e-10)) {
    warn("assemble_hamiltonian_super: H is not Hermitian to 1e-10");
  }
  const auto id = identity(h.rows());
  return -kI * (kron(h, id) - kron(id, h.conjugate()));
}

Generator make_generator(const ComplexMatrix& drift,
                         const std::pair<ComplexMatrix, ComplexMatrix>& controls,
                         std::span<const CollapseOp> collapse_ops) {
  Generator g;
  g.dim = drift.rows();
  g.num_qubits = static_cast<std::size_t>(std::llround(std::log2(static_cast<double>(g.dim))));
  if ((Eigen::Index{1} << g.num_qubits) != g.dim) {
    throw std::invalid_argument("drift dimension is not a power of two");
  }
  g.drift_hamiltonian = drift;
  g.control_x = controls.first;
  g.control_y = controls.second;
  g.drift_comm = assemble_hamiltonian_super(drift);
  g.control_comm_x = assemble_hamiltonian_super(controls.first);
  g.control_comm_y = assemble_hamiltonian_super(controls.second);

  const auto n = g.super_dim();
  const auto id = identity(g.dim);
  g.anticommutator_part = ComplexMatrix::Zero(n, n);
  g.jump_part = ComplexMatrix::Zero(n, n);
  for (const auto& c : collapse_ops) {
    if (c.op.rows() != g.dim || c.op.cols() != g.dim) {
      throw std::invalid_argument("collapse operator dimension does not match the drift");
    }
    const ComplexMatrix ldl = c.op.adjoint() * c.op;
    g.jump_part += c.rate * kron(c.op, c.op.conjugate());
    g.anticommutator_part -= 0.5 * c.rate * (kron(ldl, id) + kron(id, ldl.conjugate()));
  }
  g.dissipator = collapse_ops.empty() ? ComplexMatrix::Zero(n, n)
                                      : assemble_dissipator(collapse_ops);
  return g;
}

Generator make_generator(const Scenario& scenario) {
  scenario.validate();
  const auto ops = build_collapse_ops(scenario.system, scenario.noise);
  return make_generator(build_drift(scenario.system),
                        build_controls(scenario.system, scenario.control_site), ops);
}

Propagator unitary_superoperator(const ComplexMatrix& u) {
  return kron(u, u.conjugate());
}

ComplexMatrix apply(const Propagator& prop, const ComplexMatrix& rho) {
  return unres(prop * res(rho));
}

Propagator step_propagator_exact(const Generator& gen, double hx, double hy, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step dt must be > 0");
  return expm(dt * gen.full(hx, hy));
}

Propagator total_propagator_exact(const Generator& gen, const PulseSequence& pulses) {
  check_pulses(pulses);
  Propagator x = identity(gen.super_dim());
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    x = step_propagator_exact(gen, pulses.hx[k], pulses.hy[k], pulses.dt) * x;
  }
  return x;
}

SplitFactors split_factors(const Generator& gen, double hx, double hy, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("split dt must be > 0");
  const auto step = coherent_step(gen, hx, hy, dt, false);
  return {expm(dt * gen.anticommutator_part), expm(dt * gen.jump_part),
          unitary_superoperator(step.u)};
}

Propagator split_propagator(const Generator& gen, const PulseSequence& pulses) {
  check_pulses(pulses);
  Propagator total = identity(gen.super_dim());
  if (pulses.size() == 0) return total;
  const ComplexMatrix ab =
      expm(pulses.dt * gen.anticommutator_part) * expm(pulses.dt * gen.jump_part);
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    const auto step = coherent_step(gen, pulses.hx[k], pulses.hy[k], pulses.dt, false);
    total = ab * unitary_superoperator(step.u) * total;
  }
  return total;
}

FidelityGradient split_gradient(const Generator& gen, const PulseSequence& pulses,
                                const Propagator& target) {
  check_pulses(pulses);
  check_target(gen, target);
  const auto m = pulses.size();
  const auto n = gen.super_dim();
  const double norm = static_cast<double>(n);

  FidelityGradient out;
  out.gradient.assign(2 * m, 0.0);
  if (m == 0) {
    out.fidelity = re_trace_adjoint_product(target, identity(n)) / norm;
    return out;
  }

  const ComplexMatrix ab =
      expm(pulses.dt * gen.anticommutator_part) * expm(pulses.dt * gen.jump_part);

  std::vector<ComplexMatrix> c(m), dc_x(m), dc_y(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto step = coherent_step(gen, pulses.hx[k], pulses.hy[k], pulses.dt, true);
    const ComplexMatrix u_bar = step.u.conjugate();
    c[k] = kron(step.u, u_bar);
    dc_x[k] = kron(step.du_x, u_bar) + kron(step.u, step.du_x.conjugate());
    dc_y[k] = kron(step.du_y, u_bar) + kron(step.u, step.du_y.conjugate());
  }

  // forward[k] = (AB C_{k-1}) ... (AB C_0)
  std::vector<ComplexMatrix> forward(m + 1);
  forward[0] = identity(n);
  for (std::size_t k = 0; k < m; ++k) forward[k + 1] = ab * (c[k] * forward[k]);
  out.fidelity = re_trace_adjoint_product(target, forward[m]) / norm;

  // back = target^† (AB C_{M-1}) ... (AB C_{k+1})
  ComplexMatrix back = target.adjoint();
  for (std::size_t k = m; k-- > 0;) {
    const ComplexMatrix q = forward[k] * (back * ab);
    out.gradient[k] = re_trace_product(q, dc_x[k]) / norm;
    out.gradient[m + k] = re_trace_product(q, dc_y[k]) / norm;
    back = back * (ab * c[k]);
  }
  return out;
}

FidelityGradient machnes_gradient(const Generator& gen, const PulseSequence& pulses,
                                  const Propagator& target) {
  check_pulses(pulses);
  check_target(gen, target);
  const auto m = pulses.size();
  const auto n = gen.super_dim();
  const double norm = static_cast<double>(n);

  FidelityGradient out;
  out.gradient.assign(2 * m, 0.0);

  // forward[k] = X_{k-1} ... X_0
  std::vector<ComplexMatrix> steps(m);
  std::vector<ComplexMatrix> forward(m + 1);
  forward[0] = identity(n);
  for (std::size_t k = 0; k < m; ++k) {
    steps[k] = step_propagator_exact(gen, pulses.hx[k], pulses.hy[k], pulses.dt);
    forward[k + 1] = steps[k] * forward[k];
  }
  out.fidelity = re_trace_adjoint_product(target, forward[m]) / norm;

  // grad = dt Re Tr(Lambda_k^† K_j X_k X(t_{k-1})) / 4^N
  ComplexMatrix back = target.adjoint();
  for (std::size_t k = m; k-- > 0;) {
    const ComplexMatrix q = forward[k + 1] * back;
    out.gradient[k] = pulses.dt * re_trace_product(q, gen.control_comm_x) / norm;
    out.gradient[m + k] = pulses.dt * re_trace_product(q, gen.control_comm_y) / norm;
    back = back * steps[k];
  }
  return out;
}

ValidityCheck dt_validity_check(const Generator& gen, double h_max, double dt) {
  double worst = 0.0;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      worst = std::max(worst, spectral_norm_upper(gen.full(sx * h_max, sy * h_max)));
    }
  }
  ValidityCheck out;
  out.bound = worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
  out.ok = dt <= out.bound / 10.0;
  return out;
}

double superop_fidelity(const Propagator& a, const Propagator& target,
                        std::size_t n_qubits) {
  const Eigen::Index expected = Eigen::Index{1} << (2 * n_qubits);
  if (a.rows() != expected || a.cols() != expected || target.rows() != expected ||
      target.cols() != expected) {
    throw std::invalid_argument("superop_fidelity: expected " + std::to_string(expected) +
                                "x" + std::to_string(expected) + " superoperators");
  }
  return re_trace_adjoint_product(target, a) / static_cast<double>(expected);
}

double state_fitness(const Propagator& channel, const Scenario& scenario) {
  const auto nq = scenario.num_qubits();
  const auto d = static_cast<Eigen::Index>(scenario.dim());
  if (channel.rows() != d * d || channel.cols() != d * d) {
    throw std::invalid_argument("state_fitness: channel is " + std::to_string(channel.rows()) +
                                "x" + std::to_string(channel.cols()) + ", expected " +
                                std::to_string(d * d));
  }
  const std::vector<std::size_t> dims(nq, 2);
  const auto& keep = scenario.target_sites;
  const auto& u = scenario.target_unitary;
  const ComplexMatrix u_adj = u.adjoint();

  // Bits of a full index that belong to the ancilla.
  Eigen::Index ancilla_mask = 0;
  for (auto s : scenario.ancilla_sites) ancilla_mask |= Eigen::Index{1} << (nq - 1 - s);

  double sum = 0.0;
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = 0; q < d; ++q) {
      // Tr_A(E_pq) vanishes unless the ancilla parts of p and q agree.
      if ((p & ancilla_mask) != (q & ancilla_mask)) continue;
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(p, q) = 1.0;
      const ComplexMatrix ideal = u * partial_trace(unit, dims, keep) * u_adj;
      const ComplexMatrix out =
          partial_trace(unres(channel.col(p * d + q)), dims, keep);
      sum += re_trace_adjoint_product(ideal, out);
    }
  }
  const double z = std::ldexp(1.0, static_cast<int>(2 * keep.size() +
                                                    scenario.ancilla_sites.size()));
  return sum / z;
}

}  // namespace lindctl
