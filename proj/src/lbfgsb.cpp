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

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lindctl {

double Bounds::clamp(double x) const { return std::clamp(x, lower, upper); }

void Bounds::validate() const {
  if (!(lower < upper)) throw std::invalid_argument("bounds require lower < upper");
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Correction {
  Vec s;
  Vec y;
};

// Internally minimizes phi = -score.
struct Evaluation {
  double phi;
  Vec grad;
};

Evaluation evaluate(const Objective& obj, const Vec& x) {
  auto sg = obj.evaluate_with_gradient(x);
  if (!std::isfinite(sg.score)) {
    throw std::runtime_error("lbfgs_b_maximize: objective returned a non-finite score");
  }
  if (sg.gradient.size() != x.size()) {
    throw std::runtime_error("lbfgs_b_maximize: gradient has length " +
                             std::to_string(sg.gradient.size()) + ", expected " +
                             std::to_string(x.size()));
  }
  for (double& g : sg.gradient) {
    if (!std::isfinite(g)) {
      throw std::runtime_error("lbfgs_b_maximize: objective returned a non-finite gradient");
    }
    g = -g;
  }
  return {-sg.score, std::move(sg.gradient)};
}

// Variables pinned at a bound with the gradient pointing outward.
std::vector<bool> active_set(const Vec& x, const Vec& g, const Bounds& b) {
  std::vector<bool> active(x.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    active[i] = (x[i] <= b.lower && g[i] > 0.0) || (x[i] >= b.upper && g[i] < 0.0);
  }
  return active;
}

double masked_dot(const Vec& a, const Vec& b, const std::vector<bool>& active) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!active[i]) acc += a[i] * b[i];
  }
  return acc;
}

// Two-loop recursion restricted to the free variables: returns -H q with H
// the inverse-Hessian model of the reduced problem. Pairs with no curvature
// left on the free subspace are skipped.
Vec lbfgs_direction(const Vec& q_in, const std::deque<Correction>& hist,
                    const std::vector<bool>& active) {
  Vec q = q_in;
  const std::size_t n = q.size();
  std::vector<double> rho(hist.size(), 0.0);
  std::vector<double> alpha(hist.size(), 0.0);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double sy = masked_dot(hist[i].s, hist[i].y, active);
    if (sy > 1e-12 * masked_dot(hist[i].y, hist[i].y, active)) rho[i] = 1.0 / sy;
  }
  for (std::size_t i = hist.size(); i-- > 0;) {
    if (rho[i] == 0.0) continue;
    alpha[i] = rho[i] * masked_dot(hist[i].s, q, active);
    for (std::size_t j = 0; j < n; ++j) {
      if (!active[j]) q[j] -= alpha[i] * hist[i].y[j];
    }
  }
  double scale = 1.0;
  for (std::size_t i = hist.size(); i-- > 0;) {
    if (rho[i] == 0.0) continue;
    scale = 1.0 / (rho[i] * masked_dot(hist[i].y, hist[i].y, active));
    break;
  }
  for (double& v : q) v *= scale;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (rho[i] == 0.0) continue;
    const double beta = rho[i] * masked_dot(hist[i].y, q, active);
    for (std::size_t j = 0; j < n; ++j) {
      if (!active[j]) q[j] += (alpha[i] - beta) * hist[i].s[j];
    }
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

LbfgsbResult lbfgs_b_maximize(const Objective& obj, const Bounds& bounds,
                              std::span<const double> start,
                              const LbfgsbOptions& options) {
  if (!obj.evaluate_with_gradient) {
    throw std::invalid_argument("lbfgs_b_maximize: objective provides no gradient");
  }
  bounds.validate();
  const std::size_t n = start.size();

  Vec x(start.begin(), start.end());
  for (double& v : x) v = bounds.clamp(v);
  Evaluation cur = evaluate(obj, x);

  std::deque<Correction> hist;
  std::size_t iters = 0;
  constexpr double kArmijo = 1e-4;

  while (iters < options.max_iters) {
    Vec pg(n);
    for (std::size_t i = 0; i < n; ++i) pg[i] = bounds.clamp(x[i] - cur.grad[i]) - x[i];
    if (inf_norm(pg) <= options.pg_tol) break;

    const auto active = active_set(x, cur.grad, bounds);
    Vec q = cur.grad;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) q[i] = 0.0;
    }
    Vec d = lbfgs_direction(q, hist, active);
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) d[i] = 0.0;
    }
    if (!(dot(d, cur.grad) < 0.0)) {
      hist.clear();
      d = q;
      for (double& v : d) v = -v;
    }

    double step = hist.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(d, d))) : 1.0;
    bool accepted = false;
    Vec x_new(n);
    Evaluation next;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = bounds.clamp(x[i] + step * d[i]);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += cur.grad[i] * (x_new[i] - x[i]);
      if (decrease >= 0.0) {
        step *= 0.5;
        continue;
      }
      next = evaluate(obj, x_new);
      if (next.phi <= cur.phi + kArmijo * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    ++iters;

    Correction c{Vec(n), Vec(n)};
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = next.grad[i] - cur.grad[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-12 * dot(c.y, c.y)) {
      hist.push_back(std::move(c));
      if (hist.size() > options.history) hist.pop_front();
    }

    const double change = std::abs(next.phi - cur.phi);
    const double scale = std::max({std::abs(next.phi), std::abs(cur.phi), 1.0});
    x = std::move(x_new);
    cur = std::move(next);
    if (change <= options.rel_tol * scale) break;
  }

  return {std::move(x), -cur.phi, iters};
}

}  // namespace lindctl
