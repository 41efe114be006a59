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

#include "lindctl/optimizers.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

using namespace lindctl;

namespace {

Objective from_gradient(std::function<ScoreGradient(std::span<const double>)> fg) {
  Objective obj;
  obj.evaluate = [fg](std::span<const double> x) { return fg(x).score; };
  obj.evaluate_with_gradient = fg;
  return obj;
}

Objective neg_rosenbrock() {
  return from_gradient([](std::span<const double> v) {
    const double x = v[0], y = v[1];
    ScoreGradient sg;
    sg.score = -(100 * (y - x * x) * (y - x * x) + (1 - x) * (1 - x));
    sg.gradient = {400 * x * (y - x * x) + 2 * (1 - x), -200 * (y - x * x)};
    return sg;
  });
}

// f(x) = -1/2 (x-c)^T Q (x-c) with Q symmetric positive definite.
Objective concave_quadratic(const Eigen::MatrixXd& q, const Eigen::VectorXd& c) {
  return from_gradient([q, c](std::span<const double> v) {
    const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXd r = x - c;
    const Eigen::VectorXd g = -(q * r);
    ScoreGradient sg;
    sg.score = -0.5 * r.dot(q * r);
    sg.gradient.assign(g.data(), g.data() + g.size());
    return sg;
  });
}

}  // namespace

TEST(Lbfgsb, BoundaryOptimumOneDimensional) {
  const auto obj = from_gradient([](std::span<const double> x) {
    return ScoreGradient{-(x[0] - 3) * (x[0] - 3), {-2 * (x[0] - 3)}};
  });
  const std::vector<double> start{0.0};
  const auto r = lbfgs_b_maximize(obj, Bounds{-1, 1}, start);
  ASSERT_EQ(r.best.size(), 1u);
  EXPECT_EQ(r.best[0], 1.0);
  EXPECT_DOUBLE_EQ(r.score, -4.0);
}

TEST(Lbfgsb, Rosenbrock) {
  const std::vector<double> start{-1.2, 1.0};
  LbfgsbOptions opts;
  opts.max_iters = 500;
  const auto r = lbfgs_b_maximize(neg_rosenbrock(), Bounds{-5, 5}, start, opts);
  EXPECT_NEAR(r.best[0], 1.0, 1e-6);
  EXPECT_NEAR(r.best[1], 1.0, 1e-6);
}

TEST(Lbfgsb, InteriorQuadraticReachesCenter) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> dist(-0.8, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6;
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = dist(gen);
    const auto r = lbfgs_b_maximize(concave_quadratic(Eigen::MatrixXd::Identity(n, n), c),
                                    Bounds{-1, 1}, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(r.best[i], c(i), 1e-8);
  }
}

TEST(Lbfgsb, BoxConstrainedQuadraticsReachProjectedOptimum) {
  // With diagonal Q the box optimum is the clamped center; for general Q
  // compare against a projected-gradient oracle run to convergence.
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5;
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = dist(gen);
    const Eigen::MatrixXd q = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = dist(gen);

    const Bounds box{-1, 1};
    std::vector<double> start(n);
    for (int i = 0; i < n; ++i) start[i] = box.clamp(dist(gen));
    const auto r = lbfgs_b_maximize(concave_quadratic(q, c), box, start);
    EXPECT_LE(r.iters, 200u);

    // Oracle: projected gradient ascent with step 1/L, many iterations.
    const double lip = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().maxCoeff();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int it = 0; it < 200000; ++it) {
      x = (x - q * (x - c) / lip).cwiseMax(-1.0).cwiseMin(1.0);
    }
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(r.best[i], x(i), 1e-6) << "trial " << trial;
      EXPECT_TRUE(box.contains(r.best[i]));
    }
  }
}

TEST(Lbfgsb, StopsAtMaxIters) {
  LbfgsbOptions opts;
  opts.max_iters = 3;
  const std::vector<double> start{-1.2, 1.0};
  const auto r = lbfgs_b_maximize(neg_rosenbrock(), Bounds{-5, 5}, start, opts);
  EXPECT_LE(r.iters, 3u);
}

TEST(Lbfgsb, Errors) {
  Objective no_grad;
  no_grad.evaluate = [](std::span<const double>) { return 0.0; };
  const std::vector<double> start{0.0};
  EXPECT_THROW(lbfgs_b_maximize(no_grad, Bounds{-1, 1}, start), std::invalid_argument);

  const auto nan_obj = from_gradient([](std::span<const double>) {
    return ScoreGradient{std::numeric_limits<double>::quiet_NaN(), {0.0}};
  });
  EXPECT_THROW(lbfgs_b_maximize(nan_obj, Bounds{-1, 1}, start), std::runtime_error);

  const std::vector<double> outside{2.0};
  const auto ok = from_gradient([](std::span<const double> x) {
    return ScoreGradient{-x[0] * x[0], {-2 * x[0]}};
  });
  // Out-of-box starts are projected first.
  const auto r = lbfgs_b_maximize(ok, Bounds{-1, 1}, outside);
  EXPECT_NEAR(r.best[0], 0.0, 1e-8);
}

TEST(Lbfgsb, Deterministic) {
  const std::vector<double> start{-1.2, 1.0};
  const auto a = lbfgs_b_maximize(neg_rosenbrock(), Bounds{-5, 5}, start);
  const auto b = lbfgs_b_maximize(neg_rosenbrock(), Bounds{-5, 5}, start);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.iters, b.iters);
}
