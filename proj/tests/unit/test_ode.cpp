// Copyright 2026 The inertia_kl Authors.
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

#include <cmath>

#include "inertia_kl/functions.hpp"
#include "inertia_kl/ode.hpp"

namespace ikl = inertia_kl;
using ikl::Vector;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ikl::DampedSystem quadratic_system(double gamma, double alpha) {
  return ikl::DampedSystem{gamma, alpha, ikl::quadratic_test(), 1.0, v2(1, -1), v2(0.5, 0.25)};
}

}  // namespace

TEST(Integrate, FreeMotionWithConstantDamping) {
  ikl::DampedSystem sys{0.7, 0.0, ikl::linear_test(v2(0, 0)), 1.0, v2(2, -1), v2(1, 3)};
  const auto tr = ikl::integrate(sys, 4.0, 0.01);
  ASSERT_FALSE(tr.diverged);
  ASSERT_EQ(tr.t.size(), 301u);
  EXPECT_NEAR(tr.t.back(), 4.0, 1e-12);
  for (std::size_t i = 0; i < tr.t.size(); i += 30) {
    const double e = std::exp(-0.7 * (tr.t[i] - 1.0));
    EXPECT_NEAR((tr.v[i] - e * v2(1, 3)).norm(), 0.0, 1e-9);
    EXPECT_NEAR((tr.x[i] - (v2(2, -1) + (1 - e) / 0.7 * v2(1, 3))).norm(), 0.0, 1e-9);
  }
}

TEST(Integrate, FreeMotionWithVanishingDamping) {
  ikl::DampedSystem sys{0.0, 3.0, ikl::linear_test(v2(0, 0)), 1.0, v2(0, 0), v2(1, -2)};
  const auto tr = ikl::integrate(sys, 3.0, 0.005);
  for (std::size_t i = 0; i < tr.t.size(); i += 40) {
    const double t = tr.t[i];
    EXPECT_NEAR((tr.v[i] - std::pow(1.0 / t, 3) * v2(1, -2)).norm(), 0.0, 1e-9);
    EXPECT_NEAR((tr.x[i] - 0.5 * (1.0 - 1.0 / (t * t)) * v2(1, -2)).norm(), 0.0, 1e-9);
  }
}

TEST(Integrate, EnergyNeverIncreases) {
  const auto tr = ikl::integrate(quadratic_system(1.0, 3.0), 10.0, 1e-3);
  ASSERT_FALSE(tr.diverged);
  const auto g = ikl::quadratic_test();
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    EXPECT_DOUBLE_EQ(tr.energy[i], g.value(tr.x[i]) + 0.5 * tr.v[i].squaredNorm());
    if (i > 0) ASSERT_LE(tr.energy[i], tr.energy[i - 1] + 1e-12) << i;
  }
}

TEST(Integrate, FourthOrder) {
  const auto sys = quadratic_system(1.0, 3.0);
  const Vector ref = ikl::integrate(sys, 2.0, 1.0 / 10240).x.back();
  const double e1 = (ikl::integrate(sys, 2.0, 1.0 / 320).x.back() - ref).norm();
  const double e2 = (ikl::integrate(sys, 2.0, 1.0 / 640).x.back() - ref).norm();
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

TEST(Integrate, RejectsBadInput) {
  auto sys = quadratic_system(1.0, 3.0);
  EXPECT_THROW(ikl::integrate(sys, 0.5, 0.1), ikl::ParameterError);
  EXPECT_THROW(ikl::integrate(sys, 2.0, 0.0), ikl::ParameterError);
  EXPECT_THROW(ikl::integrate(sys, 2.0, 5.0), ikl::ParameterError);
  sys.gamma = -1.0;
  EXPECT_THROW(ikl::integrate(sys, 2.0, 0.1), ikl::ParameterError);
  sys = quadratic_system(1.0, 3.0);
  sys.t0 = 0.0;
  EXPECT_THROW(ikl::integrate(sys, 2.0, 0.1), ikl::ParameterError);
  sys = quadratic_system(1.0, 3.0);
  sys.u0 = Vector::Zero(3);
  EXPECT_THROW(ikl::integrate(sys, 2.0, 0.1), ikl::ParameterError);
}

TEST(Discretize, Examples) {
  const auto p = ikl::discretize_to_algorithm(0.5, 0.1, 3.0);
  EXPECT_NEAR(p.beta, 0.95, 1e-15);
  EXPECT_NEAR(p.step, 0.01, 1e-15);
  EXPECT_EQ(p.alpha, 3.0);
  EXPECT_NEAR(ikl::discretize_to_algorithm(5.0, 0.1, 3.0).beta, 0.5, 1e-15);
  EXPECT_THROW(ikl::discretize_to_algorithm(0.0, 0.1, 3.0), ikl::ParameterError);
  EXPECT_THROW(ikl::discretize_to_algorithm(20.0, 0.1, 3.0), ikl::ParameterError);
  EXPECT_THROW(ikl::discretize_to_algorithm(1.0, 0.0, 3.0), ikl::ParameterError);
}

TEST(Discretize, RoundTrip) {
  for (double gamma : {0.3, 1.0, 4.0}) {
    for (double h : {0.01, 0.05, 0.2}) {
      if (gamma * h >= 1.0) continue;
      const auto p = ikl::discretize_to_algorithm(gamma, h, 3.0);
      const double h_back = std::sqrt(p.step);
      EXPECT_NEAR(h_back, h, 1e-15);
      EXPECT_NEAR((1.0 - p.beta) / h_back, gamma, 1e-12);
    }
  }
}

TEST(LimitConsistency, DiscrepancyShrinksWithStep) {
  const auto rows = ikl::limit_consistency(ikl::quadratic_test(), 1.0, 3.0, {1e-2, 1e-3, 1e-4}, 5.0,
                                           v2(1, -1));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.error);
    EXPECT_NEAR(r.beta, 1.0 - std::sqrt(r.step), 1e-15);
    EXPECT_TRUE(std::isfinite(r.discrepancy));
  }
  // s L < 2(1 - beta) only holds for the smallest step.
  EXPECT_FALSE(rows[0].step_valid);
  EXPECT_FALSE(rows[1].step_valid);
  EXPECT_TRUE(rows[2].step_valid);
  EXPECT_TRUE(ikl::strictly_decreasing(rows));
  EXPECT_LT(rows[2].discrepancy, rows[0].discrepancy / 4);
}

TEST(LimitConsistency, OutOfRangeBetaIsReportedPerRow) {
  const auto rows =
      ikl::limit_consistency(ikl::quadratic_test(), 20.0, 3.0, {1e-2, 1e-4}, 2.0, v2(1, -1));
  ASSERT_TRUE(rows[0].error);
  EXPECT_FALSE(rows[1].error);
}

TEST(LimitConsistency, RejectsBadInput) {
  const auto g = ikl::quadratic_test();
  EXPECT_THROW(ikl::limit_consistency(g, 1.0, 3.0, {}, 5.0, v2(1, -1)), ikl::ParameterError);
  EXPECT_THROW(ikl::limit_consistency(g, 1.0, 3.0, {1e-3, 1e-2}, 5.0, v2(1, -1)), ikl::ParameterError);
  EXPECT_THROW(ikl::limit_consistency(g, 1.0, 3.0, {1e-2}, 0.05, v2(1, -1)), ikl::ParameterError);
  EXPECT_THROW(ikl::limit_consistency(g, 1.0, 3.0, {1e-2}, 5.0, Vector::Zero(3)), ikl::ParameterError);
}

TEST(LimitConsistency, StrictlyDecreasingSkipsErrorRows) {
  std::vector<ikl::ConsistencyRow> rows(3);
  rows[0].discrepancy = 1.0;
  rows[1].error = "beta";
  rows[2].discrepancy = 0.5;
  EXPECT_TRUE(ikl::strictly_decreasing(rows));
  rows[2].discrepancy = 1.0;
  EXPECT_FALSE(ikl::strictly_decreasing(rows));
}
