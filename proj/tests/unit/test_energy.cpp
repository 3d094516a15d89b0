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
#include <random>

#include "inertia_kl/energy.hpp"
#include "inertia_kl/functions.hpp"
#include "inertia_kl/optimizers.hpp"

namespace ikl = inertia_kl;
using ikl::CoefficientSchedule;
using ikl::Vector;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// The displayed rational formulas, evaluated in long double.
struct PaperSequences {
  long double al, be, s, l;
  long double c() const { return (2 - s * l) / (2 * s); }
  long double a_prev(long double n) const {  // A_{n-1}
    const long double p = (1 + be) * n + al;
    return c() * p * p / ((n + al) * (n + al)) - be * n * p / (s * (n + al) * (n + al));
  }
  long double c_prev(long double n) const {  // C_{n-1}
    const long double r = (be * n - be) / (n + al - 1);
    return c() * r * ((1 + be) * n + al) / (n + al) - r * be * n / (2 * s * (n + al));
  }
  long double b(long double n) const {
    const long double t = be * n / (n + al);
    return c() * t * t;
  }
  long double big_delta(long double n) const { return b(n) + a_prev(n) - c_prev(n) - c_prev(n + 1); }
  long double delta(long double n) const { return a_prev(n) - c_prev(n); }
};

ikl::SolverParams fig1c() {
  ikl::SolverParams p;
  p.beta = 0.5;
  p.step = 0.0124;
  p.tol = 1e-15;
  return p;
}

ikl::Trace quadratic_trace() {
  return ikl::run(ikl::Method::kInertial, v2(1, -1), v2(1, -1), fig1c(), ikl::quadratic_test());
}

ikl::Trace stationary_trace(const Vector& x, std::size_t steps, const ikl::ObjectiveOracle& g) {
  ikl::Trace t;
  t.method = ikl::Method::kInertial;
  t.params = fig1c();
  t.oracle_id = g.id();
  t.x_minus1 = x;
  for (std::size_t n = 0; n < steps; ++n) {
    t.x.push_back(x);
    t.y.push_back(x);
    t.gx.push_back(g.value(x));
    t.gy.push_back(g.value(x));
    t.grad_norm.push_back(g.gradient(x).norm());
    t.err.push_back(0.0);
  }
  t.x.push_back(x);
  t.gx.push_back(g.value(x));
  t.termination = ikl::Termination::kConverged;
  return t;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Schedule, MatchesDisplayedFormulas) {
  for (double beta : {0.1, 0.5, 0.9}) {
    const double s = 0.5 * 2 * (1 - beta) / 80;
    const CoefficientSchedule sc(3.0, beta, s, 80.0);
    const PaperSequences ps{3.0L, beta, s, 80.0L};
    for (std::size_t n : {1u, 2u, 3u, 10u, 1000u, 123456u}) {
      const auto v = ikl::sequences(sc, n);
      const auto nl = static_cast<long double>(n);
      EXPECT_LT(rel(v.a_prev, static_cast<double>(ps.a_prev(nl))), 1e-12) << n;
      EXPECT_LT(rel(v.c_prev, static_cast<double>(ps.c_prev(nl))), 1e-12) << n;
      EXPECT_LT(rel(v.b, static_cast<double>(ps.b(nl))), 1e-12) << n;
      EXPECT_LT(rel(v.big_delta, static_cast<double>(ps.big_delta(nl))), 1e-11) << n;
      EXPECT_LT(rel(v.delta, static_cast<double>(ps.delta(nl))), 1e-12) << n;
    }
  }
}

TEST(Schedule, FirstCIsZero) {
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  EXPECT_EQ(sc.c(0), 0.0);
}

TEST(Schedule, LimitExamples) {
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto lim = sc.limits();
  EXPECT_NEAR(lim.delta, 0.262 / 0.0248, 1e-12);
  EXPECT_NEAR(lim.delta, 10.565, 1e-3);
  EXPECT_NEAR(lim.big_delta, 0.008 / 0.0248, 1e-12);
  EXPECT_NEAR(lim.big_delta, 0.3226, 1e-4);
}

TEST(Schedule, DeltaIdentity) {
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  EXPECT_NEAR(sc.delta(1), sc.delta_direct(1), 1e-12);
  EXPECT_NEAR(sc.delta(1), sc.a(0) - sc.c(0), 1e-12);
  for (std::size_t n = 1; n <= 10000; ++n) {
    ASSERT_NEAR(sc.delta(n), sc.a(n - 1) - sc.c(n - 1), 1e-12);
    ASSERT_NEAR(sc.delta(n), sc.delta_direct(n), 1e-12);
  }
}

TEST(Schedule, SequencesApproachLimits) {
  const CoefficientSchedule sc(3.0, 0.3, 0.5 * 2 * 0.7 / 80, 80.0);
  const auto lim = sc.limits();
  double prev = INFINITY;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u, 10000000u}) {
    const double err = std::abs(sc.big_delta(n) - lim.big_delta) + std::abs(sc.delta(n) - lim.delta) +
                       std::abs(sc.a(n) - lim.a) + std::abs(sc.b(n) - lim.b) + std::abs(sc.c(n) - lim.c);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(rel(sc.delta(10000000), lim.delta), 1e-5);
}

TEST(Schedule, PositiveFromNStar) {
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  EXPECT_EQ(sc.n_star(), 1u);
  for (std::size_t n = sc.n_star(); n < 5000; ++n) {
    ASSERT_GT(sc.c(n), 0.0);
    ASSERT_GT(sc.big_delta(n), 0.0);
    ASSERT_GT(sc.delta(n), 0.0);
  }
}

TEST(Schedule, RejectsInadmissibleParameters) {
  EXPECT_THROW(CoefficientSchedule(3.0, 0.0, 0.001, 80.0), ikl::ParameterError);
  EXPECT_THROW(CoefficientSchedule(3.0, 1.0, 0.001, 80.0), ikl::ParameterError);
  EXPECT_THROW(CoefficientSchedule(0.0, 0.5, 0.001, 80.0), ikl::ParameterError);
  EXPECT_THROW(CoefficientSchedule(3.0, 0.5, 0.0125, 80.0), ikl::ParameterError);
  EXPECT_THROW(CoefficientSchedule(3.0, 0.5, -1.0, 80.0), ikl::ParameterError);
  EXPECT_THROW(CoefficientSchedule(3.0, 0.5, 0.001, -1.0), ikl::ParameterError);
  EXPECT_THROW(ikl::sequences(CoefficientSchedule(3.0, 0.5, 0.001, 80.0), 0), ikl::ParameterError);
}

TEST(StabilizationIndex, FindsWindowStart) {
  EXPECT_EQ(ikl::stabilization_index([](std::size_t k) { return k >= 37; }, 1000, 1000000), 37u);
  EXPECT_EQ(ikl::stabilization_index([](std::size_t) { return true; }, 1000, 1000000), 1u);
  // A late isolated failure inside the first window restarts the count.
  EXPECT_EQ(ikl::stabilization_index([](std::size_t k) { return k != 500; }, 1000, 1000000), 501u);
  EXPECT_THROW(ikl::stabilization_index([](std::size_t) { return false; }, 10, 1000),
               ikl::AnalysisError);
  EXPECT_THROW(ikl::stabilization_index([](std::size_t k) { return k > 5000; }, 10, 1000),
               ikl::AnalysisError);
}

TEST(HFunction, ValueExamples) {
  const auto g = ikl::quadratic_test();
  EXPECT_EQ(ikl::h_value(g, v2(-6, 1), v2(-6, 1)), 0.0);
  EXPECT_DOUBLE_EQ(ikl::h_value(g, v2(-6, 1), v2(-6, 3)), 2.0);
  for (const Vector& x : {v2(1, 2), v2(-3, 0.5)}) EXPECT_EQ(ikl::h_value(g, x, x), g.value(x));
}

TEST(HFunction, GradientExamples) {
  const auto g = ikl::quadratic_test();
  const auto [gx, gy] = ikl::h_gradient(g, v2(-6, 1), v2(-6, 3));
  EXPECT_EQ(gx, v2(0, -2));
  EXPECT_EQ(gy, v2(0, 2));
  const auto [cx, cy] = ikl::h_gradient(g, v2(-6, 1), v2(-6, 1));
  EXPECT_EQ(cx.norm() + cy.norm(), 0.0);
}

TEST(HFunction, GradientMatchesFiniteDifferences) {
  const auto g = ikl::beale_test();
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 10; ++k) {
    const Vector x = v2(u(gen), u(gen));
    const Vector y = v2(u(gen), u(gen));
    const auto [gx, gy] = ikl::h_gradient(g, x, y);
    Vector grad(4);
    grad << gx, gy;
    for (int i = 0; i < 4; ++i) {
      Vector dx = Vector::Zero(2);
      Vector dy = Vector::Zero(2);
      (i < 2 ? dx : dy)[i % 2] = 1e-5;
      const double fd = (ikl::h_value(g, x + dx, y + dy) - ikl::h_value(g, x - dx, y - dy)) / 2e-5;
      EXPECT_LE(std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])), 1e-5);
    }
  }
}

TEST(ZSequence, StationaryTraceGivesDiagonal) {
  const auto g = ikl::quadratic_test();
  const auto t = stationary_trace(v2(-6, 1), 20, g);
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto zs = ikl::build_z_sequence(t, sc);
  EXPECT_EQ(zs.offset, sc.n_star());
  EXPECT_EQ(zs.z.size(), 20 - sc.n_star());
  for (const auto& z : zs.z) {
    EXPECT_EQ(z.v, v2(-6, 1));
    EXPECT_EQ(z.w, v2(-6, 1));
  }
}

TEST(ZSequence, MatchesDefinitionAndIdentity) {
  const auto g = ikl::quadratic_test();
  const auto t = quadratic_trace();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto zs = ikl::build_z_sequence(t, sc);
  const std::size_t N = zs.offset;
  double prev_h = INFINITY;
  for (std::size_t n = 0; n < zs.z.size(); ++n) {
    const auto m = static_cast<std::ptrdiff_t>(n + N);
    const Vector dx = t.iterate(m) - t.iterate(m - 1);
    const double an = 0.5 * static_cast<double>(n + N) / (static_cast<double>(n + N) + 3.0);
    const double bn = std::sqrt(2 * sc.delta(n + N)) + an;
    EXPECT_NEAR((zs.z[n].v - (t.iterate(m) + an * dx)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((zs.z[n].w - (t.iterate(m) + bn * dx)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((zs.u[n] - zs.z[n].w).norm(), 0.0, 1e-12);
    const double h = ikl::h_value(g, zs.z[n].v, zs.z[n].w);
    const double rhs = t.gy[n + N] + sc.delta(n + N) * dx.squaredNorm();
    EXPECT_NEAR(h, rhs, 1e-10 * std::max(1.0, rhs));
    EXPECT_LE(h, prev_h + 1e-10);
    prev_h = h;
  }
}

TEST(ZSequence, TooShort) {
  const auto g = ikl::quadratic_test();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  EXPECT_THROW(ikl::build_z_sequence(stationary_trace(v2(1, 1), 2, g), sc), ikl::AnalysisError);
}

TEST(Descent, Fig1cHoldsEverywhere) {
  const auto t = quadratic_trace();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto rep = ikl::check_descent(t, sc);
  ASSERT_TRUE(rep.passed());
  const auto* d = rep.find("descent");
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->first_index, sc.n_star());
  EXPECT_EQ(d->residuals.size(), t.steps() - 1 - sc.n_star());
  EXPECT_GE(d->worst_residual, -1e-10);
  ASSERT_NE(rep.find("energy"), nullptr);
  EXPECT_TRUE(rep.find("energy")->passed);
}

TEST(Descent, IndependentResidualRecomputation) {
  const auto g = ikl::quadratic_test();
  const auto t = quadratic_trace();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const PaperSequences ps{3.0L, 0.5L, 0.0124L, 80.0L};
  const auto rep = ikl::check_descent(t, sc);
  const auto& res = rep.find("descent")->residuals;
  for (std::size_t n = 1; n + 2 <= t.steps(); ++n) {
    const auto i = static_cast<std::ptrdiff_t>(n);
    const long double nl = n;
    const long double cn = ps.c_prev(nl + 1);
    const long double dn = ps.delta(nl);
    const long double dn1 = ps.delta(nl + 1);
    const Vector d2 = t.iterate(i + 1) + t.iterate(i - 1) - 2 * t.iterate(i);
    const Vector d1 = t.iterate(i) - t.iterate(i - 1);
    const Vector d0 = t.iterate(i + 1) - t.iterate(i);
    const long double lhs = cn * d2.squaredNorm() + ps.big_delta(nl) * d1.squaredNorm();
    const long double rhs = (g.value(t.y[n]) + dn * d1.squaredNorm()) - (g.value(t.y[n + 1]) + dn1 * d0.squaredNorm());
    EXPECT_NEAR(res[n - 1], static_cast<double>(rhs - lhs), 1e-9) << n;
    EXPECT_GE(static_cast<double>(rhs - lhs), -1e-10) << n;
  }
}

TEST(Descent, StationaryTraceHoldsWithEquality) {
  const auto g = ikl::quadratic_test();
  const auto rep = ikl::check_descent(stationary_trace(v2(-6, 1), 10, g), CoefficientSchedule(3.0, 0.5, 0.0124, 80.0));
  EXPECT_TRUE(rep.passed());
  for (double r : rep.find("descent")->residuals) EXPECT_EQ(r, 0.0);
}

TEST(Descent, RejectsMismatchedTrace) {
  const auto t = quadratic_trace();
  EXPECT_THROW(ikl::check_descent(t, CoefficientSchedule(3.0, 0.4, 0.0124, 80.0)), ikl::ParameterError);
  EXPECT_THROW(ikl::check_descent(t, CoefficientSchedule(2.0, 0.5, 0.0124, 80.0)), ikl::ParameterError);
  auto polyak = t;
  polyak.method = ikl::Method::kPolyak;
  EXPECT_THROW(ikl::check_descent(polyak, CoefficientSchedule(3.0, 0.5, 0.0124, 80.0)), ikl::ParameterError);
}

TEST(Descent, RosenbrockWithRealizedCurvature) {
  const auto g = ikl::rosenbrock_test();
  ikl::SolverParams p;
  p.step = 0.001;
  p.tol = 1e-20;
  const auto t = ikl::run(ikl::Method::kInertial, v2(-0.9, -1), v2(-0.9, -1), p, g);
  ASSERT_EQ(t.termination, ikl::Termination::kConverged);

  // A region-based estimate on [-2,2]^2 is far above 2(1-beta)/s = 1000, so
  // no schedule exists for it.
  const double l_box = ikl::estimate_lipschitz(g, ikl::Box{v2(-2, -2), v2(2, 2)}, 2000, 1);
  EXPECT_GT(l_box * p.step, 2 * (1 - p.beta));
  EXPECT_THROW(CoefficientSchedule(3.0, 0.5, 0.001, l_box), ikl::ParameterError);

  const auto ts = ikl::schedule_for_trace(t, g);
  EXPECT_TRUE(ts.realized);
  EXPECT_LT(ts.schedule.lipschitz() * p.step, 2 * (1 - p.beta));
  ikl::CheckOptions opt;
  opt.burn_in = ts.burn_in;
  const auto rep = ikl::check_descent(t, ts.schedule, opt);
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(ikl::check_h_conditions(t, ts.schedule, g, opt).passed());
}

TEST(Curvature, QuadraticBoundedBySpectralNorm) {
  const auto g = ikl::quadratic_test();
  const auto t = quadratic_trace();
  const double k = ikl::realized_curvature(t, g, 0);
  EXPECT_GT(k, 0.0);
  EXPECT_LE(k, (84 + std::sqrt(76.0 * 76.0 + 64.0)) / 2 + 1e-6);
  const auto ts = ikl::schedule_for_trace(t, g);
  EXPECT_FALSE(ts.realized);
  EXPECT_EQ(ts.burn_in, 0u);
  EXPECT_EQ(ts.schedule.lipschitz(), 80.0);
  EXPECT_EQ(ikl::schedule_for_trace(t, g, 50.0).schedule.lipschitz(), 50.0);
}

TEST(HConditions, Fig1cHold) {
  const auto g = ikl::quadratic_test();
  const auto t = quadratic_trace();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto rep = ikl::check_h_conditions(t, sc, g);
  EXPECT_TRUE(rep.passed());
  for (const char* name : {"H1", "H2", "H3"}) {
    const auto* c = rep.find(name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_TRUE(c->passed) << name;
    EXPECT_GE(c->worst_residual, -1e-10) << name;
  }
  // D is the realized minimum of Delta_n, b and c cover the realized range.
  double d = INFINITY;
  for (std::size_t n = 1; n < t.steps(); ++n) d = std::min(d, sc.big_delta(n));
  EXPECT_EQ(rep.a, std::min(d, sc.limits().big_delta));
  EXPECT_GE(rep.b, std::sqrt(2.0) / 0.0124);
  EXPECT_EQ(rep.c1, 2 + rep.c);
  EXPECT_EQ(rep.c2, rep.c);
  EXPECT_EQ(rep.find("H2")->residuals.size(), t.steps() - sc.n_star());
  EXPECT_EQ(rep.find("H1")->residuals.size(), t.steps() - sc.n_star() - 1);
}

TEST(HConditions, H3AtMinimizer) {
  const auto g = ikl::quadratic_test();
  const auto t = quadratic_trace();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  ikl::CheckOptions opt;
  opt.h3_samples = {v2(-6, 1)};
  const auto rep = ikl::check_h_conditions(t, sc, g, opt);
  ASSERT_EQ(rep.h3_samples.size(), 1u);
  const auto zs = ikl::build_z_sequence(t, sc);
  for (std::size_t n = 0; n < zs.z.size(); ++n) {
    const auto m = static_cast<std::ptrdiff_t>(n + zs.offset);
    const double lhs = std::sqrt((zs.z[n].v - v2(-6, 1)).squaredNorm() + (zs.z[n].w - v2(-6, 1)).squaredNorm());
    const double rhs = rep.c1 * (t.iterate(m) - v2(-6, 1)).norm() + rep.c2 * (t.iterate(m - 1) - v2(-6, 1)).norm();
    EXPECT_LE(lhs, rhs + 1e-10);
  }
  EXPECT_TRUE(rep.find("H3")->passed);
}

TEST(HConditions, StationaryTraceHolds) {
  const auto g = ikl::quadratic_test();
  const auto rep = ikl::check_h_conditions(stationary_trace(v2(-6, 1), 10, g),
                                           CoefficientSchedule(3.0, 0.5, 0.0124, 80.0), g);
  EXPECT_TRUE(rep.passed());
  for (double r : rep.find("H1")->residuals) EXPECT_EQ(r, 0.0);
  for (double r : rep.find("H2")->residuals) EXPECT_EQ(r, 0.0);
}

TEST(HConditions, PerturbedIterateBreaksH1) {
  const auto g = ikl::quadratic_test();
  auto t = quadratic_trace();
  t.x[20][0] += 5.0;
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto rep = ikl::check_h_conditions(t, sc, g);
  const auto* h1 = rep.find("H1");
  EXPECT_FALSE(h1->passed);
  ASSERT_TRUE(h1->first_failure);
  EXPECT_EQ(*h1->first_failure, 19u);
  EXPECT_FALSE(ikl::check_descent(t, sc).passed());
}

TEST(Summability, TailBoundedByEnergyDrop) {
  const auto t = quadratic_trace();
  const CoefficientSchedule sc(3.0, 0.5, 0.0124, 80.0);
  const auto rep = ikl::check_square_summability(t, sc);
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(std::isfinite(rep.tail_sum));
  EXPECT_LE(rep.tail_sum, rep.bound);
  double sum = 0.0;
  for (std::size_t n = rep.start; n + 2 <= t.steps(); ++n) {
    sum += (t.iterate(static_cast<std::ptrdiff_t>(n)) - t.iterate(static_cast<std::ptrdiff_t>(n) - 1)).squaredNorm();
  }
  EXPECT_NEAR(rep.tail_sum, sum, 1e-12 * sum);
}
