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

#include <cstdlib>
#include <set>

#include "inertia_kl/experiments.hpp"
#include "inertia_kl/functions.hpp"

namespace ikl = inertia_kl;
using ikl::Method;
using ikl::Vector;

namespace {

const ikl::Scenario& builtin(const std::string& label) {
  static const auto all = ikl::builtin_scenarios();
  for (const auto& sc : all) {
    if (sc.label == label) return sc;
  }
  throw std::runtime_error("no scenario " + label);
}

bool same_trace(const ikl::Trace& a, const ikl::Trace& b) {
  return a.x == b.x && a.y == b.y && a.gx == b.gx && a.gy == b.gy && a.grad_norm == b.grad_norm &&
         a.err == b.err && a.termination == b.termination;
}

}  // namespace

TEST(Scenarios, Contents) {
  const auto all = ikl::builtin_scenarios();
  std::set<std::string> labels;
  for (const auto& sc : all) labels.insert(sc.label);
  EXPECT_EQ(labels, (std::set<std::string>{"fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f",
                                           "fig2", "fig3", "fig4"}));
  EXPECT_EQ(ikl::figure_scenarios("fig1").size(), 6u);
  EXPECT_EQ(ikl::figure_scenarios("fig1c").size(), 1u);
  EXPECT_TRUE(ikl::figure_scenarios("fig9").empty());

  const auto& c = builtin("fig1c");
  EXPECT_EQ(c.oracle_id, "quadratic");
  ASSERT_EQ(c.methods.size(), 3u);
  EXPECT_EQ(c.methods[0].beta, 0.5);
  EXPECT_EQ(c.methods[0].step, 0.0124);
  EXPECT_EQ(c.methods[2].method, Method::kNesterov);
  EXPECT_EQ(c.methods[2].step, 0.0125);
  EXPECT_EQ(c.tol, 1e-15);

  const auto& f2 = builtin("fig2");
  EXPECT_EQ(f2.oracle_id, "beale");
  EXPECT_EQ(f2.starts.size(), 4u);
  EXPECT_EQ(f2.tol, 1e-20);
  const auto& f3 = builtin("fig3");
  EXPECT_EQ(f3.oracle_id, "rosenbrock");
  EXPECT_EQ(f3.methods[0].step, 0.001);
  const auto& f4 = builtin("fig4");
  EXPECT_EQ(f4.methods.size(), 4u);
  EXPECT_EQ(f4.starts.size(), 6u);
  for (const auto& m : f4.methods) EXPECT_EQ(m.method, Method::kInertial);
}

TEST(Scenarios, StepsRespectTheBound) {
  for (const auto& sc : ikl::figure_scenarios("fig1")) {
    for (const auto& m : sc.methods) {
      if (m.method == Method::kNesterov) {
        EXPECT_LE(m.step, 1.0 / 80);
      } else {
        EXPECT_LT(m.step, 2 * (1 - m.beta) / 80);
      }
    }
  }
}

TEST(Scenarios, ValidateRejects) {
  auto sc = builtin("fig1c");
  sc.oracle_id = "nope";
  EXPECT_THROW(ikl::validate(sc), ikl::ParameterError);
  sc = builtin("fig1c");
  sc.starts.push_back(Vector::Zero(3));
  EXPECT_THROW(ikl::validate(sc), ikl::ParameterError);
  sc = builtin("fig1c");
  sc.methods[0].step = 0.0125;
  EXPECT_THROW(ikl::validate(sc), ikl::ParameterError);
  EXPECT_THROW(ikl::run_comparison(sc, 1), ikl::ParameterError);
}

TEST(Comparison, Fig1cConverges) {
  const auto res = ikl::run_comparison(builtin("fig1c"), 1);
  ASSERT_EQ(res.runs.size(), 3u);
  for (const auto& r : res.runs) {
    EXPECT_EQ(r.trace.termination, ikl::Termination::kConverged);
    EXPECT_EQ(r.iterations, r.trace.steps());
    ASSERT_TRUE(r.final_distance);
    EXPECT_LT(*r.final_distance, 1e-6);
    EXPECT_LT(r.final_value, 1e-12);
  }
  const auto* inertial = res.find(Method::kInertial, 0);
  const auto* nesterov = res.find(Method::kNesterov, 0);
  ASSERT_NE(inertial, nullptr);
  ASSERT_NE(nesterov, nullptr);
  EXPECT_LT(inertial->iterations, nesterov->iterations);
  EXPECT_EQ(res.find(Method::kPolyak, 0.5, 0), &res.runs[1]);
  EXPECT_EQ(res.find(Method::kPolyak, 0.6, 0), nullptr);
}

TEST(Comparison, BitwiseDeterministic) {
  const auto a = ikl::run_comparison(builtin("fig2"), 1);
  const auto b = ikl::run_comparison(builtin("fig2"), 1);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) EXPECT_TRUE(same_trace(a.runs[i].trace, b.runs[i].trace)) << i;
}

TEST(Comparison, ThreadCountDoesNotChangeResults) {
  const auto one = ikl::run_comparison(builtin("fig2"), 1);
  const auto many = ikl::run_comparison(builtin("fig2"), 5);
  ASSERT_EQ(one.runs.size(), many.runs.size());
  for (std::size_t i = 0; i < one.runs.size(); ++i) {
    EXPECT_EQ(one.runs[i].spec.method, many.runs[i].spec.method);
    EXPECT_EQ(one.runs[i].start_index, many.runs[i].start_index);
    EXPECT_TRUE(same_trace(one.runs[i].trace, many.runs[i].trace)) << i;
  }
}

TEST(Comparison, DefaultThreadsReadsEnvironment) {
  ::setenv("INERTIA_KL_THREADS", "3", 1);
  EXPECT_EQ(ikl::default_threads(), 3u);
  ::setenv("INERTIA_KL_THREADS", "zero", 1);
  EXPECT_GE(ikl::default_threads(), 1u);
  ::unsetenv("INERTIA_KL_THREADS");
  EXPECT_GE(ikl::default_threads(), 1u);
}

TEST(Names, CellNames) {
  Vector s(2);
  s << -0.9, 1.1;
  EXPECT_EQ(ikl::start_label(s), "-0.9x1.1");
  const auto& sc = builtin("fig3");
  ikl::RunOutcome r;
  r.spec = sc.methods[1];
  r.start_index = 3;
  EXPECT_EQ(ikl::cell_name(sc, r), "fig3_polyak_0.5_0.9x1.1");
}
