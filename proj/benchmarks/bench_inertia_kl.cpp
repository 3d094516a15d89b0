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

#include <benchmark/benchmark.h>

#include <sstream>

#include "inertia_kl/energy.hpp"
#include "inertia_kl/functions.hpp"
#include "inertia_kl/ode.hpp"
#include "inertia_kl/optimizers.hpp"
#include "inertia_kl/rates.hpp"
#include "inertia_kl/trace_io.hpp"

namespace ikl = inertia_kl;

namespace {

ikl::Vector start(double a, double b) {
  ikl::Vector v(2);
  v << a, b;
  return v;
}

ikl::SolverParams fig1c() {
  ikl::SolverParams p;
  p.beta = 0.5;
  p.step = 0.0124;
  p.tol = 1e-15;
  return p;
}

const ikl::Trace& quadratic_trace() {
  static const ikl::Trace t =
      ikl::run(ikl::Method::kInertial, start(1, -1), start(1, -1), fig1c(), ikl::quadratic_test());
  return t;
}

void BM_InertialStep(benchmark::State& state) {
  const auto g = ikl::rosenbrock_test();
  const auto p = fig1c();
  ikl::Vector x = start(-0.9, -1.0);
  ikl::Vector xp = x;
  std::size_t n = 0;
  for (auto _ : state) {
    auto r = ikl::inertial_step(x, xp, n++, p, g);
    benchmark::DoNotOptimize(r.x_next);
  }
}
BENCHMARK(BM_InertialStep);

void BM_Solve(benchmark::State& state) {
  const auto method = static_cast<ikl::Method>(state.range(0));
  const auto g = ikl::quadratic_test();
  auto p = fig1c();
  if (method == ikl::Method::kNesterov) p.step = 0.0125;
  for (auto _ : state) {
    auto t = ikl::run(method, start(1, -1), start(1, -1), p, g);
    benchmark::DoNotOptimize(t.x.back());
    state.counters["iterations"] = static_cast<double>(t.steps());
  }
}
BENCHMARK(BM_Solve)
    ->Arg(static_cast<int>(ikl::Method::kInertial))
    ->Arg(static_cast<int>(ikl::Method::kPolyak))
    ->Arg(static_cast<int>(ikl::Method::kNesterov));

void BM_RosenbrockSolve(benchmark::State& state) {
  const auto g = ikl::rosenbrock_test();
  ikl::SolverParams p;
  p.step = 0.001;
  p.tol = 1e-20;
  for (auto _ : state) {
    auto t = ikl::run(ikl::Method::kInertial, start(0, 0), start(0, 0), p, g);
    benchmark::DoNotOptimize(t.x.back());
  }
}
BENCHMARK(BM_RosenbrockSolve)->Unit(benchmark::kMillisecond);

void BM_Schedule(benchmark::State& state) {
  for (auto _ : state) {
    ikl::CoefficientSchedule s(3.0, 0.5, 0.0124, 80.0);
    benchmark::DoNotOptimize(s.n_star());
  }
}
BENCHMARK(BM_Schedule);

void BM_CheckConditions(benchmark::State& state) {
  const auto& t = quadratic_trace();
  const auto g = ikl::quadratic_test();
  const ikl::CoefficientSchedule s(3.0, 0.5, 0.0124, 80.0);
  for (auto _ : state) {
    auto d = ikl::check_descent(t, s);
    auto h = ikl::check_h_conditions(t, s, g);
    benchmark::DoNotOptimize(d.passed() && h.passed());
  }
}
BENCHMARK(BM_CheckConditions);

void BM_RateAnalysis(benchmark::State& state) {
  const auto& t = quadratic_trace();
  const auto g = ikl::quadratic_test();
  const auto ref = ikl::make_reference(t, g);
  for (auto _ : state) {
    auto m = ikl::estimate_theta(t, ref, ikl::default_window(t, 1));
    auto r = ikl::classify_rate(t, ref, m, 1);
    benchmark::DoNotOptimize(r.q);
  }
}
BENCHMARK(BM_RateAnalysis);

void BM_Integrate(benchmark::State& state) {
  ikl::DampedSystem sys{1.0, 3.0, ikl::quadratic_test(), 1.0, start(1, -1), ikl::Vector::Zero(2)};
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto traj = ikl::integrate(sys, 11.0, dt);
    benchmark::DoNotOptimize(traj.x.back());
  }
}
BENCHMARK(BM_Integrate)->Arg(100)->Arg(1000);

void BM_TraceRoundTrip(benchmark::State& state) {
  const auto& t = quadratic_trace();
  for (auto _ : state) {
    std::stringstream ss;
    ikl::write_trace_csv(ss, t);
    auto back = ikl::read_trace_csv(ss);
    benchmark::DoNotOptimize(back.x.back());
  }
}
BENCHMARK(BM_TraceRoundTrip);

}  // namespace

BENCHMARK_MAIN();
