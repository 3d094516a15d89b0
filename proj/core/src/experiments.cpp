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

#include "inertia_kl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

namespace inertia_kl {

namespace {

ObjectiveOracle resolve(const Scenario& scenario) {
  auto oracle = builtin_oracle(scenario.oracle_id);
  if (!oracle) {
    throw ParameterError(fmt::format("{}: unknown oracle '{}'", scenario.label, scenario.oracle_id));
  }
  return *std::move(oracle);
}

Vector point(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

SolverParams params_for(const Scenario& scenario, const MethodSpec& spec) {
  SolverParams p;
  p.alpha = spec.alpha;
  p.beta = spec.beta;
  p.step = spec.step;
  p.tol = scenario.tol;
  p.max_iters = scenario.max_iters;
  return p;
}

std::vector<Scenario> make_builtins() {
  std::vector<Scenario> out;

  struct Setting {
    char tag;
    double beta;
    double step;
  };
  const Setting fig1[] = {{'a', 0.1, 0.022},   {'b', 0.25, 0.0187}, {'c', 0.5, 0.0124},
                          {'d', 0.75, 0.0062}, {'e', 0.8, 0.0045},  {'f', 0.9, 0.0024}};
  for (const Setting& s : fig1) {
    Scenario sc;
    sc.label = fmt::format("fig1{}", s.tag);
    sc.figure = "fig1";
    sc.oracle_id = "quadratic";
    sc.methods = {{Method::kInertial, 3.0, s.beta, s.step},
                  {Method::kPolyak, 3.0, s.beta, s.step},
                  {Method::kNesterov, 3.0, s.beta, 0.0125}};
    sc.starts = {point(1.0, -1.0)};
    sc.tol = 1e-15;
    out.push_back(std::move(sc));
  }

  Scenario fig2;
  fig2.label = fig2.figure = "fig2";
  fig2.oracle_id = "beale";
  fig2.methods = {{Method::kInertial, 3.0, 0.5, 0.01},
                  {Method::kPolyak, 3.0, 0.5, 0.01},
                  {Method::kNesterov, 3.0, 0.5, 0.01}};
  fig2.starts = {point(1.0, 0.0), point(-1.0, -2.0), point(2.0, 2.0), point(2.4, 0.3)};
  fig2.tol = 1e-20;
  out.push_back(std::move(fig2));

  Scenario fig3;
  fig3.label = fig3.figure = "fig3";
  fig3.oracle_id = "rosenbrock";
  fig3.methods = {{Method::kInertial, 3.0, 0.5, 0.001},
                  {Method::kPolyak, 3.0, 0.5, 0.001},
                  {Method::kNesterov, 3.0, 0.5, 0.001}};
  fig3.starts = {point(-0.9, -1.0), point(0.0, 0.0), point(1.5, -0.5), point(0.9, 1.1)};
  fig3.tol = 1e-20;
  out.push_back(std::move(fig3));

  Scenario fig4;
  fig4.label = fig4.figure = "fig4";
  fig4.oracle_id = "rosenbrock";
  for (double beta : {0.1, 0.5, 0.75, 0.9}) fig4.methods.push_back({Method::kInertial, 3.0, beta, 0.001});
  fig4.starts = {point(-1.1, -0.5), point(-1.1, -0.7), point(-0.9, -1.1),
                 point(-0.8, -2.1), point(0.9, 1.1),   point(0.9, 0.6)};
  fig4.tol = 1e-20;
  out.push_back(std::move(fig4));

  for (const Scenario& sc : out) validate(sc);
  return out;
}

}  // namespace

void validate(const Scenario& scenario) {
  const ObjectiveOracle oracle = resolve(scenario);
  if (scenario.methods.empty()) throw ParameterError(fmt::format("{}: no methods", scenario.label));
  if (scenario.starts.empty()) throw ParameterError(fmt::format("{}: no starts", scenario.label));
  for (const Vector& x : scenario.starts) {
    if (x.size() != static_cast<Eigen::Index>(oracle.dimension()) || !all_finite(x)) {
      throw ParameterError(fmt::format("{}: bad start point", scenario.label));
    }
  }
  for (const MethodSpec& m : scenario.methods) {
    inertia_kl::validate(m.method, params_for(scenario, m), oracle);
  }
}

std::vector<Scenario> builtin_scenarios() {
  static const std::vector<Scenario> scenarios = make_builtins();
  return scenarios;
}

std::vector<Scenario> figure_scenarios(std::string_view id) {
  std::vector<Scenario> out;
  for (Scenario& sc : builtin_scenarios()) {
    if (sc.figure == id || sc.label == id) out.push_back(std::move(sc));
  }
  return out;
}

const RunOutcome* ComparisonResult::find(Method method, std::size_t start_index) const {
  for (const RunOutcome& r : runs) {
    if (r.spec.method == method && r.start_index == start_index) return &r;
  }
  return nullptr;
}

const RunOutcome* ComparisonResult::find(Method method, double beta, std::size_t start_index) const {
  for (const RunOutcome& r : runs) {
    if (r.spec.method == method && r.spec.beta == beta && r.start_index == start_index) return &r;
  }
  return nullptr;
}

std::size_t default_threads() {
  if (const char* env = std::getenv("INERTIA_KL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ComparisonResult run_comparison(const Scenario& scenario, std::size_t threads) {
  validate(scenario);
  const ObjectiveOracle oracle = resolve(scenario);
  const auto& minimizer = oracle.known_minimizer();

  ComparisonResult result;
  result.label = scenario.label;
  const std::size_t starts = scenario.starts.size();
  const std::size_t cells = scenario.methods.size() * starts;
  result.runs.resize(cells);

  const auto run_cell = [&](std::size_t k) {
    RunOutcome& out = result.runs[k];
    out.spec = scenario.methods[k / starts];
    out.start_index = k % starts;
    const Vector& x0 = scenario.starts[out.start_index];
    out.trace = run(out.spec.method, x0, x0, params_for(scenario, out.spec), oracle);
    out.iterations = out.trace.steps();
    out.final_value = out.trace.gx.back();
    if (minimizer) out.final_distance = (out.trace.x.back() - minimizer->point).norm();
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, cells);
  if (workers == 1) {
    for (std::size_t k = 0; k < cells; ++k) run_cell(k);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < cells; k = next++) {
        try {
          run_cell(k);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::string start_label(const Vector& start) {
  std::string out;
  for (Eigen::Index i = 0; i < start.size(); ++i) {
    if (i > 0) out += 'x';
    out += fmt::format("{}", start[i]);
  }
  return out;
}

std::string cell_name(const Scenario& scenario, const RunOutcome& run) {
  return fmt::format("{}_{}_{}_{}", scenario.figure, to_string(run.spec.method), run.spec.beta,
                     start_label(scenario.starts.at(run.start_index)));
}

}  // namespace inertia_kl
