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

#include "inertia_kl/optimizers.hpp"

#include <cmath>
#include <string>

namespace inertia_kl {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kInertial: return "inertial";
    case Method::kPolyak: return "polyak";
    case Method::kNesterov: return "nesterov";
    case Method::kGradientDescent: return "gd";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "inertial") return Method::kInertial;
  if (name == "polyak") return Method::kPolyak;
  if (name == "nesterov") return Method::kNesterov;
  if (name == "gd") return Method::kGradientDescent;
  return std::nullopt;
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::kConverged: return "converged";
    case Termination::kIterationCap: return "iteration_cap";
    case Termination::kDiverged: return "diverged";
  }
  return "unknown";
}

std::optional<Termination> parse_termination(std::string_view name) {
  if (name == "converged") return Termination::kConverged;
  if (name == "iteration_cap") return Termination::kIterationCap;
  if (name == "diverged") return Termination::kDiverged;
  return std::nullopt;
}

void validate(Method method, const SolverParams& params, const ObjectiveOracle& oracle) {
  if (!(params.step > 0.0) || !std::isfinite(params.step)) {
    throw ParameterError("step must be positive and finite");
  }
  if (params.max_iters == 0) throw ParameterError("max_iters must be positive");
  if (!(params.tol >= 0.0)) throw ParameterError("tol must be nonnegative");

  const auto& lip = oracle.lipschitz();
  switch (method) {
    case Method::kInertial:
    case Method::kPolyak:
      if (!(params.alpha > 0.0)) throw ParameterError("alpha must be positive");
      if (!(params.beta > 0.0 && params.beta < 1.0)) {
        throw ParameterError("beta must lie in (0,1)");
      }
      if (lip && *lip > 0.0 && !(params.step < 2.0 * (1.0 - params.beta) / *lip)) {
        throw ParameterError("step " + std::to_string(params.step) +
                             " violates s < 2(1-beta)/L = " +
                             std::to_string(2.0 * (1.0 - params.beta) / *lip));
      }
      break;
    case Method::kNesterov:
      if (lip && *lip > 0.0 && !(params.step <= 1.0 / *lip)) {
        throw ParameterError("nesterov step must satisfy s <= 1/L");
      }
      break;
    case Method::kGradientDescent:
      break;
  }
}

namespace {

Vector checked_gradient(const ObjectiveOracle& oracle, const Vector& at, std::size_t n) {
  Vector g = oracle.gradient(at);
  if (!g.allFinite()) {
    throw DivergenceError("non-finite gradient at iteration " + std::to_string(n), n);
  }
  return g;
}

}  // namespace

StepResult inertial_step(const Vector& x, const Vector& x_prev, std::size_t n,
                         const SolverParams& params, const ObjectiveOracle& oracle) {
  Vector y = x + inertial_coefficient(n, params.alpha, params.beta) * (x - x_prev);
  Vector g = checked_gradient(oracle, y, n);
  Vector x_next = y - params.step * g;
  return {std::move(x_next), std::move(y), std::move(g)};
}

StepResult polyak_step(const Vector& x, const Vector& x_prev, std::size_t n,
                       const SolverParams& params, const ObjectiveOracle& oracle) {
  Vector y = x + inertial_coefficient(n, params.alpha, params.beta) * (x - x_prev);
  Vector g = checked_gradient(oracle, x, n);
  Vector x_next = y - params.step * g;
  return {std::move(x_next), std::move(y), std::move(g)};
}

StepResult nesterov_step(const Vector& x, const Vector& x_prev, std::size_t n, double step,
                         const ObjectiveOracle& oracle) {
  const double dn = static_cast<double>(n);
  Vector y = x + (dn / (dn + 3.0)) * (x - x_prev);
  Vector g = checked_gradient(oracle, y, n);
  Vector x_next = y - step * g;
  return {std::move(x_next), std::move(y), std::move(g)};
}

Vector gradient_descent_step(const Vector& x, double step, const ObjectiveOracle& oracle) {
  return x - step * checked_gradient(oracle, x, 0);
}

Trace run(Method method, const Vector& x0, const Vector& x_minus1, const SolverParams& params,
          const ObjectiveOracle& oracle) {
  validate(method, params, oracle);
  if (x0.size() != oracle.dimension() || x_minus1.size() != oracle.dimension()) {
    throw ParameterError("start points have the wrong dimension");
  }
  if (!x0.allFinite() || !x_minus1.allFinite()) {
    throw ParameterError("start points must be finite");
  }

  Trace trace;
  trace.method = method;
  trace.params = params;
  trace.oracle_id = oracle.id();
  trace.x_minus1 = x_minus1;
  trace.x.push_back(x0);
  trace.gx.push_back(oracle.value(x0));
  if (!std::isfinite(trace.gx.front())) {
    trace.termination = Termination::kDiverged;
    return trace;
  }

  trace.termination = Termination::kIterationCap;
  for (std::size_t n = 0; n < params.max_iters; ++n) {
    const Vector& xn = trace.x.back();
    const Vector& xp = n == 0 ? trace.x_minus1 : trace.x[n - 1];

    StepResult step;
    try {
      switch (method) {
        case Method::kInertial:
          step = inertial_step(xn, xp, n, params, oracle);
          break;
        case Method::kPolyak:
          step = polyak_step(xn, xp, n, params, oracle);
          break;
        case Method::kNesterov:
          step = nesterov_step(xn, xp, n, params.step, oracle);
          break;
        case Method::kGradientDescent:
          step.y = xn;
          step.gradient = checked_gradient(oracle, xn, n);
          step.x_next = xn - params.step * step.gradient;
          break;
      }
    } catch (const DivergenceError&) {
      trace.termination = Termination::kDiverged;
      break;
    }

    const double g_next = oracle.value(step.x_next);
    const double g_y = method == Method::kGradientDescent ? trace.gx.back() : oracle.value(step.y);
    if (!step.x_next.allFinite() || !std::isfinite(g_next) || !std::isfinite(g_y)) {
      trace.termination = Termination::kDiverged;
      break;
    }

    const double err = std::abs(g_next - trace.gx.back());
    const double grad_norm = step.gradient.norm();
    trace.y.push_back(std::move(step.y));
    trace.x.push_back(std::move(step.x_next));
    trace.gy.push_back(g_y);
    trace.gx.push_back(g_next);
    trace.grad_norm.push_back(grad_norm);
    trace.err.push_back(err);

    const double measure = params.stop_rule == StopRule::kValueChange ? err : grad_norm;
    if (measure <= params.tol) {
      trace.termination = Termination::kConverged;
      break;
    }
  }
  return trace;
}

}  // namespace inertia_kl
