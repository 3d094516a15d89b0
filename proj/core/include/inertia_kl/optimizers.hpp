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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inertia_kl/functions.hpp"
#include "inertia_kl/types.hpp"

namespace inertia_kl {

enum class Method { kInertial, kPolyak, kNesterov, kGradientDescent };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

enum class StopRule {
  /// |g(x_{n+1}) - g(x_n)| <= tol.
  kValueChange,
  /// ||grad|| at the evaluated point <= tol. Not used by the reference experiments.
  kGradientNorm,
};

struct SolverParams {
  double alpha = 3.0;
  double beta = 0.5;
  double step = 0.01;
  std::size_t max_iters = 1'000'000;
  double tol = 1e-15;
  StopRule stop_rule = StopRule::kValueChange;
};

/// Throws ParameterError unless `params` are admissible for `method` on
/// `oracle`:
///  - inertial, polyak: alpha > 0, 0 < beta < 1, 0 < step, and
///    step < 2(1-beta)/L when the oracle carries L;
///  - nesterov: 0 < step <= 1/L when L is known (alpha, beta unused);
///  - gradient descent: step > 0.
void validate(Method method, const SolverParams& params, const ObjectiveOracle& oracle);

/// beta * n / (n + alpha).
inline double inertial_coefficient(std::size_t n, double alpha, double beta) {
  const double dn = static_cast<double>(n);
  return beta * dn / (dn + alpha);
}

struct StepResult {
  Vector x_next;
  Vector y;
  /// The gradient the step used (at y_n, or at x_n for Polyak).
  Vector gradient;
};

// The step kernels do not validate params; run() does. Non-finite gradients
// raise DivergenceError carrying n.

/// y_n = x_n + beta n/(n+alpha) (x_n - x_{n-1}),  x_{n+1} = y_n - s grad g(y_n).
StepResult inertial_step(const Vector& x, const Vector& x_prev, std::size_t n,
                         const SolverParams& params, const ObjectiveOracle& oracle);

/// Heavy ball: same extrapolation, gradient taken at x_n.
StepResult polyak_step(const Vector& x, const Vector& x_prev, std::size_t n,
                       const SolverParams& params, const ObjectiveOracle& oracle);

/// y_n = x_n + n/(n+3) (x_n - x_{n-1}),  x_{n+1} = y_n - s grad g(y_n).
StepResult nesterov_step(const Vector& x, const Vector& x_prev, std::size_t n, double step,
                         const ObjectiveOracle& oracle);

Vector gradient_descent_step(const Vector& x, double step, const ObjectiveOracle& oracle);

enum class Termination { kConverged, kIterationCap, kDiverged };

std::string_view to_string(Termination termination);
std::optional<Termination> parse_termination(std::string_view name);

/// Iterate history of one run. With T = steps():
///   x[0..T]   iterates x_0..x_T (x_{-1} kept in x_minus1)
///   y[0..T-1] evaluation points (y_n = x_n for gradient descent)
///   gx[0..T]  g(x_n);  gy, grad_norm, err have length T.
/// grad_norm is ||grad g(y_n)|| except for Polyak and gradient descent where it
/// is ||grad g(x_n)||. err[n] = |g(x_{n+1}) - g(x_n)|.
struct Trace {
  Method method = Method::kInertial;
  SolverParams params;
  std::string oracle_id;
  Vector x_minus1;
  std::vector<Vector> x;
  std::vector<Vector> y;
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> grad_norm;
  std::vector<double> err;
  Termination termination = Termination::kIterationCap;

  std::size_t steps() const noexcept { return y.size(); }

  /// x_n for n >= -1.
  const Vector& iterate(std::ptrdiff_t n) const { return n < 0 ? x_minus1 : x.at(n); }
};

/// Runs `method` from (x0, x_minus1) until the stop rule fires, max_iters
/// steps have been taken, or a non-finite value shows up (partial trace kept).
/// Throws ParameterError for inadmissible params or non-finite start points.
Trace run(Method method, const Vector& x0, const Vector& x_minus1, const SolverParams& params,
          const ObjectiveOracle& oracle);

}  // namespace inertia_kl
