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
#include <vector>

#include "inertia_kl/functions.hpp"
#include "inertia_kl/types.hpp"

namespace inertia_kl {

/// x'' + (gamma + alpha/t) x' + grad g(x) = 0 with x(t0) = u0, x'(t0) = v0.
struct DampedSystem {
  double gamma = 0.0;
  double alpha = 0.0;
  ObjectiveOracle oracle;
  double t0 = 1.0;
  Vector u0;
  Vector v0;
};

struct ContinuousTrajectory {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> v;
  /// g(x) + 1/2 ||x'||^2
  std::vector<double> energy;
  /// The state went non-finite; the trajectory stops at the last finite point.
  bool diverged = false;
};

/// Classical RK4 on (x, v)' = (v, -(gamma + alpha/t) v - grad g(x)) over the
/// uniform grid t0 + i h, h = (t_end - t0)/ceil((t_end - t0)/dt).
/// Throws ParameterError unless gamma >= 0, t0 > 0, t_end > t0,
/// 0 < dt <= t_end - t0 and u0, v0 match the oracle's dimension.
ContinuousTrajectory integrate(const DampedSystem& system, double t_end, double dt);

/// beta = 1 - gamma h and s = h^2. With t = n h the damping (gamma + alpha/t)
/// becomes the extrapolation coefficient beta n/(n + alpha) after shifting
/// n to n + alpha.
struct DiscreteParams {
  double alpha = 0.0;
  double beta = 0.0;
  double step = 0.0;
};

/// Throws ParameterError when h <= 0 or beta falls outside (0, 1).
DiscreteParams discretize_to_algorithm(double gamma, double h, double alpha);

struct ConsistencyRow {
  double step = 0.0;
  double beta = 0.0;
  /// s < 2(1 - beta)/L for the oracle's L (true when L is unknown).
  bool step_valid = true;
  /// max_n ||x_n - x(n sqrt(s))|| over 1 <= n <= horizon/sqrt(s).
  double discrepancy = 0.0;
  std::optional<std::string> error;
};

/// For each s: runs the inertial method with beta = 1 - gamma sqrt(s) from
/// x_0 = x_{-1} = start and integrates the ODE from t0 = sqrt(s) with
/// x(t0) = x_1, x'(t0) = (x_0 - x_{-1})/sqrt(s), using `substeps` RK4 steps
/// per sqrt(s). Rows with beta outside (0, 1) carry an error and no distance.
/// Throws ParameterError unless s values are positive and strictly
/// decreasing and horizon > sqrt(s_max).
std::vector<ConsistencyRow> limit_consistency(const ObjectiveOracle& oracle, double gamma,
                                              double alpha, const std::vector<double>& steps,
                                              double horizon, const Vector& start,
                                              std::size_t substeps = 16);

/// Every computed row has a smaller discrepancy than the computed row before.
bool strictly_decreasing(const std::vector<ConsistencyRow>& rows);

}  // namespace inertia_kl
