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
#include "inertia_kl/optimizers.hpp"
#include "inertia_kl/types.hpp"

namespace inertia_kl {

/// One method line in a scenario. For Nesterov `beta` only labels the run
/// (the setting it is compared in); the solver ignores it.
struct MethodSpec {
  Method method = Method::kInertial;
  double alpha = 3.0;
  double beta = 0.5;
  double step = 0.01;
};

struct Scenario {
  std::string label;   // "fig1c", "fig2", ...
  std::string figure;  // "fig1", ...
  std::string oracle_id;
  std::vector<MethodSpec> methods;
  /// x_0 = x_{-1} for every start.
  std::vector<Vector> starts;
  double tol = 1e-15;
  std::size_t max_iters = 1'000'000;
};

/// Throws ParameterError when the oracle id is unknown, a start has the wrong
/// dimension, or some method's parameters are inadmissible for the oracle.
void validate(const Scenario& scenario);

/// fig1a..fig1f, fig2, fig3, fig4, each validated.
std::vector<Scenario> builtin_scenarios();

/// Scenarios whose figure (or label) equals `id`; empty when none match.
std::vector<Scenario> figure_scenarios(std::string_view id);

struct RunOutcome {
  MethodSpec spec;
  std::size_t start_index = 0;
  Trace trace;
  /// Steps taken (== trace.steps()).
  std::size_t iterations = 0;
  double final_value = 0.0;
  std::optional<double> final_distance;
};

struct ComparisonResult {
  std::string label;
  /// Method-major, start-minor, in scenario order.
  std::vector<RunOutcome> runs;

  const RunOutcome* find(Method method, std::size_t start_index) const;
  const RunOutcome* find(Method method, double beta, std::size_t start_index) const;
};

/// INERTIA_KL_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t default_threads();

/// Runs every (method, start) cell. Cells may run on up to `threads` workers;
/// results land in fixed slots so the output does not depend on scheduling.
ComparisonResult run_comparison(const Scenario& scenario, std::size_t threads = default_threads());

/// File-name fragment for a start point: coordinates joined by 'x'.
std::string start_label(const Vector& start);

/// "<figure>_<method>_<beta>_<start>"
std::string cell_name(const Scenario& scenario, const RunOutcome& run);

}  // namespace inertia_kl
