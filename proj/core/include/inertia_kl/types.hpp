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
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace inertia_kl {

using Vector = Eigen::VectorXd;

/// Raised when solver or schedule parameters violate their admissibility
/// constraints (e.g. beta outside (0,1) or a stepsize above 2(1-beta)/L).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value or gradient evaluated to NaN/Inf. Carries the iteration index at
/// which it happened so run loops can cut the trace there.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Input data is too short, degenerate or inconsistent for an analysis.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace inertia_kl
