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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inertia_kl/types.hpp"

namespace inertia_kl {

struct Minimizer {
  Vector point;
  double value = 0.0;
};

/// Axis-aligned box used as a sampling region.
struct Box {
  Vector lower;
  Vector upper;
};

/// Smooth objective g: R^m -> R with its gradient, an optional global
/// Lipschitz constant of the gradient, and an optional known minimizer.
///
/// Oracles are immutable after construction; value() and gradient() may be
/// called concurrently.
class ObjectiveOracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  ObjectiveOracle(std::string id, Eigen::Index dimension, ValueFn value, GradientFn gradient,
                  std::optional<double> lipschitz = std::nullopt,
                  std::optional<Minimizer> minimizer = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  Eigen::Index dimension() const noexcept { return dimension_; }

  double value(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const { return gradient_(x); }

  const std::optional<double>& lipschitz() const noexcept { return lipschitz_; }
  const std::optional<Minimizer>& known_minimizer() const noexcept { return minimizer_; }

  /// Copy of this oracle carrying `lipschitz` as its gradient Lipschitz constant.
  ObjectiveOracle with_lipschitz(std::optional<double> lipschitz) const;

 private:
  std::string id_;
  Eigen::Index dimension_;
  ValueFn value_;
  GradientFn gradient_;
  std::optional<double> lipschitz_;
  std::optional<Minimizer> minimizer_;
};

/// g(x,y) = 2x^2 + 40y^2 + 4xy + 20x - 56y + 88, minimum 0 at (-6,1).
/// Carries L_g = 80 (the exact spectral norm of the Hessian is ~80.21).
ObjectiveOracle quadratic_test();

/// Beale's function, minimum 0 at (3, 0.5). No global Lipschitz constant.
ObjectiveOracle beale_test();

/// g(x,y) = 100(x^2 - y)^2 + (x-1)^2, minimum 0 at (1,1). No global Lipschitz constant.
ObjectiveOracle rosenbrock_test();

/// g(x) = ||x||^4 in R^dimension. Convex, minimum 0 at the origin, Lojasiewicz
/// exponent 3/4 there.
ObjectiveOracle quartic_test(Eigen::Index dimension);

/// g(x) = <c, x>. Constant gradient, so its Lipschitz constant is 0.
ObjectiveOracle linear_test(Vector c);

/// Lookup by id: "quadratic", "beale", "rosenbrock", "quartic" (2-D), "quartic1d".
std::optional<ObjectiveOracle> builtin_oracle(std::string_view id);
std::vector<std::string> builtin_oracle_ids();

/// Thrown by gradient_check when eval or grad is non-finite at a point.
class GradientCheckError : public AnalysisError {
 public:
  GradientCheckError(const std::string& what, Vector point)
      : AnalysisError(what), point_(std::move(point)) {}
  const Vector& point() const noexcept { return point_; }

 private:
  Vector point_;
};

/// Largest per-coordinate deviation between the analytic gradient and the
/// central difference (g(x+h e_i) - g(x-h e_i)) / 2h over all points.
/// Deviations are scaled by max(1, |analytic|, |numeric|), so they are
/// relative for large gradients and absolute near critical points.
double gradient_check(const ObjectiveOracle& oracle, std::span<const Vector> points,
                      double h = 1e-5);

/// Sampled lower estimate of the gradient Lipschitz constant on `region`:
/// max over `samples` random pairs of ||grad(x)-grad(y)|| / ||x-y||.
/// Pairs are drawn in sequence from a generator seeded with `seed`, so a
/// larger sample count extends (never reorders) the set of pairs.
double estimate_lipschitz(const ObjectiveOracle& oracle, const Box& region, std::size_t samples,
                          std::uint64_t seed);

}  // namespace inertia_kl
