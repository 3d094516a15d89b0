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

#include "inertia_kl/functions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

namespace inertia_kl {

ObjectiveOracle::ObjectiveOracle(std::string id, Eigen::Index dimension, ValueFn value,
                                 GradientFn gradient, std::optional<double> lipschitz,
                                 std::optional<Minimizer> minimizer)
    : id_(std::move(id)),
      dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      lipschitz_(lipschitz),
      minimizer_(std::move(minimizer)) {
  if (dimension_ <= 0) {
    throw ParameterError("oracle dimension must be positive");
  }
  if (!value_ || !gradient_) {
    throw ParameterError("oracle needs both a value and a gradient function");
  }
  if (lipschitz_ && !(*lipschitz_ >= 0.0 && std::isfinite(*lipschitz_))) {
    throw ParameterError("lipschitz constant must be finite and nonnegative");
  }
  if (minimizer_ && minimizer_->point.size() != dimension_) {
    throw ParameterError("known minimizer has the wrong dimension");
  }
}

ObjectiveOracle ObjectiveOracle::with_lipschitz(std::optional<double> lipschitz) const {
  return ObjectiveOracle(id_, dimension_, value_, gradient_, lipschitz, minimizer_);
}

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

ObjectiveOracle quadratic_test() {
  // Same polynomial as 2x^2+40y^2+4xy+20x-56y+88, expanded around (-6,1) so
  // values near the minimizer do not lose digits to cancellation.
  auto value = [](const Vector& p) {
    const double a = p[0] + 6.0;
    const double b = p[1] - 1.0;
    return 2.0 * a * a + 40.0 * b * b + 4.0 * a * b;
  };
  auto gradient = [](const Vector& p) {
    const double a = p[0] + 6.0;
    const double b = p[1] - 1.0;
    return vec2(4.0 * a + 4.0 * b, 4.0 * a + 80.0 * b);
  };
  return ObjectiveOracle("quadratic", 2, value, gradient, 80.0, Minimizer{vec2(-6.0, 1.0), 0.0});
}

ObjectiveOracle beale_test() {
  auto value = [](const Vector& p) {
    const double x = p[0], y = p[1];
    const double t1 = 1.5 - x + x * y;
    const double t2 = 2.25 - x + x * y * y;
    const double t3 = 2.625 - x + x * y * y * y;
    return t1 * t1 + t2 * t2 + t3 * t3;
  };
  auto gradient = [](const Vector& p) {
    const double x = p[0], y = p[1];
    const double y2 = y * y, y3 = y2 * y;
    const double t1 = 1.5 - x + x * y;
    const double t2 = 2.25 - x + x * y2;
    const double t3 = 2.625 - x + x * y3;
    const double gx = 2.0 * (t1 * (y - 1.0) + t2 * (y2 - 1.0) + t3 * (y3 - 1.0));
    const double gy = 2.0 * x * (t1 + 2.0 * y * t2 + 3.0 * y2 * t3);
    return vec2(gx, gy);
  };
  return ObjectiveOracle("beale", 2, value, gradient, std::nullopt, Minimizer{vec2(3.0, 0.5), 0.0});
}

ObjectiveOracle rosenbrock_test() {
  auto value = [](const Vector& p) {
    const double x = p[0], y = p[1];
    const double r = x * x - y;
    return 100.0 * r * r + (x - 1.0) * (x - 1.0);
  };
  auto gradient = [](const Vector& p) {
    const double x = p[0], y = p[1];
    const double r = x * x - y;
    return vec2(400.0 * x * r + 2.0 * (x - 1.0), -200.0 * r);
  };
  return ObjectiveOracle("rosenbrock", 2, value, gradient, std::nullopt,
                         Minimizer{vec2(1.0, 1.0), 0.0});
}

ObjectiveOracle quartic_test(Eigen::Index dimension) {
  auto value = [](const Vector& x) {
    const double r2 = x.squaredNorm();
    return r2 * r2;
  };
  auto gradient = [](const Vector& x) -> Vector { return 4.0 * x.squaredNorm() * x; };
  const std::string id = dimension == 1 ? "quartic1d" : "quartic";
  return ObjectiveOracle(id, dimension, value, gradient, std::nullopt,
                         Minimizer{Vector::Zero(dimension), 0.0});
}

ObjectiveOracle linear_test(Vector c) {
  const Eigen::Index m = c.size();
  auto value = [c](const Vector& x) { return c.dot(x); };
  auto gradient = [c](const Vector&) -> Vector { return c; };
  return ObjectiveOracle("linear", m, value, gradient, 0.0);
}

std::optional<ObjectiveOracle> builtin_oracle(std::string_view id) {
  if (id == "quadratic") return quadratic_test();
  if (id == "beale") return beale_test();
  if (id == "rosenbrock") return rosenbrock_test();
  if (id == "quartic") return quartic_test(2);
  if (id == "quartic1d") return quartic_test(1);
  return std::nullopt;
}

std::vector<std::string> builtin_oracle_ids() {
  return {"quadratic", "beale", "rosenbrock", "quartic", "quartic1d"};
}

namespace {

std::string format_point(const Vector& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

}  // namespace

double gradient_check(const ObjectiveOracle& oracle, std::span<const Vector> points, double h) {
  if (!(h > 0.0)) throw ParameterError("gradient_check: h must be positive");
  if (points.empty()) throw ParameterError("gradient_check: no points given");

  double worst = 0.0;
  for (const Vector& x : points) {
    if (x.size() != oracle.dimension()) {
      throw ParameterError("gradient_check: point has the wrong dimension");
    }
    const Vector analytic = oracle.gradient(x);
    if (!analytic.allFinite() || !std::isfinite(oracle.value(x))) {
      throw GradientCheckError("non-finite value or gradient at " + format_point(x), x);
    }
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + h;
      const double forward = oracle.value(probe);
      probe[i] = x[i] - h;
      const double backward = oracle.value(probe);
      probe[i] = x[i];
      if (!std::isfinite(forward) || !std::isfinite(backward)) {
        throw GradientCheckError("non-finite value near " + format_point(x), x);
      }
      const double numeric = (forward - backward) / (2.0 * h);
      const double scale = std::max({1.0, std::abs(analytic[i]), std::abs(numeric)});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
    }
  }
  return worst;
}

double estimate_lipschitz(const ObjectiveOracle& oracle, const Box& region, std::size_t samples,
                          std::uint64_t seed) {
  const Eigen::Index m = oracle.dimension();
  if (region.lower.size() != m || region.upper.size() != m) {
    throw ParameterError("estimate_lipschitz: region has the wrong dimension");
  }
  if (!(region.upper.array() > region.lower.array()).all()) {
    throw ParameterError("estimate_lipschitz: region is degenerate");
  }
  if (samples < 2) throw ParameterError("estimate_lipschitz: need at least 2 samples");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    Vector p(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      p[i] = region.lower[i] + (region.upper[i] - region.lower[i]) * unit(rng);
    }
    return p;
  };

  double best = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    Vector x = draw();
    Vector y = draw();
    while ((x - y).norm() == 0.0) y = draw();
    const Vector gx = oracle.gradient(x);
    const Vector gy = oracle.gradient(y);
    if (!gx.allFinite() || !gy.allFinite()) {
      throw AnalysisError("estimate_lipschitz: non-finite gradient at " + format_point(x) +
                          " or " + format_point(y));
    }
    best = std::max(best, (gx - gy).norm() / (x - y).norm());
  }
  return best;
}

}  // namespace inertia_kl
