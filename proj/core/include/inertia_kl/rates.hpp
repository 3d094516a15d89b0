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
#include <span>
#include <string>
#include <vector>

#include "inertia_kl/energy.hpp"
#include "inertia_kl/functions.hpp"
#include "inertia_kl/optimizers.hpp"
#include "inertia_kl/types.hpp"

namespace inertia_kl {

/// Minimal value (and minimizer when available) the rate analysis measures
/// against.
struct Reference {
  double g_star = 0.0;
  std::optional<Vector> x_star;
  /// Set when g_star was guessed from the trace rather than known.
  bool low_confidence = false;
};

/// g* is `g_star` when given, else the oracle's known minimum, else the best
/// value seen along the trace minus `margin` (flagged low-confidence). x* is
/// the oracle's known minimizer if any. Throws ParameterError for a negative
/// margin.
Reference make_reference(const Trace& trace, const ObjectiveOracle& oracle,
                         std::optional<double> g_star = std::nullopt, double margin = 1e-10);

/// Half-open index range [begin, end) into a trace's y_n.
struct IndexWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
};

/// [n_star + 10, T), clipped to the trace.
IndexWindow default_window(const Trace& trace, std::size_t n_star);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept. Throws AnalysisError for
/// fewer than two points or constant x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct RatelResult {
  bool holds = true;
  std::optional<std::size_t> first_violation;
};

/// Checks e_{n-l0} - e_n >= C0 e_n^{2 theta} - 1e-12 for every n >= l0
/// (e indexed from 0). Throws ParameterError unless e is positive and
/// nonincreasing, l0 >= 1, C0 > 0 and 0 <= theta < 1.
RatelResult check_ratel_recursion(std::span<const double> e, std::size_t l0, double c0,
                                  double theta);

/// Fitted |g - g*|^theta <= K ||grad g||.
struct LojasiewiczModel {
  double theta = 0.0;
  double kappa = 1.0;
  double r_squared = 0.0;
  IndexWindow window;
  std::size_t points = 0;
};

/// Least-squares slope of log ||grad g(y_n)|| against log(g(y_n) - g*) over
/// the window; the intercept is -log K. For Polyak traces the pair
/// (g(x_n), ||grad g(x_n)||) is used. Throws AnalysisError when fewer than 10
/// usable points remain or some g(y_n) equals g*.
LojasiewiczModel estimate_theta(const Trace& trace, const Reference& ref, const IndexWindow& window);

/// Same fit on raw samples of (g - g*, ||grad g||).
LojasiewiczModel estimate_theta(std::span<const double> gap, std::span<const double> grad_norm);

enum class Regime { kFinite, kLinear, kSublinear, kInconclusive };

std::string to_string(Regime regime);

/// Envelope data <= constant * profile_n on the tail. The constant is the
/// 95th percentile of data/profile; the check passes when every ratio stays
/// within 5% of it.
struct EnvelopeCheck {
  bool available = false;
  double constant = 0.0;
  double coverage = 0.0;
  double max_breach = 0.0;
  bool passed = false;
};

struct RateReport {
  Regime regime = Regime::kInconclusive;
  double theta = 0.0;
  /// Linear regime: g(y_n) - g* ~ a1 Q^n.
  std::optional<double> q;
  /// Sublinear regime: fitted exponent of n in g(y_n) - g* and the predicted
  /// -1/(2 theta - 1).
  std::optional<double> exponent;
  std::optional<double> predicted_exponent;
  /// Fitted and predicted exponents agree within 20%.
  bool exponent_consistent = false;
  double r_squared = 0.0;
  IndexWindow window;
  /// a1 / b1 analogue.
  EnvelopeCheck value_bound;
  /// a3 / b3 analogue; unavailable without x*.
  EnvelopeCheck distance_bound;
  std::optional<std::size_t> finite_index;
  bool low_confidence = false;
  std::string note;
};

/// Regime boundaries around theta in {0, 1/2} are widened by this much.
inline constexpr double kThetaBand = 0.05;

/// Classifies the tail of a converged trace. Finite convergence (20 identical
/// consecutive iterates, or an exact stationary point at g*) is detected
/// first; otherwise theta <= 1/2 + band means linear and larger theta means
/// sublinear. Fewer than 50 tail points past n_star give kInconclusive.
RateReport classify_rate(const Trace& trace, const Reference& ref, const LojasiewiczModel& model,
                         std::size_t n_star = 1);

/// p_n = delta_n - Delta_n/2, q_n = Delta_n/2, E1_n = g(y_n) + p_n ||x_n - x_{n-1}||^2 - g*.
struct ConvexEnergySeries {
  std::size_t first_index = 0;  // index of p[0], q[0], e1[0]
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> e1;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double a = 0.0;
  double b = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

struct ConvexCertificate {
  ConvexEnergySeries series;
  ConditionCheck decrease;    // (i)
  ConditionCheck quadratic;   // (ii)
  ConditionCheck tail;        // (iii)
  ConditionCheck telescoped;  // 1/B <= 1/E1_{n+1} - 1/E1_n
  /// Index from which E1 is exactly zero, if it gets there.
  std::optional<std::size_t> exact_from;
  double a1 = 0.0;
  double a2 = 0.0;
  ConditionCheck value_y;  // g(y_n) - g* <= a1/n
  ConditionCheck value_x;  // g(x_n) - g* <= a2/n
  bool passed = false;
};

/// Builds the convex-case energy along an inertial trace and checks the chain
/// of inequalities from n = N2 = max(n_star, N1) on. Needs x*; throws
/// ParameterError without it, AnalysisError when the trace is too short.
ConvexCertificate convex_rate_certificate(const Trace& trace, const Reference& ref,
                                          const CoefficientSchedule& schedule,
                                          double slack = 1e-10);

}  // namespace inertia_kl
