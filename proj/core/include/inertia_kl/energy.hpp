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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inertia_kl/functions.hpp"
#include "inertia_kl/optimizers.hpp"
#include "inertia_kl/types.hpp"

namespace inertia_kl {

/// Smallest n >= 1 such that positive(k) holds for every k in [n, n + window].
/// Throws AnalysisError when no such n <= cap exists.
std::size_t stabilization_index(const std::function<bool(std::size_t)>& positive,
                                std::size_t window, std::size_t cap);

/// Closed-form n -> infinity limits of the auxiliary sequences.
struct SequenceLimits {
  double a;
  double b;
  double c;
  double big_delta;
  double delta;
};

/// The five sequences at one index n >= 1, following the displayed
/// definitions with their shifted indices.
struct SequenceValues {
  double a_prev;     // A_{n-1}
  double b;          // B_n
  double c_prev;     // C_{n-1}
  double big_delta;  // Delta_n = B_n + A_{n-1} - C_{n-1} - C_n
  double delta;      // delta_n = A_{n-1} - C_{n-1}
};

/// Coefficients of the sufficient-decrease inequality for the inertial method
/// with parameters (alpha, beta, s) and descent constant L.
///
/// With t_n = beta n/(n+alpha) and k = (2 - sL)/(2s):
///   A_{n-1} = k (1+t_n)^2 - t_n (1+t_n)/s
///   B_n     = k t_n^2
///   C_{n-1} = k t_{n-1} (1+t_n) - t_{n-1} t_n / (2s)
/// which is the rational form in n written in terms of the extrapolation
/// coefficients. C_0 = 0.
///
/// n_star() is the smallest n >= 1 such that C_k, Delta_k, delta_k > 0 for
/// every k in [n, n+1000], searched up to 10^6; construction fails if it does
/// not exist or a limit is nonpositive.
class CoefficientSchedule {
 public:
  static constexpr std::size_t kPositivityWindow = 1000;
  static constexpr std::size_t kScanCap = 1'000'000;

  /// Throws ParameterError unless alpha > 0, 0 < beta < 1, L >= 0 and
  /// 0 < step < 2(1-beta)/L; AnalysisError if no stabilization index exists.
  CoefficientSchedule(double alpha, double beta, double step, double lipschitz);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double step() const noexcept { return step_; }
  double lipschitz() const noexcept { return lipschitz_; }
  std::size_t n_star() const noexcept { return n_star_; }

  double a(std::size_t n) const;          // A_n, n >= 0
  double b(std::size_t n) const;          // B_n, n >= 0
  double c(std::size_t n) const;          // C_n, n >= 0
  double delta(std::size_t n) const;      // delta_n = A_{n-1} - C_{n-1}, n >= 1
  double big_delta(std::size_t n) const;  // Delta_n, n >= 1

  /// delta_n from a single fused expression, independent of a() and c().
  double delta_direct(std::size_t n) const;

  SequenceLimits limits() const;

 private:
  double t(std::size_t n) const { return inertial_coefficient(n, alpha_, beta_); }
  double kappa() const { return (2.0 - step_ * lipschitz_) / (2.0 * step_); }

  double alpha_;
  double beta_;
  double step_;
  double lipschitz_;
  std::size_t n_star_ = 0;
};

/// (A_{n-1}, B_n, C_{n-1}, Delta_n, delta_n) for n >= 1.
SequenceValues sequences(const CoefficientSchedule& schedule, std::size_t n);

/// H(x, y) = g(x) + 1/2 ||y - x||^2.
double h_value(const ObjectiveOracle& g, const Vector& x, const Vector& y);

/// grad H(x, y) = (grad g(x) + x - y, y - x).
std::pair<Vector, Vector> h_gradient(const ObjectiveOracle& g, const Vector& x, const Vector& y);

/// z_n = (v_n, w_n) with v_n = x~_n + alpha_n (x~_n - x~_{n-1}) and
/// w_n = x~_n + beta_n (x~_n - x~_{n-1}), x~_n = x_{n+N}.
struct RegularizedPoint {
  Vector v;
  Vector w;
  double alpha_n = 0.0;
  double beta_n = 0.0;
};

struct ZSequence {
  /// N: the shift between z-indices and trace indices.
  std::size_t offset = 0;
  std::vector<RegularizedPoint> z;
  /// u_{n+N} = sqrt(2 delta_{n+N}) (x_{n+N} - x_{n+N-1}) + y_{n+N}.
  std::vector<Vector> u;
};

/// Builds z_n for every n with n + offset <= T - 1. `offset` defaults to the
/// schedule's n_star(). Throws AnalysisError when the trace has fewer than
/// offset + 2 steps.
ZSequence build_z_sequence(const Trace& trace, const CoefficientSchedule& schedule,
                           std::optional<std::size_t> offset = std::nullopt);

/// Per-index outcome of one inequality lhs <= rhs + slack along a trace.
struct ConditionCheck {
  std::string name;
  /// Trace index of residuals[0].
  std::size_t first_index = 0;
  /// rhs - lhs at each checked index; the check passes where this is >= -slack.
  std::vector<double> residuals;
  bool passed = true;
  std::optional<std::size_t> first_failure;
  double worst_residual = 0.0;
};

/// Fills passed / first_failure / worst_residual from the residuals.
ConditionCheck make_check(std::string name, std::size_t first_index, std::vector<double> residuals,
                          double slack);

struct ConditionReport {
  std::size_t n_star = 0;
  /// First trace index checked: max(n_star, burn-in).
  std::size_t start = 0;
  double slack = 1e-10;
  double lipschitz = 0.0;
  // Constants of (H1)-(H3); a == D.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<Vector> h3_samples;
  std::vector<ConditionCheck> checks;

  bool passed() const;
  const ConditionCheck* find(const std::string& name) const;
};

struct CheckOptions {
  double slack = 1e-10;
  /// Additional lower bound on the first checked index.
  std::size_t burn_in = 0;
  /// Diagonal points (x, x) used for (H3). Empty: the known minimizer (if
  /// any), x_0 and the final iterate.
  std::vector<Vector> h3_samples;
};

/// Verifies, for every n >= start with x_{n+1}, y_{n+1} available,
///   C_n ||x_{n+1} + x_{n-1} - 2x_n||^2 + Delta_n ||x_n - x_{n-1}||^2
///     <= E_n - E_{n+1},   E_n = g(y_n) + delta_n ||x_n - x_{n-1}||^2,
/// and that E_n is nonincreasing. Produces checks "descent" and "energy".
/// Throws ParameterError when the trace is not an inertial trace with the
/// schedule's (alpha, beta, s); AnalysisError when it is too short.
ConditionReport check_descent(const Trace& trace, const CoefficientSchedule& schedule,
                              const CheckOptions& options = {});

/// Verifies (H1), (H2), (H3) for H and the z-sequence shifted by `start`.
/// D is the minimum of Delta_n over the realized index range; b and c are the
/// suprema over the range and the limit. Produces checks "H1", "H2", "H3".
ConditionReport check_h_conditions(const Trace& trace, const CoefficientSchedule& schedule,
                                   const ObjectiveOracle& oracle,
                                   const CheckOptions& options = {});

struct SummabilityReport {
  std::size_t start = 0;
  /// sum_{n=start}^{T-2} ||x_n - x_{n-1}||^2
  double tail_sum = 0.0;
  /// (E_start - min_k E_k) / D
  double bound = 0.0;
  bool passed = false;
};

SummabilityReport check_square_summability(const Trace& trace, const CoefficientSchedule& schedule,
                                           const CheckOptions& options = {});

/// Largest secant curvature 2(g(y_{n+1}) - g(y_n) - <grad g(y_n), dy>)/||dy||^2
/// over segments n >= from. Segments with ||dy||^2 <= 1e-12 max(1, |g(y_n)|)
/// carry no usable curvature information and are skipped. Never negative.
double realized_curvature(const Trace& trace, const ObjectiveOracle& oracle, std::size_t from);

/// Schedule used to check a trace. With a known (or overriding) L the burn-in
/// is 0. Otherwise L is the realized curvature after the smallest burn-in in
/// {0, 1, 2, 4, 8, ...} that makes s < 2(1-beta)/L.
struct TraceSchedule {
  CoefficientSchedule schedule;
  std::size_t burn_in = 0;
  bool realized = false;
};

TraceSchedule schedule_for_trace(const Trace& trace, const ObjectiveOracle& oracle,
                                 std::optional<double> lipschitz_override = std::nullopt);

}  // namespace inertia_kl
