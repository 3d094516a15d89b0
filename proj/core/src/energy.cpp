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

#include "inertia_kl/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace inertia_kl {

std::size_t stabilization_index(const std::function<bool(std::size_t)>& positive,
                                std::size_t window, std::size_t cap) {
  // Track the latest failure; once `window` further indices pass, done.
  std::size_t last_bad = 0;
  for (std::size_t k = 1; k <= cap + window; ++k) {
    if (!positive(k)) {
      last_bad = k;
      if (last_bad > cap) break;
    } else if (k - last_bad > window) {
      return last_bad + 1;
    }
  }
  throw AnalysisError(
      fmt::format("no stabilization index up to {} (last failure at n={})", cap, last_bad));
}

CoefficientSchedule::CoefficientSchedule(double alpha, double beta, double step, double lipschitz)
    : alpha_(alpha), beta_(beta), step_(step), lipschitz_(lipschitz) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError(fmt::format("alpha must be positive, got {}", alpha));
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParameterError(fmt::format("beta must lie in (0, 1), got {}", beta));
  }
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw ParameterError(fmt::format("descent constant must be finite and >= 0, got {}", lipschitz));
  }
  if (!(step > 0.0) || !(step * lipschitz < 2.0 * (1.0 - beta))) {
    throw ParameterError(fmt::format("step {} violates 0 < s < 2(1-beta)/L with beta={}, L={}",
                                     step, beta, lipschitz));
  }

  const SequenceLimits lim = limits();
  if (!(lim.c > 0.0 && lim.big_delta > 0.0 && lim.delta > 0.0)) {
    throw AnalysisError(fmt::format("limits not positive (C={}, Delta={}, delta={})", lim.c,
                                    lim.big_delta, lim.delta));
  }

  n_star_ = stabilization_index(
      [this](std::size_t k) { return c(k) > 0.0 && big_delta(k) > 0.0 && delta(k) > 0.0; },
      kPositivityWindow, kScanCap);
}

double CoefficientSchedule::a(std::size_t n) const {
  const double tn = t(n + 1);
  return kappa() * (1.0 + tn) * (1.0 + tn) - tn * (1.0 + tn) / step_;
}

double CoefficientSchedule::b(std::size_t n) const {
  const double tn = t(n);
  return kappa() * tn * tn;
}

double CoefficientSchedule::c(std::size_t n) const {
  const double tn = t(n);
  const double tn1 = t(n + 1);
  return kappa() * tn * (1.0 + tn1) - tn * tn1 / (2.0 * step_);
}

double CoefficientSchedule::delta(std::size_t n) const {
  if (n == 0) throw ParameterError("delta_n is defined for n >= 1");
  return a(n - 1) - c(n - 1);
}

double CoefficientSchedule::big_delta(std::size_t n) const {
  if (n == 0) throw ParameterError("Delta_n is defined for n >= 1");
  return b(n) + a(n - 1) - c(n - 1) - c(n);
}

double CoefficientSchedule::delta_direct(std::size_t n) const {
  if (n == 0) throw ParameterError("delta_n is defined for n >= 1");
  const double tn = t(n);
  const double tp = t(n - 1);
  return (1.0 + tn) * (kappa() * (1.0 + tn - tp) - tn / step_) + tp * tn / (2.0 * step_);
}

SequenceLimits CoefficientSchedule::limits() const {
  const double s = step_;
  const double b = beta_;
  const double q = 2.0 - s * lipschitz_;
  SequenceLimits lim{};
  lim.a = (q * (b + 1.0) * (b + 1.0) - 2.0 * b - 2.0 * b * b) / (2.0 * s);
  lim.b = q * b * b / (2.0 * s);
  lim.c = (q * (b * b + b) - b * b) / (2.0 * s);
  lim.big_delta = (q - 2.0 * b) / (2.0 * s);
  lim.delta = (2.0 - b * b - s * lipschitz_ * (b + 1.0)) / (2.0 * s);
  return lim;
}

SequenceValues sequences(const CoefficientSchedule& schedule, std::size_t n) {
  if (n == 0) throw ParameterError("sequences are indexed from n = 1");
  SequenceValues v{};
  v.a_prev = schedule.a(n - 1);
  v.b = schedule.b(n);
  v.c_prev = schedule.c(n - 1);
  v.big_delta = schedule.big_delta(n);
  v.delta = schedule.delta(n);
  return v;
}

double h_value(const ObjectiveOracle& g, const Vector& x, const Vector& y) {
  return g.value(x) + 0.5 * (y - x).squaredNorm();
}

std::pair<Vector, Vector> h_gradient(const ObjectiveOracle& g, const Vector& x, const Vector& y) {
  Vector gx = g.gradient(x) + x - y;
  Vector gy = y - x;
  return {std::move(gx), std::move(gy)};
}

namespace {

void require_matching(const Trace& trace, const CoefficientSchedule& schedule) {
  if (trace.method != Method::kInertial) {
    throw ParameterError(fmt::format("trace method is {}, expected inertial", to_string(trace.method)));
  }
  const SolverParams& p = trace.params;
  if (p.alpha != schedule.alpha() || p.beta != schedule.beta() || p.step != schedule.step()) {
    throw ParameterError(fmt::format(
        "trace parameters (alpha={}, beta={}, s={}) differ from schedule (alpha={}, beta={}, s={})",
        p.alpha, p.beta, p.step, schedule.alpha(), schedule.beta(), schedule.step()));
  }
}

std::size_t first_checked(const CoefficientSchedule& schedule, const CheckOptions& options) {
  return std::max<std::size_t>(schedule.n_star(), std::max<std::size_t>(options.burn_in, 1));
}

double energy(const Trace& trace, const CoefficientSchedule& schedule, std::size_t n) {
  const auto i = static_cast<std::ptrdiff_t>(n);
  return trace.gy[n] + schedule.delta(n) * (trace.iterate(i) - trace.iterate(i - 1)).squaredNorm();
}

}  // namespace

ConditionCheck make_check(std::string name, std::size_t first_index, std::vector<double> residuals,
                          double slack) {
  ConditionCheck check;
  check.name = std::move(name);
  check.first_index = first_index;
  check.residuals = std::move(residuals);
  check.worst_residual = check.residuals.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < check.residuals.size(); ++i) {
    const double r = check.residuals[i];
    check.worst_residual = std::min(check.worst_residual, r);
    if (!(r >= -slack) && check.passed) {
      check.passed = false;
      check.first_failure = first_index + i;
    }
  }
  return check;
}

bool ConditionReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
}

const ConditionCheck* ConditionReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ZSequence build_z_sequence(const Trace& trace, const CoefficientSchedule& schedule,
                           std::optional<std::size_t> offset) {
  require_matching(trace, schedule);
  const std::size_t shift = offset.value_or(schedule.n_star());
  if (shift == 0) throw ParameterError("z-sequence offset must be >= 1");
  const std::size_t steps = trace.steps();
  if (steps < shift + 2) {
    throw AnalysisError(fmt::format("trace has {} steps, need at least N+2 = {}", steps, shift + 2));
  }
  ZSequence out;
  out.offset = shift;
  for (std::size_t m = shift; m <= steps - 1; ++m) {
    const auto i = static_cast<std::ptrdiff_t>(m);
    const Vector dx = trace.iterate(i) - trace.iterate(i - 1);
    RegularizedPoint p;
    p.alpha_n = inertial_coefficient(m, schedule.alpha(), schedule.beta());
    p.beta_n = std::sqrt(2.0 * schedule.delta(m)) + p.alpha_n;
    p.v = trace.iterate(i) + p.alpha_n * dx;
    p.w = trace.iterate(i) + p.beta_n * dx;
    out.u.push_back(std::sqrt(2.0 * schedule.delta(m)) * dx + trace.y[m]);
    out.z.push_back(std::move(p));
  }
  return out;
}

ConditionReport check_descent(const Trace& trace, const CoefficientSchedule& schedule,
                              const CheckOptions& options) {
  require_matching(trace, schedule);
  ConditionReport report;
  report.n_star = schedule.n_star();
  report.start = first_checked(schedule, options);
  report.slack = options.slack;
  report.lipschitz = schedule.lipschitz();

  const std::size_t steps = trace.steps();
  if (steps < report.start + 2) {
    throw AnalysisError(fmt::format("trace has {} steps, need at least {}", steps, report.start + 2));
  }

  std::vector<double> descent;
  std::vector<double> mono;
  for (std::size_t n = report.start; n + 2 <= steps; ++n) {
    const auto i = static_cast<std::ptrdiff_t>(n);
    const Vector& xp = trace.iterate(i - 1);
    const Vector& x = trace.iterate(i);
    const Vector& xn = trace.iterate(i + 1);
    const double lhs = schedule.c(n) * (xn + xp - 2.0 * x).squaredNorm() +
                       schedule.big_delta(n) * (x - xp).squaredNorm();
    const double drop = energy(trace, schedule, n) - energy(trace, schedule, n + 1);
    descent.push_back(drop - lhs);
    mono.push_back(drop);
  }
  report.checks.push_back(make_check("descent", report.start, std::move(descent), options.slack));
  report.checks.push_back(make_check("energy", report.start, std::move(mono), options.slack));
  return report;
}

ConditionReport check_h_conditions(const Trace& trace, const CoefficientSchedule& schedule,
                                   const ObjectiveOracle& oracle, const CheckOptions& options) {
  require_matching(trace, schedule);
  ConditionReport report;
  report.n_star = schedule.n_star();
  report.start = first_checked(schedule, options);
  report.slack = options.slack;
  report.lipschitz = schedule.lipschitz();

  const ZSequence zs = build_z_sequence(trace, schedule, report.start);
  const std::size_t shift = zs.offset;
  const std::size_t count = zs.z.size();
  const std::size_t last = shift + count - 1;  // == T - 1
  const double s = schedule.step();
  const SequenceLimits lim = schedule.limits();

  double d = lim.big_delta;
  double bsup = std::sqrt(2.0) * schedule.beta() / s + std::sqrt(6.0 * lim.delta);
  double csup = 2.0 * schedule.beta() + std::sqrt(2.0 * lim.delta);
  for (std::size_t m = shift; m <= last; ++m) {
    const double am = inertial_coefficient(m, schedule.alpha(), schedule.beta());
    d = std::min(d, schedule.big_delta(m));
    bsup = std::max(bsup, std::sqrt(2.0) * am / s + std::sqrt(6.0 * schedule.delta(m)));
    const double bm = std::sqrt(2.0 * schedule.delta(m)) + am;
    csup = std::max(csup, std::abs(am) + std::abs(bm));
  }
  report.a = d;
  report.b = std::max(std::sqrt(2.0) / s, bsup);
  report.c = csup;
  report.c1 = 2.0 + csup;
  report.c2 = csup;

  const auto xt = [&](std::size_t n) -> const Vector& {
    return trace.iterate(static_cast<std::ptrdiff_t>(n + shift));
  };
  const auto xt_prev = [&](std::size_t n) -> const Vector& {
    return trace.iterate(static_cast<std::ptrdiff_t>(n + shift) - 1);
  };

  std::vector<double> h(count);
  for (std::size_t n = 0; n < count; ++n) h[n] = h_value(oracle, zs.z[n].v, zs.z[n].w);

  std::vector<double> h1;
  for (std::size_t n = 0; n + 1 < count; ++n) {
    const double lhs = report.a * (xt(n) - xt_prev(n)).squaredNorm();
    h1.push_back((h[n] - h[n + 1]) - lhs);
  }

  std::vector<double> h2;
  for (std::size_t n = 0; n < count; ++n) {
    const auto [gv, gw] = h_gradient(oracle, zs.z[n].v, zs.z[n].w);
    const double lhs = std::sqrt(gv.squaredNorm() + gw.squaredNorm());
    const Vector& next = trace.iterate(static_cast<std::ptrdiff_t>(n + shift) + 1);
    const double rhs = report.b * ((next - xt(n)).norm() + (xt(n) - xt_prev(n)).norm());
    h2.push_back(rhs - lhs);
  }

  std::vector<Vector> samples = options.h3_samples;
  if (samples.empty()) {
    if (const auto& m = oracle.known_minimizer()) samples.push_back(m->point);
    samples.push_back(trace.x.front());
    samples.push_back(trace.x.back());
  }
  std::vector<double> h3;
  for (std::size_t n = 0; n < count; ++n) {
    double worst = std::numeric_limits<double>::infinity();
    for (const Vector& p : samples) {
      const double lhs =
          std::sqrt((zs.z[n].v - p).squaredNorm() + (zs.z[n].w - p).squaredNorm());
      const double rhs = report.c1 * (xt(n) - p).norm() + report.c2 * (xt_prev(n) - p).norm();
      worst = std::min(worst, rhs - lhs);
    }
    h3.push_back(worst);
  }

  report.h3_samples = std::move(samples);
  report.checks.push_back(make_check("H1", shift, std::move(h1), options.slack));
  report.checks.push_back(make_check("H2", shift, std::move(h2), options.slack));
  report.checks.push_back(make_check("H3", shift, std::move(h3), options.slack));
  return report;
}

SummabilityReport check_square_summability(const Trace& trace, const CoefficientSchedule& schedule,
                                           const CheckOptions& options) {
  require_matching(trace, schedule);
  SummabilityReport out;
  out.start = first_checked(schedule, options);
  const std::size_t steps = trace.steps();
  if (steps < out.start + 2) {
    throw AnalysisError(fmt::format("trace has {} steps, need at least {}", steps, out.start + 2));
  }
  double d = schedule.limits().big_delta;
  double emin = std::numeric_limits<double>::infinity();
  for (std::size_t n = out.start; n + 1 <= steps; ++n) {
    if (n + 2 <= steps) {
      const auto i = static_cast<std::ptrdiff_t>(n);
      out.tail_sum += (trace.iterate(i) - trace.iterate(i - 1)).squaredNorm();
      d = std::min(d, schedule.big_delta(n));
    }
    emin = std::min(emin, energy(trace, schedule, n));
  }
  out.bound = (energy(trace, schedule, out.start) - emin) / d;
  out.passed = out.tail_sum <= out.bound + options.slack / d;
  return out;
}

double realized_curvature(const Trace& trace, const ObjectiveOracle& oracle, std::size_t from) {
  double kmax = 0.0;
  for (std::size_t n = from; n + 1 < trace.steps(); ++n) {
    const Vector dy = trace.y[n + 1] - trace.y[n];
    const double dy2 = dy.squaredNorm();
    if (!(dy2 > 1e-12 * std::max(1.0, std::abs(trace.gy[n])))) continue;
    const double lin = oracle.gradient(trace.y[n]).dot(dy);
    const double k = 2.0 * (trace.gy[n + 1] - trace.gy[n] - lin) / dy2;
    if (std::isfinite(k)) kmax = std::max(kmax, k);
  }
  return kmax;
}

TraceSchedule schedule_for_trace(const Trace& trace, const ObjectiveOracle& oracle,
                                 std::optional<double> lipschitz_override) {
  const SolverParams& p = trace.params;
  const std::optional<double> known = lipschitz_override ? lipschitz_override : oracle.lipschitz();
  if (known) return TraceSchedule{CoefficientSchedule(p.alpha, p.beta, p.step, *known), 0, false};

  const double limit = 2.0 * (1.0 - p.beta) / p.step;
  for (std::size_t burn = 0; 2 * burn <= trace.steps(); burn = burn == 0 ? 1 : 2 * burn) {
    const double l = realized_curvature(trace, oracle, burn);
    if (l < limit) return TraceSchedule{CoefficientSchedule(p.alpha, p.beta, p.step, l), burn, true};
  }
  throw AnalysisError(
      fmt::format("no burn-in makes the realized curvature compatible with s={}", p.step));
}

}  // namespace inertia_kl
