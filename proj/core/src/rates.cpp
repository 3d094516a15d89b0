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

#include "inertia_kl/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace inertia_kl {

namespace {

constexpr std::size_t kMinThetaPoints = 10;
constexpr std::size_t kMinTailPoints = 50;
constexpr std::size_t kRepeatRun = 20;
constexpr double kEnvelopeQuantile = 0.95;
constexpr double kEnvelopeBreach = 0.05;

double value_at(const Trace& trace, std::size_t n) {
  return trace.method == Method::kPolyak ? trace.gx[n] : trace.gy[n];
}

// log(data_n) - log(profile_n) for every usable n, then the envelope constant
// from the 95th percentile.
EnvelopeCheck envelope(const std::vector<double>& log_ratio) {
  EnvelopeCheck out;
  if (log_ratio.empty()) return out;
  out.available = true;
  std::vector<double> sorted = log_ratio;
  std::sort(sorted.begin(), sorted.end());
  const auto k = static_cast<std::size_t>(
      std::ceil(kEnvelopeQuantile * static_cast<double>(sorted.size()))) - 1;
  const double log_c = sorted[std::min(k, sorted.size() - 1)];
  out.constant = std::exp(log_c);
  std::size_t covered = 0;
  for (double lr : log_ratio) {
    if (lr <= log_c) ++covered;
  }
  out.coverage = static_cast<double>(covered) / static_cast<double>(log_ratio.size());
  out.max_breach = std::max(0.0, std::exp(sorted.back() - log_c) - 1.0);
  out.passed = out.coverage >= kEnvelopeQuantile && out.max_breach <= kEnvelopeBreach;
  return out;
}

std::optional<std::size_t> finite_convergence(const Trace& trace, const Reference& ref) {
  std::size_t run = 0;
  for (std::size_t n = 1; n < trace.x.size(); ++n) {
    run = trace.x[n] == trace.x[n - 1] ? run + 1 : 0;
    if (run >= kRepeatRun) return n - run;
  }
  for (std::size_t n = 0; n < trace.x.size(); ++n) {
    if (trace.gx[n] != ref.g_star) continue;
    if (ref.x_star && trace.x[n] == *ref.x_star) return n;
  }
  for (std::size_t n = 0; n < trace.steps(); ++n) {
    if (value_at(trace, n) == ref.g_star && trace.grad_norm[n] == 0.0) return n;
  }
  return std::nullopt;
}

}  // namespace

Reference make_reference(const Trace& trace, const ObjectiveOracle& oracle,
                         std::optional<double> g_star, double margin) {
  const auto& m = oracle.known_minimizer();
  if (g_star) return Reference{*g_star, m ? std::optional<Vector>(m->point) : std::nullopt, false};
  if (m) return Reference{m->value, m->point, false};
  if (!(margin >= 0.0)) throw ParameterError(fmt::format("margin must be >= 0, got {}", margin));
  double best = std::numeric_limits<double>::infinity();
  for (double v : trace.gx) {
    if (std::isfinite(v)) best = std::min(best, v);
  }
  for (double v : trace.gy) {
    if (std::isfinite(v)) best = std::min(best, v);
  }
  if (!std::isfinite(best)) throw AnalysisError("trace has no finite values");
  return Reference{best - margin, std::nullopt, true};
}

IndexWindow default_window(const Trace& trace, std::size_t n_star) {
  const std::size_t end = trace.steps();
  return IndexWindow{std::min(n_star + 10, end), end};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw AnalysisError("fit_line: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw AnalysisError("fit_line: abscissae are constant");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.points = n;
  return fit;
}

RatelResult check_ratel_recursion(std::span<const double> e, std::size_t l0, double c0,
                                  double theta) {
  if (l0 == 0) throw ParameterError("l0 must be >= 1");
  if (!(c0 > 0.0)) throw ParameterError(fmt::format("C0 must be positive, got {}", c0));
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw ParameterError(fmt::format("theta must lie in [0, 1), got {}", theta));
  }
  for (std::size_t n = 0; n < e.size(); ++n) {
    if (!(e[n] > 0.0)) throw ParameterError(fmt::format("e[{}] = {} is not positive", n, e[n]));
    if (n > 0 && e[n] > e[n - 1]) throw ParameterError(fmt::format("e increases at n = {}", n));
  }
  RatelResult out;
  for (std::size_t n = l0; n < e.size(); ++n) {
    if (e[n - l0] - e[n] < c0 * std::pow(e[n], 2.0 * theta) - 1e-12) {
      out.holds = false;
      out.first_violation = n;
      break;
    }
  }
  return out;
}

LojasiewiczModel estimate_theta(std::span<const double> gap, std::span<const double> grad_norm) {
  if (gap.size() != grad_norm.size()) throw ParameterError("estimate_theta: size mismatch");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < gap.size(); ++i) {
    if (gap[i] == 0.0) {
      throw AnalysisError(fmt::format("value equals g* at sample {}", i));
    }
    if (!(gap[i] > 0.0) || !(grad_norm[i] > 0.0) || !std::isfinite(gap[i]) ||
        !std::isfinite(grad_norm[i])) {
      continue;
    }
    lx.push_back(std::log(gap[i]));
    ly.push_back(std::log(grad_norm[i]));
  }
  if (lx.size() < kMinThetaPoints) {
    throw AnalysisError(fmt::format("only {} usable points, need {}", lx.size(), kMinThetaPoints));
  }
  const LinearFit fit = fit_line(lx, ly);
  if (!(fit.slope >= 0.0 && fit.slope < 1.0)) {
    throw AnalysisError(fmt::format("fitted exponent {} outside [0, 1)", fit.slope));
  }
  LojasiewiczModel model;
  model.theta = fit.slope;
  model.kappa = std::exp(-fit.intercept);
  model.r_squared = fit.r_squared;
  model.window = IndexWindow{0, gap.size()};
  model.points = fit.points;
  return model;
}

LojasiewiczModel estimate_theta(const Trace& trace, const Reference& ref, const IndexWindow& window) {
  const std::size_t end = std::min(window.end, trace.steps());
  std::vector<double> gap;
  std::vector<double> gn;
  for (std::size_t n = window.begin; n < end; ++n) {
    gap.push_back(value_at(trace, n) - ref.g_star);
    gn.push_back(trace.grad_norm[n]);
  }
  LojasiewiczModel model = estimate_theta(gap, gn);
  model.window = IndexWindow{window.begin, end};
  return model;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kFinite: return "finite";
    case Regime::kLinear: return "linear";
    case Regime::kSublinear: return "sublinear";
    case Regime::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RateReport classify_rate(const Trace& trace, const Reference& ref, const LojasiewiczModel& model,
                         std::size_t n_star) {
  RateReport out;
  out.theta = model.theta;
  out.low_confidence = ref.low_confidence;

  if (const auto k = finite_convergence(trace, ref)) {
    out.regime = Regime::kFinite;
    out.finite_index = *k;
    out.note = fmt::format("iterates stationary from n = {}", *k);
    return out;
  }

  out.window = default_window(trace, n_star);
  if (out.window.size() < kMinTailPoints) {
    out.note = fmt::format("tail has {} points past the transient, need {}", out.window.size(),
                           kMinTailPoints);
    return out;
  }

  std::vector<double> idx;
  std::vector<double> lgap;
  std::vector<double> ldist;
  std::vector<double> idx_dist;
  for (std::size_t n = out.window.begin; n < out.window.end; ++n) {
    const double gap = value_at(trace, n) - ref.g_star;
    if (gap > 0.0 && std::isfinite(gap)) {
      idx.push_back(static_cast<double>(n));
      lgap.push_back(std::log(gap));
    }
    if (ref.x_star) {
      const double d = (trace.x[n] - *ref.x_star).norm();
      if (d > 0.0 && std::isfinite(d)) {
        idx_dist.push_back(static_cast<double>(n));
        ldist.push_back(std::log(d));
      }
    }
  }
  if (idx.size() < kMinTailPoints) {
    out.note = fmt::format("only {} tail points above g*", idx.size());
    return out;
  }

  if (model.theta <= 0.5 + kThetaBand) {
    const LinearFit fit = fit_line(idx, lgap);
    const double q = std::exp(fit.slope);
    out.r_squared = fit.r_squared;
    if (!(q > 0.0 && q < 1.0)) {
      out.note = fmt::format("fitted ratio {} is not in (0, 1)", q);
      return out;
    }
    out.regime = Regime::kLinear;
    out.q = q;
    std::vector<double> lr(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) lr[i] = lgap[i] - idx[i] * fit.slope;
    out.value_bound = envelope(lr);
    std::vector<double> dr(idx_dist.size());
    for (std::size_t i = 0; i < idx_dist.size(); ++i) dr[i] = ldist[i] - 0.5 * idx_dist[i] * fit.slope;
    out.distance_bound = envelope(dr);
    if (model.theta < kThetaBand) out.note = "theta near 0 without finite convergence";
    return out;
  }

  std::vector<double> ln(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) ln[i] = std::log(idx[i]);
  const LinearFit fit = fit_line(ln, lgap);
  out.r_squared = fit.r_squared;
  out.regime = Regime::kSublinear;
  out.exponent = fit.slope;
  out.predicted_exponent = -1.0 / (2.0 * model.theta - 1.0);
  out.exponent_consistent =
      std::abs(fit.slope - *out.predicted_exponent) <= 0.2 * std::abs(*out.predicted_exponent);
  std::vector<double> lr(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) lr[i] = lgap[i] - fit.slope * ln[i];
  out.value_bound = envelope(lr);
  if (idx_dist.size() >= 2) {
    std::vector<double> lnd(idx_dist.size());
    for (std::size_t i = 0; i < idx_dist.size(); ++i) lnd[i] = std::log(idx_dist[i]);
    const LinearFit dfit = fit_line(lnd, ldist);
    std::vector<double> dr(idx_dist.size());
    for (std::size_t i = 0; i < idx_dist.size(); ++i) dr[i] = ldist[i] - dfit.slope * lnd[i];
    out.distance_bound = envelope(dr);
  }
  return out;
}

ConvexCertificate convex_rate_certificate(const Trace& trace, const Reference& ref,
                                          const CoefficientSchedule& schedule, double slack) {
  if (!ref.x_star) throw ParameterError("convex certificate needs a minimizer x*");
  if (trace.method != Method::kInertial || trace.params.alpha != schedule.alpha() ||
      trace.params.beta != schedule.beta() || trace.params.step != schedule.step()) {
    throw ParameterError("trace is not an inertial trace with the schedule's parameters");
  }
  const double s = schedule.step();
  const auto p_at = [&](std::size_t n) { return schedule.delta(n) - 0.5 * schedule.big_delta(n); };

  ConvexCertificate out;
  ConvexEnergySeries& ser = out.series;
  ser.n1 = stabilization_index([&](std::size_t k) { return p_at(k) > 0.0; },
                               CoefficientSchedule::kPositivityWindow, CoefficientSchedule::kScanCap);
  ser.n2 = std::max(schedule.n_star(), ser.n1);
  const std::size_t n2 = ser.n2;
  const std::size_t steps = trace.steps();
  if (steps < n2 + 2) {
    throw AnalysisError(fmt::format("trace has {} steps, need at least {}", steps, n2 + 2));
  }

  const auto dx2 = [&](std::size_t n) {
    const auto i = static_cast<std::ptrdiff_t>(n);
    return (trace.iterate(i) - trace.iterate(i - 1)).squaredNorm();
  };

  ser.first_index = n2;
  ser.a = std::numeric_limits<double>::infinity();
  for (std::size_t n = n2; n < steps; ++n) {
    ser.p.push_back(p_at(n));
    ser.q.push_back(0.5 * schedule.big_delta(n));
    ser.e1.push_back(trace.gy[n] + ser.p.back() * dx2(n) - ref.g_star);
    ser.a = std::min(ser.a, ser.q.back());
  }
  const auto e1 = [&](std::size_t n) { return ser.e1[n - n2]; };
  const auto pn = [&](std::size_t n) { return ser.p[n - n2]; };

  for (std::size_t n = n2; n < steps; ++n) {
    if (e1(n) == 0.0) {
      out.exact_from = n;
      break;
    }
  }
  const std::size_t live_end = out.exact_from.value_or(steps);  // e1 > 0 on [n2, live_end)

  std::vector<double> r_dec;
  double bracket_sup = 0.0;
  for (std::size_t n = n2; n + 1 < steps; ++n) {
    r_dec.push_back((e1(n) - e1(n + 1)) - ser.a * (dx2(n) + dx2(n + 1)));
    const double dist = (trace.x[n] - *ref.x_star).norm();
    const double k = 1.5 / s + pn(n);
    const double bracket = std::sqrt(2.0 / (s * s)) * dist +
                           std::sqrt(9.0 / (4.0 * s * s) * dx2(n + 1) + k * k * dx2(n));
    bracket_sup = std::max(bracket_sup, bracket);
  }
  ser.b = bracket_sup * bracket_sup / ser.a;
  ser.b1 = 0.0;
  for (std::size_t n = n2; n < steps; ++n) ser.b1 = std::max(ser.b1, ser.b / pn(n));
  ser.b2 = ser.b1 / (2.0 * s * (2.0 - s * schedule.lipschitz())) + ser.b;
  out.decrease = make_check("decrease", n2, std::move(r_dec), slack);

  std::vector<double> r_quad;
  std::vector<double> r_tel;
  std::vector<double> r_tail;
  const double e_n2 = e1(n2);
  const double shift = e_n2 > 0.0 ? ser.b / e_n2 : std::numeric_limits<double>::infinity();
  for (std::size_t n = n2; n < live_end; ++n) {
    const double en = e1(n);
    if (n + 1 < steps) {
      const double rhs = ser.b * (en - e1(n + 1));
      r_quad.push_back(en < 0.0 ? en : (rhs - en * en) / std::max(1.0, en * en));
      if (n + 1 < live_end && e1(n + 1) > 0.0 && en > 0.0) {
        const double gain = 1.0 / e1(n + 1) - 1.0 / en;
        r_tel.push_back((gain - 1.0 / ser.b) / std::max(1.0, 1.0 / e1(n + 1)));
      }
    }
    const double bound = ser.b / (static_cast<double>(n - n2) + shift);
    r_tail.push_back((bound - en) / std::max(1.0, bound));
  }
  out.quadratic = make_check("quadratic", n2, std::move(r_quad), slack);
  out.telescoped = make_check("telescoped", n2, std::move(r_tel), slack);
  out.tail = make_check("tail", n2, std::move(r_tail), slack);

  const double nn2 = static_cast<double>(n2);
  if (e_n2 > 0.0) {
    out.a1 = std::max(ser.b, nn2 * e_n2);
    out.a2 = std::max(ser.b2, nn2 * ser.b2 / shift);
  }
  std::vector<double> r_y;
  std::vector<double> r_x;
  for (std::size_t n = n2; n < steps; ++n) {
    const double nd = static_cast<double>(n);
    r_y.push_back(out.a1 / nd - (trace.gy[n] - ref.g_star));
    if (n + 1 < steps) r_x.push_back(out.a2 / nd - (trace.gx[n] - ref.g_star));
  }
  out.value_y = make_check("value_y", n2, std::move(r_y), slack);
  out.value_x = make_check("value_x", n2, std::move(r_x), slack);

  out.passed = out.decrease.passed && out.quadratic.passed && out.telescoped.passed &&
               out.tail.passed && out.value_y.passed && out.value_x.passed;
  return out;
}

}  // namespace inertia_kl
