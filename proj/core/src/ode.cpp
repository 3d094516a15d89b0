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

#include "inertia_kl/ode.hpp"

#include <cmath>

#include <fmt/format.h>

#include "inertia_kl/optimizers.hpp"

namespace inertia_kl {

ContinuousTrajectory integrate(const DampedSystem& system, double t_end, double dt) {
  const auto dim = static_cast<Eigen::Index>(system.oracle.dimension());
  if (!(system.gamma >= 0.0)) throw ParameterError(fmt::format("gamma must be >= 0, got {}", system.gamma));
  if (!(system.t0 > 0.0)) throw ParameterError(fmt::format("t0 must be positive, got {}", system.t0));
  if (!(t_end > system.t0)) throw ParameterError("t_end must exceed t0");
  if (!(dt > 0.0) || dt > t_end - system.t0) {
    throw ParameterError(fmt::format("dt must lie in (0, t_end - t0], got {}", dt));
  }
  if (system.u0.size() != dim || system.v0.size() != dim) {
    throw ParameterError("initial state does not match the oracle dimension");
  }
  if (!all_finite(system.u0) || !all_finite(system.v0)) throw ParameterError("initial state is not finite");

  const auto steps = static_cast<std::size_t>(std::ceil((t_end - system.t0) / dt - 1e-9));
  const double h = (t_end - system.t0) / static_cast<double>(steps);
  const ObjectiveOracle& g = system.oracle;
  const auto accel = [&](double t, const Vector& x, const Vector& v) -> Vector {
    return -(system.gamma + system.alpha / t) * v - g.gradient(x);
  };

  ContinuousTrajectory out;
  out.t.reserve(steps + 1);
  Vector x = system.u0;
  Vector v = system.v0;
  const auto record = [&](double t) {
    out.t.push_back(t);
    out.energy.push_back(g.value(x) + 0.5 * v.squaredNorm());
    out.x.push_back(x);
    out.v.push_back(v);
  };
  record(system.t0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = system.t0 + static_cast<double>(i) * h;
    const Vector k1x = v;
    const Vector k1v = accel(t, x, v);
    const Vector k2x = v + 0.5 * h * k1v;
    const Vector k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x, k2x);
    const Vector k3x = v + 0.5 * h * k2v;
    const Vector k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x, k3x);
    const Vector k4x = v + h * k3v;
    const Vector k4v = accel(t + h, x + h * k3x, k4x);
    Vector xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    Vector vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!all_finite(xn) || !all_finite(vn) || !std::isfinite(g.value(xn))) {
      out.diverged = true;
      break;
    }
    x = std::move(xn);
    v = std::move(vn);
    record(system.t0 + static_cast<double>(i + 1) * h);
  }
  return out;
}

DiscreteParams discretize_to_algorithm(double gamma, double h, double alpha) {
  if (!(h > 0.0)) throw ParameterError(fmt::format("h must be positive, got {}", h));
  const double beta = 1.0 - gamma * h;
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParameterError(fmt::format("beta = 1 - gamma h = {} is outside (0, 1)", beta));
  }
  return DiscreteParams{alpha, beta, h * h};
}

std::vector<ConsistencyRow> limit_consistency(const ObjectiveOracle& oracle, double gamma,
                                              double alpha, const std::vector<double>& steps,
                                              double horizon, const Vector& start,
                                              std::size_t substeps) {
  if (steps.empty()) throw ParameterError("no step sizes given");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0)) throw ParameterError(fmt::format("step {} is not positive", steps[i]));
    if (i > 0 && !(steps[i] < steps[i - 1])) throw ParameterError("steps must be strictly decreasing");
  }
  if (!(horizon > std::sqrt(steps.front()))) throw ParameterError("horizon must exceed sqrt(s)");
  if (substeps == 0) throw ParameterError("substeps must be >= 1");
  if (start.size() != static_cast<Eigen::Index>(oracle.dimension())) {
    throw ParameterError("start point does not match the oracle dimension");
  }

  std::vector<ConsistencyRow> rows;
  for (double s : steps) {
    ConsistencyRow row;
    row.step = s;
    const double h = std::sqrt(s);
    row.beta = 1.0 - gamma * h;
    if (!(row.beta > 0.0 && row.beta < 1.0)) {
      row.error = fmt::format("beta = {} is outside (0, 1)", row.beta);
      rows.push_back(std::move(row));
      continue;
    }
    if (const auto l = oracle.lipschitz()) row.step_valid = s * *l < 2.0 * (1.0 - row.beta);

    const auto count = static_cast<std::size_t>(std::floor(horizon / h + 1e-9));
    SolverParams params;
    params.alpha = alpha;
    params.beta = row.beta;
    params.step = s;
    std::vector<Vector> xs{start, start};  // x_{-1}, x_0
    for (std::size_t n = 0; n < count; ++n) {
      const Vector& x = xs[n + 1];
      const Vector& xp = xs[n];
      xs.push_back(inertial_step(x, xp, n, params, oracle).x_next);
    }
    // xs[n + 1] holds x_n.
    DampedSystem sys{gamma, alpha, oracle, h, xs[2], (xs[1] - xs[0]) / h};
    if (count < 2) {
      rows.push_back(std::move(row));
      continue;
    }
    const ContinuousTrajectory traj =
        integrate(sys, h * static_cast<double>(count), h / static_cast<double>(substeps));
    if (traj.diverged) {
      row.error = "ODE trajectory diverged";
      rows.push_back(std::move(row));
      continue;
    }
    for (std::size_t n = 1; n <= count; ++n) {
      const Vector& xc = traj.x[(n - 1) * substeps];
      row.discrepancy = std::max(row.discrepancy, (xs[n + 1] - xc).norm());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool strictly_decreasing(const std::vector<ConsistencyRow>& rows) {
  std::optional<double> prev;
  for (const auto& r : rows) {
    if (r.error) continue;
    if (prev && !(r.discrepancy < *prev)) return false;
    prev = r.discrepancy;
  }
  return true;
}

}  // namespace inertia_kl
