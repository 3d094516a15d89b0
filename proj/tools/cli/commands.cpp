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

#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <CLI11.hpp>
#include <json.hpp>

#include "inertia_kl/energy.hpp"
#include "inertia_kl/experiments.hpp"
#include "inertia_kl/functions.hpp"
#include "inertia_kl/optimizers.hpp"
#include "inertia_kl/rates.hpp"
#include "inertia_kl/trace_io.hpp"

namespace inertia_kl::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Shorter traces carry too little tail for a meaningful report.
constexpr std::size_t kMinVerifySteps = 10;

const char* const kSolveKeys[] = {"oracle", "method", "alpha", "beta", "step",
                                  "x0",     "xm1",    "tol",   "max_iters", "out"};

double to_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    throw ConfigError(key, fmt::format("invalid value for '{}': '{}'", key, text));
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, fmt::format("invalid value for '{}': '{}'", key, text));
  }
  return v;
}

Vector to_point(const std::string& key, const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(',', pos);
    vals.push_back(to_real(key, text.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string point_text(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += fmt::format("{}{:.10g}", i ? "," : "", v[i]);
  return s;
}

json check_json(const ConditionCheck& c) {
  json j{{"passed", c.passed}, {"worst_residual", c.worst_residual}, {"checked", c.residuals.size()},
         {"first_index", c.first_index}};
  j["first_failure"] = c.first_failure ? json(*c.first_failure) : json(nullptr);
  return j;
}

// Conditions and rates for one trace. `conditions_passed` stays true when the
// trace is not inertial (nothing to check).
json analyse(const Trace& trace, const ObjectiveOracle& oracle, const VerifyOptions& opt,
             bool& conditions_passed) {
  if (trace.steps() < kMinVerifySteps) {
    throw AnalysisError(fmt::format("insufficient length: trace has {} steps, need at least {}",
                                    trace.steps(), kMinVerifySteps));
  }
  json j;
  j["oracle"] = trace.oracle_id;
  j["method"] = std::string(to_string(trace.method));
  j["steps"] = trace.steps();
  j["termination"] = std::string(to_string(trace.termination));

  std::size_t n_star = 1;
  if (trace.method == Method::kInertial) {
    const TraceSchedule ts = schedule_for_trace(trace, oracle, opt.lipschitz);
    n_star = ts.schedule.n_star();
    CheckOptions co;
    co.burn_in = ts.burn_in;
    const ConditionReport descent = check_descent(trace, ts.schedule, co);
    const ConditionReport h = check_h_conditions(trace, ts.schedule, oracle, co);
    const SummabilityReport sum = check_square_summability(trace, ts.schedule, co);
    j["lipschitz"] = ts.schedule.lipschitz();
    j["lipschitz_realized"] = ts.realized;
    j["burn_in"] = ts.burn_in;
    j["n_star"] = n_star;
    j["start"] = h.start;
    j["D"] = h.a;
    j["b"] = h.b;
    j["c1"] = h.c1;
    j["c2"] = h.c2;
    json checks = json::object();
    for (const auto* rep : {&descent, &h}) {
      for (const ConditionCheck& c : rep->checks) checks[c.name] = check_json(c);
    }
    checks["summability"] = {{"passed", sum.passed}, {"tail_sum", sum.tail_sum}, {"bound", sum.bound}};
    j["conditions"] = checks;
    conditions_passed = descent.passed() && h.passed() && sum.passed;
  } else {
    j["conditions"] = nullptr;
  }
  j["conditions_passed"] = conditions_passed;

  try {
    const Reference ref = make_reference(trace, oracle, opt.gstar);
    json r{{"g_star", ref.g_star}, {"low_confidence", ref.low_confidence}};
    const LojasiewiczModel model = estimate_theta(trace, ref, default_window(trace, n_star));
    r["theta"] = model.theta;
    r["K"] = model.kappa;
    r["theta_r_squared"] = model.r_squared;
    const RateReport rate = classify_rate(trace, ref, model, n_star);
    r["regime"] = to_string(rate.regime);
    r["r_squared"] = rate.r_squared;
    if (rate.q) r["Q"] = *rate.q;
    if (rate.exponent) {
      r["exponent"] = *rate.exponent;
      r["predicted_exponent"] = *rate.predicted_exponent;
    }
    if (rate.value_bound.available) {
      r["value_envelope"] = {{"constant", rate.value_bound.constant}, {"passed", rate.value_bound.passed}};
    }
    if (rate.distance_bound.available) {
      r["distance_envelope"] = {{"constant", rate.distance_bound.constant},
                                {"passed", rate.distance_bound.passed}};
    }
    if (!rate.note.empty()) r["note"] = rate.note;
    j["rate"] = r;
  } catch (const AnalysisError& e) {
    j["rate"] = {{"error", e.what()}};
  }
  return j;
}

void print_text(const std::string& label, const json& j, std::ostream& out) {
  fmt::print(out, "{}: {} on {}, {} steps, {}\n", label, j["method"].get<std::string>(),
             j["oracle"].get<std::string>(), j["steps"].get<std::size_t>(),
             j["termination"].get<std::string>());
  if (!j["conditions"].is_null()) {
    fmt::print(out, "  L={:.6g}{} burn-in={} N_star={} D={:.6g} b={:.6g} c1={:.6g} c2={:.6g}\n",
               j["lipschitz"].get<double>(), j["lipschitz_realized"].get<bool>() ? " (realized)" : "",
               j["burn_in"].get<std::size_t>(), j["n_star"].get<std::size_t>(), j["D"].get<double>(),
               j["b"].get<double>(), j["c1"].get<double>(), j["c2"].get<double>());
    for (const auto& [name, c] : j["conditions"].items()) {
      if (name == "summability") {
        fmt::print(out, "  {:<12} {}  sum={:.6g} bound={:.6g}\n", name,
                   c["passed"].get<bool>() ? "pass" : "FAIL", c["tail_sum"].get<double>(),
                   c["bound"].get<double>());
        continue;
      }
      std::string where;
      if (!c["first_failure"].is_null()) where = fmt::format(" first failure at n={}", c["first_failure"].get<std::size_t>());
      fmt::print(out, "  {:<12} {}  worst residual {:.3e}{}\n", name,
                 c["passed"].get<bool>() ? "pass" : "FAIL", c["worst_residual"].get<double>(), where);
    }
  }
  const json& r = j["rate"];
  if (r.contains("error")) {
    fmt::print(out, "  rate: unavailable ({})\n", r["error"].get<std::string>());
    return;
  }
  fmt::print(out, "  theta={:.4f} K={:.4g} regime={}{}", r["theta"].get<double>(), r["K"].get<double>(),
             r["regime"].get<std::string>(), r["low_confidence"].get<bool>() ? " (g* estimated)" : "");
  if (r.contains("Q")) fmt::print(out, " Q={:.6f}", r["Q"].get<double>());
  if (r.contains("exponent")) {
    fmt::print(out, " exponent={:.4f} (predicted {:.4f})", r["exponent"].get<double>(),
               r["predicted_exponent"].get<double>());
  }
  fmt::print(out, " R2={:.4f}\n", r["r_squared"].get<double>());
}

}  // namespace

int cmd_solve(const ConfigSection& settings, std::ostream& out, std::ostream& err) {
  try {
    for (const auto& [key, value] : settings) {
      if (std::find(std::begin(kSolveKeys), std::end(kSolveKeys), key) == std::end(kSolveKeys)) {
        throw ConfigError(key, fmt::format("unknown setting '{}'", key));
      }
    }
    const auto get = [&](const char* key, const char* fallback) {
      const auto it = settings.find(key);
      return it == settings.end() ? std::string(fallback) : it->second;
    };
    const std::string oracle_id = get("oracle", "quadratic");
    const auto oracle = builtin_oracle(oracle_id);
    if (!oracle) throw ConfigError("oracle", fmt::format("unknown oracle '{}'", oracle_id));
    const std::string method_name = get("method", "inertial");
    const auto method = parse_method(method_name);
    if (!method) throw ConfigError("method", fmt::format("unknown method '{}'", method_name));

    SolverParams p;
    p.alpha = to_real("alpha", get("alpha", "3"));
    p.beta = to_real("beta", get("beta", "0.5"));
    p.step = to_real("step", get("step", "0.01"));
    p.tol = to_real("tol", get("tol", "1e-15"));
    p.max_iters = to_count("max_iters", get("max_iters", "1000000"));
    if (!settings.count("x0")) throw ConfigError("x0", "missing required setting 'x0'");
    const Vector x0 = to_point("x0", settings.at("x0"));
    const Vector xm1 = settings.count("xm1") ? to_point("xm1", settings.at("xm1")) : x0;
    const auto dim = static_cast<Eigen::Index>(oracle->dimension());
    if (x0.size() != dim) throw ConfigError("x0", fmt::format("x0 needs {} coordinates", dim));
    if (xm1.size() != dim) throw ConfigError("xm1", fmt::format("xm1 needs {} coordinates", dim));

    const Trace trace = run(*method, x0, xm1, p, *oracle);
    std::optional<Vector> x_star;
    if (const auto& m = oracle->known_minimizer()) x_star = m->point;

    const std::string path = get("out", "");
    std::ostream& log = path.empty() ? err : out;
    if (path.empty()) {
      write_trace_csv(out, trace, x_star);
    } else {
      write_trace_csv(fs::path(path), trace, x_star);
    }
    fmt::print(log, "{} after {} steps: g={:.17g} x=({})\n", to_string(trace.termination), trace.steps(),
               trace.gx.back(), point_text(trace.x.back()));
    switch (trace.termination) {
      case Termination::kConverged: return exit_code::kOk;
      case Termination::kIterationCap: return exit_code::kIterationCap;
      case Termination::kDiverged: return exit_code::kDiverged;
    }
    return exit_code::kError;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const ParameterError& e) {
    fmt::print(err, "error: {}\n", e.what());
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return exit_code::kError;
}

int cmd_reproduce(const std::string& figure, const std::string& outdir, std::ostream& out,
                  std::ostream& err) {
  const std::vector<std::string> figures = {"fig1", "fig2", "fig3", "fig4"};
  if (std::find(figures.begin(), figures.end(), figure) == figures.end()) {
    fmt::print(err, "error: unknown figure '{}' (expected fig1, fig2, fig3 or fig4)\n", figure);
    return exit_code::kError;
  }
  try {
    const fs::path dir(outdir);
    fs::create_directories(dir);
    std::string summary = "scenario,method,beta,step,start,iterations,termination,final_value,final_distance\n";
    fmt::print(out, "{:<7} {:<9} {:>5} {:>7} {:>12} {:>9} {:<13} {:>12}\n", "case", "method", "beta",
               "step", "start", "iters", "termination", "distance");
    for (const Scenario& sc : figure_scenarios(figure)) {
      const ComparisonResult res = run_comparison(sc);
      const auto oracle = builtin_oracle(sc.oracle_id);
      std::optional<Vector> x_star;
      if (const auto& m = oracle->known_minimizer()) x_star = m->point;
      for (const RunOutcome& r : res.runs) {
        const std::string name = cell_name(sc, r);
        write_trace_csv(dir / (name + ".csv"), r.trace, x_star);
        const std::string start = start_label(sc.starts[r.start_index]);
        const std::string dist = r.final_distance ? fmt::format("{:.17g}", *r.final_distance) : "";
        summary += fmt::format("{},{},{},{},{},{},{},{:.17g},{}\n", sc.label, to_string(r.spec.method),
                               r.spec.beta, r.spec.step, start, r.iterations,
                               to_string(r.trace.termination), r.final_value, dist);
        fmt::print(out, "{:<7} {:<9} {:>5} {:>7} {:>12} {:>9} {:<13} {:>12.3e}\n", sc.label,
                   to_string(r.spec.method), r.spec.beta, r.spec.step, start, r.iterations,
                   to_string(r.trace.termination), r.final_distance.value_or(NAN));
      }
    }
    const fs::path tmp = dir / "summary.csv.tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << summary;
      if (!f) throw std::runtime_error("cannot write summary.csv");
    }
    fs::rename(tmp, dir / "summary.csv");
    return exit_code::kOk;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kError;
  }
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  if (options.trace.empty() == options.scenario.empty()) {
    fmt::print(err, "error: give exactly one of --trace or --scenario\n");
    return exit_code::kError;
  }
  try {
    json doc = json::array();
    bool all_passed = true;
    const auto one = [&](const std::string& label, const Trace& trace, const ObjectiveOracle& oracle) {
      bool passed = true;
      json j = analyse(trace, oracle, options, passed);
      all_passed = all_passed && passed;
      if (!options.json) print_text(label, j, out);
      j["label"] = label;
      doc.push_back(std::move(j));
    };

    if (!options.trace.empty()) {
      const Trace trace = read_trace_csv(fs::path(options.trace));
      const auto oracle = builtin_oracle(trace.oracle_id);
      if (!oracle) throw AnalysisError(fmt::format("trace names unknown oracle '{}'", trace.oracle_id));
      one(options.trace, trace, *oracle);
    } else {
      const auto scenarios = figure_scenarios(options.scenario);
      if (scenarios.empty()) throw ParameterError(fmt::format("unknown scenario '{}'", options.scenario));
      for (const Scenario& sc : scenarios) {
        const auto oracle = builtin_oracle(sc.oracle_id);
        const ComparisonResult res = run_comparison(sc);
        for (const RunOutcome& r : res.runs) {
          if (r.spec.method != Method::kInertial) continue;
          const std::string label = cell_name(sc, r);
          if (r.trace.termination != Termination::kConverged) {
            if (!options.json) fmt::print(out, "{}: skipped ({})\n", label, to_string(r.trace.termination));
            continue;
          }
          one(label, r.trace, *oracle);
        }
      }
    }
    if (options.json) out << doc.dump(2) << '\n';
    return all_passed ? exit_code::kOk : exit_code::kConditionFailed;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inertial gradient method: solve, reproduce experiments, verify traces", "inertia_kl"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "run one method from one start point");
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> given;
  for (const char* key : kSolveKeys) {
    std::string flag = std::string("--") + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    given[key] = solve->add_option(flag, raw[key]);
  }
  std::string config_path;
  std::string section;
  solve->add_option("--config", config_path, "key = value file");
  solve->add_option("--section", section, "config section to overlay on the global keys");

  CLI::App* reproduce = app.add_subcommand("reproduce", "rerun a figure's experiment grid");
  std::string figure;
  std::string outdir = ".";
  reproduce->add_option("--figure", figure, "fig1, fig2, fig3 or fig4")->required();
  reproduce->add_option("--outdir", outdir, "directory for CSV output");

  CLI::App* verify = app.add_subcommand("verify", "check descent and KL-type conditions on a trace");
  VerifyOptions vopt;
  double gstar = 0.0;
  double lip = 0.0;
  verify->add_option("--trace", vopt.trace, "trace CSV written by solve or reproduce");
  verify->add_option("--scenario", vopt.scenario, "builtin scenario or figure id");
  CLI::Option* gstar_opt = verify->add_option("--gstar", gstar, "minimal value g*");
  CLI::Option* lip_opt = verify->add_option("--lipschitz", lip, "descent constant L");
  verify->add_flag("--json", vopt.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    // help() follows the selected subcommand.
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kError;
  }

  if (solve->parsed()) {
    ConfigSection settings;
    try {
      if (!config_path.empty()) settings = load_config(config_path).resolve(section);
    } catch (const ConfigError& e) {
      fmt::print(err, "error: {}\n", e.what());
      return exit_code::kError;
    }
    for (const auto& [key, opt] : given) {
      if (opt->count() > 0) settings[key] = raw[key];
    }
    return cmd_solve(settings, out, err);
  }
  if (reproduce->parsed()) return cmd_reproduce(figure, outdir, out, err);
  if (gstar_opt->count() > 0) vopt.gstar = gstar;
  if (lip_opt->count() > 0) vopt.lipschitz = lip;
  return cmd_verify(vopt, out, err);
}

}  // namespace inertia_kl::cli
