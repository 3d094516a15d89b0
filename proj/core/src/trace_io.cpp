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

#include "inertia_kl/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include <fmt/format.h>

namespace inertia_kl {

TraceFormatError::TraceFormatError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += num(v[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(',', pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(const std::string& field, std::size_t line, std::string_view what) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw TraceFormatError(line, fmt::format("{}: cannot parse '{}' as a number", what, field));
  }
  return v;
}

Vector parse_vector(const std::string& text, std::size_t line, std::string_view what) {
  const auto parts = split(text);
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(parts[i], line, what);
  return v;
}

std::string_view stop_rule_name(StopRule rule) {
  return rule == StopRule::kGradientNorm ? "gradient_norm" : "value_change";
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace, const std::optional<Vector>& x_star) {
  const SolverParams& p = trace.params;
  out << "# inertia_kl trace\n";
  out << "# oracle=" << trace.oracle_id << '\n';
  out << "# method=" << to_string(trace.method) << '\n';
  out << "# alpha=" << num(p.alpha) << '\n';
  out << "# beta=" << num(p.beta) << '\n';
  out << "# step=" << num(p.step) << '\n';
  out << "# tol=" << num(p.tol) << '\n';
  out << "# max_iters=" << p.max_iters << '\n';
  out << "# stop_rule=" << stop_rule_name(p.stop_rule) << '\n';
  out << "# termination=" << to_string(trace.termination) << '\n';
  out << "# x_minus1=" << join(trace.x_minus1) << '\n';
  out << "# x_final=" << join(trace.x.back()) << '\n';
  out << "# g_final=" << num(trace.gx.back()) << '\n';

  const Eigen::Index m = trace.x_minus1.size();
  out << kTraceHeader;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",y" << i;
  out << '\n';
  for (std::size_t n = 0; n < trace.steps(); ++n) {
    out << n << ',' << num(trace.gx[n]) << ',' << num(trace.gy[n]) << ',' << num(trace.err[n]) << ','
        << num(trace.grad_norm[n]) << ',';
    if (x_star) out << num((trace.x[n] - *x_star).norm());
    out << ',' << join(trace.x[n]) << ',' << join(trace.y[n]) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace,
                     const std::optional<Vector>& x_star) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", tmp.string()));
    write_trace_csv(out, trace, x_star);
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

Trace read_trace_csv(std::istream& in) {
  std::map<std::string, std::pair<std::string, std::size_t>> meta;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  Eigen::Index dim = 0;
  Trace trace;

  const auto need = [&](const std::string& key) -> const std::pair<std::string, std::size_t>& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw TraceFormatError(lineno, fmt::format("missing metadata '{}'", key));
    return it->second;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.front() == '#') {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;  // free-form comment
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        if (!meta.emplace(key, std::pair{line.substr(eq + 1), lineno}).second) {
          throw TraceFormatError(lineno, fmt::format("duplicate metadata '{}'", key));
        }
        continue;
      }
      const std::string prefix = kTraceHeader;
      if (line.rfind(prefix, 0) != 0) {
        throw TraceFormatError(lineno, fmt::format("expected header starting with '{}'", prefix));
      }
      const auto cols = split(line);
      const std::size_t extra = cols.size() - 6;
      if (extra == 0 || extra % 2 != 0) throw TraceFormatError(lineno, "header needs x1..xm,y1..ym columns");
      dim = static_cast<Eigen::Index>(extra / 2);
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (cols[6 + i] != fmt::format("x{}", i + 1) || cols[6 + dim + i] != fmt::format("y{}", i + 1)) {
          throw TraceFormatError(lineno, "header needs x1..xm,y1..ym columns");
        }
      }
      header_seen = true;

      const auto& method = need("method");
      const auto parsed = parse_method(method.first);
      if (!parsed) throw TraceFormatError(method.second, fmt::format("unknown method '{}'", method.first));
      trace.method = *parsed;
      if (const auto it = meta.find("oracle"); it != meta.end()) trace.oracle_id = it->second.first;
      const auto real = [&](const std::string& key) {
        const auto& [text, at] = need(key);
        return parse_double(text, at, key);
      };
      trace.params.alpha = real("alpha");
      trace.params.beta = real("beta");
      trace.params.step = real("step");
      if (meta.count("tol")) trace.params.tol = real("tol");
      if (const auto it = meta.find("max_iters"); it != meta.end()) {
        trace.params.max_iters = static_cast<std::size_t>(real("max_iters"));
      }
      if (const auto it = meta.find("stop_rule"); it != meta.end()) {
        trace.params.stop_rule = it->second.first == "gradient_norm" ? StopRule::kGradientNorm : StopRule::kValueChange;
      }
      if (const auto it = meta.find("termination"); it != meta.end()) {
        const auto t = parse_termination(it->second.first);
        if (!t) throw TraceFormatError(it->second.second, fmt::format("unknown termination '{}'", it->second.first));
        trace.termination = *t;
      }
      const auto& xm1 = need("x_minus1");
      trace.x_minus1 = parse_vector(xm1.first, xm1.second, "x_minus1");
      if (trace.x_minus1.size() != dim) throw TraceFormatError(xm1.second, "x_minus1 has the wrong dimension");
      continue;
    }

    const auto cols = split(line);
    if (cols.size() != static_cast<std::size_t>(6 + 2 * dim)) {
      throw TraceFormatError(lineno, fmt::format("expected {} fields, found {}", 6 + 2 * dim, cols.size()));
    }
    const double iter = parse_double(cols[0], lineno, "iter");
    if (iter != static_cast<double>(trace.y.size())) {
      throw TraceFormatError(lineno, fmt::format("iter {} out of sequence (expected {})", cols[0], trace.y.size()));
    }
    trace.gx.push_back(parse_double(cols[1], lineno, "gx"));
    trace.gy.push_back(parse_double(cols[2], lineno, "gy"));
    trace.err.push_back(parse_double(cols[3], lineno, "err"));
    trace.grad_norm.push_back(parse_double(cols[4], lineno, "grad_norm"));
    if (!cols[5].empty()) parse_double(cols[5], lineno, "dist_to_min");
    Vector x(dim);
    Vector y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      x[i] = parse_double(cols[6 + i], lineno, "x");
      y[i] = parse_double(cols[6 + dim + i], lineno, "y");
    }
    trace.x.push_back(std::move(x));
    trace.y.push_back(std::move(y));
  }
  if (!header_seen) throw TraceFormatError(std::max<std::size_t>(lineno, 1), "no header line");

  const auto& xf = need("x_final");
  Vector last = parse_vector(xf.first, xf.second, "x_final");
  if (last.size() != dim) throw TraceFormatError(xf.second, "x_final has the wrong dimension");
  trace.x.push_back(std::move(last));
  const auto& gf = need("g_final");
  trace.gx.push_back(parse_double(gf.first, gf.second, "g_final"));
  return trace;
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  return read_trace_csv(in);
}

}  // namespace inertia_kl
