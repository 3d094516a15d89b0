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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "inertia_kl/optimizers.hpp"
#include "inertia_kl/types.hpp"

namespace inertia_kl {

/// Malformed trace file; line() is 1-based.
class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Column header prefix of every trace file.
inline constexpr const char* kTraceHeader = "iter,gx,gy,err,grad_norm,dist_to_min";

/// Writes `# key=value` metadata (oracle, method, parameters, x_{-1}, x_T,
/// g(x_T), termination), then one row per step n < T:
///   iter,gx,gy,err,grad_norm,dist_to_min,x1..xm,y1..ym
/// dist_to_min is left empty without `x_star`. Numbers use 17 significant
/// digits, so reading back reproduces every double.
void write_trace_csv(std::ostream& out, const Trace& trace,
                     const std::optional<Vector>& x_star = std::nullopt);

/// Writes to `path` through a temporary file renamed into place.
void write_trace_csv(const std::filesystem::path& path, const Trace& trace,
                     const std::optional<Vector>& x_star = std::nullopt);

/// Inverse of write_trace_csv. Throws TraceFormatError on any malformed line.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace inertia_kl
