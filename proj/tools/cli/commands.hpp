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
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace inertia_kl::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kIterationCap = 2;
inline constexpr int kDiverged = 3;
inline constexpr int kConditionFailed = 4;
}  // namespace exit_code

/// Solve settings as key -> text, so config files and flags share one parser.
/// Keys: oracle, method, alpha, beta, step, x0, xm1, tol, max_iters, out.
int cmd_solve(const ConfigSection& settings, std::ostream& out, std::ostream& err);

int cmd_reproduce(const std::string& figure, const std::string& outdir, std::ostream& out,
                  std::ostream& err);

struct VerifyOptions {
  std::string trace;
  std::string scenario;
  std::optional<double> gstar;
  std::optional<double> lipschitz;
  bool json = false;
};

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

/// Full command line, including argv[0].
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inertia_kl::cli
