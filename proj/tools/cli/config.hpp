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
#include <map>
#include <stdexcept>
#include <string>

namespace inertia_kl::cli {

/// Bad config line or value. field() names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

using ConfigSection = std::map<std::string, std::string>;

/// Flat key = value text with optional [section] headers. Keys before the
/// first header go to section "". Blank lines and lines starting with '#' or
/// ';' are ignored; keys and values are trimmed.
struct ConfigFile {
  std::map<std::string, ConfigSection> sections;

  /// Section "" overlaid with `name` (when non-empty). Throws ConfigError if
  /// `name` does not exist.
  ConfigSection resolve(const std::string& name) const;
};

ConfigFile parse_config(std::istream& in);
ConfigFile load_config(const std::string& path);

}  // namespace inertia_kl::cli
