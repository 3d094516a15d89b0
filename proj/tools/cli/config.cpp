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

#include "config.hpp"

#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace inertia_kl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigSection ConfigFile::resolve(const std::string& name) const {
  ConfigSection out;
  if (const auto it = sections.find(""); it != sections.end()) out = it->second;
  if (name.empty()) return out;
  const auto it = sections.find(name);
  if (it == sections.end()) throw ConfigError("section", fmt::format("no section [{}] in config", name));
  for (const auto& [k, v] : it->second) out[k] = v;
  return out;
}

ConfigFile parse_config(std::istream& in) {
  ConfigFile cfg;
  std::string current;
  cfg.sections[current];
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("section", fmt::format("line {}: malformed section header '{}'", lineno, line));
      }
      current = trim(line.substr(1, line.size() - 2));
      cfg.sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", fmt::format("line {}: expected key = value, got '{}'", lineno, line));
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", fmt::format("line {}: empty key", lineno));
    cfg.sections[current][key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", fmt::format("cannot open config file '{}'", path));
  return parse_config(in);
}

}  // namespace inertia_kl::cli
