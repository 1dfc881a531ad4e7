// Copyright 2026 The cqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQPT_TOOLS_CLI_HPP
#define CQPT_TOOLS_CLI_HPP

#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace cqpt::cli {

// One configuration value and where it came from ("run.ini:12", "--walkers").
struct Setting {
  std::string value;
  std::string origin;
};

// Keyed by "section.key", e.g. "model.family".
using Settings = std::map<std::string, Setting>;

// Parses the sectioned key = value format. Throws ConfigError with the
// offending line on syntax errors, unknown keys and duplicates.
Settings parse_config(std::string_view text, const std::string& source);

// Runs the command line; returns the process exit code
// (0 ok, 1 internal, 2 config, 3 capability, 4 convergence).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cqpt::cli

#endif  // CQPT_TOOLS_CLI_HPP
