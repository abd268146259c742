// Copyright 2026 The prompttts Authors
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

#include "ptts/ptts.h"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ptts::cli {

struct ConfigDeleter {
  void operator()(ptts_config* c) const { ptts_config_free(c); }
};
using ConfigHandle = std::unique_ptr<ptts_config, ConfigDeleter>;

struct CliCommand {
  std::vector<std::string> path;             // e.g. {"train", "pretrain"}
  std::map<std::string, std::string> values;  // option name (without dashes) -> value
  std::map<std::string, bool> flags;          // boolean switches that were given
  ConfigHandle config;                        // effective config for train commands

  bool flag(const std::string& name) const {
    auto it = flags.find(name);
    return it != flags.end() && it->second;
  }
  std::string value(const std::string& name) const {
    auto it = values.find(name);
    return it == values.end() ? std::string() : it->second;
  }
};

struct ParseResult {
  int exit_code = -1;  // >= 0: stop with this code (help or usage error)
  std::string out;     // text for stdout (help)
  std::string err;     // text for stderr (usage errors)
  CliCommand command;
};

/// Parses the command line and, for training commands, builds the
/// effective configuration: config file first, then --set overrides, then
/// dedicated flags such as --seed.
ParseResult parse_cli(int argc, const char* const* argv);

/// Executes a parsed command; returns the process exit code.
int run_command(const CliCommand& command);

int main_entry(int argc, const char* const* argv);

}  // namespace ptts::cli
