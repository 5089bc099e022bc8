// Copyright 2026 The qafid Authors.
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

#ifndef QAFID_TOOLS_CLI_H_
#define QAFID_TOOLS_CLI_H_

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qafid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

inline constexpr const char* kConfigEnvVar = "QAFID_CONFIG";

// Flat key=value config. '#' starts a comment line; keys may use '-' or '_'
// and are returned with '_'. Throws std::invalid_argument on a line without
// '=' or an unknown key.
std::map<std::string, std::string> ParseConfigText(std::string_view text);

// Runs one subcommand. `args` excludes the program name. Flags override the
// config file (--config, else $QAFID_CONFIG), which overrides built-in
// defaults.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace qafid::cli

#endif  // QAFID_TOOLS_CLI_H_
