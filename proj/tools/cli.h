// Copyright 2026 The vidtex Authors
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

// Command-line front end. RunCli is separate from main so tests can drive
// subcommands in-process.

#ifndef VIDTEX_TOOLS_CLI_H_
#define VIDTEX_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace vidtex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitInternal = 1;

/// args excludes the program name. Writes reports to `out`, diagnostics to
/// `err`, and returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vidtex::cli

#endif  // VIDTEX_TOOLS_CLI_H_
