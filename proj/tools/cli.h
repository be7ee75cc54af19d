// Copyright 2026 The widegamut Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Kept as a library so tests can drive it without
// spawning processes.

#ifndef WIDEGAMUT_TOOLS_CLI_H_
#define WIDEGAMUT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace widegamut::cli {

// Runs one invocation. `args` excludes the program name. Stats go to `out`
// as key=value lines, diagnostics to `err`. Returns the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace widegamut::cli

#endif  // WIDEGAMUT_TOOLS_CLI_H_
