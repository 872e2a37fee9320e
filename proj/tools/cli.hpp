/* Copyright 2026 The incnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/


// The incnet command-line interface.

#ifndef INCNET_TOOLS_CLI_HPP_
#define INCNET_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace incnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (args excludes the program name). Returns 0 on
// success, 1 when a check fails or an input is invalid, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace incnet

#endif  // INCNET_TOOLS_CLI_HPP_
