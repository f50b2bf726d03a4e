// Copyright 2026 The coopnet Authors
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

#ifndef COOPNET_CLI_HPP
#define COOPNET_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace coopnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `coopnet` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on domain failures (violations, no surplus), 2 on
/// usage or parse errors; failures print one line to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coopnet

#endif  // COOPNET_CLI_HPP
