/*
   Copyright 2026 The maxmart Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <string>
#include <vector>

namespace maxmart::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

/// Parses argv, runs one subcommand and returns the process exit code:
/// 0 when every assertion holds, 2 when one fails, 1 on usage errors.
int dispatch(int argc, const char* const* argv);

/// Same, from a vector of arguments that excludes the program name.
int dispatch(const std::vector<std::string>& args);

} // namespace maxmart::cli
