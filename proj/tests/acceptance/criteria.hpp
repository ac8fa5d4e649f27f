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

#include <functional>
#include <string>
#include <vector>

namespace maxmart::acceptance {

struct RunOptions {
    /// Multiplies every path count (and trims the enumeration depth below 1).
    double scale = 1.0;
    unsigned threads = 0;
};

struct Outcome {
    bool pass = false;
    std::string detail;
    /// Exact (hex-float) rendering of every number the verdict depends on.
    std::string fingerprint;
    double seconds = 0.0;
};

struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome(const RunOptions&)> run;
};

/// C1 to C11 in order.
const std::vector<Criterion>& criteria();

} // namespace maxmart::acceptance
