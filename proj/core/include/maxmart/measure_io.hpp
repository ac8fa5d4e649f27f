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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "maxmart/measure.hpp"

namespace maxmart {

/// JSON array of [location, weight] pairs.
std::string measure_to_json(const AtomicMeasure& mu);
/// Accepts pairs in any order; equal locations are merged. Weights must sum
/// to one within 1e-9.
AtomicMeasure measure_from_json(std::string_view text);

/// CSV with header `x,w`.
void write_measure_csv(std::ostream& out, const AtomicMeasure& mu);

AtomicMeasure load_measure(const std::filesystem::path& path);
void save_measure(const std::filesystem::path& path, const AtomicMeasure& mu);

/// Parses either a path to a JSON measure file or one of the built-in
/// descriptors `dirac:x`, `uniform:a:b:N`, `normal:N`, `exponential:mean:N`.
AtomicMeasure parse_measure_argument(const std::string& arg);

} // namespace maxmart
