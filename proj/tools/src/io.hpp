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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxmart/measure.hpp"
#include "maxmart/paths.hpp"
#include "maxmart/penalization.hpp"
#include "maxmart/piecewise.hpp"
#include "maxmart/stats.hpp"
#include "maxmart/stopping.hpp"

namespace maxmart::cli {

using Json = nlohmann::ordered_json;

/// Raised for bad flag values found after parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Where a subcommand writes. `--out` names a directory, or the summary file
/// itself when it ends in .json; tables then sit beside it.
class OutputSet {
public:
    OutputSet(const std::string& out, const std::string& stem);
    std::filesystem::path summary() const { return summary_; }
    std::filesystem::path table(const std::string& suffix = "") const;
    std::filesystem::path dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::filesystem::path summary_;
    std::string stem_;
};

/// Shortest round-trip rendering, so reruns are byte-identical.
std::string num(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(const std::string& v);
    CsvWriter& operator<<(bool v);
    void end_row();

private:
    void sep();
    std::ofstream out_;
    bool first_ = true;
};

Json to_json(const StatReport& r);
Json to_json(const AtomicMeasure& mu);

/// Writes the summary with the seed and wall time appended.
void write_summary(const OutputSet& out, Json doc, std::uint64_t seed, double wall_time);

/// "0.1,0.2" or "0.1:0.9:0.1" (start:stop:step, inclusive).
std::vector<double> parse_list(const std::string& text);

/// const:c, indicator:a, indicator-open:a, interval:a,b, affine:a,b,
/// power:c,k (k in 0..2), exp:c,r.
PiecewiseFn parse_function(const std::string& text);

/// fixed:t or exit:a,b.
StoppingRule parse_bounded_rule(const std::string& text);

/// exp (e^{-x}) or indicator:a (uniform density on [0, a)).
PiecewiseFn parse_density(const std::string& text);

/// endpoint:a, sup:a or all.
PenalEvent parse_event(const std::string& text);

/// Built-in name (dirac:x, uniform:a:b:n, normal:n, exponential:mean:n) or
/// a JSON file of [x, w] pairs.
AtomicMeasure load_target(const std::string& text);

/// Streams the first `count` paths of a run under `rule` into one
/// step,t,B,sup,ell file each.
void dump_paths(const OutputSet& out, const SimConfig& config, const StoppingRule& rule, std::size_t count);

} // namespace maxmart::cli
