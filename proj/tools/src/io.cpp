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

#include "io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "maxmart/measure_io.hpp"

namespace maxmart::cli {

namespace {

std::vector<std::string> split(const std::string& text, char delim)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, delim);) {
        parts.push_back(item);
    }
    return parts;
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw UsageError("not a finite number: '" + s + "'");
    }
    return v;
}

// Splits "kind:a,b" into kind and its numeric arguments.
std::pair<std::string, std::vector<double>> kind_and_args(const std::string& text)
{
    const auto colon = text.find(':');
    std::pair<std::string, std::vector<double>> r;
    r.first = text.substr(0, colon);
    if (colon != std::string::npos) {
        for (const auto& a : split(text.substr(colon + 1), ',')) {
            r.second.push_back(to_double(a));
        }
    }
    return r;
}

void need(const std::vector<double>& args, std::size_t n, const std::string& text)
{
    if (args.size() != n) {
        throw UsageError("'" + text + "' needs " + std::to_string(n) + " argument(s)");
    }
}

} // namespace

OutputSet::OutputSet(const std::string& out, const std::string& stem) : stem_(stem)
{
    const std::filesystem::path p(out);
    if (p.extension() == ".json") {
        summary_ = p;
        dir_ = p.has_parent_path() ? p.parent_path() : std::filesystem::path(".");
        stem_ = p.stem().string();
    } else {
        dir_ = p;
        summary_ = dir_ / (stem + ".json");
    }
    std::filesystem::create_directories(dir_);
}

std::filesystem::path OutputSet::table(const std::string& suffix) const
{
    return dir_ / (stem_ + (suffix.empty() ? "" : "-" + suffix) + ".csv");
}

std::string num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path)
{
    if (!out_) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const auto& h : header) {
        *this << h;
    }
    end_row();
}

void CsvWriter::sep()
{
    if (!first_) {
        out_ << ',';
    }
    first_ = false;
}

CsvWriter& CsvWriter::operator<<(double v)
{
    sep();
    out_ << num(v);
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v)
{
    sep();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::operator<<(bool v)
{
    sep();
    out_ << (v ? "true" : "false");
    return *this;
}

void CsvWriter::end_row()
{
    out_ << '\n';
    first_ = true;
}

Json to_json(const StatReport& r)
{
    return Json{{"estimate", r.estimate}, {"stderr", r.std_error}, {"n", r.n}, {"seed", r.seed}};
}

Json to_json(const AtomicMeasure& mu)
{
    Json arr = Json::array();
    for (const Atom& a : mu.atoms()) {
        arr.push_back({a.x, a.w});
    }
    return arr;
}

void write_summary(const OutputSet& out, Json doc, std::uint64_t seed, double wall_time)
{
    doc["seed"] = seed;
    doc["wall_time"] = wall_time;
    std::ofstream f(out.summary());
    if (!f) {
        throw std::runtime_error("cannot write " + out.summary().string());
    }
    f << doc.dump(2) << '\n';
}

std::vector<double> parse_list(const std::string& text)
{
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw UsageError("range must be start:stop:step");
        }
        const double a = to_double(parts[0]);
        const double b = to_double(parts[1]);
        const double h = to_double(parts[2]);
        if (!(h > 0.0) || b < a) {
            throw UsageError("range needs start <= stop and step > 0");
        }
        std::vector<double> v;
        // Counted, not accumulated, so the points are exact multiples.
        const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
        for (long k = 0; k <= n; ++k) {
            v.push_back(a + h * static_cast<double>(k));
        }
        return v;
    }
    std::vector<double> v;
    for (const auto& s : split(text, ',')) {
        v.push_back(to_double(s));
    }
    if (v.empty()) {
        throw UsageError("empty list");
    }
    return v;
}

PiecewiseFn parse_function(const std::string& text)
{
    const auto [kind, a] = kind_and_args(text);
    if (kind == "const") {
        need(a, 1, text);
        return PiecewiseFn::constant(a[0]);
    }
    if (kind == "indicator" || kind == "indicator-open") {
        need(a, 1, text);
        return PiecewiseFn::indicator(a[0], kind == "indicator");
    }
    if (kind == "interval") {
        need(a, 2, text);
        return PiecewiseFn::interval(a[0], a[1]);
    }
    if (kind == "affine") {
        need(a, 2, text);
        return PiecewiseFn::affine(a[0], a[1]);
    }
    if (kind == "power") {
        need(a, 2, text);
        return PiecewiseFn::monomial(a[0], static_cast<int>(a[1]));
    }
    if (kind == "exp") {
        need(a, 2, text);
        return PiecewiseFn::exponential(a[0], a[1]);
    }
    throw UsageError("unknown function '" + text + "'");
}

StoppingRule parse_bounded_rule(const std::string& text)
{
    const auto [kind, a] = kind_and_args(text);
    if (kind == "fixed") {
        need(a, 1, text);
        return StoppingRule::fixed_time(a[0]);
    }
    if (kind == "exit") {
        need(a, 2, text);
        return StoppingRule::first_exit(a[0], a[1]);
    }
    throw UsageError("unknown rule '" + text + "' (expected fixed:t or exit:a,b)");
}

PiecewiseFn parse_density(const std::string& text)
{
    const auto [kind, a] = kind_and_args(text);
    if (kind == "exp" && a.empty()) {
        return PiecewiseFn::exponential(1.0, -1.0);
    }
    if (kind == "indicator") {
        need(a, 1, text);
        if (!(a[0] > 0.0)) {
            throw UsageError("indicator density needs a > 0");
        }
        return PiecewiseFn({0.0, a[0]}, {Piece{.c0 = 1.0 / a[0]}, Piece{}});
    }
    throw UsageError("unknown density '" + text + "' (expected exp or indicator:a)");
}

PenalEvent parse_event(const std::string& text)
{
    const auto [kind, a] = kind_and_args(text);
    if (kind == "all" && a.empty()) {
        return PenalEvent{PenalEvent::Kind::everything, 0.0};
    }
    if (kind == "endpoint" || kind == "sup") {
        need(a, 1, text);
        return PenalEvent{
            kind == "endpoint" ? PenalEvent::Kind::endpoint_le : PenalEvent::Kind::sup_le, a[0]};
    }
    throw UsageError("unknown event '" + text + "' (expected endpoint:a, sup:a or all)");
}

AtomicMeasure load_target(const std::string& text)
{
    try {
        if (!text.empty() && text.front() == '[') {
            return measure_from_json(text);
        }
        return parse_measure_argument(text);
    } catch (const std::exception& e) {
        throw UsageError("cannot load target '" + text + "': " + e.what());
    }
}

void dump_paths(const OutputSet& out, const SimConfig& config, const StoppingRule& rule, std::size_t count)
{
    if (count > 100) {
        throw UsageError("--dump-paths is capped at 100");
    }
    count = std::min<std::size_t>(count, config.n_paths);
    const auto dir = out.dir() / "paths";
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "path-%03zu.csv", i);
        CsvWriter csv(dir / name, {"step", "t", "B", "sup", "ell"});
        run_until_stopped(config, i, rule, [&](const PathState& s) {
            csv << static_cast<double>(s.step) << s.t << s.b << s.sup << s.ell;
            csv.end_row();
        });
    }
}

} // namespace maxmart::cli
