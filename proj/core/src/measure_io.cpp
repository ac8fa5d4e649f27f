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

#include "maxmart/measure_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace maxmart {

std::string measure_to_json(const AtomicMeasure& mu)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const Atom& a : mu.atoms()) {
        arr.push_back({a.x, a.w});
    }
    return arr.dump();
}

AtomicMeasure measure_from_json(std::string_view text)
{
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array()) {
        throw std::invalid_argument("measure JSON must be an array of [x, w] pairs");
    }
    std::vector<Atom> atoms;
    double total = 0.0;
    for (const auto& pair : doc) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw std::invalid_argument("measure JSON entries must be [x, w] number pairs");
        }
        const Atom a{pair[0].get<double>(), pair[1].get<double>()};
        if (!(a.w > 0.0)) {
            throw std::invalid_argument("measure JSON weights must be positive");
        }
        total += a.w;
        atoms.push_back(a);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("measure JSON weights must sum to 1");
    }
    return AtomicMeasure::normalized(std::move(atoms));
}

void write_measure_csv(std::ostream& out, const AtomicMeasure& mu)
{
    out << "x,w\n" << std::setprecision(17);
    for (const Atom& a : mu.atoms()) {
        out << a.x << ',' << a.w << '\n';
    }
}

AtomicMeasure load_measure(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open measure file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return measure_from_json(buf.str());
}

void save_measure(const std::filesystem::path& path, const AtomicMeasure& mu)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write measure file " + path.string());
    }
    out << measure_to_json(mu) << '\n';
}

AtomicMeasure parse_measure_argument(const std::string& arg)
{
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    auto num = [&](std::size_t i) { return std::stod(parts.at(i)); };
    auto count = [&](std::size_t i) { return static_cast<std::size_t>(std::stoul(parts.at(i))); };
    const std::string& kind = parts.empty() ? arg : parts[0];
    if (kind == "dirac" && parts.size() == 2) {
        return AtomicMeasure::dirac(num(1));
    }
    if (kind == "uniform" && parts.size() == 4) {
        return AtomicMeasure::uniform(num(1), num(2), count(3));
    }
    if (kind == "normal" && parts.size() == 2) {
        return AtomicMeasure::standard_normal(count(1));
    }
    if (kind == "exponential" && parts.size() == 3) {
        return AtomicMeasure::exponential(num(1), count(2));
    }
    return load_measure(arg);
}

} // namespace maxmart
