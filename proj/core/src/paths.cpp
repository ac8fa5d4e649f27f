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

#include "maxmart/paths.hpp"

#include <numbers>
#include <stdexcept>

namespace maxmart {

std::size_t SimConfig::steps() const
{
    return static_cast<std::size_t>(std::llround(horizon / dt));
}

void SimConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("SimConfig: dt must be positive");
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("SimConfig: horizon must be nonnegative");
    }
    if (horizon / dt > static_cast<double>(kMaxSteps)) {
        throw std::length_error("SimConfig: horizon / dt exceeds the step cap");
    }
    if (local_time == LocalTimeMethod::downcrossing &&
        !(local_time_epsilon >= std::sqrt(dt) * (1.0 - 1e-12))) {
        throw std::invalid_argument("SimConfig: local_time_epsilon must be >= sqrt(dt)");
    }
}

PathWalker::PathWalker(const SimConfig& config, std::uint64_t path_index)
    : normals_(config.seed, path_index),
      dt_(config.dt),
      sqrt_dt_(std::sqrt(config.dt)),
      epsilon_(config.local_time_epsilon),
      method_(config.local_time)
{
    config.validate();
    if (config.extremes == Extremes::bridge) {
        bridge_.emplace(config.seed, path_index, Stream::bridge);
        if (method_ == LocalTimeMethod::downcrossing) {
            crossings_stream_.emplace(config.seed, path_index, Stream::crossings);
        }
    }
}

void PathWalker::downcross(double a, double b) noexcept
{
    // A zero is reached when the step lands on 0 or changes sign.
    bool zero = b == 0.0 || (a > 0.0) != (b > 0.0);
    bool band = std::abs(b) >= epsilon_;
    if (crossings_stream_) {
        // The bridge from a to b stays on one side of a level c with
        // probability 1 - exp(-2 (a - c)(b - c) / dt).
        const double x = std::abs(a);
        const double y = std::abs(b);
        if (!zero && crossings_stream_->uniform() < std::exp(-2.0 * x * y / dt_)) {
            zero = true;
        }
        if (!band && !zero) {
            const double miss_up = -std::expm1(-2.0 * (epsilon_ - a) * (epsilon_ - b) / dt_);
            const double miss_down = -std::expm1(-2.0 * (epsilon_ + a) * (epsilon_ + b) / dt_);
            band = crossings_stream_->uniform() >= miss_up * miss_down;
        }
    }
    if (armed_ && zero) {
        armed_ = false;
        ++crossings_;
        s_.ell = epsilon_ * static_cast<double>(crossings_);
    }
    if (!armed_ && band) {
        armed_ = true;
    }
}

PathGrid simulate(const SimConfig& config, std::uint64_t path_index)
{
    config.validate();
    if (path_index >= config.n_paths) {
        throw std::out_of_range("simulate: path_index >= n_paths");
    }
    const std::size_t n = config.steps() + 1;
    PathGrid g;
    g.dt = config.dt;
    g.values.reserve(n);
    g.sup.reserve(n);
    g.ell.reserve(n);
    PathWalker w(config, path_index);
    for (std::size_t k = 0;; ++k) {
        const PathState& s = w.state();
        g.values.push_back(s.b);
        g.sup.push_back(s.sup);
        g.ell.push_back(s.ell);
        if (k + 1 == n) {
            break;
        }
        w.advance();
    }
    return g;
}

std::vector<double> local_time(const PathGrid& path, double epsilon)
{
    if (!(epsilon >= std::sqrt(path.dt) * (1.0 - 1e-12))) {
        throw std::invalid_argument("local_time: epsilon must be >= sqrt(dt)");
    }
    std::vector<double> ell(path.size(), 0.0);
    bool armed = false;
    std::size_t crossings = 0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double a = path.values[k - 1];
        const double b = path.values[k];
        if (armed && (b == 0.0 || (a > 0.0) != (b > 0.0))) {
            armed = false;
            ++crossings;
        }
        if (!armed && std::abs(b) >= epsilon) {
            armed = true;
        }
        ell[k] = epsilon * static_cast<double>(crossings);
    }
    return ell;
}

std::vector<double> tanaka_local_time(std::span<const double> values)
{
    std::vector<double> ell(values.size(), 0.0);
    for (std::size_t k = 1; k < values.size(); ++k) {
        ell[k] = ell[k - 1] + PathWalker::tanaka_increment(values[k - 1], values[k]);
    }
    return ell;
}

std::optional<std::size_t> first_hitting(const PathGrid& path, double level)
{
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double v = path.values[k];
        if ((level > 0.0 && v >= level) || (level < 0.0 && v <= level) || level == 0.0) {
            return k;
        }
    }
    return std::nullopt;
}

double joint_density(double t, double x, double y)
{
    if (!(t > 0.0)) {
        throw std::domain_error("joint_density: t must be positive");
    }
    if (y < 0.0 || y < x) {
        return 0.0;
    }
    const double z = 2.0 * y - x;
    return std::sqrt(2.0 / (std::numbers::pi * t * t * t)) * z * std::exp(-z * z / (2.0 * t));
}

} // namespace maxmart
