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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxmart/rng.hpp"

namespace maxmart {

enum class LocalTimeMethod {
    /// Discrete Tanaka increments |b| - |a| - sgn(a)(b - a): nonnegative,
    /// and ell - |B| is an exact discrete martingale.
    tanaka,
    /// epsilon times the number of completed downcrossings of [0, epsilon] by |B|.
    /// With bridge extremes, touches of 0 and epsilon between grid points
    /// are drawn from the bridge law, which removes the grid's undercount.
    downcrossing,
};

/// How running extremes are tracked between grid points.
enum class Extremes {
    /// Maximum and minimum over grid values only.
    grid,
    /// Each step also draws the extremes of the Brownian bridge joining the
    /// two grid values, so sup and inf have their exact continuous-time law.
    bridge,
};

inline constexpr std::size_t kMaxSteps = 100'000'000;

struct SimConfig {
    double dt = 1e-4;
    double horizon = 1.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    double local_time_epsilon = 0.05;
    LocalTimeMethod local_time = LocalTimeMethod::tanaka;
    Extremes extremes = Extremes::grid;
    /// 0 defers to MAXMART_THREADS, then to the hardware.
    unsigned threads = 0;

    /// Number of grid steps, horizon / dt rounded to the nearest integer.
    std::size_t steps() const;
    /// Throws std::invalid_argument on bad values and std::length_error
    /// beyond kMaxSteps.
    void validate() const;
};

/// Everything a stopping rule may look at.
struct PathState {
    std::size_t step = 0;
    double t = 0.0;
    double b = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double ell = 0.0;
};

/// Streams one path step by step without storing it.
class PathWalker {
public:
    PathWalker(const SimConfig& config, std::uint64_t path_index);

    const PathState& state() const noexcept { return s_; }

    void advance() noexcept
    {
        const double a = s_.b;
        const double b = a + sqrt_dt_ * normals_.next();
        ++s_.step;
        s_.t = static_cast<double>(s_.step) * dt_;
        s_.b = b;
        if (bridge_) {
            // Both uniforms are always consumed; the transcendental work is
            // skipped when even the largest possible excursion (-log U is at
            // most 53 log 2 < 37) cannot move an extreme.
            const double d2 = (b - a) * (b - a);
            const double reach = d2 + 74.0 * dt_;
            const double u_hi = bridge_->uniform();
            const double u_lo = bridge_->uniform();
            const double gap_hi = 2.0 * s_.sup - a - b;
            if (gap_hi <= 0.0 || gap_hi * gap_hi < reach) {
                s_.sup = std::max(s_.sup, 0.5 * (a + b + std::sqrt(d2 - 2.0 * dt_ * std::log(u_hi))));
            }
            const double gap_lo = a + b - 2.0 * s_.inf;
            if (gap_lo <= 0.0 || gap_lo * gap_lo < reach) {
                s_.inf = std::min(s_.inf, 0.5 * (a + b - std::sqrt(d2 - 2.0 * dt_ * std::log(u_lo))));
            }
        } else {
            s_.sup = std::max(s_.sup, b);
            s_.inf = std::min(s_.inf, b);
        }
        if (method_ == LocalTimeMethod::tanaka) {
            s_.ell += tanaka_increment(a, b);
        } else {
            downcross(a, b);
        }
    }

    static double tanaka_increment(double a, double b) noexcept
    {
        const double sgn = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
        return std::max(0.0, std::abs(b) - std::abs(a) - sgn * (b - a));
    }

private:
    void downcross(double a, double b) noexcept;

    NormalStream normals_;
    std::optional<WordStream> bridge_;
    std::optional<WordStream> crossings_stream_;
    double dt_;
    double sqrt_dt_;
    double epsilon_;
    LocalTimeMethod method_;
    bool armed_ = false;
    std::size_t crossings_ = 0;
    PathState s_;
};

/// One fully materialized path.
struct PathGrid {
    double dt = 1.0;
    std::vector<double> values;
    std::vector<double> sup;
    std::vector<double> ell;

    std::size_t size() const noexcept { return values.size(); }
};

/// Path `path_index` of the configuration. A pure function of
/// (seed, path_index); sup follows config.extremes and ell config.local_time.
PathGrid simulate(const SimConfig& config, std::uint64_t path_index);

/// Downcrossing local time of a stored path. Requires epsilon >= sqrt(dt).
/// Bias is of order sqrt(dt) / epsilon + epsilon.
std::vector<double> local_time(const PathGrid& path, double epsilon);
/// Discrete Tanaka local time of a stored path.
std::vector<double> tanaka_local_time(std::span<const double> values);

/// First k with values[k] >= level (level > 0) or <= level (level < 0).
std::optional<std::size_t> first_hitting(const PathGrid& path, double level);

/// Density of (B_t, sup_{s<=t} B_s) at (x, y). Throws std::domain_error for t <= 0.
double joint_density(double t, double x, double y);

} // namespace maxmart
