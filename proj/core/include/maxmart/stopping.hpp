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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "maxmart/measure.hpp"
#include "maxmart/parallel.hpp"
#include "maxmart/paths.hpp"

namespace maxmart {

/// Psi_mu as a step table over atom locations.
class BarycentreTable {
public:
    explicit BarycentreTable(const AtomicMeasure& mu);

    double operator()(double x) const noexcept;
    std::span<const double> locations() const noexcept { return x_; }
    std::span<const double> values() const noexcept { return psi_; }

private:
    std::size_t first_at_or_above(double x) const noexcept;

    std::vector<double> x_;
    std::vector<double> psi_; // psi_[i] is the value on (x_{i-1}, x_i]
    // Uniform buckets over [x_0, x_{n-1}]: start_[k] is the first atom at or
    // above the left edge of bucket k.
    double lo_ = 0.0;
    double inv_width_ = 0.0;
    std::vector<std::size_t> start_;
};

/// phi_m, the right inverse of psi_m, as a step table.
class PhiTable {
public:
    PhiTable(const AtomicMeasure& m, DualHlAtoms atoms);

    double operator()(double ell) const noexcept;
    std::span<const double> levels() const noexcept { return levels_; }
    std::span<const double> locations() const noexcept { return y_; }

private:
    std::vector<double> levels_;
    std::vector<double> y_;
};

/// Stops at t (compared on the grid with a 1e-9 relative slack).
struct FixedTime {
    double t;
};
/// Stops once the running extremes leave (lower, upper).
struct FirstExit {
    double lower;
    double upper;
};
/// Stops once the running maximum (level > 0) or minimum (level < 0)
/// reaches level; level 0 stops at once.
struct HittingLevel {
    double level;
};
/// Stops the first time |B| reaches a level drawn once per path from an
/// independent coin: levels[k] with probability probs[k].
struct RandomizedAbsHitting {
    std::vector<double> levels;
    std::vector<double> cumulative;
};
/// Stops when sup >= Psi_mu(B).
struct AzemaYor {
    std::shared_ptr<const BarycentreTable> psi;
};
/// Stops when |B| >= phi_m(ell). Since phi_m is nondecreasing and ell never
/// decreases, this is tested on the running extremes, which makes the rule
/// exact between grid points under bridge extremes.
struct ValloisObloj {
    std::shared_ptr<const PhiTable> phi;
};

/// Decides from a PathState whether a path is stopped. Tables are immutable
/// and shared, so copies are cheap and safe across threads.
class StoppingRule {
public:
    using Variant = std::variant<FixedTime, FirstExit, HittingLevel, RandomizedAbsHitting,
        AzemaYor, ValloisObloj>;

    static StoppingRule fixed_time(double t);
    static StoppingRule first_exit(double lower, double upper);
    static StoppingRule hitting_level(double level);
    static StoppingRule randomized_abs_hitting(std::vector<double> levels, std::vector<double> probs);
    static StoppingRule azema_yor(std::shared_ptr<const BarycentreTable> psi);
    static StoppingRule vallois_obloj(std::shared_ptr<const PhiTable> phi);

    const Variant& variant() const noexcept { return v_; }
    std::string name() const;
    /// FixedTime, or FirstExit (whose exit time has all moments).
    bool bounded() const noexcept;
    bool uses_coin() const noexcept { return std::holds_alternative<RandomizedAbsHitting>(v_); }

    bool fires(const PathState& s, double coin) const noexcept
    {
        return std::visit([&](const auto& r) { return fires_impl(r, s, coin); }, v_);
    }

    static bool fires_impl(const FixedTime& r, const PathState& s, double) noexcept
    {
        return s.t >= r.t - 1e-9 * std::max(1.0, r.t);
    }
    static bool fires_impl(const FirstExit& r, const PathState& s, double) noexcept
    {
        return s.sup >= r.upper || s.inf <= r.lower;
    }
    static bool fires_impl(const HittingLevel& r, const PathState& s, double) noexcept
    {
        return r.level > 0.0 ? s.sup >= r.level : (r.level < 0.0 ? s.inf <= r.level : true);
    }
    static bool fires_impl(const RandomizedAbsHitting& r, const PathState& s, double coin) noexcept
    {
        return std::max(s.sup, -s.inf) >= r.levels[level_index(r, coin)];
    }
    static bool fires_impl(const AzemaYor& r, const PathState& s, double) noexcept
    {
        return s.sup >= (*r.psi)(s.b);
    }
    static bool fires_impl(const ValloisObloj& r, const PathState& s, double) noexcept
    {
        return std::max(s.sup, -s.inf) >= (*r.phi)(s.ell);
    }

    static std::size_t level_index(const RandomizedAbsHitting& r, double coin) noexcept;

private:
    explicit StoppingRule(Variant v) : v_(std::move(v)) {}

    Variant v_;
};

struct StopOutcome {
    std::size_t step = 0;
    double t = 0.0;
    double b = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double ell = 0.0;
    bool stopped = false;
};

inline StopOutcome make_outcome(const PathState& s, bool stopped) noexcept
{
    return {s.step, s.t, s.b, s.sup, s.inf, s.ell, stopped};
}

/// Per-path coin of randomized rules.
inline double path_coin(std::uint64_t seed, std::uint64_t path_index) noexcept
{
    return PathRandom(seed, path_index).uniform(Stream::auxiliary, 0);
}

/// First grid step at which the rule fires on a stored path; the running
/// minimum is rebuilt from the grid values.
StopOutcome stop(const PathGrid& path, const StoppingRule& rule, double coin = 0.5);

struct NoObserver {
    void operator()(const PathState&) const noexcept {}
};

/// Streams path `path_index` until the rule fires or the horizon is reached,
/// calling observer(state) on every visited state.
template <class Observer = NoObserver>
StopOutcome run_until_stopped(const SimConfig& config, std::uint64_t path_index,
    const StoppingRule& rule, Observer&& observer = {})
{
    PathWalker walker(config, path_index);
    const double coin = rule.uses_coin() ? path_coin(config.seed, path_index) : 0.5;
    const std::size_t last = config.steps();
    return std::visit(
        [&](const auto& r) {
            for (;;) {
                const PathState& s = walker.state();
                observer(s);
                if (StoppingRule::fires_impl(r, s, coin)) {
                    return make_outcome(s, true);
                }
                if (s.step >= last) {
                    return make_outcome(s, false);
                }
                walker.advance();
            }
        },
        rule.variant());
}

/// Outcomes of all config.n_paths paths, in path order.
std::vector<StopOutcome> stop_paths(const SimConfig& config, const StoppingRule& rule);

} // namespace maxmart
