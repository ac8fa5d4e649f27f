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

#include "maxmart/martingales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "maxmart/parallel.hpp"

namespace maxmart {

double max_mart(const PiecewiseFn& f, double x, double y, double c)
{
    if (y < std::max(x, 0.0)) {
        throw std::domain_error("max_mart: need y >= max(x, 0)");
    }
    return f.primitive(y) - f(y) * (y - x) + c;
}

double local_time_mart(const PiecewiseFn& g, double abs_x, double l, double c)
{
    if (abs_x < 0.0 || l < 0.0) {
        throw std::domain_error("local_time_mart: |x| and l must be >= 0");
    }
    return g.primitive(l) - g(l) * abs_x + c;
}

void DiscretePathPair::validate() const
{
    if (y.empty() || y.size() != phi.size()) {
        throw std::invalid_argument("DiscretePathPair: Y and phi need the same nonzero length");
    }
    if (y[0] != 0.0) {
        throw std::invalid_argument("DiscretePathPair: Y_0 must be 0");
    }
    for (std::size_t n = 1; n < y.size(); ++n) {
        if (y[n] != 0.0 && phi[n] != phi[n - 1]) {
            throw std::invalid_argument(
                "DiscretePathPair: phi changes at step " + std::to_string(n) + " away from 0");
        }
    }
}

double balayage_identity_check(const DiscretePathPair& pair)
{
    pair.validate();
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t n = 1; n < pair.y.size(); ++n) {
        sum += pair.phi[n - 1] * (pair.y[n] - pair.y[n - 1]);
        worst = std::max(worst, std::abs(pair.phi[n] * pair.y[n] - sum));
    }
    return worst;
}

double SfnProcess::max_discrepancy() const noexcept
{
    double worst = 0.0;
    for (std::size_t n = 0; n < direct.size(); ++n) {
        worst = std::max(worst, std::abs(direct[n] - decomposed[n]));
    }
    return worst;
}

SfnProcess sfn_process(std::span<const double> x, const PiecewiseFn& f)
{
    if (x.empty() || x[0] != 0.0) {
        throw std::invalid_argument("sfn_process: path must start at 0");
    }
    const double top = *std::max_element(x.begin(), x.end());
    if (!f.nonnegative_on(0.0, top) || !f.nondecreasing_on(0.0, top)) {
        throw std::invalid_argument("sfn_process: f must be nonnegative and nondecreasing");
    }
    SfnProcess out;
    out.direct.reserve(x.size());
    out.decomposed.reserve(x.size());
    double bar = 0.0;
    double sum = 0.0;
    out.direct.push_back(f(0.0) * 0.0 - f.primitive(0.0));
    out.decomposed.push_back(0.0);
    for (std::size_t n = 1; n < x.size(); ++n) {
        const double prev_bar = bar;
        bar = std::max(bar, x[n]);
        const double f_prev = f(prev_bar);
        // integral over [prev_bar, bar] of f(prev_bar) - f(u), then the martingale-transform term.
        sum += f_prev * (bar - prev_bar) - (f.primitive(bar) - f.primitive(prev_bar));
        sum -= f_prev * (x[n] - x[n - 1]);
        out.direct.push_back(f(bar) * (bar - x[n]) - f.primitive(bar));
        out.decomposed.push_back(sum);
    }
    return out;
}

SrwPaths::SrwPaths(int n) : n_(n)
{
    if (n < 0 || n > kMaxEnumeration) {
        throw std::invalid_argument("enumerate_srw: n must lie in [0, 20]");
    }
}

std::vector<int> SrwPaths::path(std::uint64_t index) const
{
    std::vector<int> p(static_cast<std::size_t>(n_) + 1, 0);
    for (int k = 0; k < n_; ++k) {
        p[k + 1] = p[k] + (((index >> k) & 1) != 0 ? 1 : -1);
    }
    return p;
}

void SrwPaths::for_each(const std::function<void(std::span<const int>)>& fn) const
{
    std::vector<int> p(static_cast<std::size_t>(n_) + 1, 0);
    for (std::uint64_t index = 0; index < count(); ++index) {
        for (int k = 0; k < n_; ++k) {
            p[k + 1] = p[k] + (((index >> k) & 1) != 0 ? 1 : -1);
        }
        fn(p);
    }
}

SrwPaths enumerate_srw(int n)
{
    return SrwPaths(n);
}

namespace {

// Depth-first walk over |SRW| paths; leaf(xbar, x) is called once per path.
template <class Leaf>
void walk_abs_srw(int remaining, int s, int bar, Leaf& leaf)
{
    if (remaining == 0) {
        leaf(bar, std::abs(s));
        return;
    }
    for (int step : {1, -1}) {
        const int next = s + step;
        walk_abs_srw(remaining - 1, next, std::max(bar, std::abs(next)), leaf);
    }
}

} // namespace

DoobMaximalResult doob_maximal_check(int n, double lambda)
{
    const SrwPaths paths(n);
    double count = 0.0;
    double mass = 0.0;
    auto leaf = [&](int bar, int x) {
        if (bar >= lambda) {
            count += 1.0;
            mass += x;
        }
    };
    walk_abs_srw(n, 0, 0, leaf);
    DoobMaximalResult r;
    r.lhs = lambda * count * paths.weight();
    r.rhs = mass * paths.weight();
    r.holds = r.lhs <= r.rhs;
    return r;
}

DoobLpResult doob_lp_check(int n, double p)
{
    if (!(p > 1.0)) {
        throw std::invalid_argument("doob_lp_check: p must exceed 1");
    }
    const SrwPaths paths(n);
    double bar_p = 0.0;
    double x_p = 0.0;
    double mixed = 0.0;
    auto leaf = [&](int bar, int x) {
        bar_p += std::pow(bar, p);
        x_p += std::pow(x, p);
        mixed += std::pow(bar, p - 1.0) * x;
    };
    walk_abs_srw(n, 0, 0, leaf);
    const double w = paths.weight();
    DoobLpResult r;
    r.lhs = bar_p * w;
    r.rhs = std::pow(p / (p - 1.0), p) * x_p * w;
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    r.holds = r.lhs <= r.rhs;
    r.intermediate_lhs = (p - 1.0) * bar_p * w;
    r.intermediate_rhs = p * mixed * w;
    r.intermediate_holds = r.intermediate_lhs <= r.intermediate_rhs;
    return r;
}

namespace {

struct SfnWalk {
    const PiecewiseFn& f;
    double tolerance;
    SupermartingaleCheck result;

    double value(int bar, int x) const { return f(bar) * (bar - x) - f.primitive(bar); }

    void visit(int remaining, int s, int bar)
    {
        if (remaining == 0) {
            return;
        }
        double next_mean = 0.0;
        for (int step : {1, -1}) {
            const int next = s + step;
            next_mean += 0.5 * value(std::max(bar, std::abs(next)), std::abs(next));
        }
        const double current = value(bar, std::abs(s));
        const double excess = next_mean - current;
        ++result.prefixes;
        result.worst_excess = std::max(result.worst_excess, excess);
        if (excess > tolerance * std::max(1.0, std::abs(current))) {
            result.holds = false;
        }
        for (int step : {1, -1}) {
            const int next = s + step;
            visit(remaining - 1, next, std::max(bar, std::abs(next)));
        }
    }
};

} // namespace

SupermartingaleCheck sfn_supermartingale_check(int n, const PiecewiseFn& f, double tolerance)
{
    (void)SrwPaths(n);
    if (!f.nonnegative_on(0.0, n) || !f.nondecreasing_on(0.0, n)) {
        throw std::invalid_argument("sfn_supermartingale_check: f must be nonnegative and nondecreasing");
    }
    SfnWalk walk{f, tolerance, {}};
    walk.result.worst_excess = -std::numeric_limits<double>::infinity();
    walk.result.holds = true;
    walk.visit(n, 0, 0);
    return walk.result;
}

double balayage_exhaustive_check(int n)
{
    const SrwPaths paths(n);
    double worst = 0.0;
    DiscretePathPair pair;
    pair.y.resize(static_cast<std::size_t>(n) + 1);
    pair.phi.resize(static_cast<std::size_t>(n) + 1);
    paths.for_each([&](std::span<const int> p) {
        int returns = 0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            pair.y[k] = p[k];
            if (k > 0 && p[k] == 0) {
                ++returns;
            }
            // Any function of the history up to the last zero will do.
            pair.phi[k] = k > 0 && p[k] != 0 ? pair.phi[k - 1] : 1.0 + 0.37 * returns - 0.01 * returns * returns;
        }
        worst = std::max(worst, balayage_identity_check(pair));
    });
    return worst;
}

DriftReport drift_test(const StateFunctional& h, const SimConfig& config, double t1, double t2)
{
    if (!(0.0 <= t1 && t1 < t2)) {
        throw std::invalid_argument("drift_test: need 0 <= t1 < t2");
    }
    SimConfig cfg = config;
    cfg.horizon = t2;
    cfg.validate();
    const auto k1 = static_cast<std::size_t>(std::llround(t1 / cfg.dt));
    const std::size_t k2 = cfg.steps();
    const auto diffs = parallel_map<double>(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathWalker w(cfg, i);
        double h1 = 0.0;
        for (;;) {
            const PathState& s = w.state();
            if (s.step == k1) {
                h1 = h(s);
            }
            if (s.step == k2) {
                return h(s) - h1;
            }
            w.advance();
        }
    });
    DriftReport r;
    r.drift = mean_report(diffs, cfg.seed);
    r.passes = std::abs(r.drift.estimate) <= 3.0 * r.drift.std_error;
    return r;
}

DriftReport martingale_drift_test(const PiecewiseFn& f, const SimConfig& config, double t1, double t2)
{
    return drift_test([&](const PathState& s) { return max_mart(f, s.b, s.sup); }, config, t1, t2);
}

DriftReport local_time_drift_test(const PiecewiseFn& g, const SimConfig& config, double t1, double t2)
{
    return drift_test(
        [&](const PathState& s) { return local_time_mart(g, std::abs(s.b), s.ell); }, config, t1, t2);
}

DriftReport balayage_drift_test(const PiecewiseFn& f, const SimConfig& config, double t1, double t2)
{
    return drift_test([&](const PathState& s) { return f(s.ell) * s.b; }, config, t1, t2);
}

} // namespace maxmart
