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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "maxmart/paths.hpp"
#include "maxmart/stats.hpp"
#include "maxmart/stopping.hpp"

namespace maxmart {
namespace {

SimConfig config(double dt, double horizon, std::size_t paths)
{
    SimConfig c;
    c.dt = dt;
    c.horizon = horizon;
    c.n_paths = paths;
    c.seed = 42;
    return c;
}

PathGrid synthetic(std::vector<double> values, double dt = 1.0)
{
    PathGrid p;
    p.dt = dt;
    p.values = std::move(values);
    double s = 0.0;
    for (double v : p.values) {
        s = std::max(s, v);
        p.sup.push_back(s);
    }
    p.ell = tanaka_local_time(p.values);
    return p;
}

TEST(Simulate, ZeroHorizon)
{
    const auto p = simulate(config(1.0, 0.0, 1), 0);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p.values[0], 0.0);
}

TEST(Simulate, Deterministic)
{
    for (Extremes e : {Extremes::grid, Extremes::bridge}) {
        auto c = config(1e-3, 1.0, 20);
        c.extremes = e;
        const auto a = simulate(c, 17);
        const auto b = simulate(c, 17);
        EXPECT_EQ(a.values, b.values);
        EXPECT_EQ(a.sup, b.sup);
        EXPECT_EQ(a.ell, b.ell);
        EXPECT_NE(a.values, simulate(c, 18).values);
    }
}

TEST(Simulate, TerminalMean)
{
    auto c = config(1e-3, 1.0, 20000);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < c.n_paths; ++i) {
        const double b = simulate(c, i).values.back();
        s += b;
        s2 += b * b;
    }
    const double n = static_cast<double>(c.n_paths);
    EXPECT_LE(std::abs(s / n), 3.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Simulate, BridgeSupDominatesGrid)
{
    auto c = config(1e-2, 1.0, 4);
    c.extremes = Extremes::bridge;
    const auto p = simulate(c, 3);
    for (std::size_t k = 0; k < p.size(); ++k) {
        EXPECT_GE(p.sup[k], p.values[k]);
        if (k > 0) {
            EXPECT_GE(p.sup[k], p.sup[k - 1]);
        }
    }
}

TEST(Simulate, RejectsBadConfig)
{
    EXPECT_THROW(config(0.0, 1.0, 1).validate(), std::invalid_argument);
    EXPECT_THROW(config(1e-9, 1e3, 1).validate(), std::length_error);
}

TEST(LocalTime, NeverReturns)
{
    const auto p = synthetic({0.0, 0.2, 0.4, 0.6, 0.8}, 1e-3);
    const auto ell = local_time(p, 0.05);
    EXPECT_EQ(ell.back(), 0.0);
}

TEST(LocalTime, CountsDowncrossings)
{
    const double eps = 0.1;
    std::vector<double> v{0.0};
    for (int m = 0; m < 5; ++m) {
        v.push_back(eps);
        v.push_back(0.0);
    }
    const auto ell = local_time(synthetic(v, 1e-3), eps);
    EXPECT_NEAR(ell.back(), 5 * eps, 1e-15);
}

TEST(LocalTime, TanakaIsNonnegativeAndExact)
{
    const std::vector<double> v{0.0, 0.3, -0.2, -0.5, 0.1, 0.4};
    const auto ell = tanaka_local_time(v);
    for (std::size_t k = 1; k < v.size(); ++k) {
        EXPECT_GE(ell[k], ell[k - 1]);
    }
    // Leaving 0 adds |b| = 0.3; the crossings add 2 * 0.2 and 2 * 0.1.
    EXPECT_NEAR(ell.back(), 0.9, 1e-15);
    std::vector<double> m(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        m[k] = ell[k] - std::abs(v[k]);
    }
    // ell - |B| only moves by -sgn(a)(b - a).
    EXPECT_NEAR(m[2] - m[1], 0.5, 1e-15);
}

// E L at the exit of [-1, 1] is 1. Each excursion reaching epsilon goes on to
// reach 1 with probability epsilon, so completed downcrossings number
// (1 - epsilon) / epsilon on average.
TEST(LocalTime, ExitTimeMean)
{
    for (LocalTimeMethod method : {LocalTimeMethod::tanaka, LocalTimeMethod::downcrossing}) {
        auto c = config(1e-4, 50.0, 20000);
        c.extremes = Extremes::bridge;
        c.local_time = method;
        const auto out = stop_paths(c, StoppingRule::first_exit(-1.0, 1.0));
        std::vector<double> ell;
        for (const auto& o : out) {
            ASSERT_TRUE(o.stopped);
            ell.push_back(o.ell);
        }
        const auto r = mean_report(ell);
        const double expected = method == LocalTimeMethod::tanaka ? 1.0 : 1.0 - c.local_time_epsilon;
        EXPECT_NEAR(r.estimate, expected, 3.0 * r.std_error + 0.01);
    }
}

TEST(FirstHitting, Synthetic)
{
    const auto p = synthetic({0.0, 0.5, 1.0});
    EXPECT_EQ(first_hitting(p, 0.0), 0u);
    EXPECT_EQ(first_hitting(p, 0.9), 2u);
    EXPECT_FALSE(first_hitting(p, 1.5).has_value());
    EXPECT_FALSE(first_hitting(p, -0.1).has_value());
}

TEST(FirstHitting, ReflectionPrinciple)
{
    auto c = config(1e-3, 1.0, 20000);
    c.extremes = Extremes::bridge;
    const auto out = stop_paths(c, StoppingRule::hitting_level(1.0));
    double hits = 0.0;
    for (const auto& o : out) {
        hits += o.stopped ? 1.0 : 0.0;
    }
    const double p = hits / static_cast<double>(c.n_paths);
    const double expected = 2.0 * (1.0 - normal_cdf(1.0));
    EXPECT_NEAR(p, expected, 4.0 * std::sqrt(expected * (1 - expected) / c.n_paths));
}

TEST(JointDensity, Values)
{
    EXPECT_EQ(joint_density(1.0, 2.0, 1.0), 0.0);
    EXPECT_NEAR(joint_density(1.0, 0.0, 1.0), std::sqrt(2.0 / std::numbers::pi) * 2.0 * std::exp(-2.0), 1e-15);
    EXPECT_THROW(joint_density(0.0, 0.0, 1.0), std::domain_error);
}

TEST(JointDensity, Normalizes)
{
    // Midpoint rule in x on [-8, y] for each y, so the edge x = y is resolved.
    const double h = 0.005;
    const int nx = 2000;
    double total = 0.0;
    for (double y = h / 2; y < 8.0; y += h) {
        const double w = (y + 8.0) / nx;
        for (int i = 0; i < nx; ++i) {
            total += joint_density(1.0, -8.0 + (i + 0.5) * w, y) * w * h;
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-3);
}

TEST(Stop, FixedTimeZero)
{
    const auto p = simulate(config(1e-3, 1.0, 1), 0);
    const auto o = stop(p, StoppingRule::fixed_time(0.0));
    EXPECT_TRUE(o.stopped);
    EXPECT_EQ(o.step, 0u);
    EXPECT_EQ(o.b, 0.0);
}

TEST(Stop, HittingNegativeLevel)
{
    const auto p = synthetic({0.0, -0.4, -0.8, -1.0, -0.5});
    const auto o = stop(p, StoppingRule::hitting_level(-1.0));
    EXPECT_TRUE(o.stopped);
    EXPECT_EQ(o.step, 3u);
}

TEST(Stop, ExitTimeMean)
{
    auto c = config(1e-3, 50.0, 20000);
    c.extremes = Extremes::bridge;
    const auto out = stop_paths(c, StoppingRule::first_exit(-1.0, 1.0));
    std::vector<double> t;
    for (const auto& o : out) {
        t.push_back(o.t);
    }
    EXPECT_NEAR(mean_report(t).estimate, 1.0, 0.02);
}

TEST(Stop, StreamingMatchesStored)
{
    auto c = config(1e-3, 5.0, 20);
    const auto rule = StoppingRule::first_exit(-0.5, 0.7);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto a = stop(simulate(c, i), rule);
        const auto b = run_until_stopped(c, i, rule);
        EXPECT_EQ(a.step, b.step);
        EXPECT_EQ(a.b, b.b);
    }
}

TEST(Stop, ThreadCountInvariant)
{
    auto c = config(1e-3, 10.0, 2000);
    c.extremes = Extremes::bridge;
    const auto rule = StoppingRule::randomized_abs_hitting({1.0, 2.0}, {0.5, 0.5});
    c.threads = 1;
    const auto a = stop_paths(c, rule);
    c.threads = 3;
    const auto b = stop_paths(c, rule);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].b, b[i].b);
        EXPECT_EQ(a[i].ell, b[i].ell);
    }
}

TEST(Levy, SupMatchesAbsB)
{
    auto c = config(1e-3, 1.0, 20000);
    c.extremes = Extremes::bridge;
    const auto out = stop_paths(c, StoppingRule::fixed_time(1.0));
    std::vector<double> sup, abs_b;
    for (const auto& o : out) {
        sup.push_back(o.sup);
        abs_b.push_back(std::abs(o.b));
    }
    const double n_eff = c.n_paths / 2.0;
    EXPECT_LE(ks_two_sample(sup, abs_b), ks_critical_value(0.01, n_eff));
}

} // namespace
} // namespace maxmart
