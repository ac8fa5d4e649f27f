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
#include <numeric>
#include <vector>

#include "maxmart/measure.hpp"
#include "maxmart/measure_io.hpp"
#include "maxmart/piecewise.hpp"
#include "maxmart/rng.hpp"
#include "maxmart/stats.hpp"

namespace maxmart {
namespace {

AtomicMeasure two_point() { return AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}}); }

TEST(Philox, KnownAnswer)
{
    // Reference vector for Philox4x32-10 with zero counter and key.
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerAllOnes)
{
    const auto out = Philox4x32::generate(
        {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out[0], 0x408f276du);
    EXPECT_EQ(out[1], 0x41c83b0eu);
    EXPECT_EQ(out[2], 0xa20bc7c6u);
    EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(NormalStream, MomentsAndDeterminism)
{
    NormalStream a(7, 3);
    NormalStream b(7, 3);
    constexpr int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.next();
        ASSERT_EQ(x, b.next());
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(NormalStream, StreamsDiffer)
{
    NormalStream a(7, 3);
    NormalStream b(7, 4);
    NormalStream c(8, 3);
    const double x = a.next();
    EXPECT_NE(x, b.next());
    EXPECT_NE(x, c.next());
}

TEST(Measure, Tail)
{
    EXPECT_EQ(tail(AtomicMeasure::dirac(0.0), 0.0), 1.0);
    EXPECT_EQ(tail(AtomicMeasure::dirac(0.0), 0.1), 0.0);
    EXPECT_EQ(tail(two_point(), 0.0), 0.5);
    EXPECT_EQ(cdf(two_point(), -1.0), 0.5);
}

TEST(Measure, Mean)
{
    EXPECT_EQ(mean(two_point()), 0.0);
    EXPECT_EQ(mean(AtomicMeasure::dirac(1.0)), 1.0);
    EXPECT_NEAR(mean(AtomicMeasure({{-2.0, 0.25}, {2.0 / 3.0, 0.75}})), 0.0, 1e-15);
}

TEST(Measure, RejectsBadWeights)
{
    EXPECT_THROW(AtomicMeasure({{0.0, 0.5}}), std::invalid_argument);
    EXPECT_THROW(AtomicMeasure({{0.0, -0.5}, {1.0, 1.5}}), std::invalid_argument);
}

TEST(Measure, TailInverse)
{
    EXPECT_EQ(tail_inverse(two_point(), 0.5, TailInverseKind::left_continuous), 1.0);
    EXPECT_EQ(tail_inverse(AtomicMeasure::dirac(0.0), 1.0, TailInverseKind::left_continuous), 0.0);
    EXPECT_EQ(tail_inverse(two_point(), 0.7, TailInverseKind::left_continuous), -1.0);
}

TEST(Measure, Barycentre)
{
    EXPECT_EQ(barycentre(two_point(), 0.0), 1.0);
    EXPECT_EQ(barycentre(two_point(), -1.0), 0.0);
    const auto u = AtomicMeasure::uniform(-1.0, 1.0, 1000);
    EXPECT_NEAR(barycentre(u, 0.0), 0.5, 2e-3);
    EXPECT_NEAR(barycentre(u, 0.5), 0.75, 2e-3);
}

TEST(Measure, BarycentreNondecreasingAndAboveX)
{
    const auto u = AtomicMeasure::standard_normal(500);
    double prev = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01) {
        const double psi = barycentre(u, x);
        EXPECT_GE(psi, prev);
        EXPECT_GE(psi, 0.0);
        if (x <= u.max_location()) {
            EXPECT_GE(psi, x - 1e-12);
        }
        prev = psi;
    }
}

TEST(Measure, BarycentreRightInverse)
{
    const auto u = AtomicMeasure::uniform(-1.0, 1.0, 1000);
    EXPECT_NEAR(barycentre_right_inverse(u, 0.25), -0.5, 3e-3);
    EXPECT_EQ(barycentre_right_inverse(two_point(), 0.5), -1.0);
    EXPECT_EQ(barycentre_right_inverse(two_point(), 3.0), 3.0);
}

TEST(Measure, DualHl)
{
    const auto d1 = AtomicMeasure::dirac(1.0);
    const auto m = AtomicMeasure({{1.0, 0.5}, {2.0, 0.5}});
    EXPECT_EQ(dual_hl(d1, 0.5), 0.0);
    EXPECT_EQ(dual_hl(d1, 1.5), kInfinity);
    // Zero at the first atom itself, where m-bar(x-) = 1; the first term
    // counts from just above it.
    EXPECT_EQ(dual_hl(m, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(dual_hl(m, 1.5), 0.5);
    EXPECT_DOUBLE_EQ(dual_hl(m, 1.5, DualHlAtoms::exact_atoms), std::log(2.0));
    EXPECT_EQ(dual_hl(m, 2.0), kInfinity);
    EXPECT_THROW(dual_hl(AtomicMeasure::dirac(0.0), 1.0), std::invalid_argument);
}

TEST(Measure, DualHlRightInverse)
{
    const auto d1 = AtomicMeasure::dirac(1.0);
    const auto m = AtomicMeasure({{1.0, 0.5}, {2.0, 0.5}});
    EXPECT_EQ(dual_hl_right_inverse(d1, 0.0), 1.0);
    EXPECT_EQ(dual_hl_right_inverse(d1, 100.0), 1.0);
    EXPECT_EQ(dual_hl_right_inverse(m, 0.7), 2.0);
    EXPECT_EQ(dual_hl_right_inverse(m, 0.3), 1.0);
}

TEST(Measure, ExcessWealth)
{
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto rho = AtomicMeasure::exponential(1.0, 200);
    const auto self = excess_wealth_leq(rho, rho, grid);
    EXPECT_TRUE(self.holds);
    for (double m : self.margins) {
        EXPECT_EQ(m, 0.0);
    }
    const auto d1 = AtomicMeasure::dirac(1.0);
    const auto spread = AtomicMeasure({{0.0, 0.5}, {2.0, 0.5}});
    // At p = 1/2 the tail quantiles sit on the top atoms and both sides vanish.
    const std::vector<double> half{0.5};
    EXPECT_EQ(excess_wealth(spread, 0.5), 0.0);
    EXPECT_TRUE(excess_wealth_leq(spread, d1, half).holds);
    const std::vector<double> upper{0.75};
    EXPECT_DOUBLE_EQ(excess_wealth(spread, 0.75), 1.0);
    EXPECT_EQ(excess_wealth(d1, 0.75), 0.0);
    EXPECT_TRUE(excess_wealth_leq(d1, spread, upper).holds);
    EXPECT_FALSE(excess_wealth_leq(spread, d1, upper).holds);
}

TEST(Measure, Empirical)
{
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const auto d = empirical_measure(ones);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.location(0), 1.0);
    EXPECT_EQ(d.weight(0), 1.0);

    const std::vector<double> pm{-1.0, 1.0};
    const auto t = empirical_measure(pm);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.weight(0), 0.5);

    NormalStream z(1, 0);
    std::vector<double> draws(100000);
    for (double& x : draws) {
        x = z.next();
    }
    const auto q = empirical_measure(draws, 1000);
    EXPECT_LE(q.size(), 1000u);
    EXPECT_LE(std::abs(mean(q)), 0.02);
}

TEST(Measure, ManyAtomsNormalizeExactly)
{
    // 1e5 equal weights summed naively drift past a 1e-12 tolerance.
    std::vector<double> xs(100000);
    std::iota(xs.begin(), xs.end(), 0.0);
    const auto m = empirical_measure(xs);
    EXPECT_EQ(m.size(), xs.size());
    EXPECT_NEAR(m.suffix_weight(0), 1.0, 1e-14);
    EXPECT_EQ(tail_inverse(m, 1.0, TailInverseKind::left_continuous), 0.0);
}

TEST(Measure, JsonRoundTrip)
{
    const auto m = AtomicMeasure({{-2.0, 0.25}, {2.0 / 3.0, 0.75}});
    const auto back = measure_from_json(measure_to_json(m));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back.location(1), 2.0 / 3.0);
    EXPECT_EQ(back.weight(0), 0.25);
    EXPECT_THROW(measure_from_json("[[0, 0.3]]"), std::invalid_argument);
}

TEST(Measure, ParseArgument)
{
    EXPECT_EQ(parse_measure_argument("dirac:2").location(0), 2.0);
    EXPECT_EQ(parse_measure_argument("uniform:-1:1:10").size(), 10u);
}

TEST(Piecewise, IndicatorConventions)
{
    const auto closed = PiecewiseFn::indicator(1.0, true);
    const auto open = PiecewiseFn::indicator(1.0, false);
    EXPECT_EQ(closed(1.0), 1.0);
    EXPECT_EQ(open(1.0), 0.0);
    EXPECT_EQ(open(1.0 + 1e-12), 1.0);
    EXPECT_DOUBLE_EQ(closed.primitive(3.0), 2.0);
    EXPECT_EQ(closed.primitive(0.5), 0.0);
    EXPECT_TRUE(closed.nondecreasing_on(0.0, 5.0));
    EXPECT_TRUE(open.nondecreasing_on(0.0, 5.0));
    EXPECT_FALSE(PiecewiseFn::interval(0.5, 1.0).nondecreasing_on(0.0, 2.0));
}

TEST(Piecewise, Primitives)
{
    EXPECT_DOUBLE_EQ(PiecewiseFn::monomial(2.0, 1).primitive(3.0), 9.0);
    EXPECT_DOUBLE_EQ(PiecewiseFn::exponential(1.0, -1.0).primitive(1.0), 1.0 - std::exp(-1.0));
    EXPECT_DOUBLE_EQ(PiecewiseFn::exponential(1.0, -1.0).integral_to_infinity(), 1.0);
    EXPECT_EQ(PiecewiseFn::constant(1.0).integral_to_infinity(), kInfinity);
    EXPECT_DOUBLE_EQ(PiecewiseFn::interval(1.0, 3.0).integral_to_infinity(), 2.0);
    EXPECT_THROW(PiecewiseFn({0.0, 0.0}, {Piece{}, Piece{}}), std::invalid_argument);
}

TEST(Stats, MeanReport)
{
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto r = mean_report(v, 9);
    EXPECT_DOUBLE_EQ(r.estimate, 2.5);
    EXPECT_NEAR(r.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
    EXPECT_EQ(r.n, 4u);
    EXPECT_EQ(r.seed, 9u);
    EXPECT_TRUE(r.within(2.5 + r.std_error));
}

TEST(Stats, NormalCdfAndKs)
{
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-15);
    EXPECT_NEAR(ks_critical_value(0.01, 1e5), 1.6276 / std::sqrt(1e5), 1e-5);
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
    EXPECT_NEAR(ks_statistic(grid, [](double x) { return x; }), 0.1, 1e-12);
}

} // namespace
} // namespace maxmart
