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

#include "maxmart/bounds.hpp"
#include "maxmart/embeddings.hpp"
#include "maxmart/penalization.hpp"

namespace maxmart {
namespace {

SimConfig config(double dt, std::size_t paths, double horizon = 50.0)
{
    SimConfig c;
    c.dt = dt;
    c.horizon = horizon;
    c.n_paths = paths;
    c.seed = 42;
    c.extremes = Extremes::bridge;
    return c;
}

TEST(SupLaw, ClosedForms)
{
    for (double y : {0.0, 0.3, 1.0, 4.0}) {
        EXPECT_NEAR(sup_law_from_phi([](double) { return -1.0; }, y), 1.0 / (1.0 + y), 1e-10);
    }
    for (double y : {0.0, 0.25, 0.5, 0.9}) {
        EXPECT_NEAR(sup_law_from_phi(PiecewiseFn::affine(-1.0, 2.0), y), 1.0 - y, 1e-10);
    }
    EXPECT_THROW(sup_law_from_phi([](double s) { return s; }, 0.5), std::domain_error);
}

TEST(BlackwellDubins, Values)
{
    const auto u = AtomicMeasure::uniform(-1.0, 1.0, 1000);
    EXPECT_NEAR(blackwell_dubins_bound(u, 0.5), 0.5, 2e-3);
    EXPECT_EQ(blackwell_dubins_bound(u, 0.0), 1.0);
    EXPECT_EQ(blackwell_dubins_bound(AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}}), 0.5), 1.0);
}

TEST(BlackwellDubins, ExitRuleRespectsBound)
{
    const auto mu = AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}});
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
    const auto r = verify_sup_bound(StoppingRule::first_exit(-1.0, 1.0), mu, grid, config(1e-3, 10000));
    EXPECT_FALSE(r.any_violation());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_TRUE(r.empirical[k].within(1.0 / (1.0 + grid[k]), 4.0));
    }
}

TEST(BlackwellDubins, AzemaYorIsTight)
{
    const auto mu = AtomicMeasure::uniform(-1.0, 1.0, 200);
    const std::vector<double> grid{0.2, 0.5, 0.8};
    const auto r = verify_sup_bound(azema_yor_rule(mu), mu, grid, config(1e-3, 10000));
    EXPECT_FALSE(r.any_violation());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_NEAR(r.empirical[k].estimate, r.bound[k], 4.0 * r.empirical[k].std_error + 0.01);
    }
}

TEST(ExpectationBounds, FixedTime)
{
    const auto e = expectation_bounds_check(StoppingRule::fixed_time(1.0), config(1e-3, 20000, 1.0));
    EXPECT_TRUE(e.holds_sup && e.holds_abs_sup && e.holds_range && e.identity_holds);
    const double half_normal = std::sqrt(2.0 / std::numbers::pi);
    EXPECT_NEAR(e.sup.estimate, half_normal, 4.0 * e.sup.std_error + 0.005);
    EXPECT_NEAR(e.range.estimate, 2.0 * half_normal, 4.0 * e.range.std_error + 0.01);
    EXPECT_NEAR(e.abs_sup.estimate, std::sqrt(std::numbers::pi / 2.0), 4.0 * e.abs_sup.std_error + 0.01);
    EXPECT_DOUBLE_EQ(e.rhs_range, std::sqrt(3.0));
}

TEST(ExpectationBounds, RejectsUnbounded)
{
    EXPECT_THROW(expectation_bounds_check(StoppingRule::hitting_level(1.0), config(1e-3, 10)),
        std::invalid_argument);
}

TEST(LocalTimeBound, PStar)
{
    const auto m = AtomicMeasure({{1.0, 0.5}, {2.0, 0.5}});
    EXPECT_EQ(p_star(m, 0.3), 0.5);
    EXPECT_EQ(p_star(m, 0.5), 0.5);
    EXPECT_EQ(p_star(m, 0.6), 1.0);
}

TEST(LocalTimeBound, RandomizedRule)
{
    const auto m = AtomicMeasure({{1.0, 0.5}, {2.0, 0.5}});
    const auto alt = StoppingRule::randomized_abs_hitting({1.0, 2.0}, {0.5, 0.5});
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75};
    const auto r = local_time_bound_check(m, alt, grid, config(1e-3, 5000));
    EXPECT_FALSE(r.any_violation());
    EXPECT_NEAR(r.empirical[0].estimate, 1.5, 4.0 * r.empirical[0].std_error);
    EXPECT_NEAR(r.bound[0], 1.5, 4.0 * r.bound_stderr[0]);
}

TEST(Rogers, ExitEmbedding)
{
    const auto out = stop_paths(config(1e-3, 20000), StoppingRule::first_exit(-1.0, 1.0));
    std::vector<double> sup, dd;
    for (const auto& o : out) {
        sup.push_back(o.sup);
        dd.push_back(o.sup - o.b);
    }
    const auto r = rogers_condition_check(sup, dd, rogers_edges(sup, 10));
    EXPECT_GT(r.bins_used, 0u);
    EXPECT_LE(r.max_relative, 0.1);
}

TEST(Rogers, Degenerate)
{
    const std::vector<double> zeros(100, 0.0);
    const std::vector<double> edges{0.0, 1.0};
    const auto r = rogers_condition_check(zeros, zeros, edges);
    ASSERT_EQ(r.bins.size(), 1u);
    EXPECT_EQ(r.bins[0].lhs.estimate, 0.0);
    EXPECT_EQ(r.bins[0].rhs.estimate, 0.0);
}

TEST(Laplace, Examples)
{
    const auto c = config(1e-3, 5000, 65.0);
    const auto zero = hitting_laplace_check(PiecewiseFn::constant(0.0), 1.0, c);
    EXPECT_EQ(zero.rhs, 1.0);
    EXPECT_EQ(zero.lhs.estimate, 1.0);

    const auto one = hitting_laplace_check(PiecewiseFn::constant(1.0), 1.0, c);
    EXPECT_NEAR(one.rhs, std::exp(-1.0), 1e-15);
    EXPECT_TRUE(one.within);

    const auto half = hitting_laplace_check(PiecewiseFn::interval(0.0, 0.5), 1.0, c);
    EXPECT_NEAR(half.rhs, std::exp(-0.5), 1e-15);
    EXPECT_TRUE(half.within);
}

TEST(JointDensity, CellMassAgreesWithMidpoint)
{
    const double h = 0.01;
    const double mass = joint_cell_mass(1.0, -0.5, -0.5 + h, 1.0, 1.0 + h);
    EXPECT_NEAR(mass / (h * h), joint_density(1.0, -0.5 + h / 2, 1.0 + h / 2), 1e-4);
    EXPECT_NEAR(joint_cell_mass(1.0, -10.0, 10.0, 0.0, 10.0), 1.0, 1e-9);
}

TEST(JointDensity, Histogram)
{
    const auto d = joint_density_check(1.0, config(1e-3, 20000, 1.0));
    EXPECT_NEAR(d.normalization, 1.0, 1e-3);
    EXPECT_LE(d.tv, 0.08);
}

TEST(Penalization, LimitDensity)
{
    const auto f = PiecewiseFn::exponential(1.0, -1.0);
    for (double sup : {0.0, 0.5, 2.0}) {
        for (double b : {-1.0, 0.0, sup}) {
            const double expected = std::exp(-sup) * (1.0 + sup - b);
            EXPECT_NEAR(limit_density(f, b, sup), expected, 1e-14);
            EXPECT_GT(limit_density(f, b, sup), 0.0);
        }
    }
}

TEST(Penalization, Denominators)
{
    const auto c = config(1e-3, 20000, 1.0);
    const auto e = penalization_denominator(PiecewiseFn::exponential(1.0, -1.0), 1.0, c);
    EXPECT_TRUE(e.within(2.0 * std::exp(0.5) * normal_cdf(-1.0)));
    for (double t : {1.0, 4.0}) {
        auto ct = config(1e-2, 20000, t);
        const auto d = penalization_denominator(PiecewiseFn::interval(0.0, 1.0), t, ct);
        EXPECT_TRUE(d.within(2.0 * normal_cdf(1.0 / std::sqrt(t)) - 1.0, 4.0));
    }
}

PenalizationSpec spec(PenalEvent event)
{
    return PenalizationSpec{PiecewiseFn::exponential(1.0, -1.0), event, 1.0, {4.0, 16.0}};
}

TEST(Penalization, FullSpace)
{
    const auto c = config(1.0 / 64, 5000, 16.0);
    const auto s = spec({});
    EXPECT_DOUBLE_EQ(penalized_probability(s, 4.0, c).estimate, 1.0);
    EXPECT_TRUE(limit_probability(s, c).within(1.0));
    const auto table = convergence_experiment(s, c);
    EXPECT_TRUE(table.final_within);
    for (const auto& row : table.rows) {
        EXPECT_TRUE(row.within);
    }
}

TEST(Penalization, EndpointEvents)
{
    const auto c = config(1.0 / 64, 5000, 16.0);
    const auto far = spec({PenalEvent::Kind::endpoint_le, -1e6});
    EXPECT_EQ(penalized_probability(far, 4.0, c).estimate, 0.0);
    const auto neg = limit_probability(spec({PenalEvent::Kind::endpoint_le, 0.0}), c);
    EXPECT_GT(neg.estimate, 0.0);
    EXPECT_LT(neg.estimate, 1.0);
}

TEST(Penalization, ValidatesSpec)
{
    auto s = spec({});
    s.f = PiecewiseFn::constant(1.0);
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = spec({});
    s.t_list = {16.0, 4.0};
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

} // namespace
} // namespace maxmart
