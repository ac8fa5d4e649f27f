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
#include <vector>

#include "maxmart/embeddings.hpp"
#include "maxmart/stats.hpp"

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

PathState state(double b, double sup, double ell = 0.0)
{
    PathState s;
    s.b = b;
    s.sup = sup;
    s.inf = std::min(0.0, b);
    s.ell = ell;
    return s;
}

TEST(AzemaYor, TwoPointIsExitRule)
{
    const auto rule = azema_yor_rule(AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}}));
    EXPECT_FALSE(rule.fires(state(0.0, 0.0), 0.5));
    EXPECT_FALSE(rule.fires(state(-0.9, 0.6), 0.5));
    EXPECT_TRUE(rule.fires(state(-1.0, 0.6), 0.5));
    EXPECT_TRUE(rule.fires(state(1.0, 1.0), 0.5));
}

TEST(AzemaYor, DiracStopsAtOnce)
{
    EXPECT_TRUE(azema_yor_rule(AtomicMeasure::dirac(0.0)).fires(state(0.0, 0.0), 0.5));
}

TEST(AzemaYor, UniformThreshold)
{
    const auto rule = azema_yor_rule(AtomicMeasure::uniform(-1.0, 1.0, 1000));
    // Psi(x) = (1 + x) / 2.
    EXPECT_TRUE(rule.fires(state(0.0, 0.51), 0.5));
    EXPECT_FALSE(rule.fires(state(0.0, 0.49), 0.5));
    EXPECT_TRUE(rule.fires(state(-0.5, 0.26), 0.5));
}

TEST(Vallois, DiracIsAbsHitting)
{
    const auto rule = vallois_rule(AtomicMeasure::dirac(1.0));
    EXPECT_FALSE(rule.fires(state(0.99, 0.99, 0.3), 0.5));
    EXPECT_TRUE(rule.fires(state(-1.0, 0.2, 0.3), 0.5));
    EXPECT_THROW(vallois_rule(AtomicMeasure::dirac(0.0)), std::invalid_argument);
}

TEST(Vallois, TwoStageTable)
{
    const auto rule = vallois_rule(AtomicMeasure({{1.0, 0.5}, {2.0, 0.5}}));
    // phi steps from 1 to 2 once ell passes log 2.
    EXPECT_TRUE(rule.fires(state(1.0, 1.0, 0.5), 0.5));
    EXPECT_FALSE(rule.fires(state(1.0, 1.0, 0.8), 0.5));
    EXPECT_TRUE(rule.fires(state(-2.0, 1.0, 0.8), 0.5));
}

TEST(Vallois, LocalTimeTail)
{
    EXPECT_NEAR(vallois_local_time_tail(AtomicMeasure::dirac(1.0), 2.0), std::exp(-2.0), 1e-15);
    const auto m = AtomicMeasure({{1.0, 0.5}, {2.0, 0.5}});
    EXPECT_NEAR(vallois_local_time_tail(m, std::log(2.0)), 0.5, 1e-15);
    EXPECT_NEAR(vallois_local_time_tail(m, 2.0), 0.5 * std::exp(-(2.0 - std::log(2.0)) / 2.0), 1e-15);
}

TEST(Distances, KsAndWasserstein)
{
    const auto target = AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}});
    EXPECT_EQ(ks_to_target({-1.0, 1.0}, target), 0.0);
    EXPECT_EQ(wasserstein_to_target({-1.0, 1.0}, target), 0.0);
    EXPECT_DOUBLE_EQ(ks_to_target({-1.0, -1.0}, target), 0.5);
    EXPECT_DOUBLE_EQ(wasserstein_to_target({-1.0, -1.0}, target), 1.0);
    EXPECT_NEAR(wasserstein_to_target({-1.01, 1.01}, target), 0.01, 1e-12);
}

TEST(Embedding, TwoPoint)
{
    const auto mu = AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}});
    const auto r = run_embedding(azema_yor_rule(mu), mu, Embedded::b, config(1e-4, 20000));
    EXPECT_EQ(r.n_stopped, r.n_paths);
    EXPECT_FALSE(r.unstopped_flag);
    double up = 0.0;
    for (const auto& o : r.outcomes) {
        up += o.b > 0.0 ? 1.0 : 0.0;
    }
    EXPECT_NEAR(up / r.n_paths, 0.5, 0.012);
    EXPECT_LE(r.wasserstein, 0.03);
    EXPECT_NEAR(r.mean_time.estimate, 1.0, 4.0 * r.mean_time.std_error + 0.01);
}

TEST(Embedding, ValloisDirac)
{
    const auto m = AtomicMeasure::dirac(1.0);
    const auto r = run_embedding(vallois_rule(m), m, Embedded::abs_b, config(1e-4, 5000));
    EXPECT_EQ(r.n_stopped, r.n_paths);
    for (const auto& o : r.outcomes) {
        EXPECT_NEAR(std::abs(o.b), 1.0, 0.05);
    }
    EXPECT_NEAR(r.mean_ell.estimate, 1.0, 4.0 * r.mean_ell.std_error + 0.01);
}

TEST(Embedding, FixedTimeNormal)
{
    const auto target = AtomicMeasure::standard_normal(2000);
    const auto r = run_embedding(StoppingRule::fixed_time(1.0), target, Embedded::b, config(1e-2, 20000, 1.0));
    EXPECT_LE(r.ks, 0.015);
}

TEST(Embedding, Deterministic)
{
    const auto mu = AtomicMeasure::uniform(-1.0, 1.0, 100);
    auto c = config(1e-3, 500);
    c.threads = 1;
    const auto a = run_embedding(azema_yor_rule(mu), mu, Embedded::b, c);
    c.threads = 4;
    const auto b = run_embedding(azema_yor_rule(mu), mu, Embedded::b, c);
    EXPECT_EQ(a.ks, b.ks);
    EXPECT_EQ(a.mean_time.estimate, b.mean_time.estimate);
}

TEST(UiDiagnostic, ExitIsBounded)
{
    const auto d = ui_diagnostic(StoppingRule::first_exit(-1.0, 1.0), config(1e-3, 2000),
        {0.5, 1.0, 4.0}, {0.5, 2.0});
    ASSERT_EQ(d.checkpoints.size(), 3u);
    for (const auto& cp : d.checkpoints) {
        EXPECT_LE(cp.mean_abs.estimate, 1.0 + 1e-12);
        EXPECT_EQ(cp.tail_mass.back().estimate, 0.0);
    }
    EXPECT_FALSE(d.tail_flag);
}

TEST(UiDiagnostic, FixedTimeTailFlagged)
{
    // B_{T ^ t} for T = 100 keeps spreading, so mass beyond 1 stays put.
    const auto d = ui_diagnostic(StoppingRule::fixed_time(100.0), config(1e-2, 2000, 4.0),
        {1.0, 4.0}, {1.0});
    EXPECT_TRUE(d.tail_flag);
}

} // namespace
} // namespace maxmart
