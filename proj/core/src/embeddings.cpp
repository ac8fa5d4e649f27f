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

#include "maxmart/embeddings.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "maxmart/parallel.hpp"

namespace maxmart {

StoppingRule azema_yor_rule(const AtomicMeasure& mu)
{
    return StoppingRule::azema_yor(std::make_shared<const BarycentreTable>(mu));
}

StoppingRule vallois_rule(const AtomicMeasure& m, DualHlAtoms atoms)
{
    return StoppingRule::vallois_obloj(std::make_shared<const PhiTable>(m, atoms));
}

double vallois_local_time_tail(const AtomicMeasure& m, double x, DualHlAtoms atoms)
{
    if (x <= 0.0) {
        return 1.0;
    }
    const PhiTable phi(m, atoms);
    const auto levels = phi.levels();
    const auto y = phi.locations();
    double integral = 0.0;
    double from = 0.0;
    for (std::size_t j = 0; j < levels.size() && from < x; ++j) {
        const double to = std::min(x, levels[j]);
        if (to > from) {
            integral += (to - from) / y[j];
            from = to;
        }
    }
    if (from < x) {
        integral += (x - from) / y.back();
    }
    return std::exp(-integral);
}

double default_horizon(const AtomicMeasure& target)
{
    return 50.0 * second_moment(target);
}

double ks_to_target(std::vector<double> samples, const AtomicMeasure& target)
{
    if (samples.empty()) {
        return 1.0;
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    // Walk the union of sample and atom locations; at each point compare the
    // jumps' left and right limits.
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < samples.size() || j < target.size()) {
        const double z = std::min(i < samples.size() ? samples[i] : kInfinity,
            j < target.size() ? target.location(j) : kInfinity);
        const double left_emp = static_cast<double>(i) / n;
        const double left_target = target.prefix_weight(j);
        d = std::max(d, std::abs(left_emp - left_target));
        while (i < samples.size() && samples[i] == z) {
            ++i;
        }
        while (j < target.size() && target.location(j) == z) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / n - target.prefix_weight(j)));
    }
    return d;
}

double wasserstein_to_target(std::vector<double> samples, const AtomicMeasure& target)
{
    if (samples.empty()) {
        return kInfinity;
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    // Both CDFs are constant between consecutive points of the merged support.
    std::size_t i = 0;
    std::size_t j = 0;
    double prev = std::min(samples.front(), target.min_location());
    double w = 0.0;
    while (i < samples.size() || j < target.size()) {
        const double z = std::min(i < samples.size() ? samples[i] : kInfinity,
            j < target.size() ? target.location(j) : kInfinity);
        w += std::abs(static_cast<double>(i) / n - target.prefix_weight(j)) * (z - prev);
        while (i < samples.size() && samples[i] == z) {
            ++i;
        }
        while (j < target.size() && target.location(j) == z) {
            ++j;
        }
        prev = z;
    }
    return w;
}

EmbeddingReport run_embedding(const StoppingRule& rule, const AtomicMeasure& target, Embedded which,
    const SimConfig& config, std::size_t law_atoms)
{
    const auto start = std::chrono::steady_clock::now();
    EmbeddingReport r;
    r.rule = rule.name();
    r.which = which;
    r.n_paths = config.n_paths;
    r.outcomes = stop_paths(config, rule);

    std::vector<double> embedded, sup, ell, time;
    for (const StopOutcome& o : r.outcomes) {
        if (!o.stopped) {
            continue;
        }
        embedded.push_back(which == Embedded::b ? o.b : std::abs(o.b));
        sup.push_back(o.sup);
        ell.push_back(o.ell);
        time.push_back(o.t);
    }
    r.n_stopped = embedded.size();
    r.unstopped_fraction = config.n_paths == 0
        ? 0.0
        : 1.0 - static_cast<double>(r.n_stopped) / static_cast<double>(config.n_paths);
    r.unstopped_flag = r.unstopped_fraction > 0.01;
    if (r.n_stopped == 0) {
        r.ks = 1.0;
        r.wasserstein = kInfinity;
        return r;
    }
    r.mean_embedded = mean_report(embedded, config.seed);
    r.mean_time = mean_report(time, config.seed);
    r.mean_ell = mean_report(ell, config.seed);
    std::vector<double> b_values;
    b_values.reserve(r.n_stopped);
    for (const StopOutcome& o : r.outcomes) {
        if (o.stopped) {
            b_values.push_back(o.b);
        }
    }
    r.b_law = empirical_measure(b_values, law_atoms);
    r.sup_law = empirical_measure(sup, law_atoms);
    r.ell_law = empirical_measure(ell, law_atoms);
    r.wasserstein = wasserstein_to_target(embedded, target);
    r.ks = ks_to_target(std::move(embedded), target);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (StatReport* s : {&r.mean_embedded, &r.mean_time, &r.mean_ell}) {
        s->wall_time = wall;
    }
    return r;
}

UiDiagnostic ui_diagnostic(const StoppingRule& rule, const SimConfig& config,
    std::vector<double> checkpoints, std::vector<double> k_grid)
{
    if (checkpoints.empty()) {
        throw std::invalid_argument("ui_diagnostic: need at least one checkpoint");
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    std::sort(k_grid.begin(), k_grid.end());
    SimConfig cfg = config;
    cfg.horizon = std::max(cfg.horizon, checkpoints.back());
    cfg.validate();
    std::vector<std::size_t> steps;
    for (double t : checkpoints) {
        steps.push_back(static_cast<std::size_t>(std::llround(t / cfg.dt)));
    }
    const std::size_t m = checkpoints.size();
    constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    // values[i * m + c] = |B| at checkpoint c, frozen at the stopping time.
    std::vector<double> values(cfg.n_paths * m, kUnset);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        double* row = values.data() + i * m;
        std::size_t next = 0;
        const StopOutcome o = run_until_stopped(cfg, i, rule, [&](const PathState& s) {
            while (next < m && steps[next] == s.step) {
                row[next++] = std::abs(s.b);
            }
        });
        for (std::size_t c = 0; c < m; ++c) {
            if (std::isnan(row[c]) || steps[c] >= o.step) {
                row[c] = std::abs(o.b);
            }
        }
    });

    UiDiagnostic d;
    d.k_grid = k_grid;
    std::vector<double> column(cfg.n_paths);
    std::vector<double> tail(cfg.n_paths);
    for (std::size_t c = 0; c < m; ++c) {
        UiCheckpoint cp;
        cp.t = checkpoints[c];
        for (std::size_t i = 0; i < cfg.n_paths; ++i) {
            column[i] = values[i * m + c];
        }
        cp.mean_abs = mean_report(column, cfg.seed);
        for (double k : k_grid) {
            for (std::size_t i = 0; i < cfg.n_paths; ++i) {
                tail[i] = column[i] > k ? column[i] : 0.0;
            }
            cp.tail_mass.push_back(mean_report(tail, cfg.seed));
        }
        d.checkpoints.push_back(std::move(cp));
    }
    if (!k_grid.empty()) {
        const StatReport& last = d.checkpoints.back().tail_mass.back();
        d.tail_flag = last.estimate > 3.0 * last.std_error && last.estimate > 0.0;
    }
    return d;
}

} // namespace maxmart
