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

#include "maxmart/penalization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxmart/parallel.hpp"

namespace maxmart {

void PenalizationSpec::validate() const
{
    if (std::abs(f.integral_to_infinity() - 1.0) > 1e-9) {
        throw std::invalid_argument("PenalizationSpec: f must integrate to 1");
    }
    if (!(s > 0.0)) {
        throw std::invalid_argument("PenalizationSpec: s must be positive");
    }
    for (std::size_t k = 0; k < t_list.size(); ++k) {
        if (!(t_list[k] > s) || (k > 0 && !(t_list[k] > t_list[k - 1]))) {
            throw std::invalid_argument("PenalizationSpec: t_list must increase and exceed s");
        }
    }
}

double limit_density(const PiecewiseFn& f, double b, double sup)
{
    return 1.0 - f.primitive(sup) + f(sup) * (sup - b);
}

namespace {

SimConfig bridged(const SimConfig& config, double horizon)
{
    SimConfig cfg = config;
    cfg.extremes = Extremes::bridge;
    cfg.horizon = horizon;
    cfg.validate();
    return cfg;
}

std::size_t step_of(double t, double dt)
{
    return static_cast<std::size_t>(std::llround(t / dt));
}

// Per path: the event and limit density at s, then f(sup) at each horizon.
struct Sample {
    double event = 0.0;
    double limit = 0.0;
    std::vector<double> weight;
};

std::vector<Sample> sample_paths(
    const PenalizationSpec& spec, const std::vector<double>& horizons, const SimConfig& config)
{
    const double last = horizons.empty() ? spec.s : std::max(spec.s, horizons.back());
    const SimConfig cfg = bridged(config, last);
    const std::size_t ks = step_of(spec.s, cfg.dt);
    std::vector<std::size_t> kt;
    for (double t : horizons) {
        kt.push_back(step_of(t, cfg.dt));
    }
    return parallel_map<Sample>(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        Sample out;
        out.weight.reserve(kt.size());
        PathWalker w(cfg, i);
        std::size_t next = 0;
        for (;;) {
            const PathState& st = w.state();
            if (st.step == ks) {
                out.event = spec.event(st.b, st.sup) ? 1.0 : 0.0;
                out.limit = out.event * limit_density(spec.f, st.b, st.sup);
            }
            while (next < kt.size() && kt[next] == st.step) {
                out.weight.push_back(spec.f(st.sup));
                ++next;
            }
            if (st.step >= ks && next == kt.size()) {
                return out;
            }
            w.advance();
        }
    });
}

StatReport ratio_of(const std::vector<Sample>& samples, std::size_t k, std::uint64_t seed)
{
    std::vector<double> num(samples.size()), den(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        den[i] = samples[i].weight[k];
        num[i] = samples[i].event * den[i];
    }
    const StatReport d = mean_report(den, seed);
    if (!(d.estimate > 3.0 * d.std_error)) {
        throw std::runtime_error("penalized_probability: denominator is not distinguishable from 0");
    }
    return ratio_report(num, den, seed);
}

} // namespace

StatReport penalized_probability(const PenalizationSpec& spec, double t, const SimConfig& config)
{
    if (!(t > spec.s)) {
        throw std::invalid_argument("penalized_probability: need t > s");
    }
    const auto samples = sample_paths(spec, {t}, config);
    return ratio_of(samples, 0, config.seed);
}

StatReport penalization_denominator(const PiecewiseFn& f, double t, const SimConfig& config)
{
    const SimConfig cfg = bridged(config, t);
    const auto values = parallel_map<double>(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathWalker w(cfg, i);
        const std::size_t last = cfg.steps();
        while (w.state().step < last) {
            w.advance();
        }
        return f(w.state().sup);
    });
    return mean_report(values, cfg.seed);
}

StatReport limit_probability(const PenalizationSpec& spec, const SimConfig& config)
{
    const auto samples = sample_paths(spec, {}, config);
    std::vector<double> values(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        values[i] = samples[i].limit;
    }
    return mean_report(values, config.seed);
}

ConvergenceTable convergence_experiment(const PenalizationSpec& spec, const SimConfig& config)
{
    spec.validate();
    const auto samples = sample_paths(spec, spec.t_list, config);
    const std::size_t n = samples.size();
    ConvergenceTable table;
    std::vector<double> lim(n);
    for (std::size_t i = 0; i < n; ++i) {
        lim[i] = samples[i].limit;
    }
    table.limit = mean_report(lim, config.seed);

    std::vector<double> lin(n);
    for (std::size_t k = 0; k < spec.t_list.size(); ++k) {
        ConvergenceRow row;
        row.t = spec.t_list[k];
        row.penalized = ratio_of(samples, k, config.seed);
        double den = 0.0;
        for (const Sample& s : samples) {
            den += s.weight[k];
        }
        den /= static_cast<double>(n);
        const double r = row.penalized.estimate;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = samples[i].weight[k];
            lin[i] = (samples[i].event * w - r * w) / den - (lim[i] - table.limit.estimate);
        }
        row.gap = r - table.limit.estimate;
        row.gap_stderr = mean_report(lin).std_error;
        row.within = std::abs(row.gap) <= 3.0 * row.gap_stderr;
        table.rows.push_back(row);
    }
    table.final_within = table.rows.empty() || table.rows.back().within;
    table.nonincreasing = true;
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        const ConvergenceRow& a = table.rows[k - 1];
        const ConvergenceRow& b = table.rows[k];
        if (std::abs(b.gap) > std::abs(a.gap) + 2.0 * std::hypot(a.gap_stderr, b.gap_stderr)) {
            table.nonincreasing = false;
        }
    }
    return table;
}

} // namespace maxmart
