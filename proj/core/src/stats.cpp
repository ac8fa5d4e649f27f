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

#include "maxmart/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maxmart {

bool StatReport::within(double target, double k) const noexcept
{
    return std::abs(estimate - target) <= k * std_error;
}

double StatReport::z_score(double target) const noexcept
{
    if (std_error == 0.0) {
        return estimate == target ? 0.0 : std::copysign(INFINITY, estimate - target);
    }
    return (estimate - target) / std_error;
}

StatReport mean_report(std::span<const double> values, std::uint64_t seed)
{
    if (values.empty()) {
        throw std::invalid_argument("mean_report: no values");
    }
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double m = sum / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - m) * (v - m);
    }
    const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {m, std::sqrt(var / n), values.size(), seed, 0.0};
}

StatReport ratio_report(std::span<const double> num, std::span<const double> den, std::uint64_t seed)
{
    if (num.size() != den.size() || num.empty()) {
        throw std::invalid_argument("ratio_report: need equal, nonempty samples");
    }
    const StatReport a = mean_report(num);
    const StatReport b = mean_report(den);
    const double r = a.estimate / b.estimate;
    // Var of the linearization (num - r den) / mean(den).
    const double n = static_cast<double>(num.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        const double e = num[i] - r * den[i];
        ss += e * e;
    }
    const double var = num.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {r, std::sqrt(var / n) / std::abs(b.estimate), num.size(), seed, 0.0};
}

StatReport difference(const StatReport& a, const StatReport& b)
{
    return {a.estimate - b.estimate, std::hypot(a.std_error, b.std_error), std::min(a.n, b.n),
        a.seed, a.wall_time + b.wall_time};
}

double normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    if (samples.empty()) {
        throw std::invalid_argument("ks_statistic: no samples");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_two_sample: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) {
            ++i;
        }
        while (j < b.size() && b[j] == x) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double kolmogorov_pvalue(double d, double n_eff) noexcept
{
    const double root = std::sqrt(n_eff);
    const double lambda = (root + 0.12 + 0.11 / root) * d;
    if (lambda < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(double alpha, double n_eff) noexcept
{
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n_eff);
}

} // namespace maxmart
