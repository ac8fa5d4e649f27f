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
#include <functional>
#include <span>
#include <vector>

namespace maxmart {

/// Estimate with its standard error: the unit of every Monte-Carlo answer.
struct StatReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double wall_time = 0.0;

    /// |estimate - target| <= k * std_error.
    bool within(double target, double k = 3.0) const noexcept;
    /// Signed distance to `target` in standard errors.
    double z_score(double target) const noexcept;
};

/// Sample mean with stderr = sd / sqrt(n) (two-pass, n >= 1).
StatReport mean_report(std::span<const double> values, std::uint64_t seed = 0);

/// Ratio of means sum(num) / sum(den) with delta-method stderr.
StatReport ratio_report(
    std::span<const double> num, std::span<const double> den, std::uint64_t seed = 0);

/// Difference of two independent estimates; errors add in quadrature.
StatReport difference(const StatReport& a, const StatReport& b);

double normal_cdf(double x) noexcept;

/// One-sample Kolmogorov-Smirnov statistic against a continuous cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// Asymptotic Kolmogorov p-value with Stephens' small-sample correction;
/// n_eff is n (one sample) or n m / (n + m) (two samples).
double kolmogorov_pvalue(double d, double n_eff) noexcept;
/// Asymptotic critical value sqrt(-ln(alpha / 2) / 2) / sqrt(n_eff).
double ks_critical_value(double alpha, double n_eff) noexcept;

} // namespace maxmart
