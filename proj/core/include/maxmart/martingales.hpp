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
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "maxmart/paths.hpp"
#include "maxmart/piecewise.hpp"
#include "maxmart/stats.hpp"

namespace maxmart {

/// F(y) - f(y)(y - x) + C on the region y >= max(x, 0).
/// Throws std::domain_error outside it.
double max_mart(const PiecewiseFn& f, double x, double y, double c = 0.0);

/// G(l) - g(l) |x| + C. Throws std::domain_error for negative inputs.
double local_time_mart(const PiecewiseFn& g, double abs_x, double l, double c = 0.0);

/// A discrete process Y from 0 and a multiplier phi constant on the
/// excursions of Y away from 0.
struct DiscretePathPair {
    std::vector<double> y;
    std::vector<double> phi;

    /// Throws std::invalid_argument if the pair is not admissible.
    void validate() const;
};

/// max_n |phi_n Y_n - sum_{k<=n} phi_{k-1} (Y_k - Y_{k-1})|.
double balayage_identity_check(const DiscretePathPair& pair);

/// S^f_n = f(Xbar_n)(Xbar_n - X_n) - F(Xbar_n) computed directly and from its
/// two-sum decomposition.
struct SfnProcess {
    std::vector<double> direct;
    std::vector<double> decomposed;

    double max_discrepancy() const noexcept;
};

/// Requires X_0 = 0 and f nonnegative and nondecreasing on [0, max X].
SfnProcess sfn_process(std::span<const double> x, const PiecewiseFn& f);

inline constexpr int kMaxEnumeration = 20;

/// All 2^n simple random walk paths of length n, each of weight 2^-n.
/// Path `index` takes step +1 at time k+1 when bit k of index is set.
class SrwPaths {
public:
    explicit SrwPaths(int n);

    int length() const noexcept { return n_; }
    std::uint64_t count() const noexcept { return std::uint64_t{1} << n_; }
    double weight() const noexcept { return std::ldexp(1.0, -n_); }
    std::vector<int> path(std::uint64_t index) const;

    /// Calls fn(path) for every path in index order, reusing one buffer.
    void for_each(const std::function<void(std::span<const int>)>& fn) const;

private:
    int n_;
};

SrwPaths enumerate_srw(int n);

struct DoobMaximalResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// lambda P(Xbar_n >= lambda) against E[X_n; Xbar_n >= lambda] for X = |SRW|.
DoobMaximalResult doob_maximal_check(int n, double lambda);

struct DoobLpResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool holds = false;
    /// (p - 1) E Xbar^p against p E[Xbar^{p-1} X_n].
    double intermediate_lhs = 0.0;
    double intermediate_rhs = 0.0;
    bool intermediate_holds = false;
};

/// E Xbar_n^p against (p / (p - 1))^p E X_n^p for X = |SRW|.
DoobLpResult doob_lp_check(int n, double p);

struct SupermartingaleCheck {
    std::size_t prefixes = 0;
    /// max over prefixes of E[S_{m+1} | prefix] - S_m; <= 0 means it holds.
    double worst_excess = 0.0;
    bool holds = false;
};

/// Checks E[S^f_{m+1} | X_0..X_m] <= S^f_m on every prefix (m < n) of |SRW|.
SupermartingaleCheck sfn_supermartingale_check(int n, const PiecewiseFn& f, double tolerance = 1e-12);

/// Balayage discrepancy over every SRW path of length n with phi_n a
/// function of the number of completed returns to 0 (a pure function of the
/// path, constant on excursions).
double balayage_exhaustive_check(int n);

struct DriftReport {
    StatReport drift;
    bool passes = false;
};

/// Functional of the walker state sampled at two times.
using StateFunctional = std::function<double(const PathState&)>;

/// Paired estimate of E[h(state at t2)] - E[h(state at t1)]; passes when it is
/// within 3 standard errors of 0.
DriftReport drift_test(const StateFunctional& h, const SimConfig& config, double t1, double t2);

/// h = max_mart(f, B, sup).
DriftReport martingale_drift_test(const PiecewiseFn& f, const SimConfig& config, double t1, double t2);
/// h = local_time_mart(g, |B|, ell).
DriftReport local_time_drift_test(const PiecewiseFn& g, const SimConfig& config, double t1, double t2);
/// h = f(ell) B, the multiplicative balayage of B across its zeros.
DriftReport balayage_drift_test(const PiecewiseFn& f, const SimConfig& config, double t1, double t2);

} // namespace maxmart
