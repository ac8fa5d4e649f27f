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
#include <vector>

#include "maxmart/paths.hpp"
#include "maxmart/piecewise.hpp"
#include "maxmart/stats.hpp"

namespace maxmart {

/// Events observed at time s.
struct PenalEvent {
    enum class Kind { endpoint_le, sup_le, everything };
    Kind kind = Kind::everything;
    double a = 0.0;

    bool operator()(double b, double sup) const noexcept
    {
        switch (kind) {
        case Kind::endpoint_le:
            return b <= a;
        case Kind::sup_le:
            return sup <= a;
        default:
            return true;
        }
    }
};

struct PenalizationSpec {
    /// A probability density on [0, inf).
    PiecewiseFn f;
    PenalEvent event;
    double s = 1.0;
    std::vector<double> t_list;

    /// Throws std::invalid_argument unless f integrates to 1 within 1e-9,
    /// s > 0 and t_list is increasing with every t > s.
    void validate() const;
};

/// The limit density 1 - F(sup) + f(sup)(sup - b).
double limit_density(const PiecewiseFn& f, double b, double sup);

/// E[1_event f(sup_t)] / E[f(sup_t)] with delta-method stderr. Throws
/// std::runtime_error when the denominator is within 3 sigma of 0.
/// Paths run with bridge extremes so sup has its exact law at grid times.
StatReport penalized_probability(const PenalizationSpec& spec, double t, const SimConfig& config);

/// E[f(sup_t)], the normalizing constant of the penalized measure.
StatReport penalization_denominator(const PiecewiseFn& f, double t, const SimConfig& config);

/// E[1_event S^f_s].
StatReport limit_probability(const PenalizationSpec& spec, const SimConfig& config);

struct ConvergenceRow {
    double t = 0.0;
    StatReport penalized;
    double gap = 0.0;
    /// Standard error of the gap from the paired per-path linearization.
    double gap_stderr = 0.0;
    bool within = false;
};

struct ConvergenceTable {
    StatReport limit;
    std::vector<ConvergenceRow> rows;
    /// The gap at the largest t is within 3 combined standard errors of 0.
    bool final_within = false;
    /// |gap| never grows by more than 2 standard errors along t_list.
    bool nonincreasing = false;
};

/// Penalized probabilities for every t in t_list and the limit, all from one
/// set of paths.
ConvergenceTable convergence_experiment(const PenalizationSpec& spec, const SimConfig& config);

} // namespace maxmart
