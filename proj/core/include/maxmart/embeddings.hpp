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
#include <string>
#include <vector>

#include "maxmart/measure.hpp"
#include "maxmart/paths.hpp"
#include "maxmart/stats.hpp"
#include "maxmart/stopping.hpp"

namespace maxmart {

/// Stops when sup >= Psi_mu(B). Throws std::invalid_argument unless mu is centered.
StoppingRule azema_yor_rule(const AtomicMeasure& mu);

/// Stops when |B| >= phi_m(ell). Uses the atom increments that embed atomic m
/// exactly. Throws std::invalid_argument for an atom at or below 0.
StoppingRule vallois_rule(const AtomicMeasure& m, DualHlAtoms atoms = DualHlAtoms::exact_atoms);

/// P(L_{T^m} >= x) = exp(-integral_0^x ds / phi_m(s)) for the local-time
/// embedding of m, with phi_m the step table the rule uses.
double vallois_local_time_tail(
    const AtomicMeasure& m, double x, DualHlAtoms atoms = DualHlAtoms::exact_atoms);

enum class Embedded { b, abs_b };

struct EmbeddingReport {
    std::string rule;
    Embedded which = Embedded::b;
    std::size_t n_paths = 0;
    std::size_t n_stopped = 0;
    double unstopped_fraction = 0.0;
    /// Set when more than 1% of paths reach the horizon unstopped.
    bool unstopped_flag = false;
    /// sup_x |empirical cdf - target cdf| of the embedded quantity.
    double ks = 0.0;
    /// integral |empirical cdf - target cdf| dx; unlike ks it stays small when
    /// stopped values sit a grid overshoot away from target atoms.
    double wasserstein = 0.0;
    StatReport mean_embedded;
    StatReport mean_time;
    StatReport mean_ell;
    /// Laws of the stopped paths, quantized to at most `law_atoms` atoms.
    AtomicMeasure b_law = AtomicMeasure::dirac(0.0);
    AtomicMeasure sup_law = AtomicMeasure::dirac(0.0);
    AtomicMeasure ell_law = AtomicMeasure::dirac(0.0);
    /// Raw outcomes in path order, including unstopped ones.
    std::vector<StopOutcome> outcomes;
};

/// Horizon used when none is given: 50 times the second moment of the target.
double default_horizon(const AtomicMeasure& target);

/// Runs config.n_paths paths under `rule` and compares the stopped law of
/// B_T (or |B_T|) to `target`.
EmbeddingReport run_embedding(const StoppingRule& rule, const AtomicMeasure& target, Embedded which,
    const SimConfig& config, std::size_t law_atoms = 2000);

/// sup_x |F_n(x) - cdf(target, x)| for raw samples, evaluated on both sides
/// of every sample and atom.
double ks_to_target(std::vector<double> samples, const AtomicMeasure& target);

/// integral |F_n(x) - cdf(target, x)| dx for raw samples.
double wasserstein_to_target(std::vector<double> samples, const AtomicMeasure& target);

struct UiCheckpoint {
    double t = 0.0;
    StatReport mean_abs;
    /// E[|B_{T^t}|; |B_{T^t}| > K] per K of the grid.
    std::vector<StatReport> tail_mass;
};

struct UiDiagnostic {
    std::vector<double> k_grid;
    std::vector<UiCheckpoint> checkpoints;
    /// Tail mass beyond the largest K at the last checkpoint is more than
    /// 3 standard errors above 0.
    bool tail_flag = false;
};

/// E|B_{T ^ t}| and its tail masses at each checkpoint; the horizon of
/// `config` is raised to the last checkpoint if needed.
UiDiagnostic ui_diagnostic(const StoppingRule& rule, const SimConfig& config,
    std::vector<double> checkpoints, std::vector<double> k_grid);

} // namespace maxmart
