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
#include <functional>
#include <span>
#include <vector>

#include "maxmart/measure.hpp"
#include "maxmart/paths.hpp"
#include "maxmart/piecewise.hpp"
#include "maxmart/stats.hpp"
#include "maxmart/stopping.hpp"

namespace maxmart {

/// Bound against Monte-Carlo estimate on a grid of points.
struct BoundReport {
    std::vector<double> points;
    std::vector<double> bound;
    /// Zero for closed-form bounds.
    std::vector<double> bound_stderr;
    std::vector<StatReport> empirical;
    /// empirical > bound + 3 sigma, sigma combining both standard errors.
    std::vector<bool> violation;

    bool any_violation() const noexcept;
};

/// exp(-integral_0^y ds / (s - phi(s))): the law P(sup_T >= y) of a stopping
/// rule with phi(s) = E[B_T | sup_T = s]. Pieces are split at `breaks`;
/// returns 0 when the integral diverges (exceeds 50) on approach to y.
/// Throws std::domain_error if phi(s) >= s for some s in (0, y).
double sup_law_from_phi(const std::function<double(double)>& phi, double y,
    std::span<const double> breaks = {});
double sup_law_from_phi(const PiecewiseFn& phi, double y);

/// mu-bar(Psi_mu^{-1}(lambda)), the largest possible P(sup_T >= lambda) over
/// uniformly integrable embeddings of mu.
double blackwell_dubins_bound(const AtomicMeasure& mu, double lambda);

/// Empirical P(sup_T >= lambda) among stopped paths against the bound.
BoundReport verify_sup_bound(const StoppingRule& rule, const AtomicMeasure& mu,
    std::span<const double> lambda_grid, const SimConfig& config);

struct ExpectationBounds {
    StatReport time;
    StatReport sup;
    StatReport abs_sup;
    StatReport range;
    /// sqrt(E T), sqrt(2 E T), sqrt(3 E T).
    double rhs_sup = 0.0;
    double rhs_abs_sup = 0.0;
    double rhs_range = 0.0;
    /// Standard errors of lhs - rhs (rhs is estimated unless T is fixed).
    double se_sup = 0.0;
    double se_abs_sup = 0.0;
    double se_range = 0.0;
    bool holds_sup = false;
    bool holds_abs_sup = false;
    bool holds_range = false;
    /// E[(sup - B_T)^2 - B_T^2], which vanishes exactly.
    StatReport identity_gap;
    bool identity_holds = false;
};

/// Monte-Carlo check of E sup <= sqrt(E T), E sup|B| <= sqrt(2 E T) and
/// E[sup - inf] <= sqrt(3 E T), each up to 3 sigma. Only FixedTime and
/// FirstExit are accepted, and every path must stop within the horizon.
ExpectationBounds expectation_bounds_check(const StoppingRule& rule, const SimConfig& config);

/// p* = m-bar(m-bar^{-1}(p)) with the left-continuous inverse.
double p_star(const AtomicMeasure& m, double p);

/// E[(L_T - rho_T^{-1}(p))^+] for `alt_rule` against
/// E[(L_{T^m} - rho_{T^m}^{-1}(p*))^+] for the local-time embedding of m,
/// per p, with tail quantiles (P(L > q) about p). At p = 0 both sides are
/// the plain means E L, the equality the bound reduces to at its endpoint.
/// The two rules run on independent seeds; violations are judged against
/// the combined standard error.
BoundReport local_time_bound_check(const AtomicMeasure& m, const StoppingRule& alt_rule,
    std::span<const double> p_grid, const SimConfig& config);

struct RogersBin {
    double lo = 0.0;
    double hi = 0.0;
    double mass = 0.0;
    /// integral over the bin of P(sup_T > y) dy.
    StatReport lhs;
    /// E[(sup_T - B_T); sup_T in bin].
    StatReport rhs;
};

struct RogersReport {
    std::vector<RogersBin> bins;
    /// Largest |lhs - rhs| / rhs over bins with at least `min_mass`.
    double max_relative = 0.0;
    std::size_t bins_used = 0;
};

/// Binned form of the joint-law condition on (sup_T, sup_T - B_T).
/// `edges` must be increasing; samples outside [edges.front(), edges.back())
/// fall in no bin.
RogersReport rogers_condition_check(std::span<const double> sup, std::span<const double> drawdown,
    std::span<const double> edges, double min_mass = 0.01);

/// Equal-width edges over [0, max sup].
std::vector<double> rogers_edges(std::span<const double> sup, std::size_t bins);

struct LaplaceCheck {
    double rhs = 0.0;
    StatReport lhs;
    /// Paths still unresolved at the horizon (their partial weight is used).
    std::size_t unresolved = 0;
    bool within = false;
};

/// E[exp(-1/2 integral_0^{T_x} f^2(sup_s) ds)] against exp(-integral_0^x |f|).
/// Runs with bridge extremes so T_x is detected between grid points; a path
/// is resolved at T_x, once the weight falls below e^-30, or once f
/// vanishes on [sup, x].
LaplaceCheck hitting_laplace_check(const PiecewiseFn& f, double x, const SimConfig& config);

/// Probability that (B_t, sup_{s<=t} B_s) lies in [x0, x1] x [y0, y1], by
/// nested Gauss-Legendre quadrature of joint_density.
double joint_cell_mass(double t, double x0, double x1, double y0, double y1);

struct DensityCheck {
    /// Quadrature mass of joint_density over [-10, 10] x [0, 10] standard deviations.
    double normalization = 0.0;
    /// Half the L1 distance between histogram and closed-form cell masses,
    /// with everything outside the grid pooled into one extra cell.
    double tv = 0.0;
    std::size_t cells = 0;
    double cell_width = 0.0;
    /// Row-major over (x bin, y bin); x bins start at -x_bins/2 widths.
    std::vector<double> expected;
    std::vector<double> observed;
};

/// Histogram of (B_t, sup_t) over config.n_paths paths on square cells of side
/// 0.2 sqrt(t) covering [-4, 4] x [0, 4] standard deviations.
DensityCheck joint_density_check(double t, const SimConfig& config);

} // namespace maxmart
