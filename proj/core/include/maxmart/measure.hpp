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
#include <limits>
#include <span>
#include <vector>

namespace maxmart {

struct Atom {
    double x;
    double w;
};

/// A probability measure with finitely many atoms.
///
/// Invariants: locations strictly increasing, weights strictly positive and
/// summing to one within kWeightTolerance. Suffix sums of weight and first
/// moment are cached so tail quantities are O(log n).
class AtomicMeasure {
public:
    static constexpr double kWeightTolerance = 1e-12;

    /// Validates the invariants; throws std::invalid_argument otherwise.
    explicit AtomicMeasure(std::vector<Atom> atoms);

    /// Sorts, merges equal locations, drops zero weights and renormalizes.
    static AtomicMeasure normalized(std::vector<Atom> atoms);
    static AtomicMeasure dirac(double x);
    /// N equal-weight atoms at quantile midpoints Q((k + 1/2) / N).
    static AtomicMeasure quantized(const std::function<double(double)>& quantile, std::size_t n);
    static AtomicMeasure uniform(double a, double b, std::size_t n);
    static AtomicMeasure standard_normal(std::size_t n);
    static AtomicMeasure exponential(double mean, std::size_t n);

    std::size_t size() const noexcept { return atoms_.size(); }
    std::span<const Atom> atoms() const noexcept { return atoms_; }
    double location(std::size_t i) const noexcept { return atoms_[i].x; }
    double weight(std::size_t i) const noexcept { return atoms_[i].w; }
    double min_location() const noexcept { return atoms_.front().x; }
    double max_location() const noexcept { return atoms_.back().x; }

    /// Sum of weights with index >= i (i == size() gives 0).
    double suffix_weight(std::size_t i) const noexcept { return suffix_weight_[i]; }
    /// Sum of w * x with index >= i.
    double suffix_moment(std::size_t i) const noexcept { return suffix_moment_[i]; }
    /// Sum of weights with index < i.
    double prefix_weight(std::size_t i) const noexcept { return prefix_weight_[i]; }

    /// Index of the first atom with location >= x (size() if none).
    std::size_t first_at_or_above(double x) const noexcept;
    /// Index of the first atom with location > x (size() if none).
    std::size_t first_above(double x) const noexcept;

private:
    std::vector<Atom> atoms_;
    std::vector<double> suffix_weight_;
    std::vector<double> suffix_moment_;
    std::vector<double> prefix_weight_;
};

enum class TailInverseKind { left_continuous, right_continuous };

/// How atoms enter the dual Hardy-Littlewood function.
enum class DualHlAtoms {
    /// y w / m-bar(y) per atom: the integral formula applied to atoms as is.
    as_written,
    /// y log(m-bar(y) / m-bar(y+)) per atom: the increment that makes the
    /// local-time embedding exact for atomic m. Agrees with `as_written` to
    /// first order in the atom weight.
    exact_atoms,
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// mu([x, inf)).
double tail(const AtomicMeasure& mu, double x) noexcept;
/// mu((-inf, x]).
double cdf(const AtomicMeasure& mu, double x) noexcept;
double mean(const AtomicMeasure& mu) noexcept;
double second_moment(const AtomicMeasure& mu) noexcept;

/// left_continuous: sup{x : tail(x) >= p}; right_continuous: sup{x : tail(x) > p}.
/// Empty sets give -inf, unbounded ones +inf (so p = 0 gives +inf for the
/// left-continuous inverse and p = 1 gives the smallest atom).
double tail_inverse(const AtomicMeasure& mu, double p, TailInverseKind kind);

/// Barycentre (Hardy-Littlewood maximal) function Psi_mu of a centered measure:
/// the mean of mu restricted to [x, inf), 0 where tail(x) = 1 and x where
/// tail(x) = 0. Throws std::invalid_argument if |mean| > 1e-9.
double barycentre(const AtomicMeasure& mu, double x);

/// inf{x : Psi_mu(x) > lambda}. Requires a centered measure and lambda >= 0.
double barycentre_right_inverse(const AtomicMeasure& mu, double lambda);

/// Dual Hardy-Littlewood function psi_m of a measure on (0, inf): 0 where
/// m([x, inf)) = 1, +inf where m((x, inf)) = 0, and the sum over atoms
/// y <= x otherwise. Throws std::invalid_argument for an atom at or below 0.
double dual_hl(const AtomicMeasure& m, double x, DualHlAtoms atoms = DualHlAtoms::as_written);

/// Right inverse phi_m(y) = inf{x >= 0 : psi_m(x) > y}.
double dual_hl_right_inverse(
    const AtomicMeasure& m, double y, DualHlAtoms atoms = DualHlAtoms::as_written);

/// Values C_j of psi_m on [y_j, y_{j+1}) for j < size - 1, i.e. the partial
/// sums of the atom terms. psi_m is 0 up to y_0 and +inf from y_{n-1}.
std::vector<double> dual_hl_levels(
    const AtomicMeasure& m, DualHlAtoms atoms = DualHlAtoms::as_written);

struct ExcessWealthComparison {
    bool holds = true;
    /// Per-p (rhs - lhs); negative beyond tolerance means a violation.
    std::vector<double> margins;
};

/// Excess wealth of rho at level p: E[(X - q)^+] with q the left-continuous
/// tail inverse at p (zero at p = 0).
double excess_wealth(const AtomicMeasure& rho, double p);

/// rho1 <= rho2 in the excess wealth order, checked on `p_grid`.
ExcessWealthComparison excess_wealth_leq(const AtomicMeasure& rho1, const AtomicMeasure& rho2,
    std::span<const double> p_grid, double tolerance = 1e-12);

/// Equal-weight empirical law; with more than `max_atoms` samples the sorted
/// sample is cut into `max_atoms` equal-count groups collapsed to their means.
/// `max_atoms == 0` means unlimited. Throws on empty input.
AtomicMeasure empirical_measure(std::span<const double> samples, std::size_t max_atoms = 0);

/// sup_x |F_a(x) - F_b(x)| between two atomic laws.
double ks_distance(const AtomicMeasure& a, const AtomicMeasure& b);

} // namespace maxmart
