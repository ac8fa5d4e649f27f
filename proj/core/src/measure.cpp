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

#include "maxmart/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace maxmart {

namespace {

constexpr double kCenteringTolerance = 1e-9;

void require_centered(const AtomicMeasure& mu, const char* who)
{
    if (std::abs(mean(mu)) > kCenteringTolerance) {
        throw std::invalid_argument(std::string(who) + ": measure is not centered");
    }
}

void require_positive_support(const AtomicMeasure& m, const char* who)
{
    if (!(m.min_location() > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": measure must live on (0, inf)");
    }
}

/// Running sum with Neumaier compensation, accurate to a few ulps however
/// many terms are added.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        carry_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double weight_sum(std::span<const Atom> atoms) noexcept
{
    CompensatedSum s;
    for (const Atom& a : atoms) {
        s.add(a.w);
    }
    return s.value();
}

/// Increment of psi_m contributed by atom i (i < size - 1).
double dual_hl_term(const AtomicMeasure& m, std::size_t i, DualHlAtoms rule)
{
    const double y = m.location(i);
    if (rule == DualHlAtoms::as_written) {
        return y * m.weight(i) / m.suffix_weight(i);
    }
    return y * std::log(m.suffix_weight(i) / m.suffix_weight(i + 1));
}

} // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms))
{
    if (atoms_.empty()) {
        throw std::invalid_argument("AtomicMeasure: no atoms");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!std::isfinite(atoms_[i].x)) {
            throw std::invalid_argument("AtomicMeasure: non-finite location");
        }
        if (!(atoms_[i].w > 0.0)) {
            throw std::invalid_argument("AtomicMeasure: weights must be strictly positive");
        }
        if (i > 0 && !(atoms_[i].x > atoms_[i - 1].x)) {
            throw std::invalid_argument("AtomicMeasure: locations must be strictly increasing");
        }
    }
    if (std::abs(weight_sum(atoms_) - 1.0) > kWeightTolerance) {
        throw std::invalid_argument("AtomicMeasure: weights must sum to 1");
    }

    const std::size_t n = atoms_.size();
    suffix_weight_.assign(n + 1, 0.0);
    suffix_moment_.assign(n + 1, 0.0);
    prefix_weight_.assign(n + 1, 0.0);
    // Summed from the small end so far tails keep their relative accuracy.
    CompensatedSum weight;
    CompensatedSum moment;
    for (std::size_t i = n; i-- > 0;) {
        weight.add(atoms_[i].w);
        moment.add(atoms_[i].w * atoms_[i].x);
        suffix_weight_[i] = weight.value();
        suffix_moment_[i] = moment.value();
    }
    CompensatedSum prefix;
    for (std::size_t i = 0; i < n; ++i) {
        prefix.add(atoms_[i].w);
        prefix_weight_[i + 1] = prefix.value();
    }
}

AtomicMeasure AtomicMeasure::normalized(std::vector<Atom> atoms)
{
    std::erase_if(atoms, [](const Atom& a) { return !(a.w > 0.0); });
    if (atoms.empty()) {
        throw std::invalid_argument("AtomicMeasure::normalized: no positive weight");
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    std::vector<Atom> merged;
    for (const Atom& a : atoms) {
        if (!merged.empty() && merged.back().x == a.x) {
            merged.back().w += a.w;
        } else {
            merged.push_back(a);
        }
    }
    const double total = weight_sum(merged);
    for (Atom& a : merged) {
        a.w /= total;
    }
    return AtomicMeasure(std::move(merged));
}

AtomicMeasure AtomicMeasure::dirac(double x)
{
    return AtomicMeasure({{x, 1.0}});
}

AtomicMeasure AtomicMeasure::quantized(const std::function<double(double)>& quantile, std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("AtomicMeasure::quantized: need at least one atom");
    }
    std::vector<Atom> atoms;
    atoms.reserve(n);
    const double w = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        atoms.push_back({quantile((static_cast<double>(k) + 0.5) * w), w});
    }
    return normalized(std::move(atoms));
}

AtomicMeasure AtomicMeasure::uniform(double a, double b, std::size_t n)
{
    return quantized([=](double u) { return a + (b - a) * u; }, n);
}

AtomicMeasure AtomicMeasure::standard_normal(std::size_t n)
{
    const boost::math::normal_distribution<double> z;
    // Symmetrize so the quantization is centered to rounding.
    return quantized(
        [&](double u) {
            return u < 0.5 ? -boost::math::quantile(z, 1.0 - u) : boost::math::quantile(z, u);
        },
        n);
}

AtomicMeasure AtomicMeasure::exponential(double mean_value, std::size_t n)
{
    return quantized([=](double u) { return -mean_value * std::log1p(-u); }, n);
}

std::size_t AtomicMeasure::first_at_or_above(double x) const noexcept
{
    const auto it = std::lower_bound(
        atoms_.begin(), atoms_.end(), x, [](const Atom& a, double v) { return a.x < v; });
    return static_cast<std::size_t>(it - atoms_.begin());
}

std::size_t AtomicMeasure::first_above(double x) const noexcept
{
    const auto it = std::upper_bound(
        atoms_.begin(), atoms_.end(), x, [](double v, const Atom& a) { return v < a.x; });
    return static_cast<std::size_t>(it - atoms_.begin());
}

double tail(const AtomicMeasure& mu, double x) noexcept
{
    return mu.suffix_weight(mu.first_at_or_above(x));
}

double cdf(const AtomicMeasure& mu, double x) noexcept
{
    return mu.prefix_weight(mu.first_above(x));
}

double mean(const AtomicMeasure& mu) noexcept
{
    return mu.suffix_moment(0);
}

double second_moment(const AtomicMeasure& mu) noexcept
{
    double s = 0.0;
    for (const Atom& a : mu.atoms()) {
        s += a.w * a.x * a.x;
    }
    return s;
}

double tail_inverse(const AtomicMeasure& mu, double p, TailInverseKind kind)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("tail_inverse: p must lie in [0, 1]");
    }
    constexpr double tol = AtomicMeasure::kWeightTolerance;
    // suffix_weight is nonincreasing in the index; find the last index whose
    // tail passes the test. The tail on (x_{i-1}, x_i] equals suffix_weight(i).
    auto passes = [&](std::size_t i) {
        const double s = mu.suffix_weight(i);
        return kind == TailInverseKind::left_continuous ? s >= p - tol : s > p + tol;
    };
    if (kind == TailInverseKind::left_continuous && p <= tol) {
        return kInfinity;
    }
    std::size_t lo = 0;
    std::size_t hi = mu.size(); // first index known to fail
    if (!passes(0)) {
        return -kInfinity;
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (passes(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mu.location(lo);
}

double barycentre(const AtomicMeasure& mu, double x)
{
    require_centered(mu, "barycentre");
    const std::size_t i = mu.first_at_or_above(x);
    if (i == 0) {
        return 0.0;
    }
    if (i == mu.size()) {
        return x;
    }
    return mu.suffix_moment(i) / mu.suffix_weight(i);
}

double barycentre_right_inverse(const AtomicMeasure& mu, double lambda)
{
    require_centered(mu, "barycentre_right_inverse");
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("barycentre_right_inverse: lambda must be >= 0");
    }
    // Psi is 0 on (-inf, x_0], M_i / S_i on (x_{i-1}, x_i] and x beyond x_{n-1}.
    const std::size_t n = mu.size();
    std::size_t lo = 1;
    std::size_t hi = n; // candidate pieces are 1..n-1, nondecreasing values
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (mu.suffix_moment(mid) / mu.suffix_weight(mid) > lambda) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (lo < n) {
        return mu.location(lo - 1);
    }
    return std::max(mu.max_location(), lambda);
}

double dual_hl(const AtomicMeasure& m, double x, DualHlAtoms atoms)
{
    require_positive_support(m, "dual_hl");
    if (x <= m.min_location()) {
        return 0.0;
    }
    if (x >= m.max_location()) {
        return kInfinity;
    }
    const std::size_t last = m.first_above(x); // atoms [0, last) satisfy y <= x
    double s = 0.0;
    for (std::size_t i = 0; i < last; ++i) {
        s += dual_hl_term(m, i, atoms);
    }
    return s;
}

double dual_hl_right_inverse(const AtomicMeasure& m, double y, DualHlAtoms atoms)
{
    require_positive_support(m, "dual_hl_right_inverse");
    if (y < 0.0) {
        return 0.0;
    }
    // psi is 0 on [0, y_0], C_0 on (y_0, y_1), C_j on [y_j, y_{j+1}) and +inf
    // from y_{n-1} on, with C_j the partial sums of the atom terms.
    double cumulative = 0.0;
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
        cumulative += dual_hl_term(m, j, atoms);
        if (cumulative > y) {
            return m.location(j);
        }
    }
    return m.max_location();
}

std::vector<double> dual_hl_levels(const AtomicMeasure& m, DualHlAtoms atoms)
{
    require_positive_support(m, "dual_hl_levels");
    std::vector<double> levels;
    levels.reserve(m.size());
    double cumulative = 0.0;
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
        cumulative += dual_hl_term(m, j, atoms);
        levels.push_back(cumulative);
    }
    return levels;
}

double excess_wealth(const AtomicMeasure& rho, double p)
{
    const double q = tail_inverse(rho, p, TailInverseKind::left_continuous);
    if (!std::isfinite(q)) {
        return 0.0;
    }
    const std::size_t i = rho.first_at_or_above(q);
    return rho.suffix_moment(i) - q * rho.suffix_weight(i);
}

ExcessWealthComparison excess_wealth_leq(const AtomicMeasure& rho1, const AtomicMeasure& rho2,
    std::span<const double> p_grid, double tolerance)
{
    ExcessWealthComparison out;
    out.margins.reserve(p_grid.size());
    for (double p : p_grid) {
        const double margin = excess_wealth(rho2, p) - excess_wealth(rho1, p);
        out.margins.push_back(margin);
        if (margin < -tolerance) {
            out.holds = false;
        }
    }
    return out;
}

AtomicMeasure empirical_measure(std::span<const double> samples, std::size_t max_atoms)
{
    if (samples.empty()) {
        throw std::invalid_argument("empirical_measure: no samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double dn = static_cast<double>(n);

    std::vector<Atom> atoms;
    if (max_atoms == 0 || n <= max_atoms) {
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) {
                ++j;
            }
            atoms.push_back({sorted[i], static_cast<double>(j - i) / dn});
            i = j;
        }
        return AtomicMeasure::normalized(std::move(atoms));
    }
    for (std::size_t g = 0; g < max_atoms; ++g) {
        const std::size_t begin = g * n / max_atoms;
        const std::size_t end = (g + 1) * n / max_atoms;
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            s += sorted[i];
        }
        const double count = static_cast<double>(end - begin);
        atoms.push_back({s / count, count / dn});
    }
    return AtomicMeasure::normalized(std::move(atoms));
}

double ks_distance(const AtomicMeasure& a, const AtomicMeasure& b)
{
    double d = 0.0;
    for (const AtomicMeasure* m : {&a, &b}) {
        for (const Atom& atom : m->atoms()) {
            d = std::max(d, std::abs(cdf(a, atom.x) - cdf(b, atom.x)));
        }
    }
    return d;
}

} // namespace maxmart
