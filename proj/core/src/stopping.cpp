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

#include "maxmart/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace maxmart {

BarycentreTable::BarycentreTable(const AtomicMeasure& mu)
{
    (void)barycentre(mu, 0.0); // centering check
    x_.reserve(mu.size());
    psi_.reserve(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        x_.push_back(mu.location(i));
        psi_.push_back(i == 0 ? 0.0 : mu.suffix_moment(i) / mu.suffix_weight(i));
    }
    const std::size_t buckets = 4 * x_.size();
    lo_ = x_.front();
    const double span = x_.back() - x_.front();
    if (span > 0.0) {
        inv_width_ = static_cast<double>(buckets) / span;
        start_.resize(buckets + 2);
        for (std::size_t k = 0; k < start_.size(); ++k) {
            const double edge = lo_ + static_cast<double>(k) / inv_width_;
            start_[k] = static_cast<std::size_t>(
                std::lower_bound(x_.begin(), x_.end(), edge) - x_.begin());
        }
    }
}

std::size_t BarycentreTable::first_at_or_above(double x) const noexcept
{
    const std::size_t n = x_.size();
    if (x <= x_.front()) {
        return 0;
    }
    if (x > x_.back()) {
        return n;
    }
    if (!start_.empty()) {
        const auto k = std::min(static_cast<std::size_t>((x - lo_) * inv_width_), start_.size() - 2);
        const std::size_t a = start_[k];
        const std::size_t b = std::min(start_[k + 1] + 1, n);
        const auto i = static_cast<std::size_t>(
            std::lower_bound(x_.begin() + a, x_.begin() + b, x) - x_.begin());
        // Rounding in the bucket index is caught here.
        if (i < n && x_[i] >= x && (i == 0 || x_[i - 1] < x)) {
            return i;
        }
    }
    return static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), x) - x_.begin());
}

double BarycentreTable::operator()(double x) const noexcept
{
    const std::size_t i = first_at_or_above(x);
    if (i == 0) {
        return 0.0;
    }
    if (i == x_.size()) {
        return x;
    }
    return psi_[i];
}

PhiTable::PhiTable(const AtomicMeasure& m, DualHlAtoms atoms) : levels_(dual_hl_levels(m, atoms))
{
    for (const Atom& a : m.atoms()) {
        y_.push_back(a.x);
    }
}

double PhiTable::operator()(double ell) const noexcept
{
    if (ell < 0.0) {
        return 0.0;
    }
    const auto j = static_cast<std::size_t>(
        std::upper_bound(levels_.begin(), levels_.end(), ell) - levels_.begin());
    return j < levels_.size() ? y_[j] : y_.back();
}

StoppingRule StoppingRule::fixed_time(double t)
{
    if (!(t >= 0.0)) {
        throw std::invalid_argument("FixedTime: t must be >= 0");
    }
    return StoppingRule(FixedTime{t});
}

StoppingRule StoppingRule::first_exit(double lower, double upper)
{
    if (!(lower < 0.0 && upper > 0.0)) {
        throw std::invalid_argument("FirstExit: need lower < 0 < upper");
    }
    return StoppingRule(FirstExit{lower, upper});
}

StoppingRule StoppingRule::hitting_level(double level)
{
    return StoppingRule(HittingLevel{level});
}

StoppingRule StoppingRule::randomized_abs_hitting(std::vector<double> levels, std::vector<double> probs)
{
    if (levels.empty() || levels.size() != probs.size()) {
        throw std::invalid_argument("RandomizedAbsHitting: need one probability per level");
    }
    std::vector<double> cumulative;
    double c = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0) || !(probs[k] >= 0.0)) {
            throw std::invalid_argument("RandomizedAbsHitting: levels > 0, probabilities >= 0");
        }
        c += probs[k];
        cumulative.push_back(c);
    }
    if (std::abs(c - 1.0) > 1e-12) {
        throw std::invalid_argument("RandomizedAbsHitting: probabilities must sum to 1");
    }
    cumulative.back() = 1.0;
    return StoppingRule(RandomizedAbsHitting{std::move(levels), std::move(cumulative)});
}

StoppingRule StoppingRule::azema_yor(std::shared_ptr<const BarycentreTable> psi)
{
    return StoppingRule(AzemaYor{std::move(psi)});
}

StoppingRule StoppingRule::vallois_obloj(std::shared_ptr<const PhiTable> phi)
{
    return StoppingRule(ValloisObloj{std::move(phi)});
}

std::size_t StoppingRule::level_index(const RandomizedAbsHitting& r, double coin) noexcept
{
    const auto it = std::lower_bound(r.cumulative.begin(), r.cumulative.end(), coin);
    return std::min(static_cast<std::size_t>(it - r.cumulative.begin()), r.levels.size() - 1);
}

std::string StoppingRule::name() const
{
    std::ostringstream os;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, FixedTime>) {
                os << "fixed_time(" << r.t << ")";
            } else if constexpr (std::is_same_v<R, FirstExit>) {
                os << "first_exit(" << r.lower << "," << r.upper << ")";
            } else if constexpr (std::is_same_v<R, HittingLevel>) {
                os << "hitting_level(" << r.level << ")";
            } else if constexpr (std::is_same_v<R, RandomizedAbsHitting>) {
                os << "randomized_abs_hitting";
            } else if constexpr (std::is_same_v<R, AzemaYor>) {
                os << "azema_yor";
            } else {
                os << "vallois_obloj";
            }
        },
        v_);
    return os.str();
}

bool StoppingRule::bounded() const noexcept
{
    return std::holds_alternative<FixedTime>(v_) || std::holds_alternative<FirstExit>(v_);
}

StopOutcome stop(const PathGrid& path, const StoppingRule& rule, double coin)
{
    PathState s;
    for (std::size_t k = 0; k < path.size(); ++k) {
        s.step = k;
        s.t = static_cast<double>(k) * path.dt;
        s.b = path.values[k];
        s.sup = path.sup[k];
        s.inf = std::min(s.inf, s.b);
        s.ell = path.ell[k];
        if (rule.fires(s, coin)) {
            return make_outcome(s, true);
        }
    }
    return make_outcome(s, false);
}

std::vector<StopOutcome> stop_paths(const SimConfig& config, const StoppingRule& rule)
{
    config.validate();
    return parallel_map<StopOutcome>(config.n_paths, config.threads,
        [&](std::size_t i) { return run_until_stopped(config, i, rule); });
}

} // namespace maxmart
