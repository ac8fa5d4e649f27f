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

#include "maxmart/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maxmart/embeddings.hpp"
#include "maxmart/parallel.hpp"

namespace maxmart {

namespace {

constexpr double kDivergence = 50.0;

StatReport indicator_mean(std::span<const double> values, double level, std::uint64_t seed)
{
    std::vector<double> hits(values.size());
    std::transform(values.begin(), values.end(), hits.begin(),
        [&](double v) { return v >= level ? 1.0 : 0.0; });
    return mean_report(hits, seed);
}

void excess_over(std::span<const double> values, double q, std::vector<double>& scratch)
{
    scratch.resize(values.size());
    std::transform(values.begin(), values.end(), scratch.begin(),
        [&](double v) { return std::max(v - q, 0.0); });
}

bool is_zero(const Piece& p)
{
    return p.c0 == 0.0 && p.c1 == 0.0 && p.c2 == 0.0 && p.ce == 0.0;
}

// Smallest u <= x with f identically zero on [u, x].
double quiet_point(const PiecewiseFn& f, double x)
{
    const auto bps = f.breakpoints();
    const auto pieces = f.pieces();
    for (std::size_t i = bps.size(); i-- > 0;) {
        if (bps[i] >= x) {
            continue;
        }
        if (!is_zero(pieces[i])) {
            return i + 1 < bps.size() ? std::min(x, bps[i + 1]) : x;
        }
    }
    return 0.0;
}

} // namespace

bool BoundReport::any_violation() const noexcept
{
    return std::any_of(violation.begin(), violation.end(), [](bool v) { return v; });
}

double sup_law_from_phi(const std::function<double(double)>& phi, double y, std::span<const double> breaks)
{
    if (!(y >= 0.0)) {
        throw std::domain_error("sup_law_from_phi: y must be >= 0");
    }
    if (y == 0.0) {
        return 1.0;
    }
    auto integrand = [&](double s) {
        const double d = s - phi(s);
        if (!(d > 0.0)) {
            throw std::domain_error("sup_law_from_phi: phi(s) >= s inside (0, y)");
        }
        return 1.0 / d;
    };
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto piece = [&](double a, double b) { return Quadrature::integrate(integrand, a, b, 15, 1e-10); };

    std::vector<double> edges{0.0};
    for (double b : breaks) {
        if (b > 0.0 && b < y) {
            edges.push_back(b);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.push_back(y);

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = edges[k];
        const double b = edges[k + 1];
        if (k + 2 < edges.size() || y - phi(y) > 0.0) {
            total += piece(a, b);
        } else {
            // Singular endpoint: bisect towards y until the pieces die out
            // (convergent) or the sum passes the divergence threshold.
            double left = a;
            double h = 0.5 * (b - a);
            double last = 0.0;
            while (h > 1e-15 * std::max(1.0, std::abs(y))) {
                last = piece(left, b - h);
                total += last;
                if (total > kDivergence) {
                    return 0.0;
                }
                left = b - h;
                h *= 0.5;
            }
            if (last > 1e-8 * std::max(1.0, total)) {
                return 0.0;
            }
        }
        if (total > kDivergence) {
            return 0.0;
        }
    }
    return std::exp(-total);
}

double sup_law_from_phi(const PiecewiseFn& phi, double y)
{
    return sup_law_from_phi([&](double s) { return phi(s); }, y, phi.breakpoints());
}

double blackwell_dubins_bound(const AtomicMeasure& mu, double lambda)
{
    const double x = barycentre_right_inverse(mu, lambda);
    if (lambda == 0.0) {
        return 1.0;
    }
    return tail(mu, x);
}

BoundReport verify_sup_bound(const StoppingRule& rule, const AtomicMeasure& mu,
    std::span<const double> lambda_grid, const SimConfig& config)
{
    const auto outcomes = stop_paths(config, rule);
    std::vector<double> sup;
    for (const StopOutcome& o : outcomes) {
        if (o.stopped) {
            sup.push_back(o.sup);
        }
    }
    BoundReport r;
    for (double lambda : lambda_grid) {
        const double bound = blackwell_dubins_bound(mu, lambda);
        const StatReport e = sup.empty() ? StatReport{} : indicator_mean(sup, lambda, config.seed);
        r.points.push_back(lambda);
        r.bound.push_back(bound);
        r.bound_stderr.push_back(0.0);
        r.empirical.push_back(e);
        r.violation.push_back(e.estimate > bound + 3.0 * e.std_error);
    }
    return r;
}

ExpectationBounds expectation_bounds_check(const StoppingRule& rule, const SimConfig& config)
{
    if (!rule.bounded()) {
        throw std::invalid_argument("expectation_bounds_check: rule must be FixedTime or FirstExit");
    }
    const auto outcomes = stop_paths(config, rule);
    const std::size_t n = outcomes.size();
    if (n == 0) {
        throw std::invalid_argument("expectation_bounds_check: no paths");
    }
    if (std::any_of(outcomes.begin(), outcomes.end(), [](const StopOutcome& o) { return !o.stopped; })) {
        throw std::runtime_error("expectation_bounds_check: a path did not stop within the horizon");
    }
    std::vector<double> t(n), sup(n), abs_sup(n), range(n), gap(n);
    for (std::size_t i = 0; i < n; ++i) {
        const StopOutcome& o = outcomes[i];
        t[i] = o.t;
        sup[i] = o.sup;
        abs_sup[i] = std::max(o.sup, -o.inf);
        range[i] = o.sup - o.inf;
        gap[i] = (o.sup - o.b) * (o.sup - o.b) - o.b * o.b;
    }
    ExpectationBounds r;
    r.time = mean_report(t, config.seed);
    r.sup = mean_report(sup, config.seed);
    r.abs_sup = mean_report(abs_sup, config.seed);
    r.range = mean_report(range, config.seed);

    // lhs - sqrt(c E T), linearized per path for its standard error.
    std::vector<double> lin(n);
    auto compare = [&](const std::vector<double>& x, double c, double& rhs, double& se) {
        rhs = std::sqrt(c * r.time.estimate);
        for (std::size_t i = 0; i < n; ++i) {
            lin[i] = x[i] - (rhs > 0.0 ? c * t[i] / (2.0 * rhs) : 0.0);
        }
        se = mean_report(lin).std_error;
        return mean_report(x).estimate <= rhs + 3.0 * se;
    };
    r.holds_sup = compare(sup, 1.0, r.rhs_sup, r.se_sup);
    r.holds_abs_sup = compare(abs_sup, 2.0, r.rhs_abs_sup, r.se_abs_sup);
    r.holds_range = compare(range, 3.0, r.rhs_range, r.se_range);
    r.identity_gap = mean_report(gap, config.seed);
    r.identity_holds = std::abs(r.identity_gap.estimate) <= 3.0 * r.identity_gap.std_error;
    return r;
}

double p_star(const AtomicMeasure& m, double p)
{
    const double q = tail_inverse(m, p, TailInverseKind::left_continuous);
    return std::isinf(q) ? 0.0 : tail(m, q);
}

BoundReport local_time_bound_check(const AtomicMeasure& m, const StoppingRule& alt_rule,
    std::span<const double> p_grid, const SimConfig& config)
{
    SimConfig alt_cfg = config;
    alt_cfg.seed = config.seed ^ 0x9E3779B97F4A7C15ull;
    auto stopped_ell = [](const std::vector<StopOutcome>& outcomes) {
        std::vector<double> ell;
        for (const StopOutcome& o : outcomes) {
            if (o.stopped) {
                ell.push_back(o.ell);
            }
        }
        if (ell.empty()) {
            throw std::runtime_error("local_time_bound_check: no path stopped");
        }
        return ell;
    };
    const auto ell_alt = stopped_ell(stop_paths(alt_cfg, alt_rule));
    const auto ell_m = stopped_ell(stop_paths(config, vallois_rule(m)));
    const AtomicMeasure rho_alt = empirical_measure(ell_alt);
    const AtomicMeasure rho_m = empirical_measure(ell_m);

    BoundReport r;
    std::vector<double> scratch;
    for (double p : p_grid) {
        if (p < 0.0 || p > 1.0) {
            throw std::invalid_argument("local_time_bound_check: p outside [0, 1]");
        }
        double q_alt = 0.0;
        double q_m = 0.0;
        if (p > 0.0) {
            q_alt = tail_inverse(rho_alt, p, TailInverseKind::left_continuous);
            q_m = tail_inverse(rho_m, p_star(m, p), TailInverseKind::left_continuous);
        }
        excess_over(ell_alt, q_alt, scratch);
        StatReport lhs = std::isinf(q_alt) ? StatReport{0.0, 0.0, ell_alt.size(), alt_cfg.seed, 0.0}
                                           : mean_report(scratch, alt_cfg.seed);
        excess_over(ell_m, q_m, scratch);
        StatReport rhs = std::isinf(q_m) ? StatReport{0.0, 0.0, ell_m.size(), config.seed, 0.0}
                                         : mean_report(scratch, config.seed);
        const double se = std::hypot(lhs.std_error, rhs.std_error);
        r.points.push_back(p);
        r.bound.push_back(rhs.estimate);
        r.bound_stderr.push_back(rhs.std_error);
        r.empirical.push_back(lhs);
        r.violation.push_back(lhs.estimate > rhs.estimate + 3.0 * se);
    }
    return r;
}

std::vector<double> rogers_edges(std::span<const double> sup, std::size_t bins)
{
    if (bins == 0) {
        throw std::invalid_argument("rogers_edges: need at least one bin");
    }
    const double top = sup.empty() ? 0.0 : *std::max_element(sup.begin(), sup.end());
    std::vector<double> edges(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        edges[k] = top * static_cast<double>(k) / static_cast<double>(bins);
    }
    // Close the last bin over the maximum itself.
    edges.back() = std::nextafter(top, kInfinity);
    return edges;
}

RogersReport rogers_condition_check(std::span<const double> sup, std::span<const double> drawdown,
    std::span<const double> edges, double min_mass)
{
    if (sup.size() != drawdown.size()) {
        throw std::invalid_argument("rogers_condition_check: sample size mismatch");
    }
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
        throw std::invalid_argument("rogers_condition_check: edges must be increasing");
    }
    RogersReport r;
    const std::size_t n = sup.size();
    if (n == 0) {
        return r;
    }
    std::vector<double> lhs(n), rhs(n);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        RogersBin bin;
        bin.lo = edges[k];
        bin.hi = edges[k + 1];
        std::size_t inside = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = sup[i];
            const bool in = s >= bin.lo && s < bin.hi;
            inside += in ? 1 : 0;
            lhs[i] = std::max(std::min(s, bin.hi) - bin.lo, 0.0);
            rhs[i] = in ? drawdown[i] : 0.0;
        }
        bin.mass = static_cast<double>(inside) / static_cast<double>(n);
        bin.lhs = mean_report(lhs);
        bin.rhs = mean_report(rhs);
        if (bin.mass >= min_mass && bin.rhs.estimate > 0.0) {
            ++r.bins_used;
            r.max_relative = std::max(
                r.max_relative, std::abs(bin.lhs.estimate - bin.rhs.estimate) / bin.rhs.estimate);
        }
        r.bins.push_back(bin);
    }
    return r;
}

LaplaceCheck hitting_laplace_check(const PiecewiseFn& f, double x, const SimConfig& config)
{
    if (!(x > 0.0)) {
        throw std::invalid_argument("hitting_laplace_check: x must be positive");
    }
    SimConfig cfg = config;
    cfg.extremes = Extremes::bridge;
    cfg.validate();

    // Once the supremum passes `quiet` the weight is final.
    const double quiet = quiet_point(f, x);
    constexpr double kCutoff = 60.0; // integral of f^2 at which exp(-A/2) < e^-30
    const std::size_t last = cfg.steps();

    struct PathResult {
        double value;
        bool resolved;
    };
    const auto results = parallel_map<PathResult>(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathWalker w(cfg, i);
        double a = 0.0;
        for (;;) {
            const PathState& s = w.state();
            if (s.sup >= x || s.sup >= quiet || a > kCutoff) {
                return PathResult{std::exp(-0.5 * a), true};
            }
            if (s.step >= last) {
                return PathResult{std::exp(-0.5 * a), false};
            }
            const double fv = f(s.sup);
            a += fv * fv * cfg.dt;
            w.advance();
        }
    });

    LaplaceCheck r;
    std::vector<double> values(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        values[i] = results[i].value;
        r.unresolved += results[i].resolved ? 0 : 1;
    }
    r.lhs = mean_report(values, cfg.seed);
    double integral = 0.0;
    {
        using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
        std::vector<double> edges{0.0};
        for (double b : f.breakpoints()) {
            if (b > 0.0 && b < x) {
                edges.push_back(b);
            }
        }
        edges.push_back(x);
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
            integral += Quadrature::integrate(
                [&](double u) { return std::abs(f(u)); }, edges[k], edges[k + 1], 15, 1e-12);
        }
    }
    r.rhs = std::exp(-integral);
    r.within = r.lhs.within(r.rhs);
    return r;
}

double joint_cell_mass(double t, double x0, double x1, double y0, double y1)
{
    using boost::math::quadrature::gauss;
    const auto inner = [&](double y) {
        const double hi = std::min(x1, y);
        if (hi <= x0) {
            return 0.0;
        }
        return gauss<double, 20>::integrate([&](double x) { return joint_density(t, x, y); }, x0, hi);
    };
    // The inner range changes shape at y = x0 and y = x1.
    std::vector<double> cuts{y0, y1};
    for (double c : {x0, x1}) {
        if (c > y0 && c < y1) {
            cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += gauss<double, 20>::integrate(inner, cuts[i], cuts[i + 1]);
    }
    return total;
}

DensityCheck joint_density_check(double t, const SimConfig& config)
{
    constexpr int kX = 40;
    constexpr int kY = 20;
    if (!(t > 0.0)) {
        throw std::invalid_argument("joint_density_check: t must be positive");
    }
    const double sd = std::sqrt(t);
    DensityCheck r;
    r.cell_width = 0.2 * sd;
    r.cells = kX * kY + 1;

    for (int i = 0; i < 20; ++i) {
        r.normalization += joint_cell_mass(t, -10.0 * sd, 10.0 * sd, 0.5 * i * sd, 0.5 * (i + 1) * sd);
    }

    const double x_lo = -0.5 * kX * r.cell_width;
    r.expected.assign(kX * kY, 0.0);
    double inside = 0.0;
    for (int i = 0; i < kX; ++i) {
        for (int j = 0; j < kY; ++j) {
            const double x0 = x_lo + r.cell_width * i;
            const double y0 = r.cell_width * j;
            const double p = joint_cell_mass(t, x0, x0 + r.cell_width, y0, y0 + r.cell_width);
            r.expected[i * kY + j] = p;
            inside += p;
        }
    }

    SimConfig cfg = config;
    cfg.horizon = t;
    const auto out = stop_paths(cfg, StoppingRule::fixed_time(t));
    std::vector<double> counts(kX * kY, 0.0);
    double outside = 0.0;
    for (const StopOutcome& o : out) {
        const auto i = static_cast<long>(std::floor((o.b - x_lo) / r.cell_width));
        const auto j = static_cast<long>(std::floor(o.sup / r.cell_width));
        if (i >= 0 && i < kX && j >= 0 && j < kY) {
            counts[i * kY + j] += 1.0;
        } else {
            outside += 1.0;
        }
    }
    const double n = static_cast<double>(out.size());
    r.observed.resize(counts.size());
    double l1 = std::abs(outside / n - (1.0 - inside));
    for (std::size_t k = 0; k < counts.size(); ++k) {
        r.observed[k] = counts[k] / n;
        l1 += std::abs(r.observed[k] - r.expected[k]);
    }
    r.tv = 0.5 * l1;
    return r;
}

} // namespace maxmart
