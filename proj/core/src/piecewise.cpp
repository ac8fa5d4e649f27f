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

#include "maxmart/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxmart {

double Piece::value(double u) const noexcept
{
    double v = c0 + u * (c1 + u * c2);
    if (ce != 0.0) {
        v += ce * std::exp(rate * u);
    }
    return v;
}

double Piece::antiderivative(double u) const noexcept
{
    double a = u * (c0 + u * (c1 / 2.0 + u * c2 / 3.0));
    if (ce != 0.0) {
        a += rate == 0.0 ? ce * u : ce * std::expm1(rate * u) / rate;
    }
    return a;
}

PiecewiseFn::PiecewiseFn(
    std::vector<double> breakpoints, std::vector<Piece> pieces, Continuity continuity)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), continuity_(continuity)
{
    if (breakpoints_.empty() || breakpoints_.size() != pieces_.size()) {
        throw std::invalid_argument("PiecewiseFn: need one piece per breakpoint");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i])) {
            throw std::invalid_argument("PiecewiseFn: breakpoints must be finite");
        }
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
            throw std::invalid_argument("PiecewiseFn: breakpoints must be strictly increasing");
        }
    }

    // F(b_i) by summing whole-piece integrals outward from 0.
    const std::size_t n = breakpoints_.size();
    auto piece_integral = [&](std::size_t i, double a, double b) {
        return pieces_[i].antiderivative(b) - pieces_[i].antiderivative(a);
    };
    primitive_at_.assign(n, 0.0);
    // Index of the last breakpoint <= 0 (or n when all are positive).
    std::size_t k = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (breakpoints_[i] <= 0.0) {
            k = i;
        }
    }
    if (k == n) {
        // Support starts right of 0: F vanishes up to b_0.
        primitive_at_[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            primitive_at_[i] =
                primitive_at_[i - 1] + piece_integral(i - 1, breakpoints_[i - 1], breakpoints_[i]);
        }
        return;
    }
    primitive_at_[k] = -piece_integral(k, breakpoints_[k], 0.0);
    for (std::size_t i = k + 1; i < n; ++i) {
        primitive_at_[i] =
            primitive_at_[i - 1] + piece_integral(i - 1, breakpoints_[i - 1], breakpoints_[i]);
    }
    for (std::size_t i = k; i-- > 0;) {
        primitive_at_[i] =
            primitive_at_[i + 1] - piece_integral(i, breakpoints_[i], breakpoints_[i + 1]);
    }
}

PiecewiseFn PiecewiseFn::constant(double c)
{
    return PiecewiseFn({0.0}, {Piece{.c0 = c}});
}

PiecewiseFn PiecewiseFn::indicator(double level, bool closed)
{
    if (level <= 0.0) {
        return constant(1.0);
    }
    return PiecewiseFn({0.0, level}, {Piece{}, Piece{.c0 = 1.0}},
        closed ? Continuity::right : Continuity::left);
}

PiecewiseFn PiecewiseFn::interval(double a, double b)
{
    if (!(a < b)) {
        throw std::invalid_argument("PiecewiseFn::interval: need a < b");
    }
    if (a <= 0.0) {
        return PiecewiseFn({0.0, b}, {Piece{.c0 = 1.0}, Piece{}});
    }
    return PiecewiseFn({0.0, a, b}, {Piece{}, Piece{.c0 = 1.0}, Piece{}});
}

PiecewiseFn PiecewiseFn::affine(double intercept, double slope)
{
    return PiecewiseFn({0.0}, {Piece{.c0 = intercept, .c1 = slope}});
}

PiecewiseFn PiecewiseFn::monomial(double coef, int degree)
{
    switch (degree) {
    case 0:
        return PiecewiseFn({0.0}, {Piece{.c0 = coef}});
    case 1:
        return PiecewiseFn({0.0}, {Piece{.c1 = coef}});
    case 2:
        return PiecewiseFn({0.0}, {Piece{.c2 = coef}});
    default:
        throw std::invalid_argument("PiecewiseFn::monomial: degree must be 0, 1 or 2");
    }
}

PiecewiseFn PiecewiseFn::exponential(double coef, double rate)
{
    return PiecewiseFn({0.0}, {Piece{.ce = coef, .rate = rate}});
}

std::size_t PiecewiseFn::piece_index(double u) const noexcept
{
    const auto first = breakpoints_.begin();
    // Right-continuous: last b_i <= u. Left-continuous: last b_i < u.
    const auto it = continuity_ == Continuity::right
        ? std::upper_bound(first, breakpoints_.end(), u)
        : std::lower_bound(first, breakpoints_.end(), u);
    if (it == first) {
        return npos;
    }
    return static_cast<std::size_t>(it - first) - 1;
}

double PiecewiseFn::operator()(double u) const noexcept
{
    const std::size_t i = piece_index(u);
    return i == npos ? 0.0 : pieces_[i].value(u);
}

double PiecewiseFn::primitive(double y) const noexcept
{
    // The primitive is continuous, so the breakpoint convention is irrelevant here.
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y);
    if (it == breakpoints_.begin()) {
        return primitive_at_[0];
    }
    const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return primitive_at_[i] + pieces_[i].antiderivative(y) - pieces_[i].antiderivative(breakpoints_[i]);
}

double PiecewiseFn::integral_to_infinity() const noexcept
{
    const Piece& last = pieces_.back();
    const double b = breakpoints_.back();
    if (last.c0 != 0.0 || last.c1 != 0.0 || last.c2 != 0.0 || (last.ce != 0.0 && !(last.rate < 0.0))) {
        return std::numeric_limits<double>::infinity();
    }
    if (last.ce == 0.0) {
        return primitive_at_.back();
    }
    // ce exp(rate u) / rate vanishes at infinity.
    return primitive_at_.back() - last.ce * std::exp(last.rate * b) / last.rate;
}

std::vector<double> PiecewiseFn::sample_points(double lo, double hi) const
{
    constexpr int kPerPiece = 256;
    std::vector<double> edges{lo};
    for (double b : breakpoints_) {
        if (b > lo && b < hi) {
            edges.push_back(b);
        }
    }
    edges.push_back(hi);
    std::vector<double> pts;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        for (int j = 0; j <= kPerPiece; ++j) {
            pts.push_back(edges[e] + (edges[e + 1] - edges[e]) * j / kPerPiece);
        }
    }
    return pts;
}

bool PiecewiseFn::nondecreasing_on(double lo, double hi) const
{
    auto pts = sample_points(lo, hi);
    // Breakpoints close one piece and open the next; visit each once.
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double u : pts) {
        // Both one-sided values at u, in order.
        const double eps = 1e-12 * std::max(1.0, std::abs(u));
        for (double w : {u - eps, u, u + eps}) {
            if (w < lo || w > hi) {
                continue;
            }
            const double v = (*this)(w);
            if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
                return false;
            }
            prev = std::max(prev, v);
        }
    }
    return true;
}

bool PiecewiseFn::nonnegative_on(double lo, double hi) const
{
    const auto pts = sample_points(lo, hi);
    return std::all_of(pts.begin(), pts.end(), [&](double u) { return (*this)(u) >= 0.0; });
}

double PiecewiseFn::sup_abs_on(double lo, double hi) const
{
    double m = 0.0;
    for (double u : sample_points(lo, hi)) {
        m = std::max(m, std::abs((*this)(u)));
    }
    return m;
}

} // namespace maxmart
