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
#include <span>
#include <vector>

namespace maxmart {

/// One analytic piece: c0 + c1 u + c2 u^2 + ce exp(rate u), in absolute u.
struct Piece {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double ce = 0.0;
    double rate = 0.0;

    double value(double u) const noexcept;
    /// An antiderivative of value().
    double antiderivative(double u) const noexcept;
};

/// Which piece owns a breakpoint.
enum class Continuity {
    right, ///< piece i covers [b_i, b_{i+1})
    left,  ///< piece i covers (b_i, b_{i+1}]
};

/// A function on the line built from analytic pieces between breakpoints,
/// zero left of the first breakpoint, with its exact primitive
/// F(y) = integral of f over [0, y] (negative for y < 0).
///
/// F is stored at every breakpoint and extended inside a piece by the
/// piece's closed-form antiderivative, so no quadrature is ever involved.
class PiecewiseFn {
public:
    PiecewiseFn(std::vector<double> breakpoints, std::vector<Piece> pieces,
        Continuity continuity = Continuity::right);

    /// f = c on [0, inf).
    static PiecewiseFn constant(double c);
    /// 1 on [level, inf) when `closed`, on (level, inf) otherwise; zero below.
    static PiecewiseFn indicator(double level, bool closed = true);
    /// 1 on [a, b), zero elsewhere on [0, inf).
    static PiecewiseFn interval(double a, double b);
    /// intercept + slope * u on [0, inf).
    static PiecewiseFn affine(double intercept, double slope);
    /// coef * u^degree on [0, inf), degree in {0, 1, 2}.
    static PiecewiseFn monomial(double coef, int degree);
    /// coef * exp(rate * u) on [0, inf).
    static PiecewiseFn exponential(double coef, double rate);

    double operator()(double u) const noexcept;
    /// F(y) = integral_0^y f.
    double primitive(double y) const noexcept;
    /// integral_0^inf f; +inf unless the last piece is zero or a decaying
    /// exponential.
    double integral_to_infinity() const noexcept;

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const Piece> pieces() const noexcept { return pieces_; }
    /// F at each breakpoint.
    std::span<const double> primitive_at() const noexcept { return primitive_at_; }
    Continuity continuity() const noexcept { return continuity_; }

    /// Checked at every breakpoint (one-sided limits) and on a uniform
    /// sample of each piece clipped to [lo, hi].
    bool nondecreasing_on(double lo, double hi) const;
    bool nonnegative_on(double lo, double hi) const;
    /// Sampled sup |f| over [lo, hi].
    double sup_abs_on(double lo, double hi) const;

private:
    /// Index of the piece owning u, or npos when u lies left of the support.
    std::size_t piece_index(double u) const noexcept;
    std::vector<double> sample_points(double lo, double hi) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<double> breakpoints_;
    std::vector<Piece> pieces_;
    std::vector<double> primitive_at_;
    Continuity continuity_;
};

} // namespace maxmart
