// SPDX-License-Identifier: MIT
/**
    \file
    \brief smooth bumps and steps built from the mollifier e(u) = exp(-1/u)

    Every cutoff in the library is one of two primitives, each returned with its first two derivatives:

    - smooth_step: S(u) = e(u)/(e(u) + e(1 - u)), which is 0 for u <= 0, 1 for u >= 1, and monotone in between
    - standard_bump: b(t) = exp(1 - 1/(1 - t^2)) on |t| < 1, 0 elsewhere, with b(0) = 1 and b'(0) = 0

    Both are evaluated in log form so the derivatives stay finite right up to the edges of the support. Outside the
    open support the values are exactly 0 (or 1), not merely tiny; this is what makes support containment checks exact.
*/

#pragma once

#include <lw/core.hpp>
#include <cmath>

namespace lw {

//! a scalar with first and second derivative
struct scalar3_t
{
    double f = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

// below this distance from an edge, e(u) underflows double anyway; returning the limit keeps 0 * inf out of formulas
inline constexpr double mollifier_edge = 1.0 / 720.0;

//! S(u) and its first two derivatives; S' is maximal at u = 1/2 where it equals 2
inline auto smooth_step(double u) noexcept -> scalar3_t
{
    if (u <= mollifier_edge) return {0.0, 0.0, 0.0};
    if (u >= 1.0 - mollifier_edge) return {1.0, 0.0, 0.0};

    // S = 1/(1 + exp(w)) with w = 1/u - 1/(1 - u)
    double const v = 1.0 - u;
    double const w = 1.0 / u - 1.0 / v;
    double const w1 = -1.0 / (u * u) - 1.0 / (v * v);
    double const w2 = 2.0 / (u * u * u) - 2.0 / (v * v * v);
    double const s = 1.0 / (1.0 + std::exp(w));
    double const s1m = s * (1.0 - s);
    return {s, -s1m * w1, s1m * (1.0 - 2.0 * s) * w1 * w1 - s1m * w2};
}

//! b(t) = exp(1 - 1/(1 - t^2)) on (-1, 1) and its first two derivatives
inline auto standard_bump(double t) noexcept -> scalar3_t
{
    double const m = 1.0 - t * t;
    if (m <= mollifier_edge) return {0.0, 0.0, 0.0};
    double const b = std::exp(1.0 - 1.0 / m);
    double const g1 = -2.0 * t / (m * m);
    double const g2 = -2.0 / (m * m) - 8.0 * t * t / (m * m * m);
    return {b, b * g1, b * (g1 * g1 + g2)};
}

//! standard bump rescaled to the interval (lo, hi), derivatives with respect to the unscaled argument
inline auto interval_bump(double x, double lo, double hi) noexcept -> scalar3_t
{
    double const mid = 0.5 * (lo + hi);
    double const half = 0.5 * (hi - lo);
    auto const b = standard_bump((x - mid) / half);
    return {b.f, b.d1 / half, b.d2 / (half * half)};
}

/**
    composite step: S((x - x0)/width), decreasing if the width is negative

    Derivatives are taken with respect to x. A negative width flips the step so it falls from 1 to 0 as x increases
    through [x0 + width, x0].
*/
inline auto step_at(double x, double x0, double width) noexcept -> scalar3_t
{
    auto const s = smooth_step((x - x0) / width);
    return {s.f, s.d1 / width, s.d2 / (width * width)};
}

} // namespace lw
