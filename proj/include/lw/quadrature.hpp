// SPDX-License-Identifier: MIT
/**
    \file
    \brief adaptive Gauss-Legendre quadrature, 32 nodes per panel

    A panel is accepted when the 32-node rule on the whole panel and on its two halves agree to the requested
    tolerance; otherwise both halves are refined recursively. The nodes and weights are computed once by Newton
    iteration on the Legendre recurrence.
*/

#pragma once

#include <lw/core.hpp>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Rule
// --------------------------------------------------------------------------------------------------------------------

inline constexpr int gauss_nodes = 32;

struct gauss_rule_t
{
    std::array<double, gauss_nodes> node{};
    std::array<double, gauss_nodes> weight{};
};

//! nodes and weights of the 32-point rule on [-1, 1]
inline auto gauss_rule() -> gauss_rule_t const&
{
    static gauss_rule_t const rule = [] {
        gauss_rule_t r;
        int const n = gauss_nodes;
        for (int i = 0; i < n; ++i)
        {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iteration = 0; iteration < 100; ++iteration)
            {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    double const p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double const step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-16) break;
            }
            r.node[i] = x;
            r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

//! fixed 32-node rule on [a, b]
template <typename integrand_t> auto gauss_panel(integrand_t const& f, double a, double b) -> double
{
    auto const& rule = gauss_rule();
    double const half = 0.5 * (b - a);
    double const mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < gauss_nodes; ++i) sum += rule.weight[i] * f(mid + half * rule.node[i]);
    return half * sum;
}

// --------------------------------------------------------------------------------------------------------------------
// Adaptive Integration
// --------------------------------------------------------------------------------------------------------------------

namespace detail {

template <typename integrand_t>
auto adaptive_panel(integrand_t const& f, double a, double b, double whole, double tol, int depth) -> double
{
    double const mid = 0.5 * (a + b);
    double const left = gauss_panel(f, a, mid);
    double const right = gauss_panel(f, mid, b);
    double const refined = left + right;
    // the relative floor keeps an unattainably small absolute tolerance from splitting down to rounding noise
    double const floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (depth <= 0 || std::abs(refined - whole) <= std::max(tol, floor)) return refined;
    return adaptive_panel(f, a, mid, left, 0.5 * tol, depth - 1) + adaptive_panel(f, mid, b, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/**
    integral of f over [a, b] with absolute tolerance tol

    Reversed bounds give the negated integral. The recursion depth is capped at 40 halvings, far below double
    resolution for any interval this library integrates over.
*/
template <typename integrand_t> auto integrate(integrand_t const& f, double a, double b, double tol = 1e-12) -> double
{
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, tol);
    return detail::adaptive_panel(f, a, b, gauss_panel(f, a, b), tol, 40);
}

/**
    integral of f over [a, b] split at the given interior breakpoints

    Breakpoints outside (a, b) are ignored; each sub-interval is integrated adaptively with a share of the tolerance.
    Use this where the integrand has known kinks or steep layers so each panel sees a smooth function.
*/
template <typename integrand_t>
auto integrate_split(integrand_t const& f, double a, double b, std::vector<double> breaks, double tol = 1e-12) -> double
{
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a)
    {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > a && x < b && x > cuts.back()) cuts.push_back(x);
    cuts.push_back(b);
    double const share = tol / static_cast<double>(cuts.size() - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += integrate(f, cuts[i], cuts[i + 1], share);
    return sign * sum;
}

} // namespace lw
