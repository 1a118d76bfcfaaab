// SPDX-License-Identifier: MIT
/**
    \file
    \brief Legendrian knot fronts: cusp and embryo detection, decorations, compatibility checks, zig-zag takeovers

    A front is a curve t -> (q(t), z(t)) whose Legendrian lift has slope p = dz/dq, so z' = p q'. Tangencies of the
    lift with the front fibres are the zeros of q'. A simple zero is a cusp, a double zero (q'' = 0, q''' != 0) an
    embryo. The Maslov sign of a cusp is -sign(q'' p'). It is the rotation direction of the lift's tangent line as t
    increases, the same convention the stratifier uses for folds.

    Closed fronts have period 1 and are given by Fourier series: either (q, z) directly, or (q, p) with z integrated
    exactly. The takeover families are fronts on a chart t in [0, 1] that are graphical near both ends.
*/

#pragma once

#include "lw/bump.hpp"
#include "lw/core.hpp"
#include "lw/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Fronts
// --------------------------------------------------------------------------------------------------------------------

//! a front point with three derivatives of each coordinate in the curve parameter
struct front_jet_t
{
    double q = 0.0, dq = 0.0, ddq = 0.0, dddq = 0.0;
    double z = 0.0, dz = 0.0, ddz = 0.0, dddz = 0.0;
};

struct knot_front_t
{
    std::string name;
    bool periodic = true; //!< closed curve of period 1; otherwise a chart over [0, 1]
    std::function<front_jet_t(double)> evaluate;
    int samples = 4096;
};

//! a real trigonometric polynomial sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t)
struct fourier_t
{
    std::vector<double> a; //!< cosine coefficients, a[0] is the constant term
    std::vector<double> b; //!< sine coefficients, b[0] is ignored

    auto order() const noexcept -> std::size_t { return std::max(a.size(), b.size()); }
    auto cos_coeff(std::size_t k) const noexcept -> double { return k < a.size() ? a[k] : 0.0; }
    auto sin_coeff(std::size_t k) const noexcept -> double { return k < b.size() && k > 0 ? b[k] : 0.0; }

    //! value and derivatives 0..3 in t
    auto eval(double t) const -> std::array<double, 4>
    {
        std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < order(); ++k)
        {
            double const w = 2.0 * pi * static_cast<double>(k);
            double const c = std::cos(w * t), s = std::sin(w * t);
            double const ak = cos_coeff(k), bk = sin_coeff(k);
            out[0] += ak * c + bk * s;
            out[1] += w * (-ak * s + bk * c);
            out[2] += w * w * (-ak * c - bk * s);
            out[3] += w * w * w * (ak * s - bk * c);
        }
        return out;
    }

    //! derivative in t
    auto derivative() const -> fourier_t
    {
        fourier_t d;
        d.a.assign(order(), 0.0);
        d.b.assign(order(), 0.0);
        for (std::size_t k = 1; k < order(); ++k)
        {
            double const w = 2.0 * pi * static_cast<double>(k);
            d.a[k] = w * sin_coeff(k);
            d.b[k] = -w * cos_coeff(k);
        }
        return d;
    }

    //! zero-mean antiderivative; the constant term must vanish
    auto antiderivative() const -> fourier_t
    {
        fourier_t p;
        p.a.assign(order(), 0.0);
        p.b.assign(order(), 0.0);
        for (std::size_t k = 1; k < order(); ++k)
        {
            double const w = 2.0 * pi * static_cast<double>(k);
            p.a[k] = -sin_coeff(k) / w;
            p.b[k] = cos_coeff(k) / w;
        }
        return p;
    }

    auto product(fourier_t const& o) const -> fourier_t
    {
        std::size_t const m = order() + o.order();
        fourier_t r;
        r.a.assign(m, 0.0);
        r.b.assign(m, 0.0);
        for (std::size_t j = 0; j < order(); ++j)
        {
            for (std::size_t k = 0; k < o.order(); ++k)
            {
                double const aj = cos_coeff(j), bj = sin_coeff(j), ak = o.cos_coeff(k), bk = o.sin_coeff(k);
                std::size_t const sum = j + k;
                std::size_t const diff = j > k ? j - k : k - j;
                // cos cos, sin sin, sin cos, cos sin
                r.a[sum] += 0.5 * (aj * ak - bj * bk);
                r.a[diff] += 0.5 * (aj * ak + bj * bk);
                r.b[sum] += 0.5 * (bj * ak + aj * bk);
                if (j >= k)
                    r.b[diff] += 0.5 * (bj * ak - aj * bk);
                else
                    r.b[diff] += 0.5 * (aj * bk - bj * ak);
            }
        }
        r.b[0] = 0.0;
        return r;
    }
};

//! closed front from Fourier series for q and z
inline auto fourier_front(std::string name, fourier_t q, fourier_t z, int samples = 4096) -> knot_front_t
{
    require(q.order() >= 2, error_kind::malformed_front, "a closed front needs a non-constant q");
    knot_front_t f;
    f.name = std::move(name);
    f.periodic = true;
    f.samples = samples;
    f.evaluate = [q = std::move(q), z = std::move(z)](double t) {
        auto const qv = q.eval(t);
        auto const zv = z.eval(t);
        return front_jet_t{qv[0], qv[1], qv[2], qv[3], zv[0], zv[1], zv[2], zv[3]};
    };
    return f;
}

/**
    closed front generated by Fourier series for q and the slope p, with z = int p dq

    The mean of p q' must vanish for z to close up; when it does not, p is corrected by the multiple of q' that removes
    it (this leaves p unchanged at every cusp). The correction applied is returned through `correction`.
*/
inline auto fourier_lift_front(std::string name, fourier_t const& q, fourier_t p, int samples = 4096,
                               double* correction = nullptr) -> knot_front_t
{
    fourier_t const dq = q.derivative();
    fourier_t pdq = p.product(dq);
    double const mean_sq = dq.product(dq).cos_coeff(0);
    require(mean_sq > 0.0, error_kind::malformed_front, "a closed front needs a non-constant q");
    double const lambda = -pdq.cos_coeff(0) / mean_sq;
    if (lambda != 0.0)
    {
        p.a.resize(std::max(p.a.size(), dq.order()), 0.0);
        p.b.resize(std::max(p.b.size(), dq.order()), 0.0);
        for (std::size_t k = 0; k < dq.order(); ++k)
        {
            p.a[k] += lambda * dq.cos_coeff(k);
            p.b[k] += lambda * dq.sin_coeff(k);
        }
        pdq = p.product(dq);
    }
    if (correction) *correction = lambda;
    pdq.a[0] = 0.0;
    return fourier_front(std::move(name), q, pdq.antiderivative(), samples);
}

/**
    chart front over t in [0, 1] from q' and p with their derivatives; q and z are integrated from t = 0

    Intended for local families that are graphical near the chart ends.
*/
inline auto chart_front(std::string name, std::function<scalar3_t(double)> qdot, std::function<scalar3_t(double)> p,
                        int samples = 4096) -> knot_front_t
{
    // cumulative integrals of q' and p q' on fixed panels; values inside a panel add one more Gauss panel
    constexpr std::size_t panels = 2048;
    auto const dz = [qdot, p](double u) { return p(u).f * qdot(u).f; };
    auto const dq = [qdot](double u) { return qdot(u).f; };
    std::vector<double> q_acc(panels + 1, 0.0), z_acc(panels + 1, 0.0);
    for (std::size_t k = 0; k < panels; ++k)
    {
        double const a = static_cast<double>(k) / panels, b = static_cast<double>(k + 1) / panels;
        q_acc[k + 1] = q_acc[k] + gauss_panel(dq, a, b);
        z_acc[k + 1] = z_acc[k] + gauss_panel(dz, a, b);
    }

    knot_front_t f;
    f.name = std::move(name);
    f.periodic = false;
    f.samples = samples;
    f.evaluate = [qdot, p, dq, dz, q_acc = std::move(q_acc), z_acc = std::move(z_acc)](double t) {
        scalar3_t const v = qdot(t);
        scalar3_t const s = p(t);
        std::size_t const k = std::min<std::size_t>(panels - 1, static_cast<std::size_t>(std::max(0.0, t) * panels));
        double const a = static_cast<double>(k) / panels;
        front_jet_t j;
        j.q = q_acc[k] + (t > a ? gauss_panel(dq, a, t) : 0.0);
        j.dq = v.f;
        j.ddq = v.d1;
        j.dddq = v.d2;
        j.z = z_acc[k] + (t > a ? gauss_panel(dz, a, t) : 0.0);
        j.dz = s.f * v.f;
        j.ddz = s.d1 * v.f + s.f * v.d1;
        j.dddz = s.d2 * v.f + 2.0 * s.d1 * v.d1 + s.f * v.d2;
        return j;
    };
    return f;
}

// --------------------------------------------------------------------------------------------------------------------
// Singularity Detection
// --------------------------------------------------------------------------------------------------------------------

enum class front_singularity_kind
{
    cusp,
    embryo,
};

inline auto to_string(front_singularity_kind k) noexcept -> char const*
{
    return k == front_singularity_kind::cusp ? "cusp" : "embryo";
}

struct front_singularity_t
{
    double t = 0.0;
    front_singularity_kind kind = front_singularity_kind::cusp;
    int maslov = 0; //!< +-1 for cusps, 0 for embryos
};

//! thresholds of the degeneracy test
inline constexpr double embryo_second_tol = 1e-6;
inline constexpr double embryo_third_tol = 1e-6;

namespace detail {

//! bisection for a sign change of g on [a, b]
template <typename func_t> auto bisect_scalar(func_t&& g, double a, double b) -> double
{
    double ga = g(a);
    for (int it = 0; it < 200 && b - a > 1e-16; ++it)
    {
        double const m = 0.5 * (a + b);
        double const gm = g(m);
        if ((gm > 0.0) == (ga > 0.0))
        {
            a = m;
            ga = gm;
        }
        else
            b = m;
    }
    return 0.5 * (a + b);
}

inline auto wrap_unit(double t) noexcept -> double
{
    t -= std::floor(t);
    return t >= 1.0 ? 0.0 : t;
}

//! distance of two parameters, measured around the circle for periodic fronts
inline auto parameter_distance(double a, double b, bool periodic) noexcept -> double
{
    double d = std::abs(a - b);
    if (periodic) d = std::min(d, 1.0 - d);
    return d;
}

} // namespace detail

/**
    all zeros of q', classified as cusps or embryos

    Sign changes of q' on the sample grid are refined by bisection. Interior minima of |q'| without a sign change are
    refined to the zero of q'' and kept when |q'| is below tol there (double zeros). Each zero is classified by the
    degeneracy test |q''| < 1e-6 with |q'''| > 1e-6. The Legendrian condition z' = 0 is checked at every zero.
    A run of vanishing samples, or a zero with q'' = q''' = 0, is a malformed front.
*/
inline auto detect_front_singularities(knot_front_t const& front, double tol = 1e-9) -> std::vector<front_singularity_t>
{
    require(front.samples >= 16, error_kind::parameter_out_of_range, "fronts need at least 16 samples");
    std::size_t const count = static_cast<std::size_t>(front.samples);
    std::size_t const nodes = front.periodic ? count : count + 1;
    double const h = 1.0 / static_cast<double>(count);
    std::vector<front_jet_t> jets(nodes);
    parallel_for(nodes, [&](std::size_t i) {
        front_jet_t j = front.evaluate(static_cast<double>(i) * h);
        require(std::isfinite(j.dq) && std::isfinite(j.ddq) && std::isfinite(j.dz), error_kind::non_finite,
                front.name + ": non-finite front derivatives");
        jets[i] = j;
    });

    double scale = 0.0;
    for (auto const& j : jets) scale = std::max({scale, std::abs(j.dq), std::abs(j.dz)});
    require(scale > 0.0, error_kind::malformed_front, front.name + ": the front is constant");

    // runs of vanishing q' mean a non-isolated zero set
    std::size_t run = 0;
    for (std::size_t i = 0; i < nodes; ++i)
    {
        run = std::abs(jets[i].dq) < 1e-12 * scale ? run + 1 : 0;
        require(run < 3, error_kind::malformed_front, front.name + ": q' vanishes on an interval (non-isolated zeros)");
    }

    auto const dq = [&](double t) { return front.evaluate(front.periodic ? detail::wrap_unit(t) : t).dq; };
    auto const ddq = [&](double t) { return front.evaluate(front.periodic ? detail::wrap_unit(t) : t).ddq; };
    std::size_t const links = front.periodic ? nodes : nodes - 1;
    auto const node = [&](std::size_t i) -> front_jet_t const& { return jets[i % nodes]; };

    std::vector<double> zeros;
    for (std::size_t i = 0; i < links; ++i)
    {
        double const a = node(i).dq, b = node(i + 1).dq;
        double const ta = static_cast<double>(i) * h, tb = ta + h;
        if (a == 0.0)
            zeros.push_back(ta);
        else if (b != 0.0 && (a > 0.0) != (b > 0.0))
            zeros.push_back(detail::bisect_scalar(dq, ta, tb));
    }
    if (!front.periodic && jets.back().dq == 0.0) zeros.push_back(1.0);

    // double zeros: local minima of |q'| with no sign change nearby
    for (std::size_t i = front.periodic ? 0 : 1; i < (front.periodic ? nodes : nodes - 1); ++i)
    {
        std::size_t const im = (i + nodes - 1) % nodes, ip = (i + 1) % nodes;
        double const v = std::abs(jets[i].dq);
        if (v > std::abs(jets[im].dq) || v > std::abs(jets[ip].dq)) continue;
        if ((jets[im].dq > 0.0) != (jets[ip].dq > 0.0) || (jets[i].dq > 0.0) != (jets[ip].dq > 0.0)) continue;
        if (v > 1e-3 * scale) continue;
        double const t0 = static_cast<double>(i) * h;
        double tstar = t0;
        if ((ddq(t0 - h) > 0.0) != (ddq(t0 + h) > 0.0)) tstar = detail::bisect_scalar(ddq, t0 - h, t0 + h);
        if (std::abs(dq(tstar)) <= tol * std::max(1.0, scale)) zeros.push_back(front.periodic ? detail::wrap_unit(tstar) : tstar);
    }

    std::sort(zeros.begin(), zeros.end());
    std::vector<front_singularity_t> out;
    for (double t : zeros)
    {
        if (!out.empty() && detail::parameter_distance(out.back().t, t, front.periodic) < 1e-9) continue;
        front_jet_t const j = front.evaluate(t);
        require(std::abs(j.dz) <= 1e-6 * std::max(1.0, scale), error_kind::malformed_front,
                front.name + ": z' does not vanish where q' does (vertical tangency, not a Legendrian front)");
        front_singularity_t s;
        s.t = t;
        if (std::abs(j.ddq) < embryo_second_tol)
        {
            require(std::abs(j.dddq) > embryo_third_tol, error_kind::malformed_front,
                    front.name + ": degenerate zero of q' beyond an embryo");
            s.kind = front_singularity_kind::embryo;
        }
        else
        {
            s.kind = front_singularity_kind::cusp;
            double const p = j.ddz / j.ddq;
            double const dp = (j.dddz - p * j.dddq) / (2.0 * j.ddq);
            s.maslov = std::abs(dp) < 1e-10 ? 0 : (j.ddq * dp > 0.0 ? -1 : 1);
        }
        out.push_back(s);
    }
    if (front.periodic && out.size() >= 2 && detail::parameter_distance(out.front().t, out.back().t, true) < 1e-9)
        out.pop_back();
    return out;
}

// --------------------------------------------------------------------------------------------------------------------
// Decorations
// --------------------------------------------------------------------------------------------------------------------

//! an arc from `from` to `to` in the positive direction, wrapping through 0 when to < from; a point when equal
struct arc_t
{
    double from = 0.0;
    double to = 0.0;

    auto degenerate() const noexcept -> bool { return from == to; }
    auto length() const noexcept -> double { return detail::wrap_unit(to - from); }
    auto offset(double t) const noexcept -> double { return detail::wrap_unit(t - from); }
    auto contains(double t) const noexcept -> bool { return offset(t) <= length(); }
    auto interior_contains(double t) const noexcept -> bool
    {
        double const o = offset(t);
        return o > 0.0 && o < length();
    }
};

struct decoration_t
{
    std::vector<double> points;
    std::vector<arc_t> intervals;
};

//! throws nesting_violation unless points are distinct and outside all intervals and intervals are disjoint or nested
inline auto nesting_check(decoration_t const& d) -> void
{
    auto const fmt = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    for (double t : d.points)
        require(t >= 0.0 && t < 1.0, error_kind::parameter_out_of_range, "decoration parameters lie in [0, 1)");
    for (auto const& i : d.intervals)
        require(i.from >= 0.0 && i.from < 1.0 && i.to >= 0.0 && i.to < 1.0, error_kind::parameter_out_of_range,
                "decoration parameters lie in [0, 1)");

    for (std::size_t i = 0; i < d.points.size(); ++i)
        for (std::size_t j = i + 1; j < d.points.size(); ++j)
            require(d.points[i] != d.points[j], error_kind::nesting_violation, "decoration points coincide at " + fmt(d.points[i]));
    for (double t : d.points)
        for (std::size_t j = 0; j < d.intervals.size(); ++j)
            require(!d.intervals[j].contains(t), error_kind::nesting_violation,
                    "point " + fmt(t) + " lies on interval I" + std::to_string(j + 1));

    auto const inside = [](arc_t const& small, arc_t const& big) {
        if (big.degenerate()) return false;
        if (!big.interior_contains(small.from) || !big.interior_contains(small.to)) return false;
        return small.degenerate() || big.offset(small.from) < big.offset(small.to);
    };
    auto const disjoint = [](arc_t const& x, arc_t const& y) {
        return !x.contains(y.from) && !x.contains(y.to) && !y.contains(x.from) && !y.contains(x.to);
    };
    for (std::size_t i = 0; i < d.intervals.size(); ++i)
        for (std::size_t j = i + 1; j < d.intervals.size(); ++j)
        {
            arc_t const& a = d.intervals[i];
            arc_t const& b = d.intervals[j];
            require(disjoint(a, b) || inside(a, b) || inside(b, a), error_kind::nesting_violation,
                    "intervals I" + std::to_string(i + 1) + " and I" + std::to_string(j + 1) + " overlap without nesting");
        }
}

enum class violation_kind
{
    missing_cusp,
    missing_embryo,
    equal_maslov_signs,
    unexpected_singularity,
};

inline auto to_string(violation_kind k) noexcept -> char const*
{
    switch (k)
    {
    case violation_kind::missing_cusp: return "missing-cusp";
    case violation_kind::missing_embryo: return "missing-embryo";
    case violation_kind::equal_maslov_signs: return "equal-maslov-signs";
    case violation_kind::unexpected_singularity: return "unexpected-singularity";
    }
    return "unexpected-singularity";
}

struct violation_t
{
    violation_kind kind = violation_kind::unexpected_singularity;
    double t = 0.0;
    std::string message;
};

struct decoration_report_t
{
    bool ok = true;
    std::vector<violation_t> violations;
    std::vector<front_singularity_t> singularities;
};

//! parameter tolerance when matching decoration entries with singularities
inline constexpr double decoration_tol = 1e-6;

/**
    compare a front's singularities with a decoration

    Nesting is checked first (throwing nesting_violation). Then: a cusp at every point; cusps of opposite Maslov sign
    at both ends of every non-degenerate interval; an embryo at every degenerate interval; no other singularities.
*/
inline auto validate_decoration(knot_front_t const& front, decoration_t const& d) -> decoration_report_t
{
    nesting_check(d);
    decoration_report_t r;
    r.singularities = detect_front_singularities(front);
    std::vector<bool> used(r.singularities.size(), false);

    auto const find = [&](double t, front_singularity_kind kind) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < r.singularities.size(); ++i)
            if (r.singularities[i].kind == kind &&
                detail::parameter_distance(r.singularities[i].t, t, front.periodic) <= decoration_tol)
                return i;
        return std::nullopt;
    };
    auto const fmt = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
    };
    auto const fail = [&](violation_kind k, double t, std::string msg) {
        r.ok = false;
        r.violations.push_back({k, t, std::move(msg)});
    };

    for (std::size_t i = 0; i < d.points.size(); ++i)
    {
        double const t = d.points[i];
        if (auto const s = find(t, front_singularity_kind::cusp))
            used[*s] = true;
        else
            fail(violation_kind::missing_cusp, t, "no cusp at point t" + std::to_string(i + 1) + " = " + fmt(t));
    }
    for (std::size_t j = 0; j < d.intervals.size(); ++j)
    {
        arc_t const& arc = d.intervals[j];
        std::string const label = "I" + std::to_string(j + 1);
        if (arc.degenerate())
        {
            if (auto const s = find(arc.from, front_singularity_kind::embryo))
                used[*s] = true;
            else
                fail(violation_kind::missing_embryo, arc.from, "no embryo at degenerate interval " + label + " = " + fmt(arc.from));
            continue;
        }
        auto const a = find(arc.from, front_singularity_kind::cusp);
        auto const b = find(arc.to, front_singularity_kind::cusp);
        if (a) used[*a] = true;
        if (b) used[*b] = true;
        if (!a) fail(violation_kind::missing_cusp, arc.from, "no cusp at the start of " + label + " = " + fmt(arc.from));
        if (!b) fail(violation_kind::missing_cusp, arc.to, "no cusp at the end of " + label + " = " + fmt(arc.to));
        if (a && b && r.singularities[*a].maslov == r.singularities[*b].maslov)
            fail(violation_kind::equal_maslov_signs, arc.from,
                 "equal Maslov signs at the ends of " + label +
                     ": the cusps bounding an interval must have opposite Maslov co-orientations");
    }
    for (std::size_t i = 0; i < r.singularities.size(); ++i)
        if (!used[i])
            fail(violation_kind::unexpected_singularity, r.singularities[i].t,
                 std::string("unexpected ") + to_string(r.singularities[i].kind) + " at t = " + fmt(r.singularities[i].t));
    return r;
}

// --------------------------------------------------------------------------------------------------------------------
// Standard Fronts
// --------------------------------------------------------------------------------------------------------------------

//! the eye: (q, z) = (cos 2 pi t, sin^3 2 pi t), two cusps of opposite sign at t = 0 and 1/2
inline auto eye_front() -> knot_front_t
{
    return fourier_front("eye", fourier_t{{0.0, 1.0}, {}}, fourier_t{{}, {0.0, 0.75, 0.0, -0.25}});
}

/**
    six-cusp front q = cos s + 0.6 cos 3s with slope p = sin 2s (s = 2 pi t), or p = sin 2s + 2 cos 2s when flipped

    The flip reverses the Maslov sign of the cusps near s = 1.91 and s = 5.05 only.
*/
inline auto figure_eight_front(bool flipped = false) -> knot_front_t
{
    fourier_t const q{{0.0, 1.0, 0.0, 0.6}, {}};
    fourier_t p{{0.0, 0.0, flipped ? 2.0 : 0.0}, {0.0, 0.0, 1.0}};
    return fourier_lift_front(flipped ? "figure-eight-flipped" : "figure-eight", q, p);
}

//! the decoration of the six-cusp front: two points and two nested intervals
inline auto figure_eight_decoration() -> decoration_t
{
    auto const cusps = detect_front_singularities(figure_eight_front());
    require(cusps.size() == 6, error_kind::internal, "the figure-eight front must have six cusps");
    // cusps in order: s = 0, 1.23, 1.91, pi, 4.37, 5.05 (s = 2 pi t)
    decoration_t d;
    d.points = {cusps[4].t, cusps[5].t};
    d.intervals = {arc_t{cusps[1].t, cusps[2].t}, arc_t{cusps[0].t, cusps[3].t}};
    return d;
}

// --------------------------------------------------------------------------------------------------------------------
// Zig-Zag Takeover Families
// --------------------------------------------------------------------------------------------------------------------

enum class takeover_kind
{
    plain,  //!< a new zig-zag is born outside I_j, grows, and the old one dies
    nested, //!< the same takeover for the inner zig-zag of two nested ones
    dying,  //!< the plain family damped by tau: L_{eta,0} = L_eta, L_{eta,1} has no singularities
};

inline auto to_string(takeover_kind k) noexcept -> char const*
{
    switch (k)
    {
    case takeover_kind::plain: return "plain";
    case takeover_kind::nested: return "nested";
    case takeover_kind::dying: return "dying";
    }
    return "plain";
}

/**
    the chart front of a takeover family at (eta, tau)

    On s = 2t - 1 in [-1, 1], q' = 2 (1 - a N(s - s_old) - b N(s - s_new)) with Gaussian dips N of unit height and
    width 0.12, so a dip of depth above 1 is a zig-zag. a falls from 2 to 0 on eta in [1/2, 1] and b rises from 0 to 2
    on [0, 1/2] (smooth steps). The slope p = s is increasing, so the two cusps of each zig-zag have opposite signs.
    The nested kind adds a wide dip of depth 2 whose cusps enclose both narrow features, which are then bumps of
    height 2 pushing q' back up. The dying kind multiplies a and b by (1 - tau).
*/
inline auto zigzag_takeover(takeover_kind kind, double eta, double tau = 0.0, int samples = 4096) -> knot_front_t
{
    require(eta >= 0.0 && eta <= 1.0, error_kind::parameter_out_of_range, "takeover parameter eta lies in [0, 1]");
    require(tau >= 0.0 && tau <= 1.0, error_kind::parameter_out_of_range, "takeover parameter tau lies in [0, 1]");
    double const damp = kind == takeover_kind::dying ? 1.0 - tau : 1.0;
    double const a = damp * 2.0 * (1.0 - smooth_step(2.0 * eta - 1.0).f);
    double const b = damp * 2.0 * smooth_step(2.0 * eta).f;
    bool const nested = kind == takeover_kind::nested;
    double const s_old = nested ? -0.08 : -0.3;
    double const s_new = nested ? 0.16 : 0.3;
    double const width = nested ? 0.03 : 0.12;
    double const sign = nested ? -1.0 : 1.0;

    auto const gauss = [](double x, double w) {
        double const u = x / w;
        double const g = std::exp(-u * u);
        return scalar3_t{g, -2.0 * u * g / w, (4.0 * u * u - 2.0) * g / (w * w)};
    };
    auto qdot = [=](double t) {
        double const s = 2.0 * t - 1.0;
        scalar3_t const go = gauss(s - s_old, width), gn = gauss(s - s_new, width);
        scalar3_t v{1.0 - sign * (a * go.f + b * gn.f), -sign * (a * go.d1 + b * gn.d1), -sign * (a * go.d2 + b * gn.d2)};
        if (nested)
        {
            scalar3_t const wide = gauss(s, 0.35);
            v.f -= 2.0 * wide.f;
            v.d1 -= 2.0 * wide.d1;
            v.d2 -= 2.0 * wide.d2;
        }
        // d/dt = 2 d/ds
        return scalar3_t{2.0 * v.f, 4.0 * v.d1, 8.0 * v.d2};
    };
    auto slope = [](double t) { return scalar3_t{2.0 * t - 1.0, 2.0, 0.0}; };
    std::ostringstream name;
    name << "takeover-" << to_string(kind) << "?eta=" << eta << "&tau=" << tau;
    return chart_front(name.str(), qdot, slope, samples);
}

/**
    the canonical decoration of a chart front: consecutive cusps paired innermost-first into intervals

    Embryos become degenerate intervals. Cusps are paired by repeatedly joining neighbours (among the unpaired ones)
    that have opposite signs, closest first; unpaired cusps become points.
*/
inline auto canonical_decoration(std::vector<front_singularity_t> const& sing) -> decoration_t
{
    decoration_t d;
    std::vector<front_singularity_t> cusps;
    for (auto const& s : sing)
    {
        if (s.kind == front_singularity_kind::embryo)
            d.intervals.push_back({s.t, s.t});
        else
            cusps.push_back(s);
    }
    for (;;)
    {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i + 1 < cusps.size(); ++i)
            if (cusps[i].maslov != 0 && cusps[i].maslov == -cusps[i + 1].maslov &&
                (!best || cusps[i + 1].t - cusps[i].t < cusps[*best + 1].t - cusps[*best].t))
                best = i;
        if (!best) break;
        d.intervals.push_back({cusps[*best].t, cusps[*best + 1].t});
        cusps.erase(cusps.begin() + static_cast<std::ptrdiff_t>(*best), cusps.begin() + static_cast<std::ptrdiff_t>(*best) + 2);
    }
    for (auto const& c : cusps) d.points.push_back(c.t);
    return d;
}

} // namespace lw
