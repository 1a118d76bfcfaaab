// SPDX-License-Identifier: MIT
/**
    \file
    \brief the oscillating wrinkling engine: zig-zag curves, the oscillator family, boxes, the flow, convergence

    The engine approximates a rotation of the zero section of T*R^n by wrinkled Lagrangians. The pieces are:

    - the zig-zag curves (x_s(u), y_s(u)), whose graphs z_s model the birth and death of a pair of cusps
    - an odd 1-periodic family zeta_s built around z_s(x / sigma), with slope bounds checked when it is built
    - the oscillating function xi and the Lagrangian model l(t, q) = (q, dK/dq^, xi) with K = int_{-1}^{q_n} xi
    - boxes C(t, q, b, c) placed where the rotation angle is large, each carrying a rescaled copy of l
    - the Hamiltonian flow of F = cot(lambda) p_n^2 / 2, which tilts the fibre direction onto the target plane

    The composite f_t = phi_t o w_t, with w_t the signed sum of the box models, has Gauss planes that approach the
    target rotation as N grows along the schedule gamma = N^(-1/2), alpha = N^(-2/3).
*/

#pragma once

#include <lw/bump.hpp>
#include <lw/core.hpp>
#include <lw/jet.hpp>
#include <lw/planes.hpp>
#include <lw/quadrature.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Zig-zag Curves
// --------------------------------------------------------------------------------------------------------------------

//! x_s(u) = (15/8) int_0^u (w^2 - s)^2 dw
inline auto zigzag_x(double s, double u) noexcept -> double
{
    double const u2 = u * u;
    return 1.875 * u * (u2 * u2 / 5.0 - (2.0 / 3.0) * s * u2 + s * s);
}

//! y_s(u) = (u^3 - 3 s u) / 2
inline auto zigzag_y(double s, double u) noexcept -> double { return 0.5 * (u * u * u - 3.0 * s * u); }

//! r_s(u) = int_0^u d_s y d_u x - d_u y d_s x = -(15/16) (u^6/6 + s u^4/2 - 3 s^2 u^2/2)
inline auto zigzag_r(double s, double u) noexcept -> double
{
    double const u2 = u * u;
    return -0.9375 * (u2 * u2 * u2 / 6.0 + 0.5 * s * u2 * u2 - 1.5 * s * s * u2);
}

struct zigzag_partials_t
{
    double x_u, x_s, y_u, y_s, r_u, r_s;
};

inline auto zigzag_partials(double s, double u) noexcept -> zigzag_partials_t
{
    double const fu = u * u - s;
    double const f = (u * u * u - 3.0 * s * u) / 3.0;
    double const u2 = u * u;
    return {
        1.875 * fu * fu,
        -3.75 * f,
        1.5 * fu,
        -1.5 * u,
        -0.9375 * fu * (u2 * u + 3.0 * s * u),
        -0.9375 * (0.5 * u2 * u2 - 3.0 * s * u2),
    };
}

//! a point (x_s(u), y_s(u)) of the zig-zag curve Z_s
inline auto zigzag_curve(double s, double u) noexcept -> std::pair<double, double>
{
    return {zigzag_x(s, u), zigzag_y(s, u)};
}

/**
    scaled Lagrangian zig-zag m_{gamma,N}(s, u) = (s, x_s/N, gamma r_s/N, gamma y_s) in T*R^2

    Returned as a map over (s, u) with its exact jacobian; it is Lagrangian because r_s is defined as the primitive
    that cancels the symplectic pairing of the (s, u) tangent vectors.
*/
inline auto zigzag_lagrangian(double gamma, int N) -> map_descriptor_t
{
    require(gamma > 0.0 && N >= 1, error_kind::parameter_out_of_range, "zig-zag scaling needs gamma > 0 and N >= 1");
    map_descriptor_t m;
    m.name = "zigzag-lagrangian";
    m.domain_dim = 2;
    m.target = target_kind::cotangent;
    m.target_dim = 4;
    m.analytic_jacobian = true;
    double const inv = 1.0 / N;
    m.evaluate = [gamma, inv](vec_t const& p) {
        double const s = p[0], u = p[1];
        auto const d = zigzag_partials(s, u);
        jet_t j;
        j.value.resize(4);
        j.value << s, inv * zigzag_x(s, u), gamma * inv * zigzag_r(s, u), gamma * zigzag_y(s, u);
        j.jacobian.resize(4, 2);
        j.jacobian << 1.0, 0.0, inv * d.x_s, inv * d.x_u, gamma * inv * d.r_s, gamma * inv * d.r_u, gamma * d.y_s,
            gamma * d.y_u;
        return j;
    };
    return m;
}

/**
    the unique u with x_s(u) = X

    x_s is odd and non-decreasing (strictly, except for isolated critical points at u = +-sqrt(s)), so Newton steps
    are safeguarded by a bisection bracket and the result is accurate to a few ulps.
*/
inline auto zigzag_invert(double s, double X) -> double
{
    if (X == 0.0) return 0.0;
    double const sign = X < 0.0 ? -1.0 : 1.0;
    X = std::abs(X);
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * std::sqrt(std::abs(s)));
    while (zigzag_x(s, hi) < X) hi *= 2.0;
    double u = std::min(hi, std::max(lo, std::pow(8.0 * X / 3.0, 0.2)));
    for (int iteration = 0; iteration < 200; ++iteration)
    {
        double const f = zigzag_x(s, u) - X;
        if (f == 0.0) break;
        if (f < 0.0)
            lo = u;
        else
            hi = u;
        double const fu = u * u - s;
        double const slope = 1.875 * fu * fu;
        double next = slope > 0.0 ? u - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-16 * std::max(1.0, u) || hi - lo <= 1e-16 * std::max(1.0, u))
        {
            u = next;
            break;
        }
        u = next;
    }
    return sign * u;
}

// --------------------------------------------------------------------------------------------------------------------
// Oscillator Family
// --------------------------------------------------------------------------------------------------------------------

struct zeta_value_t
{
    double value = 0.0;
    double dx = 0.0;
};

/**
    the odd 1-periodic family zeta_s(x), s in [-1, 1]

    On [0, 1/2] the family is assembled from three pieces:

    - core, x <= x_c = X_c sigma: exactly z_s(x / sigma), with X_c = 1.05 sp(s)^(5/2) + X_f, where sp is a smooth
      version of max(s, 0) and X_f = (alpha sigma)^(5/3) / 16 keeps a neighbourhood of 0 in the core for s <= 0
    - blend, x_c < x < x_e = 1.2 x_c: (1 - chi) z + chi V where V is the line through (x_e, z(x_e)) with slope m;
      since z is concave there and m does not exceed its slope, the blend never lowers the derivative
    - tail, x >= x_e: V plus J B(x) where B steps from 0 to 1 over [x_e, 1/4]

    The drop D = -z(x_e) still needed to reach 0 at x = 1/2 is split between the slope m = w(s) D / (1/2 - x_e) and
    the step J = (1 - w(s)) D. For s near 1 the tail is a straight line of slope in [1, 2]; for s <= 0 it is a quick
    step to exactly zero, which keeps zeta <= 0 on [1/4, 1/2]. Every constraint is re-checked on 10^4 samples when the
    family is built.
*/
class zeta_family_t
{
public:
    zeta_family_t(double sigma, double alpha) : sigma_{sigma}, alpha_{alpha}
    {
        require(sigma > 0.0 && sigma <= 0.15, error_kind::infeasible, "oscillator needs 0 < sigma <= 0.15");
        require(alpha > 0.0, error_kind::parameter_out_of_range, "oscillator needs alpha > 0");
        x_floor_ = std::pow(alpha * sigma, 5.0 / 3.0) / 16.0;
        s_a_ = std::pow(alpha * sigma, 2.0 / 3.0);
        s_b_ = 2.0 * s_a_;
    }

    auto sigma() const noexcept -> double { return sigma_; }
    auto alpha() const noexcept -> double { return alpha_; }

    struct layout_t
    {
        double s = 0.0;
        double x_c = 0.0, x_e = 0.0;
        double P = 0.0, m = 0.0, J = 0.0;
    };

    auto layout(double s) const -> layout_t
    {
        layout_t l;
        l.s = s;
        double const sp = 0.5 * (s + std::sqrt(s * s + 4e-4));
        l.x_c = (1.05 * std::pow(sp, 2.5) + x_floor_) * sigma_;
        l.x_e = 1.2 * l.x_c;
        l.P = core(s, l.x_e / sigma_).value;
        double const drop = -l.P;
        double const w = s_b_ > s_a_ ? smooth_step((s - s_a_) / (s_b_ - s_a_)).f : 1.0;
        l.m = w * drop / (0.5 - l.x_e);
        l.J = (1.0 - w) * drop;
        return l;
    }

    //! z_s(X) and dz/dX
    static auto core(double s, double X) -> zeta_value_t
    {
        double const u = zigzag_invert(s, X);
        double const fu = u * u - s;
        double const slope = fu == 0.0 ? -1e300 : 0.8 / fu;
        return {zigzag_y(s, u), slope};
    }

    //! zeta_s(x) and its x-derivative
    auto eval(double s, double x) const -> zeta_value_t { return eval(layout(s), x); }

    auto eval(layout_t const& l, double x) const -> zeta_value_t
    {
        x -= std::floor(x + 0.5);
        if (x < 0.0)
        {
            auto const v = half(l, -x);
            return {-v.value, v.dx};
        }
        return half(l, x);
    }

    //! Z_s(x) = int_0^x zeta_s, which is even and 1-periodic
    auto primitive(layout_t const& l, double x) const -> double
    {
        x -= std::floor(x + 0.5);
        x = std::abs(x);
        double const s = l.s;
        if (x <= l.x_c) return sigma_ * core_primitive(s, zigzag_invert(s, x / sigma_));
        double total = sigma_ * core_primitive(s, zigzag_invert(s, l.x_c / sigma_));
        double const blend_end = std::min(x, l.x_e);
        total += integrate([&](double v) { return half(l, v).value; }, l.x_c, blend_end, 1e-15);
        if (x <= l.x_e) return total;
        double const d = x - l.x_e;
        total += l.P * d + 0.5 * l.m * d * d;
        double const width = 0.25 - l.x_e;
        double ramp = 0.0;
        if (x >= 0.25)
            ramp = 0.5 * width + (x - 0.25);
        else
            ramp = integrate([&](double v) { return step_at(v, l.x_e, width).f; }, l.x_e, x, 1e-15);
        return total + l.J * ramp;
    }

    /**
        re-checks the constraint table on a 100 x 100 grid of (s, x) in [-1, 1] x (0, 1/2]; throws infeasible naming
        the first violated constraint

        The slope bound inside the wrinkle is the one the exact core can deliver: at most -(4/5) / sigma.
    */
    auto verify() const -> void
    {
        double const tol = 1e-9;
        for (int is = 0; is <= 100; ++is)
        {
            double const s = -1.0 + 2.0 * is / 100.0;
            auto const l = layout(s);
            double const cusp = s > 0.0 ? sigma_ * std::pow(s, 2.5) : 0.0;
            bool const top = is == 100;
            for (int ix = 1; ix <= 100; ++ix)
            {
                double const x = 0.5 * ix / 100.0;
                if (s > 0.0 && std::abs(x - cusp) < 1e-6 * sigma_) continue;
                auto const z = eval(l, x);
                require(std::isfinite(z.value), error_kind::infeasible, "oscillator value is not finite");
                if (x >= 0.25) require(z.value <= tol, error_kind::infeasible, "oscillator is positive on [1/4, 1/2]");
                if (s > 0.0 && x < cusp)
                {
                    require(z.dx <= -0.8 / sigma_ + tol, error_kind::infeasible, "oscillator slope inside the wrinkle");
                    continue;
                }
                if (x <= 2.0 * sigma_)
                {
                    require(z.dx >= -alpha_ - tol, error_kind::infeasible, "oscillator slope below -alpha near 0");
                    if (top && x > sigma_) require(z.dx >= 1.0 - tol, error_kind::infeasible, "oscillator slope below 1");
                }
                else
                {
                    require(z.dx >= (top ? 1.0 : -alpha_) - tol && z.dx <= 2.0 + tol, error_kind::infeasible,
                            "oscillator slope outside its band on [2 sigma, 1/2]");
                }
            }
        }
    }

private:
    // int_0^u y_s(v) x_s'(v) dv, i.e. int z_s dX in the curve parameter
    static auto core_primitive(double s, double u) noexcept -> double
    {
        double const u2 = u * u;
        double const u4 = u2 * u2;
        return 0.9375 * (u4 * u4 / 8.0 - (5.0 / 6.0) * s * u4 * u2 + 1.75 * s * s * u4 - 1.5 * s * s * s * u2);
    }

    auto half(layout_t const& l, double x) const -> zeta_value_t
    {
        if (x <= l.x_c)
        {
            auto const z = core(l.s, x / sigma_);
            return {z.value, z.dx / sigma_};
        }
        if (x < l.x_e)
        {
            auto const z = core(l.s, x / sigma_);
            auto const chi = step_at(x, l.x_c, l.x_e - l.x_c);
            double const line = l.P + l.m * (x - l.x_e);
            return {(1.0 - chi.f) * z.value + chi.f * line,
                    (1.0 - chi.f) * z.dx / sigma_ + chi.f * l.m + chi.d1 * (line - z.value)};
        }
        auto const b = step_at(x, l.x_e, 0.25 - l.x_e);
        return {l.P + l.m * (x - l.x_e) + l.J * b.f, l.m + l.J * b.d1};
    }

    double sigma_;
    double alpha_;
    double x_floor_ = 0.0;
    double s_a_ = 0.0;
    double s_b_ = 0.0;
};

//! builds and verifies the oscillator family; throws infeasible if any constraint fails
inline auto build_zeta(double sigma, double alpha) -> std::shared_ptr<zeta_family_t const>
{
    auto family = std::make_shared<zeta_family_t>(sigma, alpha);
    family->verify();
    return family;
}

// --------------------------------------------------------------------------------------------------------------------
// Parameters
// --------------------------------------------------------------------------------------------------------------------

struct wrinkle_params_t
{
    double tau = pi / 16.0;
    double delta = 0.1;
    double sigma = 0.05;
    double alpha = 0.1;
    double gamma = 0.3;
    int N = 9;

    auto validate() const -> void
    {
        require(tau > 0.0 && delta > 0.0 && sigma > 0.0 && alpha > 0.0 && gamma > 0.0 && N >= 1,
                error_kind::parameter_out_of_range, "wrinkling parameters must be positive");
        require(delta < 0.25, error_kind::parameter_out_of_range, "wrinkling shell delta must be below 1/4");
        require(tau < pi / 4.0, error_kind::parameter_out_of_range, "cutoff angle tau must be below pi/4");
    }
};

//! gamma = N^(-1/2), alpha = N^(-2/3); sigma is filled in once the box cover is known
inline auto scheduled_params(int N, double tau, double delta) -> wrinkle_params_t
{
    wrinkle_params_t p;
    p.N = N;
    p.tau = tau;
    p.delta = delta;
    p.gamma = 1.0 / std::sqrt(static_cast<double>(N));
    p.alpha = std::pow(static_cast<double>(N), -2.0 / 3.0);
    p.sigma = 0.1;
    return p;
}

// --------------------------------------------------------------------------------------------------------------------
// Oscillating Function and Lagrangian Model
// --------------------------------------------------------------------------------------------------------------------

/**
    xi(r, y) = gamma rho(r) psi(|y|) zeta_{eta(r)}((2N + 1) y / 2) in box-normalized coordinates

    r = |(t, q^)| in the unit disk and y = q_n in [-1, 1]. The profiles are eta (1 up to 1 - 2 delta, -delta beyond
    1 - delta), rho (1 up to 1 - delta, 0 from 1 - delta/2) and psi (1 up to 1 - 1/(4N + 2), 0 half a cell later).
*/
class oscillator_t
{
public:
    oscillator_t(wrinkle_params_t params, std::shared_ptr<zeta_family_t const> zeta)
        : params_{params}, zeta_{std::move(zeta)}
    {
        params_.validate();
        require(zeta_ != nullptr, error_kind::precondition_failed, "oscillator needs a zeta family");
        k_ = 0.5 * (2.0 * params_.N + 1.0);
        y_flat_ = 1.0 - 1.0 / (4.0 * params_.N + 2.0);
    }

    auto params() const noexcept -> wrinkle_params_t const& { return params_; }
    auto zeta() const noexcept -> zeta_family_t const& { return *zeta_; }
    auto frequency() const noexcept -> double { return k_; }
    auto flat_height() const noexcept -> double { return y_flat_; }

    auto eta_profile(double r) const noexcept -> scalar3_t
    {
        double const d = params_.delta;
        auto const s = step_at(r, 1.0 - 2.0 * d, d);
        return {1.0 - (1.0 + d) * s.f, -(1.0 + d) * s.d1, -(1.0 + d) * s.d2};
    }

    auto rho_profile(double r) const noexcept -> scalar3_t
    {
        double const d = params_.delta;
        auto const s = step_at(r, 1.0 - d, 0.5 * d);
        return {1.0 - s.f, -s.d1, -s.d2};
    }

    auto psi_profile(double y) const noexcept -> scalar3_t
    {
        auto const s = step_at(y, y_flat_, 1.0 / (2.0 * (4.0 * params_.N + 2.0)));
        return {1.0 - s.f, -s.d1, -s.d2};
    }

    //! int_{-1}^{y} psi(|u|) zeta_s(k u) du
    auto axial_primitive(double s, double y) const -> double
    {
        auto const l = zeta_->layout(s);
        double const a = std::abs(y);
        double const cut_end = y_flat_ + 1.0 / (2.0 * (4.0 * params_.N + 2.0));
        auto tail = [&](double u) { return psi_profile(u).f * zeta_->eval(l, k_ * u).value; };
        if (a >= y_flat_) return -integrate(tail, a, std::min(1.0, cut_end), 1e-15);
        double const flat = (zeta_->primitive(l, k_ * y_flat_) - zeta_->primitive(l, k_ * a)) / k_;
        return -(flat + integrate(tail, y_flat_, cut_end, 1e-15));
    }

    struct fields_t
    {
        double xi = 0.0, xi_r = 0.0, xi_y = 0.0;
        double K = 0.0, K_r = 0.0, K_rr = 0.0;
    };

    /**
        xi, K = int_{-1}^{y} xi and their partials in (r, y)

        Derivatives in s are five-point differences (step 1e-4) of the exactly evaluated family and of its exact
        primitive; they are only needed on the shell 1 - 2 delta < r < 1 - delta where eta varies.
    */
    auto fields(double r, double y, bool with_primitive) const -> fields_t
    {
        fields_t f;
        auto const rho = rho_profile(r);
        if (rho.f == 0.0 && rho.d1 == 0.0) return f;
        double const a = std::abs(y);
        auto const psi = psi_profile(a);
        auto const eta = eta_profile(r);
        double const s = eta.f;
        double const g = params_.gamma;
        auto const l = zeta_->layout(s);
        auto const z = zeta_->eval(l, k_ * y);
        double const sgn = y < 0.0 ? -1.0 : 1.0;
        bool const moving = eta.d1 != 0.0 || eta.d2 != 0.0;

        double z_s = 0.0;
        if (moving)
        {
            double const h = 1e-4;
            auto at = [&](double ds) { return zeta_->eval(s + ds, k_ * y).value; };
            z_s = (8.0 * (at(h) - at(-h)) - at(2.0 * h) + at(-2.0 * h)) / (12.0 * h);
        }
        f.xi = g * rho.f * psi.f * z.value;
        f.xi_y = g * rho.f * (psi.d1 * sgn * z.value + psi.f * k_ * z.dx);
        f.xi_r = g * psi.f * (rho.d1 * z.value + rho.f * eta.d1 * z_s);
        if (!with_primitive) return f;

        double const A = axial_primitive(s, y);
        double A_s = 0.0, A_ss = 0.0;
        if (moving)
        {
            double const h = 1e-4;
            double const a1 = axial_primitive(s + h, y), b1 = axial_primitive(s - h, y);
            double const a2 = axial_primitive(s + 2.0 * h, y), b2 = axial_primitive(s - 2.0 * h, y);
            A_s = (8.0 * (a1 - b1) - a2 + b2) / (12.0 * h);
            A_ss = (-a2 + 16.0 * a1 - 30.0 * A + 16.0 * b1 - b2) / (12.0 * h * h);
        }
        f.K = g * rho.f * A;
        f.K_r = g * (rho.d1 * A + rho.f * eta.d1 * A_s);
        f.K_rr = g * (rho.d2 * A + 2.0 * rho.d1 * eta.d1 * A_s + rho.f * eta.d2 * A_s + rho.f * eta.d1 * eta.d1 * A_ss);
        return f;
    }

private:
    wrinkle_params_t params_;
    std::shared_ptr<zeta_family_t const> zeta_;
    double k_ = 0.0;
    double y_flat_ = 0.0;
};

// --------------------------------------------------------------------------------------------------------------------
// Boxes
// --------------------------------------------------------------------------------------------------------------------

//! C(t, q, b, c): a b-ball in (t, q^) times [-c, c] in q_n, centred at (t, q^, q_n), with the sign of lambda on it
struct box_t
{
    double t = 0.0;
    vec_t qhat;
    double qn = 0.0;
    double b = 1.0;
    double c = 1.0;
    int sign = 1;

    //! normalized coordinates (v, y) with v in the unit ball of R^n (t first) and y in [-1, 1]
    auto normalize(double time, vec_t const& q) const -> std::pair<vec_t, double>
    {
        Eigen::Index const n = q.size();
        vec_t v(n);
        v[0] = (time - t) / b;
        for (Eigen::Index i = 0; i + 1 < n; ++i) v[i + 1] = (q[i] - qhat[i]) / b;
        return {v, (q[n - 1] - qn) / c};
    }
};

/**
    l_C at (t, q): the box-scaled Lagrangian model as a jet over q

    K_C = c K(r, y), so the p^ components are c K_r dr/dq^ and the last is xi. With u the unit vector of the spatial
    part of v, the jacobian blocks are c/b^2 [K_rr u u^T + K_r (I - u u^T)/r], xi_r u / b and xi_y / c. These are exact
    derivatives of the same K, so the symplectic pairing vanishes up to rounding.
*/
inline auto box_model_jet(oscillator_t const& osc, box_t const& box, double time, vec_t const& q, bool lift) -> jet_t
{
    int const n = static_cast<int>(q.size());
    jet_t j;
    j.value = vec_t::Zero(lift ? 2 * n + 1 : 2 * n);
    j.jacobian = mat_t::Zero(j.value.size(), n);
    auto const [v, y] = box.normalize(time, q);
    double const r = v.norm();
    if (r >= 1.0 || std::abs(y) >= 1.0) return j;
    auto const f = osc.fields(r, y, n > 1 || lift);
    if (f.xi == 0.0 && f.xi_r == 0.0 && f.xi_y == 0.0 && f.K == 0.0 && f.K_r == 0.0) return j;

    double const b = box.b, c = box.c;
    bool const radial = r > 1e-12;
    vec_t u = vec_t::Zero(n - 1);
    for (int i = 0; i + 1 < n && radial; ++i) u[i] = v[i + 1] / r;

    for (int i = 0; i + 1 < n; ++i)
    {
        j.value[n + i] = radial ? c * f.K_r * u[i] / b : 0.0;
        for (int k = 0; k + 1 < n && radial; ++k)
            j.jacobian(n + i, k) = c / (b * b) * (f.K_rr * u[i] * u[k] + f.K_r * ((i == k ? 1.0 : 0.0) - u[i] * u[k]) / r);
        j.jacobian(n + i, n - 1) = radial ? f.xi_r * u[i] / b : 0.0;
    }
    j.value[2 * n - 1] = f.xi;
    for (int k = 0; k + 1 < n && radial; ++k) j.jacobian(2 * n - 1, k) = f.xi_r * u[k] / b;
    j.jacobian(2 * n - 1, n - 1) = f.xi_y / c;
    if (lift)
    {
        j.value[2 * n] = c * f.K;
        for (int k = 0; k + 1 < n; ++k) j.jacobian(2 * n, k) = j.value[n + k];
        j.jacobian(2 * n, n - 1) = f.xi;
    }
    return j;
}

/**
    the Lagrangian model l(t, .) on the unit box D^n x [-1, 1] (or any box), as a map over q at fixed t

    The q-rows are the identity; with lift the last coordinate is K, which vanishes at q_n = +-1 because xi is odd
    in q_n.
*/
inline auto lagrangian_ell(std::shared_ptr<oscillator_t const> osc, box_t box, double time, int n, bool lift)
    -> map_descriptor_t
{
    require(n >= 1, error_kind::parameter_out_of_range, "model needs n >= 1");
    require(box.qhat.size() == n - 1, error_kind::dimension_mismatch, "box centre must have n - 1 transverse coordinates");
    map_descriptor_t m;
    m.name = std::string(lift ? "legendrian-ell" : "lagrangian-ell") + "?n=" + std::to_string(n);
    m.domain_dim = n;
    m.target = lift ? target_kind::jet1 : target_kind::cotangent;
    m.target_dim = lift ? 2 * n + 1 : 2 * n;
    m.analytic_jacobian = true;
    m.evaluate = [osc, box, time, n, lift](vec_t const& q) {
        jet_t j = box_model_jet(*osc, box, time, q, lift);
        j.value.head(n) = q;
        j.jacobian.topRows(n) = mat_t::Identity(n, n);
        return j;
    };
    return m;
}

//! the unit box centred at the origin with unit scales
inline auto unit_box(int n) -> box_t
{
    box_t b;
    b.qhat = vec_t::Zero(n - 1);
    return b;
}

// --------------------------------------------------------------------------------------------------------------------
// Angle Fields and the Hamiltonian Flow
// --------------------------------------------------------------------------------------------------------------------

/**
    lambda_t(q) with its q-gradient and q-hessian

    Gradient and hessian fall back to central differences (steps 1e-6 and 1e-4) when no closed form is supplied.
*/
struct angle_field_t
{
    int n = 1;
    std::function<double(double, vec_t const&)> value;
    std::function<vec_t(double, vec_t const&)> gradient;

    auto operator()(double t, vec_t const& q) const -> double { return value(t, q); }

    auto grad(double t, vec_t const& q) const -> vec_t
    {
        if (gradient) return gradient(t, q);
        vec_t g(q.size());
        double const h = 1e-6;
        for (Eigen::Index i = 0; i < q.size(); ++i)
        {
            vec_t a = q, b = q;
            a[i] -= h;
            b[i] += h;
            g[i] = (value(t, b) - value(t, a)) / (2.0 * h);
        }
        return g;
    }

    auto hessian(double t, vec_t const& q) const -> mat_t
    {
        mat_t h(q.size(), q.size());
        double const e = 1e-4;
        for (Eigen::Index i = 0; i < q.size(); ++i)
        {
            vec_t a = q, b = q;
            a[i] -= e;
            b[i] += e;
            h.col(i) = (grad(t, b) - grad(t, a)) / (2.0 * e);
        }
        return 0.5 * (h + h.transpose());
    }

    //! the extension to t in [0, 2] by reflection, lambda_t = lambda_{2 - t}
    auto extended(double t, vec_t const& q) const -> double { return value(t <= 1.0 ? t : 2.0 - t, q); }
};

//! lambda == 0
inline auto zero_angle_field(int n) -> angle_field_t
{
    angle_field_t f;
    f.n = n;
    f.value = [](double, vec_t const&) { return 0.0; };
    f.gradient = [](double, vec_t const& q) { return vec_t(vec_t::Zero(q.size())); };
    return f;
}

/**
    quasi-graphical bump rotation lambda_t(q) = t A prod_i b(q_i)

    b(x) = exp(kappa (a - sqrt(x^2 + a^2))) (1 - S((|x| - 0.8) / 0.15)) peaks at b(0) = 1 and decays at the nearly
    constant logarithmic rate kappa, so lambda_q / lambda stays bounded on the whole support; the cut-off makes
    lambda = 0 near the boundary of [0, 2] x I^n after the reflection. Gradients are exact.
*/
inline auto bump_angle_field(int n, double amplitude, double kappa = 0.8, double corner = 0.15) -> angle_field_t
{
    require(std::abs(amplitude) < pi, error_kind::parameter_out_of_range, "rotation must be quasi-graphical");
    require(kappa >= 0.0 && corner > 0.0, error_kind::parameter_out_of_range, "bump rotation needs kappa >= 0, a > 0");
    angle_field_t f;
    f.n = n;
    auto factor = [kappa, corner](double x) -> std::pair<double, double> {
        double const sgn = x < 0.0 ? -1.0 : 1.0;
        double const root = std::sqrt(x * x + corner * corner);
        double const e = std::exp(kappa * (corner - root));
        double const e1 = -kappa * x / root * e;
        auto const s = step_at(std::abs(x), 0.8, 0.15);
        return {e * (1.0 - s.f), e1 * (1.0 - s.f) - e * s.d1 * sgn};
    };
    f.value = [=](double t, vec_t const& q) {
        double v = t * amplitude;
        for (Eigen::Index i = 0; i < q.size(); ++i) v *= factor(q[i]).first;
        return v;
    };
    f.gradient = [=](double t, vec_t const& q) {
        vec_t g(q.size());
        for (Eigen::Index i = 0; i < q.size(); ++i)
        {
            double v = t * amplitude * factor(q[i]).second;
            for (Eigen::Index j = 0; j < q.size(); ++j)
                if (j != i) v *= factor(q[j]).first;
            g[i] = v;
        }
        return g;
    };
    return f;
}

namespace detail {

inline auto flow_rhs(angle_field_t const& field, double t, vec_t const& y) -> vec_t
{
    Eigen::Index const n = y.size() / 2;
    vec_t const q = y.head(n);
    double const lam = field(t, q);
    require(std::abs(std::sin(lam)) > 1e-12, error_kind::outside_domain, "flow left the region where lambda != 0");
    double const pn = y[2 * n - 1];
    double const cot = std::cos(lam) / std::sin(lam);
    double const csc2 = 1.0 / (std::sin(lam) * std::sin(lam));
    vec_t out = vec_t::Zero(2 * n);
    out[n - 1] = cot * pn;
    out.tail(n) = 0.5 * csc2 * pn * pn * field.grad(t, q);
    return out;
}

inline auto rk4_step(angle_field_t const& field, double t, vec_t const& y, double h) -> vec_t
{
    vec_t const k1 = flow_rhs(field, t, y);
    vec_t const k2 = flow_rhs(field, t, y + 0.5 * h * k1);
    vec_t const k3 = flow_rhs(field, t, y + 0.5 * h * k2);
    vec_t const k4 = flow_rhs(field, t, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace detail

/**
    time-s map of the Hamiltonian F_t(q, p) = cot(lambda_t(q)) p_n^2 / 2, by adaptive RK4 with step doubling

    Hamilton's equations are dq_n/ds = cot(lambda) p_n and dp_j/ds = csc^2(lambda) p_n^2 d_j lambda / 2. Points with
    p_n = 0 are fixed exactly. The start point must satisfy |lambda_t(q)| > tau.
*/
inline auto hamiltonian_flow(angle_field_t const& field, double t, double s, vec_t const& q, vec_t const& p,
                             double tau) -> std::pair<vec_t, vec_t>
{
    require(q.size() == p.size() && q.size() == field.n, error_kind::dimension_mismatch, "flow point has wrong dimension");
    require(std::abs(field(t, q)) > tau, error_kind::outside_domain, "flow is only defined where |lambda| > tau");
    Eigen::Index const n = q.size();
    if (p[n - 1] == 0.0) return {q, p};
    vec_t y(2 * n);
    y << q, p;
    double done = 0.0;
    double h = s / 16.0;
    double const tol = 1e-13;
    while (std::abs(s - done) > 0.0)
    {
        if (std::abs(h) > std::abs(s - done)) h = s - done;
        vec_t const full = detail::rk4_step(field, t, y, h);
        vec_t const mid = detail::rk4_step(field, t, y, 0.5 * h);
        vec_t const two = detail::rk4_step(field, t, mid, 0.5 * h);
        double const err = (two - full).cwiseAbs().maxCoeff() / 15.0;
        if (err <= tol * std::max(1.0, two.cwiseAbs().maxCoeff()) || std::abs(h) < 1e-12)
        {
            y = two + (two - full) / 15.0;
            done += h;
            if (err < 1e-3 * tol) h *= 2.0;
        }
        else
            h *= 0.5;
    }
    return {y.head(n), y.tail(n)};
}

/**
    the closed-form map with lambda frozen at the starting base point

    (q^, q_n + cot(lambda) p_n s, p + csc^2(lambda) p_n^2 grad(lambda) s / 2). It is the exact flow when lambda does
    not depend on q_n, and the map the composite f_t uses; near p = 0 it agrees with the flow to O(p^2).
*/
inline auto closed_form_flow(angle_field_t const& field, double t, double s, vec_t const& q, vec_t const& p, double tau)
    -> std::pair<vec_t, vec_t>
{
    double const lam = field(t, q);
    require(std::abs(lam) > tau, error_kind::outside_domain, "flow is only defined where |lambda| > tau");
    Eigen::Index const n = q.size();
    double const pn = p[n - 1];
    double const sn = std::sin(lam);
    vec_t qq = q;
    qq[n - 1] += std::cos(lam) / sn * pn * s;
    vec_t pp = p + 0.5 / (sn * sn) * pn * pn * s * field.grad(t, q);
    return {qq, pp};
}

// --------------------------------------------------------------------------------------------------------------------
// Box Cover
// --------------------------------------------------------------------------------------------------------------------

struct box_cover_t
{
    std::vector<box_t> boxes;
    double sigma_limit = 0.2; //!< sigma(N): the oscillation bands of overlapping boxes are disjoint below this
    int n = 1;
    int N = 1;
    double delta = 0.1;

    //! whether (t, q) lies in the shrunken box C~ of some box
    auto covers(double t, vec_t const& q) const -> bool
    {
        double const shrink = 1.0 - 1.0 / (4.0 * N + 2.0);
        for (auto const& box : boxes)
        {
            auto const [v, y] = box.normalize(t, q);
            if (v.norm() <= 1.0 - 2.0 * delta && std::abs(y) <= shrink) return true;
        }
        return false;
    }
};

namespace detail {

//! sample points of a closed ball of radius b in R^n (t first) around c: centre, axis points, a ring of diagonals
//! and, when the ball straddles it, the reflection time t = 1 where the extended angle has a ridge
inline auto ball_samples(vec_t const& centre, double b) -> std::vector<vec_t>
{
    Eigen::Index const n = centre.size();
    std::vector<vec_t> out{centre};
    for (double f : {0.25, 0.5, 0.75, 1.0})
        for (Eigen::Index i = 0; i < n; ++i)
            for (double sg : {-1.0, 1.0})
            {
                vec_t p = centre;
                p[i] += sg * f * b;
                out.push_back(p);
            }
    if (n >= 2)
        for (int k = 0; k < 8; ++k)
        {
            vec_t p = centre;
            double const a = 2.0 * pi * (k + 0.5) / 8.0;
            p[0] += b * std::cos(a);
            p[1] += b * std::sin(a);
            out.push_back(p);
        }
    if (std::abs(centre[0] - 1.0) < b)
    {
        vec_t p = centre;
        p[0] = 1.0;
        out.push_back(p);
    }
    return out;
}

/**
    largest sigma for which the oscillation bands of two boxes stay disjoint (0.2 if the boxes do not overlap)

    Box C carries its wrinkles in the bands q_n(C) + c (2k +- 4 sigma) / (2N + 1), k = -N..N; two bands are disjoint
    when their centres are further apart than 4 sigma (c_a + c_b) / (2N + 1).
*/
inline auto band_separation(box_t const& a, box_t const& b, int N) -> double
{
    Eigen::Index const n = a.qhat.size() + 1;
    vec_t ca(n), cb(n);
    ca << a.t, a.qhat;
    cb << b.t, b.qhat;
    if ((ca - cb).norm() >= a.b + b.b || std::abs(a.qn - b.qn) >= a.c + b.c) return 0.2;
    double const step = 2.0 / (2.0 * N + 1.0);
    double gap = 1e300;
    for (int ka = -N; ka <= N; ++ka)
    {
        // nearest lattice point of b to the ka-th centre of a
        double const x = a.qn + a.c * ka * step;
        double const kb = std::clamp(std::round((x - b.qn) / (b.c * step)), -static_cast<double>(N),
                                     static_cast<double>(N));
        for (double k : {kb - 1.0, kb, kb + 1.0})
            if (std::abs(k) <= N) gap = std::min(gap, std::abs(x - b.qn - b.c * k * step));
    }
    return std::min(0.2, gap * (2.0 * N + 1.0) / (4.0 * (a.c + b.c)));
}

inline auto split_point(vec_t const& centre, double qn) -> std::pair<double, vec_t>
{
    Eigen::Index const n = centre.size();
    vec_t q(n);
    for (Eigen::Index i = 1; i < n; ++i) q[i - 1] = centre[i];
    q[n - 1] = qn;
    return {centre[0], q};
}

} // namespace detail

/**
    greedy cover of Omega_{2 tau} by special boxes inside Omega_tau

    Targets are the points of a grid over [0, 2] x I^n where |lambda| > 2 tau. Radii b = 1/4, 1/8, ..., 1/64 are tried
    in turn; for each uncovered target a box is centred at its (t, q^) and its q_n-edges are placed inside the band
    tau < |lambda| < 2 tau on either side of the target's component, at a fraction of the band that varies from box
    to box so that the oscillation lattices of overlapping boxes do not line up. A box is accepted if, on samples of
    its ball, it stays inside Omega_tau, its top and bottom strips stay below 2 tau and its shrunken copy contains the
    target. Coverage is re-validated on a grid four times finer; uncovered points are fed back as targets up to three
    times before coverage_failure is thrown.
*/
inline auto build_box_cover(angle_field_t const& field, wrinkle_params_t const& params, int grid = 48) -> box_cover_t
{
    params.validate();
    int const n = field.n;
    box_cover_t cover;
    cover.n = n;
    cover.N = params.N;
    cover.delta = params.delta;
    double const tau = params.tau;
    double const strip = 1.0 / (4.0 * params.N + 2.0);
    double const shrink = 1.0 - strip;

    auto lam = [&](double t, vec_t const& q) { return field.extended(t, q); };

    // column scan of q_n at fixed (t, q^)
    int const column = 400;
    auto column_values = [&](vec_t const& centre) {
        std::vector<double> out(column + 1);
        for (int i = 0; i <= column; ++i)
        {
            auto const [t, q] = detail::split_point(centre, -1.0 + 2.0 * i / column);
            out[static_cast<std::size_t>(i)] = lam(t, q);
        }
        return out;
    };

    // targets on a grid over [0, 2] x I^n
    auto grid_points = [&](int g) {
        std::vector<vec_t> pts;
        std::size_t total = 1;
        for (int a = 0; a <= n; ++a) total *= static_cast<std::size_t>(a == 0 ? 2 * g + 1 : g + 1);
        for (std::size_t idx = 0; idx < total; ++idx)
        {
            std::size_t rest = idx;
            vec_t p(n + 1);
            for (int a = 0; a <= n; ++a)
            {
                std::size_t const count = static_cast<std::size_t>(a == 0 ? 2 * g + 1 : g + 1);
                double const f = static_cast<double>(rest % count) / static_cast<double>(count - 1);
                rest /= count;
                p[a] = a == 0 ? 2.0 * f : -1.0 + 2.0 * f;
            }
            vec_t q = p.tail(n);
            if (std::abs(lam(p[0], q)) > 2.0 * tau) pts.push_back(p);
        }
        return pts;
    };

    // boxes whose lattices would force sigma below this are rejected in favour of smaller radii
    double const min_separation = 1e-4;
    auto pair_limit = [&](box_t const& a, box_t const& b) {
        return detail::band_separation(a, b, params.N);
    };

    auto try_box = [&](vec_t const& target, double b) -> std::optional<box_t> {
        vec_t centre = target.head(n);
        double const t0 = centre[0];
        if (t0 - b < 0.0 || t0 + b > 2.0) return std::nullopt;
        for (int i = 1; i < n; ++i)
            if (std::abs(centre[i]) + b > 1.0) return std::nullopt;
        vec_t const q0 = target.tail(n);
        double const lam0 = lam(t0, q0);
        int const sign = lam0 > 0.0 ? 1 : -1;

        // band edges along the centre column
        auto const col = column_values(centre);
        int const at = static_cast<int>(std::lround((q0[n - 1] + 1.0) * 0.5 * column));
        auto above = [&](int i, double level) { return sign * col[static_cast<std::size_t>(i)] > level; };
        int lo_t = at, hi_t = at, lo_2 = at, hi_2 = at;
        while (lo_t > 0 && above(lo_t - 1, tau)) --lo_t;
        while (hi_t < column && above(hi_t + 1, tau)) ++hi_t;
        while (lo_2 > 0 && above(lo_2 - 1, 2.0 * tau)) --lo_2;
        while (hi_2 < column && above(hi_2 + 1, 2.0 * tau)) ++hi_2;
        auto coord = [&](int i) { return -1.0 + 2.0 * i / column; };
        double const a_t = coord(lo_t), b_t = coord(hi_t), a_2 = coord(lo_2 - 1), b_2 = coord(hi_2 + 1);
        if (a_2 - a_t <= 0.0 || b_t - b_2 <= 0.0) return std::nullopt;

        auto const samples = detail::ball_samples(centre, b);
        auto feasible = [&](box_t const& box) {
            for (auto const& s : samples)
            {
                for (int i = 0; i <= 32; ++i)
                {
                    double const y = -1.0 + 2.0 * i / 32.0;
                    auto const [t, q] = detail::split_point(s, box.qn + y * box.c);
                    if (!(sign * lam(t, q) > tau)) return false;
                }
                for (int i = 0; i <= 4; ++i)
                    for (double side : {-1.0, 1.0})
                    {
                        double const y = side * (shrink + strip * i / 4.0);
                        auto const [t, q] = detail::split_point(s, box.qn + y * box.c);
                        if (!(sign * lam(t, q) < 2.0 * tau)) return false;
                    }
            }
            return true;
        };

        // edges sit at independent fractions of the two bands; among feasible choices keep the one whose
        // oscillation lattice stays furthest from those of the boxes it overlaps
        std::optional<box_t> best;
        double best_score = -1.0;
        int const steps = 12;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j)
            {
                double const f_bottom = 0.2 + 0.6 * i / steps;
                double const f_top = 0.2 + 0.6 * j / steps;
                // the cut-off strips of height c / (4N + 2) must fit inside the bands, which fixes c self-consistently
                double half = 0.5 * (b_t - a_t);
                double bottom = 0.0, top = 0.0;
                for (int pass = 0; pass < 8; ++pass)
                {
                    double const cut = half * strip;
                    bottom = a_t + f_bottom * std::max(0.0, a_2 - cut - a_t);
                    top = b_t - f_top * std::max(0.0, b_t - b_2 - cut);
                    half = 0.5 * (top - bottom);
                }
                if (top - half * strip < b_2 || bottom + half * strip > a_2 || half <= 0.0) continue;
                box_t box;
                box.t = t0;
                box.qhat = centre.tail(n - 1);
                box.qn = 0.5 * (top + bottom);
                box.c = half;
                box.b = b;
                box.sign = sign;
                if (std::abs(q0[n - 1] - box.qn) > shrink * box.c) continue;
                double score = 1e300;
                for (auto const& other : cover.boxes) score = std::min(score, pair_limit(box, other));
                if (score <= best_score || score < min_separation) continue;
                if (!feasible(box)) continue;
                best = box;
                best_score = score;
            }
        return best;
    };

    auto covered = [&](vec_t const& p) { return cover.covers(p[0], vec_t(p.tail(n))); };

    std::vector<vec_t> targets = grid_points(grid);
    for (int round = 0; round < 4; ++round)
    {
        for (double b : {0.25, 0.125, 0.0625, 0.03125, 0.015625})
            for (auto const& target : targets)
            {
                if (covered(target)) continue;
                if (auto box = try_box(target, b)) cover.boxes.push_back(*box);
            }
        std::vector<vec_t> missing;
        for (auto const& target : targets)
            if (!covered(target)) missing.push_back(target);
        require(missing.empty(), error_kind::coverage_failure,
                "box cover leaves " + std::to_string(missing.size()) + " grid points of Omega_2tau uncovered");
        for (auto const& p : grid_points(4 * grid))
            if (!covered(p)) missing.push_back(p);
        if (missing.empty()) break;
        require(round < 3, error_kind::coverage_failure,
                "box cover misses " + std::to_string(missing.size()) + " points of the validation grid");
        targets = std::move(missing);
    }

    // sigma(N): the bands k 2/(2N+1) +- 4 sigma/(2N+1) (box units) of overlapping boxes must stay disjoint
    double limit = 0.2;
    for (std::size_t i = 0; i < cover.boxes.size(); ++i)
        for (std::size_t j = i + 1; j < cover.boxes.size(); ++j)
            limit = std::min(limit, pair_limit(cover.boxes[i], cover.boxes[j]));
    require(limit >= min_separation, error_kind::coverage_failure, "oscillation bands of two boxes nearly coincide");
    cover.sigma_limit = limit;
    return cover;
}

// --------------------------------------------------------------------------------------------------------------------
// Composite Wrinkling
// --------------------------------------------------------------------------------------------------------------------

/**
    the adapted model w_t = sum_j sign(j) l_{C_j} and the composite f_t = phi_t o w_t

    phi_t is the closed-form flow map with lambda evaluated at the base point q of w_t(q) = (q, p). Outside every box
    p = 0 and f_t = w_t is the zero section.
*/
class wrinkled_family_t
{
public:
    wrinkled_family_t(angle_field_t field, box_cover_t cover, std::shared_ptr<oscillator_t const> osc)
        : field_{std::move(field)}, cover_{std::move(cover)}, osc_{std::move(osc)}
    {
    }

    auto cover() const noexcept -> box_cover_t const& { return cover_; }
    auto oscillator() const noexcept -> oscillator_t const& { return *osc_; }
    auto field() const noexcept -> angle_field_t const& { return field_; }

    //! jet of w_t at q (value (q, p), jacobian 2n x n)
    auto adapted_jet(double t, vec_t const& q) const -> jet_t
    {
        int const n = static_cast<int>(q.size());
        jet_t j;
        j.value = vec_t::Zero(2 * n);
        j.jacobian = mat_t::Zero(2 * n, n);
        for (auto const& box : cover_.boxes)
        {
            auto const [v, y] = box.normalize(t, q);
            if (v.norm() >= 1.0 || std::abs(y) >= 1.0) continue;
            jet_t const b = box_model_jet(*osc_, box, t, q, false);
            j.value += box.sign * b.value;
            j.jacobian += box.sign * b.jacobian;
        }
        j.value.head(n) = q;
        j.jacobian.topRows(n) = mat_t::Identity(n, n);
        return j;
    }

    //! value and jacobian of f_t at q
    auto composite_jet(double t, vec_t const& q) const -> jet_t
    {
        int const n = static_cast<int>(q.size());
        jet_t w = adapted_jet(t, q);
        vec_t const p = w.value.tail(n);
        if (p.cwiseAbs().maxCoeff() == 0.0 && w.jacobian.bottomRows(n).cwiseAbs().maxCoeff() == 0.0) return w;

        double const lam = field_(t, q);
        double const sn = std::sin(lam), cs = std::cos(lam);
        double const cot = cs / sn, csc2 = 1.0 / (sn * sn);
        vec_t const g = field_.grad(t, q);
        mat_t const hess = field_.hessian(t, q);
        double const pn = p[n - 1];

        jet_t f;
        f.value = w.value;
        f.value[n - 1] += cot * pn;
        f.value.tail(n) += 0.5 * csc2 * pn * pn * g;

        // d phi / d(q, p) at (q, p), with lambda depending on q
        mat_t D = mat_t::Identity(2 * n, 2 * n);
        for (int k = 0; k < n; ++k) D(n - 1, k) += -csc2 * g[k] * pn;
        D(n - 1, 2 * n - 1) += cot;
        for (int jdx = 0; jdx < n; ++jdx)
        {
            for (int k = 0; k < n; ++k)
                D(n + jdx, k) += 0.5 * pn * pn * (-2.0 * csc2 * cot * g[k] * g[jdx] + csc2 * hess(jdx, k));
            D(n + jdx, 2 * n - 1) += csc2 * pn * g[jdx];
        }
        f.jacobian = D * w.jacobian;
        return f;
    }

    //! the target plane span(d/dq^, cos(lambda) d/dq_n + sin(lambda) d/dp_n)
    auto target_plane(double t, vec_t const& q) const -> lagrangian_plane_t
    {
        int const n = static_cast<int>(q.size());
        double const lam = field_(t, q);
        mat_t frame = mat_t::Zero(2 * n, n);
        for (int i = 0; i + 1 < n; ++i) frame(i, i) = 1.0;
        frame(n - 1, n - 1) = std::cos(lam);
        frame(2 * n - 1, n - 1) = std::sin(lam);
        return {n, false, frame};
    }

    /**
        distance in q_n from q to the nearest cusp of any box oscillator at time t

        The cusps of zeta_s sit at x = k +- sigma s^(5/2) for s > 0, i.e. q_n = q_n(C) + c (2/(2N+1)) (k +- ...).
    */
    auto singular_distance(double t, vec_t const& q) const -> double
    {
        int const n = static_cast<int>(q.size());
        double best = 1e300;
        double const k = osc_->frequency();
        double const sigma = osc_->zeta().sigma();
        for (auto const& box : cover_.boxes)
        {
            auto const [v, y] = box.normalize(t, q);
            double const r = v.norm();
            if (r >= 1.0 || std::abs(y) >= 1.0) continue;
            double const s = osc_->eta_profile(r).f;
            if (s <= 0.0) continue;
            double const offset = sigma * std::pow(s, 2.5);
            double const x = k * y;
            double const cell = std::round(x);
            for (double c : {cell - 1.0, cell, cell + 1.0})
                for (double side : {-1.0, 1.0})
                    best = std::min(best, std::abs(x - c - side * offset) / k * box.c);
        }
        (void)n;
        return best;
    }

    //! Gauss-plane defect at (t, q): principal angle between G(df_t) and the target plane
    auto defect(double t, vec_t const& q) const -> double
    {
        jet_t const f = composite_jet(t, q);
        mat_t frame = f.jacobian;
        for (Eigen::Index i = 0; i < frame.cols(); ++i)
        {
            double const norm = frame.col(i).norm();
            if (norm > 0.0) frame.col(i) /= norm;
        }
        return plane_distance({static_cast<int>(q.size()), false, frame}, target_plane(t, q));
    }

private:
    angle_field_t field_;
    box_cover_t cover_;
    std::shared_ptr<oscillator_t const> osc_;
};

//! builds cover, oscillator and family for one N of the schedule; sigma = min(sigma(N)/2, 0.1)
inline auto composite_wrinkling(angle_field_t const& field, wrinkle_params_t params, int grid = 48)
    -> std::shared_ptr<wrinkled_family_t const>
{
    box_cover_t cover = build_box_cover(field, params, grid);
    params.sigma = std::min(0.5 * cover.sigma_limit, 0.1);
    auto osc = std::make_shared<oscillator_t const>(params, build_zeta(params.sigma, params.alpha));
    return std::make_shared<wrinkled_family_t const>(field, std::move(cover), std::move(osc));
}

struct convergence_row_t
{
    int N = 0;
    double gamma = 0.0;
    double alpha = 0.0;
    double sigma = 0.0;
    double max_defect = 0.0;
    int grid = 0;
    double runtime_ms = 0.0;
    std::size_t boxes = 0;
};

struct convergence_options_t
{
    double tau = pi / 10.0;
    double delta = 0.1;
    int t_grid = 81;          //!< samples of t in [0, 1]
    int q_grid = 4001;        //!< samples per q axis
    double locus_collar = 1e-3;
    int cover_grid = 48;
};

/**
    max Gauss-plane defect of f_t over Omega_{2 tau} restricted to t in [0, 1], per N of the schedule

    Points within the collar of the cusp locus are skipped; all other points of the (t, q) grid with
    |lambda_t(q)| > 2 tau are measured.
*/
inline auto convergence_report(angle_field_t const& field, std::vector<int> const& schedule,
                               convergence_options_t const& opts = {}) -> std::vector<convergence_row_t>
{
    int const n = field.n;
    std::vector<convergence_row_t> rows;
    for (int N : schedule)
    {
        auto const start = std::chrono::steady_clock::now();
        auto const family = composite_wrinkling(field, scheduled_params(N, opts.tau, opts.delta), opts.cover_grid);
        auto const& p = family->oscillator().params();

        std::size_t total = static_cast<std::size_t>(opts.t_grid);
        for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(opts.q_grid);
        std::vector<double> worst(total, 0.0);
        parallel_for(total, [&](std::size_t idx) {
            std::size_t rest = idx;
            double const t = static_cast<double>(rest % opts.t_grid) / (opts.t_grid - 1);
            rest /= static_cast<std::size_t>(opts.t_grid);
            vec_t q(n);
            for (int a = 0; a < n; ++a)
            {
                q[a] = -1.0 + 2.0 * static_cast<double>(rest % opts.q_grid) / (opts.q_grid - 1);
                rest /= static_cast<std::size_t>(opts.q_grid);
            }
            if (std::abs(field(t, q)) <= 2.0 * opts.tau) return;
            if (family->singular_distance(t, q) < opts.locus_collar) return;
            worst[idx] = family->defect(t, q);
        });

        convergence_row_t row;
        row.N = N;
        row.gamma = p.gamma;
        row.alpha = p.alpha;
        row.sigma = p.sigma;
        row.max_defect = *std::max_element(worst.begin(), worst.end());
        row.grid = opts.q_grid;
        row.boxes = family->cover().boxes.size();
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

} // namespace lw
