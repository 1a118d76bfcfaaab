// SPDX-License-Identifier: MIT
/**
    \file
    \brief closed-form local models: wrinkles, embryos, Lagrangian and Legendrian wrinkles, regularization, sharpening

    Every wrinkle-type model is a function of two scalars: c, the squared radius of the transverse coordinates plus a
    shift (-1 for a wrinkle, 0 for an embryo), and x = q_n. With

        eta = x^3 + 3 c x,   h = int_0^x (c + u^2)^2 du,   H = int_0^x h d(eta)/dx du,   K = dH/dc - h d(eta)/dc

    the smooth wrinkle is (q^, eta, 0, .., h), the Lagrangian wrinkle is (q^, eta, 2 q_j K, h) and its Legendrian lift
    appends H. All of h, H and K are polynomials in (c, x), so these models and their jacobians are exact.

    Regularization adds a bump phi supported in a thin shell around the unit sphere to h; its primitive against
    d(eta)/dx is a one-dimensional integral of a bump in the variable v = c + u^2, evaluated by quadrature. The two
    sharpening families deform a Legendrian front by a cutoff factor and read the Lagrangian off the front, which
    keeps them exact by construction.
*/

#pragma once

#include <lw/bump.hpp>
#include <lw/core.hpp>
#include <lw/jet.hpp>
#include <lw/quadrature.hpp>
#include <cmath>
#include <memory>
#include <random>
#include <string>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Wrinkle Core
// --------------------------------------------------------------------------------------------------------------------

//! the scalar fields of the wrinkle family and their (c, x) partials
struct core_fields_t
{
    double eta, eta_c, eta_x;
    double h, h_c, h_x;
    double H, H_c, H_x;
    double K, K_c, K_x;
};

inline auto wrinkle_core(double c, double x) noexcept -> core_fields_t
{
    double const x2 = x * x;
    double const x3 = x2 * x;
    double const x4 = x2 * x2;
    double const x5 = x4 * x;
    double const x6 = x4 * x2;
    double const x8 = x4 * x4;
    double const c2 = c * c;
    double const c3 = c2 * c;

    core_fields_t f{};
    f.eta = x3 + 3.0 * c * x;
    f.eta_c = 3.0 * x;
    f.eta_x = 3.0 * (x2 + c);
    f.h = c2 * x + (2.0 / 3.0) * c * x3 + x5 / 5.0;
    f.h_c = 2.0 * c * x + (2.0 / 3.0) * x3;
    f.h_x = (c + x2) * (c + x2);
    f.H = 1.5 * c3 * x2 + 1.25 * c2 * x4 + (13.0 / 30.0) * c * x6 + (3.0 / 40.0) * x8;
    f.H_c = 4.5 * c2 * x2 + 2.5 * c * x4 + (13.0 / 30.0) * x6;
    f.H_x = f.h * f.eta_x;
    f.K = 1.5 * c2 * x2 + 0.5 * c * x4 - x6 / 6.0;
    f.K_c = 3.0 * c * x2 + 0.5 * x4;
    f.K_x = 3.0 * c2 * x + 2.0 * c * x3 - x5;
    return f;
}

// --------------------------------------------------------------------------------------------------------------------
// Bump Specifications
// --------------------------------------------------------------------------------------------------------------------

enum class bump_kind
{
    reg_phi,
    sharpen_psi,
    sharpen_phi,
    cutoff_rho,
    cutoff_psi_axial,
    eta_profile,
};

inline auto to_string(bump_kind kind) noexcept -> char const*
{
    switch (kind)
    {
    case bump_kind::reg_phi: return "reg-phi";
    case bump_kind::sharpen_psi: return "sharpen-psi";
    case bump_kind::sharpen_phi: return "sharpen-phi";
    case bump_kind::cutoff_rho: return "cutoff-rho";
    case bump_kind::cutoff_psi_axial: return "cutoff-psi-axial";
    case bump_kind::eta_profile: return "eta-profile";
    }
    return "reg-phi";
}

//! published description of a bump: what it is, its scale, and the derivative constants measured at build time
struct bump_spec_t
{
    bump_kind kind = bump_kind::reg_phi;
    double delta = 0.0;
    double epsilon = 1.0;
    double amplitude = 0.0;
    double first_derivative_constant = 0.0;  //!< A with |d psi| <= A / delta on the samples
    double second_derivative_constant = 0.0; //!< A with |d^2 psi| <= A / delta^2 on the samples
};

// --------------------------------------------------------------------------------------------------------------------
// Regularization Bump
// --------------------------------------------------------------------------------------------------------------------

//! phi and its primitive Phi = int_0^x phi d(eta)/dx, with the partials the regularized models need
struct reg_terms_t
{
    double phi = 0.0, phi_c = 0.0, phi_x = 0.0;
    double Phi = 0.0, Phi_c = 0.0, Phi_x = 0.0;
    double Phi_cc = 0.0, Phi_cx = 0.0;
};

/**
    the regularizing perturbation of the wrinkle

    In terms of rho = c + x^2 (so rho = |q|^2 - 1 for the wrinkle and d(eta)/dx = 3 rho),

        phi(c, x) = kappa x [ b+(rho) - lambda(c) b-(rho) ]

    where b+ is the standard bump on |rho| < delta/2 and b- the standard bump on 0.55 delta < rho < 0.95 delta. On the
    sphere rho = 0 this gives d(phi)/dx = kappa > 0. Substituting v = c + u^2 turns the moment int_0^x phi d(eta)/dx
    into (3 kappa / 2) int_c^{c + x^2} [b+(v) - lambda b-(v)] v dv, so choosing lambda(c) as the ratio of the two lobe
    moments makes it vanish identically beyond the shell. Everything is supported in |rho| < delta.
*/
class reg_bump_t
{
public:
    reg_bump_t(double delta, double amplitude) : delta_{delta}, kappa_{amplitude}
    {
        require(delta > 0.0 && delta <= 1.0, error_kind::parameter_out_of_range, "regularization shell must be in (0, 1]");
        require(amplitude > 0.0 && amplitude <= 1.0, error_kind::parameter_out_of_range,
                "regularization amplitude must be in (0, 1]");
        minus_lo_ = 0.55 * delta;
        minus_hi_ = 0.95 * delta;
        mbar_minus_ = lobe_integral(false, minus_lo_, minus_hi_);
        require(mbar_minus_ > 0.0, error_kind::infeasible, "outer lobe moment underflows; shell too thin");
    }

    auto delta() const noexcept -> double { return delta_; }
    auto amplitude() const noexcept -> double { return kappa_; }

    //! inner lobe b+(v), derivatives in v
    auto beta_plus(double v) const noexcept -> scalar3_t
    {
        double const k = 2.0 / delta_;
        auto const b = standard_bump(k * v);
        return {b.f, b.d1 * k, b.d2 * k * k};
    }

    //! outer lobe b-(v), derivatives in v
    auto beta_minus(double v) const noexcept -> scalar3_t { return interval_bump(v, minus_lo_, minus_hi_); }

    //! int_a^b lobe(v) v dv
    auto lobe_integral(bool plus, double a, double b) const -> double
    {
        double const lo = plus ? -0.5 * delta_ : minus_lo_;
        double const hi = plus ? 0.5 * delta_ : minus_hi_;
        double sign = 1.0;
        if (b < a)
        {
            std::swap(a, b);
            sign = -1.0;
        }
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (b <= a) return 0.0;
        auto integrand = [&](double v) { return (plus ? beta_plus(v).f : beta_minus(v).f) * v; };
        return sign * integrate(integrand, a, b, 1e-16);
    }

    //! lambda(c) and its first two derivatives
    auto lambda(double c) const -> scalar3_t
    {
        if (c >= 0.5 * delta_) return {};
        double const m_plus = lobe_integral(true, c, 0.5 * delta_);
        auto const b = beta_plus(c);
        return {m_plus / mbar_minus_, -b.f * c / mbar_minus_, -(b.d1 * c + b.f) / mbar_minus_};
    }

    auto terms(double c, double x) const -> reg_terms_t
    {
        double const s = x * x;
        double const rho = c + s;
        reg_terms_t r;
        if (rho <= -delta_ || rho >= delta_)
        {
            // outside the shell phi vanishes; Phi keeps its (constant in x) value, which the moment makes zero
            // unless the q_n-line misses the shell altogether, where it is zero as well
            if (rho >= delta_ && c < delta_) fill_primitive(r, c, s);
            return r;
        }
        auto const lam = lambda(c);
        auto const bp = beta_plus(rho);
        auto const bm = beta_minus(rho);
        double const kx = kappa_ * x;
        r.phi = kx * (bp.f - lam.f * bm.f);
        r.phi_c = kx * (bp.d1 - lam.d1 * bm.f - lam.f * bm.d1);
        r.phi_x = kappa_ * (bp.f - lam.f * bm.f) + 2.0 * kappa_ * s * (bp.d1 - lam.f * bm.d1);
        fill_primitive(r, c, s);
        return r;
    }

    //! build-time record of the constants
    auto spec() const noexcept -> bump_spec_t
    {
        bump_spec_t s;
        s.kind = bump_kind::reg_phi;
        s.delta = delta_;
        s.amplitude = kappa_;
        s.first_derivative_constant = first_constant_;
        s.second_derivative_constant = 0.0;
        return s;
    }

    auto set_first_constant(double a) noexcept -> void { first_constant_ = a; }

private:
    auto fill_primitive(reg_terms_t& r, double c, double s) const -> void
    {
        double const kp = 1.5 * kappa_;
        double const rho = c + s;
        auto const lam = lambda(c);
        double const j_plus = lobe_integral(true, c, rho);
        double const j_minus = lobe_integral(false, c, rho);
        auto const bp_r = beta_plus(rho);
        auto const bm_r = beta_minus(rho);
        auto const bp_c = beta_plus(c);
        auto const bm_c = beta_minus(c);
        // B(v) = b(v) v and B'(v) = b'(v) v + b(v)
        double const Bp_r = bp_r.f * rho, Bm_r = bm_r.f * rho, Bp_c = bp_c.f * c, Bm_c = bm_c.f * c;
        double const dBp_r = bp_r.d1 * rho + bp_r.f, dBm_r = bm_r.d1 * rho + bm_r.f;
        double const dBp_c = bp_c.d1 * c + bp_c.f, dBm_c = bm_c.d1 * c + bm_c.f;

        double const x = std::sqrt(s);
        r.Phi = kp * (j_plus - lam.f * j_minus);
        r.Phi_c = kp * ((Bp_r - Bp_c) - lam.d1 * j_minus - lam.f * (Bm_r - Bm_c));
        double const Phi_s = kp * (Bp_r - lam.f * Bm_r);
        double const Phi_cs = kp * (dBp_r - lam.d1 * Bm_r - lam.f * dBm_r);
        r.Phi_cc = kp * ((dBp_r - dBp_c) - lam.d2 * j_minus - 2.0 * lam.d1 * (Bm_r - Bm_c) - lam.f * (dBm_r - dBm_c));
        // Phi depends on x only through s = x^2; callers multiply by sign(x) where needed, here x >= 0 suffices
        // because Phi_x = 2 x Phi_s is odd and the caller passes the signed x to regularized_core
        r.Phi_x = 2.0 * x * Phi_s;
        r.Phi_cx = 2.0 * x * Phi_cs;
    }

    double delta_;
    double kappa_;
    double minus_lo_ = 0.0;
    double minus_hi_ = 0.0;
    double mbar_minus_ = 0.0;
    double first_constant_ = 0.0;
};

/**
    core fields with h replaced by h + phi and H by H + Phi

    Phi_x and Phi_cx are odd in x; reg_bump_t::terms computes them for |x| so the sign is restored here.
*/
inline auto regularized_core(core_fields_t f, reg_bump_t const& bump, double c, double x) -> core_fields_t
{
    reg_terms_t r = bump.terms(c, x);
    double const sgn = x < 0.0 ? -1.0 : 1.0;
    r.Phi_x *= sgn;
    r.Phi_cx *= sgn;
    f.h += r.phi;
    f.h_c += r.phi_c;
    f.h_x += r.phi_x;
    f.H += r.Phi;
    f.H_c += r.Phi_c;
    f.H_x += r.Phi_x;
    f.K += r.Phi_c - 3.0 * x * r.phi;
    f.K_c += r.Phi_cc - 3.0 * x * r.phi_c;
    f.K_x += r.Phi_cx - 3.0 * r.phi - 3.0 * x * r.phi_x;
    return f;
}

/**
    builds the regularization bump for a shell of half-width delta and re-verifies its three defining constraints

    - support: phi is exactly zero wherever | |q|^2 - 1 | >= delta (1000 samples)
    - positivity: d(phi)/dq_n > 0 at 512 points of the unit sphere
    - moment: int_0^{q_n} phi d(eta)/dq_n < 1e-10 at 100 points beyond the shell, by direct quadrature

    Any failure throws infeasible naming the violated constraint.
*/
inline auto build_reg_bump(double delta, double amplitude) -> std::shared_ptr<reg_bump_t const>
{
    auto bump = std::make_shared<reg_bump_t>(delta, amplitude);
    std::mt19937_64 rng{0x5eedu};
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    for (int i = 0; i < 1000; ++i)
    {
        double const c = -1.0 + 2.0 * unit(rng);
        double const rho = (unit(rng) < 0.5 ? -1.0 : 1.0) * delta * (1.0 + 2.0 * unit(rng));
        double const s = rho - c;
        if (s < 0.0) continue;
        double const x = (unit(rng) < 0.5 ? -1.0 : 1.0) * std::sqrt(s);
        require(bump->terms(c, x).phi == 0.0, error_kind::infeasible, "regularization bump leaks outside its shell");
    }

    double slope_max = 0.0;
    for (int i = 0; i < 512; ++i)
    {
        double const x = -1.0 + 2.0 * (i + 0.5) / 512.0;
        auto const r = bump->terms(-x * x, x);
        require(r.phi_x > 0.0, error_kind::infeasible, "regularization bump has non-positive q_n-derivative on the sphere");
    }
    for (int i = 0; i < 2000; ++i)
    {
        double const c = -1.0 + (1.0 + delta) * unit(rng);
        double const x = -1.5 + 3.0 * unit(rng);
        auto const r = bump->terms(c, x);
        slope_max = std::max({slope_max, std::abs(r.phi_x), std::abs(r.phi_c)});
    }
    bump->set_first_constant(slope_max * delta / amplitude);

    for (int i = 0; i < 100; ++i)
    {
        double const c = -1.0 + (1.0 + 0.9 * delta) * unit(rng);
        double const x = std::sqrt(std::max(0.0, delta - c) + 0.2 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
        auto integrand = [&](double u) { return bump->terms(c, u).phi * 3.0 * (c + u * u); };
        double const moment = integrate(integrand, 0.0, x, 1e-14);
        require(std::abs(moment) < 1e-10, error_kind::infeasible, "regularization bump violates the moment condition");
    }
    return bump;
}

// --------------------------------------------------------------------------------------------------------------------
// Wrinkle Maps
// --------------------------------------------------------------------------------------------------------------------

namespace detail {

//! squared norm of the first n-1 coordinates
inline auto hat_norm2(vec_t const& q, int n) noexcept -> double
{
    double s = 0.0;
    for (int i = 0; i < n - 1; ++i) s += q[i] * q[i];
    return s;
}

//! smooth wrinkle type map (q^, eta, 0.., h) in R^{n+r} with core computed at c = |q^|^2 + shift
inline auto smooth_core_jet(int n, int r, double shift, vec_t const& q, reg_bump_t const* bump) -> jet_t
{
    double const c = hat_norm2(q, n) + shift;
    double const x = q[n - 1];
    core_fields_t f = wrinkle_core(c, x);
    if (bump) f = regularized_core(f, *bump, c, x);

    int const m = n + r;
    jet_t j;
    j.value = vec_t::Zero(m);
    j.jacobian = mat_t::Zero(m, n);
    for (int i = 0; i < n - 1; ++i)
    {
        j.value[i] = q[i];
        j.jacobian(i, i) = 1.0;
        j.jacobian(n - 1, i) = 2.0 * q[i] * f.eta_c;
    }
    j.value[n - 1] = f.eta;
    j.jacobian(n - 1, n - 1) = f.eta_x;
    if (r >= 1)
    {
        j.value[m - 1] = f.h;
        for (int i = 0; i < n - 1; ++i) j.jacobian(m - 1, i) = 2.0 * q[i] * f.h_c;
        j.jacobian(m - 1, n - 1) = f.h_x;
    }
    return j;
}

//! Lagrangian wrinkle type map (q^, eta, 2 q_j K, h[, H]) with core computed at c = |q^|^2 + shift
inline auto lagrangian_core_jet(int n, double shift, vec_t const& q, bool lift, reg_bump_t const* bump) -> jet_t
{
    double const c = hat_norm2(q, n) + shift;
    double const x = q[n - 1];
    core_fields_t f = wrinkle_core(c, x);
    if (bump) f = regularized_core(f, *bump, c, x);

    int const m = lift ? 2 * n + 1 : 2 * n;
    jet_t j;
    j.value = vec_t::Zero(m);
    j.jacobian = mat_t::Zero(m, n);
    for (int i = 0; i < n - 1; ++i)
    {
        j.value[i] = q[i];
        j.jacobian(i, i) = 1.0;
        j.jacobian(n - 1, i) = 2.0 * q[i] * f.eta_c;
    }
    j.value[n - 1] = f.eta;
    j.jacobian(n - 1, n - 1) = f.eta_x;

    for (int k = 0; k < n - 1; ++k)
    {
        int const row = n + k;
        j.value[row] = 2.0 * q[k] * f.K;
        for (int i = 0; i < n - 1; ++i)
            j.jacobian(row, i) = (i == k ? 2.0 * f.K : 0.0) + 4.0 * q[i] * q[k] * f.K_c;
        j.jacobian(row, n - 1) = 2.0 * q[k] * f.K_x;
    }
    j.value[2 * n - 1] = f.h;
    for (int i = 0; i < n - 1; ++i) j.jacobian(2 * n - 1, i) = 2.0 * q[i] * f.h_c;
    j.jacobian(2 * n - 1, n - 1) = f.h_x;

    if (lift)
    {
        j.value[2 * n] = f.H;
        for (int i = 0; i < n - 1; ++i) j.jacobian(2 * n, i) = 2.0 * q[i] * f.H_c;
        j.jacobian(2 * n, n - 1) = f.H_x;
    }
    return j;
}

inline auto make_map(std::string name, int domain_dim, target_kind target, int target_dim,
                     map_descriptor_t::evaluator_t eval) -> map_descriptor_t
{
    map_descriptor_t m;
    m.name = std::move(name);
    m.domain_dim = domain_dim;
    m.target = target;
    m.target_dim = target_dim;
    m.evaluate = std::move(eval);
    m.analytic_jacobian = true;
    return m;
}

} // namespace detail

//! smooth wrinkle W_{n,r}: R^n -> R^{n+r}
inline auto wrinkle_smooth(int n, int r) -> map_descriptor_t
{
    require(n >= 1 && r >= 0, error_kind::parameter_out_of_range, "wrinkle needs n >= 1 and r >= 0");
    return detail::make_map("wrinkle?n=" + std::to_string(n) + "&r=" + std::to_string(r), n, target_kind::euclid, n + r,
                            [n, r](vec_t const& q) { return detail::smooth_core_jet(n, r, -1.0, q, nullptr); });
}

//! embryo E_{n,r}: the wrinkle with the sphere shrunk to the origin
inline auto embryo_map(int n, int r) -> map_descriptor_t
{
    require(n >= 1 && r >= 0, error_kind::parameter_out_of_range, "embryo needs n >= 1 and r >= 0");
    return detail::make_map("embryo?n=" + std::to_string(n) + "&r=" + std::to_string(r), n, target_kind::euclid, n + r,
                            [n, r](vec_t const& q) { return detail::smooth_core_jet(n, r, 0.0, q, nullptr); });
}

//! Lagrangian wrinkle L_n into T*R^n, or its Legendrian lift into J^1(R^n, R)
inline auto wrinkle_lagrangian(int n, bool lift) -> map_descriptor_t
{
    require(n >= 1, error_kind::parameter_out_of_range, "Lagrangian wrinkle needs n >= 1");
    std::string const name = std::string(lift ? "legendrian-wrinkle" : "lagrangian-wrinkle") + "?n=" + std::to_string(n);
    return detail::make_map(name, n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * n + 1 : 2 * n,
                            [n, lift](vec_t const& q) { return detail::lagrangian_core_jet(n, -1.0, q, lift, nullptr); });
}

//! Lagrangian (or Legendrian) embryo: the Lagrangian wrinkle construction applied to the embryo core
inline auto embryo_lagrangian(int n, bool lift) -> map_descriptor_t
{
    require(n >= 1, error_kind::parameter_out_of_range, "Lagrangian embryo needs n >= 1");
    std::string const name = std::string(lift ? "legendrian-embryo" : "lagrangian-embryo") + "?n=" + std::to_string(n);
    return detail::make_map(name, n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * n + 1 : 2 * n,
                            [n, lift](vec_t const& q) { return detail::lagrangian_core_jet(n, 0.0, q, lift, nullptr); });
}

/**
    fibered Lagrangian wrinkle at a fixed parameter z in R^m

    The parameter only enters through |z|^2, which is added to |q^|^2 everywhere, so the wrinkle sphere has radius
    sqrt(1 - |z|^2) and degenerates to an embryo at |z| = 1. The normal coordinate enters cubed, as in the unfibered
    wrinkle. The parameter coordinates of the target are the identity and are omitted.
*/
inline auto fibered_wrinkle(int n, int m, vec_t const& z, bool lift = false) -> map_descriptor_t
{
    require(n >= 1 && m >= 1, error_kind::parameter_out_of_range, "fibered wrinkle needs n >= 1 and m >= 1");
    require(z.size() == m, error_kind::dimension_mismatch, "fibered wrinkle parameter must have dimension m");
    double const shift = z.squaredNorm() - 1.0;
    std::string const name = std::string(lift ? "fibered-legendrian-wrinkle" : "fibered-wrinkle") +
                             "?n=" + std::to_string(n) + "&m=" + std::to_string(m);
    return detail::make_map(name, n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * n + 1 : 2 * n,
                            [n, lift, shift](vec_t const& q) { return detail::lagrangian_core_jet(n, shift, q, lift, nullptr); });
}

//! regularized Lagrangian wrinkle (or Legendrian lift) for a verified bump
inline auto regularize_lagrangian(int n, std::shared_ptr<reg_bump_t const> bump, bool lift) -> map_descriptor_t
{
    require(n >= 1, error_kind::parameter_out_of_range, "regularized wrinkle needs n >= 1");
    require(bump != nullptr, error_kind::precondition_failed, "regularization needs a bump");
    std::string const name = std::string(lift ? "regularized-legendrian-wrinkle" : "regularized-wrinkle") +
                             "?n=" + std::to_string(n);
    return detail::make_map(name, n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * n + 1 : 2 * n,
                            [n, lift, bump](vec_t const& q) {
                                return detail::lagrangian_core_jet(n, -1.0, q, lift, bump.get());
                            });
}

//! regularized smooth wrinkle (q^, eta, 0.., h + phi) in R^{2n}
inline auto regularize_smooth(int n, std::shared_ptr<reg_bump_t const> bump) -> map_descriptor_t
{
    require(n >= 1 && bump != nullptr, error_kind::precondition_failed, "regularized smooth wrinkle needs n >= 1 and a bump");
    return detail::make_map("regularized-smooth-wrinkle?n=" + std::to_string(n), n, target_kind::euclid, 2 * n,
                            [n, bump](vec_t const& q) { return detail::smooth_core_jet(n, n, -1.0, q, bump.get()); });
}

// --------------------------------------------------------------------------------------------------------------------
// Cusp Model and its Sharpening
// --------------------------------------------------------------------------------------------------------------------

//! a two-variable cutoff with all partials up to second order
struct field2_t
{
    double f = 0.0, fx = 0.0, fy = 0.0, fxx = 0.0, fxy = 0.0, fyy = 0.0;
};

//! a(x) = S((2 delta - |x|)/delta): 1 on |x| <= delta, 0 on |x| >= 2 delta
inline auto plateau_profile(double x, double delta) noexcept -> scalar3_t
{
    double const sgn = x < 0.0 ? -1.0 : 1.0;
    auto const s = smooth_step((2.0 * delta - std::abs(x)) / delta);
    return {s.f, -sgn * s.d1 / delta, s.d2 / (delta * delta)};
}

struct sharpening_params_t
{
    int n = 2;
    double delta = 0.1;
    double epsilon = 0.1;
    double t = 1.0;

    auto validate() const -> void
    {
        require(delta > 0.0 && delta < 0.25, error_kind::parameter_out_of_range, "sharpening needs 0 < delta < 1/4");
        require(epsilon > 0.0 && epsilon <= 1.0, error_kind::parameter_out_of_range, "sharpening needs 0 < eps <= 1");
        require(t >= 0.0 && t <= 1.0, error_kind::parameter_out_of_range, "sharpening time must lie in [0, 1]");
    }
};

/**
    cutoff of the cusp sharpening: psi_t(x, y) = 1 - t (1 - eps) a(x) B(y)

    a is the plateau profile in the normal coordinate and B(y) = S((1 - delta - y)/delta) cuts off in the radius of
    the transverse coordinates. So psi_t = 1 - t + t psi with psi = eps on the inner box and psi = 1 outside
    [-2 delta, 2 delta] x [0, 1 - delta], and d(psi)/dy = 0 for y < 1 - 2 delta.
*/
inline auto cusp_cutoff(sharpening_params_t const& p, double x, double y) noexcept -> field2_t
{
    double const amp = p.t * (1.0 - p.epsilon);
    auto const a = plateau_profile(x, p.delta);
    auto const b = step_at(y, 1.0 - p.delta, -p.delta);
    field2_t f;
    f.f = 1.0 - amp * a.f * b.f;
    f.fx = -amp * a.d1 * b.f;
    f.fy = -amp * a.f * b.d1;
    f.fxx = -amp * a.d2 * b.f;
    f.fxy = -amp * a.d1 * b.d1;
    f.fyy = -amp * a.f * b.d2;
    return f;
}

namespace detail {

inline auto cusp_jet(sharpening_params_t const& p, vec_t const& q, bool lift) -> jet_t
{
    int const n = p.n;
    double const x = q[n - 1];
    double const y = std::sqrt(hat_norm2(q, n));
    field2_t const psi = cusp_cutoff(p, x, y);
    double const x2 = x * x, x3 = x2 * x, x4 = x2 * x2, x5 = x4 * x;

    int const m = lift ? 2 * n + 1 : 2 * n;
    jet_t j;
    j.value = vec_t::Zero(m);
    j.jacobian = mat_t::Zero(m, n);
    for (int i = 0; i < n - 1; ++i)
    {
        j.value[i] = q[i];
        j.jacobian(i, i) = 1.0;
    }
    j.value[n - 1] = x2;
    j.jacobian(n - 1, n - 1) = 2.0 * x;

    bool const radial = y > 0.0 && (psi.fy != 0.0 || psi.fyy != 0.0 || psi.fxy != 0.0);
    for (int k = 0; k < n - 1 && radial; ++k)
    {
        int const row = n + k;
        double const uk = q[k] / y;
        j.value[row] = 0.4 * psi.fy * uk * x5;
        for (int i = 0; i < n - 1; ++i)
        {
            double const ui = q[i] / y;
            double const dik = i == k ? 1.0 : 0.0;
            j.jacobian(row, i) = 0.4 * x5 * (psi.fyy * ui * uk + psi.fy * (dik - ui * uk) / y);
        }
        j.jacobian(row, n - 1) = 0.4 * uk * (psi.fxy * x5 + 5.0 * psi.fy * x4);
    }

    j.value[2 * n - 1] = 0.2 * psi.fx * x4 + psi.f * x3;
    j.jacobian(2 * n - 1, n - 1) = 0.2 * psi.fxx * x4 + 1.8 * psi.fx * x3 + 3.0 * psi.f * x2;
    for (int i = 0; i < n - 1 && radial; ++i)
        j.jacobian(2 * n - 1, i) = (q[i] / y) * (0.2 * psi.fxy * x4 + psi.fy * x3);

    if (lift)
    {
        j.value[2 * n] = 0.4 * psi.f * x5;
        j.jacobian(2 * n, n - 1) = 0.4 * (psi.fx * x5 + 5.0 * psi.f * x4);
        for (int i = 0; i < n - 1 && radial; ++i) j.jacobian(2 * n, i) = 0.4 * psi.fy * (q[i] / y) * x5;
    }
    return j;
}

} // namespace detail

//! cusp model C_n(q) = (q^, q_n^2, 0, .., q_n^3), lifted with z = (2/5) q_n^5
inline auto cusp_model(int n, bool lift = false) -> map_descriptor_t
{
    require(n >= 1, error_kind::parameter_out_of_range, "cusp model needs n >= 1");
    sharpening_params_t p{n, 0.1, 1.0, 0.0};
    std::string const name = std::string(lift ? "legendrian-cusp" : "cusp") + "?n=" + std::to_string(n);
    return detail::make_map(name, n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * n + 1 : 2 * n,
                            [p, lift](vec_t const& q) { return detail::cusp_jet(p, q, lift); });
}

/**
    sharpened cusp C_{n,t}

    Generated by the front (q^, q_n^2) -> (2/5) psi_t q_n^5, so the p-coordinates are read off the front and the
    family is exact for every t. At t = 0 it is the cusp model; at t = 1 it equals eps times the cusp model on the
    inner box |q_n| < delta, |q^| < 1 - 2 delta; it never moves outside |q_n| <= 2 delta, |q^| <= 1 - delta.
*/
inline auto cusp_sharpening(sharpening_params_t const& p, bool lift = false) -> map_descriptor_t
{
    p.validate();
    require(p.n >= 1, error_kind::parameter_out_of_range, "cusp sharpening needs n >= 1");
    std::string const name = std::string(lift ? "legendrian-cusp-sharpening" : "cusp-sharpening") +
                             "?n=" + std::to_string(p.n);
    return detail::make_map(name, p.n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * p.n + 1 : 2 * p.n,
                            [p, lift](vec_t const& q) { return detail::cusp_jet(p, q, lift); });
}

// --------------------------------------------------------------------------------------------------------------------
// Swallowtail Model and its Sharpening
// --------------------------------------------------------------------------------------------------------------------

/**
    the birth/death of zig-zags in two variables (x, y) = (q_{n-1}, q_n)

    tau = y^3 - 3 x y, g = int_0^y (u^2 - x)^2 du, G = int_0^y g d(tau)/dy du. Partials are exact polynomials.
*/
struct swallowtail_fields_t
{
    double tau, tau_x, tau_y;
    double g, g_x, g_y, g_xx, g_xy;
    double G, G_x, G_y, G_xx, G_xy;
};

inline auto swallowtail_core(double x, double y) noexcept -> swallowtail_fields_t
{
    double const y2 = y * y, y3 = y2 * y, y4 = y2 * y2, y5 = y4 * y, y6 = y4 * y2, y8 = y4 * y4;
    double const x2 = x * x, x3 = x2 * x;
    swallowtail_fields_t f{};
    f.tau = y3 - 3.0 * x * y;
    f.tau_x = -3.0 * y;
    f.tau_y = 3.0 * (y2 - x);
    f.g = x2 * y - (2.0 / 3.0) * x * y3 + y5 / 5.0;
    f.g_x = 2.0 * x * y - (2.0 / 3.0) * y3;
    f.g_y = (y2 - x) * (y2 - x);
    f.g_xx = 2.0 * y;
    f.g_xy = -2.0 * (y2 - x);
    f.G = -1.5 * x3 * y2 + 1.25 * x2 * y4 - (13.0 / 30.0) * x * y6 + (3.0 / 40.0) * y8;
    f.G_x = -4.5 * x2 * y2 + 2.5 * x * y4 - (13.0 / 30.0) * y6;
    f.G_y = f.g * f.tau_y;
    f.G_xx = -9.0 * x * y2 + 2.5 * y4;
    f.G_xy = f.g_x * f.tau_y - 3.0 * f.g;
    return f;
}

/**
    cutoff of the swallowtail sharpening and the quotient omega = (d phi/dy) / (d tau/dy)

    phi = 1 - t (1 - eps) a(x) b(r) where a is the plateau profile, b(r) = S(1 - r) and r measures |y| between delta
    and 2 delta in units of the generating function: r = (g(x, |y|) - g(x, delta)) / (g(x, 2 delta) - g(x, delta)).
    Since dg/dy = (y^2 - x)^2 = (d tau/dy)^2 / 9, d(phi)/dy carries the factor (y^2 - x)^2 and omega is smooth across
    the parabola y^2 = x where d(tau)/dy vanishes. For |y| < delta we have r < 0, so d(phi)/dy = 0 there.
*/
struct swallowtail_cutoff_t
{
    double phi, phi_x, phi_y, phi_xx, phi_xy;
    double omega, omega_x, omega_y;
};

inline auto swallowtail_cutoff(sharpening_params_t const& p, double x, double y) noexcept -> swallowtail_cutoff_t
{
    double const d = p.delta;
    double const amp = p.t * (1.0 - p.epsilon);
    double const sg = y < 0.0 ? -1.0 : 1.0;
    double const ay = std::abs(y);

    auto const gf = swallowtail_core(x, ay);
    double const g1 = x * x * d - (2.0 / 3.0) * x * d * d * d + std::pow(d, 5) / 5.0;
    double const g2 = x * x * 2.0 * d - (2.0 / 3.0) * x * 8.0 * d * d * d + std::pow(2.0 * d, 5) / 5.0;
    double const g1x = 2.0 * x * d - (2.0 / 3.0) * d * d * d;
    double const g1xx = 2.0 * d;
    double const D = g2 - g1;
    double const Dx = 2.0 * x * d - (14.0 / 3.0) * d * d * d;
    double const Dxx = 2.0 * d;

    // r and its partials; with y' = |y|, d/dy = sg d/dy'
    double const r = (gf.g - g1) / D;
    double const r_x = (gf.g_x - g1x - r * Dx) / D;
    double const r_y = sg * gf.g_y / D;
    double const r_xx = (gf.g_xx - g1xx - 2.0 * r_x * Dx - r * Dxx) / D;
    double const r_xy = (sg * gf.g_xy - r_y * Dx) / D;

    double const w = ay * ay - x; // y^2 - x
    double const m = sg * w / D;
    double const m_x = sg * (-1.0 / D - w * Dx / (D * D));
    double const m_y = 2.0 * ay / D;

    auto const a = plateau_profile(x, d);
    auto const s = smooth_step(1.0 - r);
    double const b = s.f, b1 = -s.d1, b2 = s.d2;

    swallowtail_cutoff_t c{};
    c.phi = 1.0 - amp * a.f * b;
    c.phi_x = -amp * (a.d1 * b + a.f * b1 * r_x);
    c.phi_xx = -amp * (a.d2 * b + 2.0 * a.d1 * b1 * r_x + a.f * b2 * r_x * r_x + a.f * b1 * r_xx);
    c.phi_y = -amp * a.f * b1 * r_y;
    c.phi_xy = -amp * (a.d1 * b1 * r_y + a.f * b2 * r_x * r_y + a.f * b1 * r_xy);
    double const k = -amp / 3.0;
    c.omega = k * a.f * b1 * m;
    c.omega_x = k * (a.d1 * b1 * m + a.f * b2 * r_x * m + a.f * b1 * m_x);
    c.omega_y = k * (a.f * b2 * r_y * m + a.f * b1 * m_y);
    return c;
}

namespace detail {

inline auto swallowtail_jet(sharpening_params_t const& p, vec_t const& q, bool lift) -> jet_t
{
    int const n = p.n;
    double const x = q[n - 2];
    double const y = q[n - 1];
    auto const f = swallowtail_core(x, y);
    auto const c = swallowtail_cutoff(p, x, y);

    // p-coordinates read off the front z = phi G over (x, tau)
    double const Py = c.omega * f.G + c.phi * f.g;
    double const Py_x = c.omega_x * f.G + c.omega * f.G_x + c.phi_x * f.g + c.phi * f.g_x;
    double const Py_y = c.omega_y * f.G + 2.0 * c.omega * f.g * f.tau_y + c.phi * f.g_y;
    double const Px = c.phi_x * f.G + c.phi * f.G_x - Py * f.tau_x;
    double const Px_x = c.phi_xx * f.G + 2.0 * c.phi_x * f.G_x + c.phi * f.G_xx - Py_x * f.tau_x;
    double const Px_y = c.phi_xy * f.G + c.phi_x * f.G_y + c.phi_y * f.G_x + c.phi * f.G_xy - Py_y * f.tau_x + 3.0 * Py;

    int const m = lift ? 2 * n + 1 : 2 * n;
    jet_t j;
    j.value = vec_t::Zero(m);
    j.jacobian = mat_t::Zero(m, n);
    for (int i = 0; i < n - 1; ++i)
    {
        j.value[i] = q[i];
        j.jacobian(i, i) = 1.0;
    }
    j.value[n - 1] = f.tau;
    j.jacobian(n - 1, n - 2) = f.tau_x;
    j.jacobian(n - 1, n - 1) = f.tau_y;
    j.value[2 * n - 2] = Px;
    j.jacobian(2 * n - 2, n - 2) = Px_x;
    j.jacobian(2 * n - 2, n - 1) = Px_y;
    j.value[2 * n - 1] = Py;
    j.jacobian(2 * n - 1, n - 2) = Py_x;
    j.jacobian(2 * n - 1, n - 1) = Py_y;
    if (lift)
    {
        j.value[2 * n] = c.phi * f.G;
        j.jacobian(2 * n, n - 2) = c.phi_x * f.G + c.phi * f.G_x;
        j.jacobian(2 * n, n - 1) = c.phi_y * f.G + c.phi * f.G_y;
    }
    return j;
}

} // namespace detail

//! swallowtail model G_n on R^{n-2} x R^2 (flat chart of the sphere factor), lifted with z = G
inline auto swallowtail_model(int n, bool lift = false) -> map_descriptor_t
{
    require(n >= 2, error_kind::parameter_out_of_range, "swallowtail model needs n >= 2");
    sharpening_params_t p{n, 0.1, 1.0, 0.0};
    std::string const name = std::string(lift ? "legendrian-swallowtail" : "swallowtail") + "?n=" + std::to_string(n);
    return detail::make_map(name, n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * n + 1 : 2 * n,
                            [p, lift](vec_t const& q) { return detail::swallowtail_jet(p, q, lift); });
}

/**
    sharpened swallowtail G_{n,t}, generated by the front (q~, x, tau) -> phi_t G

    Equal to the model outside [-2 delta, 2 delta]^2 and to eps times the model on [-delta, delta]^2 at t = 1.
*/
inline auto swallowtail_sharpening(sharpening_params_t const& p, bool lift = false) -> map_descriptor_t
{
    p.validate();
    require(p.n >= 2, error_kind::parameter_out_of_range, "swallowtail sharpening needs n >= 2");
    std::string const name = std::string(lift ? "legendrian-swallowtail-sharpening" : "swallowtail-sharpening") +
                             "?n=" + std::to_string(p.n);
    return detail::make_map(name, p.n, lift ? target_kind::jet1 : target_kind::cotangent, lift ? 2 * p.n + 1 : 2 * p.n,
                            [p, lift](vec_t const& q) { return detail::swallowtail_jet(p, q, lift); });
}

// --------------------------------------------------------------------------------------------------------------------
// Sharpening Distances
// --------------------------------------------------------------------------------------------------------------------

enum class sharpening_kind
{
    cusp,
    swallowtail,
};

//! sup over samples of max(|f - g|, |df - dg|) for two maps with equal shapes
inline auto c1_distance(map_descriptor_t const& a, map_descriptor_t const& b, std::vector<vec_t> const& samples) -> double
{
    std::vector<double> worst(samples.size(), 0.0);
    parallel_for(samples.size(), [&](std::size_t i) {
        jet_t const ja = a.evaluate(samples[i]);
        jet_t const jb = b.evaluate(samples[i]);
        double const v = (ja.value - jb.value).cwiseAbs().maxCoeff();
        double const d = (ja.jacobian - jb.jacobian).cwiseAbs().maxCoeff();
        worst[i] = std::max(v, d);
    });
    return samples.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

/**
    sample set covering the support of a two-dimensional sharpening at scale delta

    Cusp: q_1 in [0, 1] (the family is even in q_1), refined on the radial cutoff layer [1 - 3 delta, 1], times
    q_2 in [-2.5 delta, 2.5 delta]. Swallowtail: [-2.5 delta, 2.5 delta]^2. The per-axis counts are fixed so the
    relative resolution is the same at every delta.
*/
inline auto sharpening_samples(sharpening_kind kind, double delta, int count = 161) -> std::vector<vec_t>
{
    std::vector<vec_t> out;
    std::vector<double> normal(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) normal[static_cast<std::size_t>(i)] = -2.5 * delta + 5.0 * delta * i / (count - 1);
    if (kind == sharpening_kind::swallowtail)
    {
        for (double x : normal)
            for (double y : normal)
            {
                vec_t q(2);
                q << x, y;
                out.push_back(q);
            }
        return out;
    }
    std::vector<double> radial;
    int const inner = count / 4;
    for (int i = 0; i < inner; ++i) radial.push_back((1.0 - 3.0 * delta) * i / inner);
    for (int i = 0; i < count; ++i) radial.push_back(1.0 - 3.0 * delta + 3.0 * delta * i / (count - 1));
    for (double y : radial)
        for (double x : normal)
        {
            vec_t q(2);
            q << y, x;
            out.push_back(q);
        }
    return out;
}

//! measured sup C^1 distance between the n = 2 sharpening at (delta, eps, t) and its base model
inline auto sharpening_c1_distance(sharpening_kind kind, double delta, double epsilon, double t, int count = 161) -> double
{
    sharpening_params_t const p{2, delta, epsilon, t};
    auto const samples = sharpening_samples(kind, delta, count);
    if (kind == sharpening_kind::cusp) return c1_distance(cusp_sharpening(p), cusp_model(2), samples);
    return c1_distance(swallowtail_sharpening(p), swallowtail_model(2), samples);
}

//! measured derivative constants of the sharpening cutoff: max |d psi| delta and max |d^2 psi| delta^2
inline auto sharpening_bump_spec(sharpening_kind kind, double delta, double epsilon) -> bump_spec_t
{
    sharpening_params_t const p{2, delta, epsilon, 1.0};
    p.validate();
    auto const samples = sharpening_samples(kind, delta, 121);
    double first = 0.0, second = 0.0;
    for (auto const& q : samples)
    {
        if (kind == sharpening_kind::cusp)
        {
            auto const c = cusp_cutoff(p, q[1], std::abs(q[0]));
            first = std::max({first, std::abs(c.fx), std::abs(c.fy)});
            second = std::max({second, std::abs(c.fxx), std::abs(c.fxy), std::abs(c.fyy)});
        }
        else
        {
            auto const c = swallowtail_cutoff(p, q[0], q[1]);
            first = std::max({first, std::abs(c.phi_x), std::abs(c.phi_y)});
            second = std::max({second, std::abs(c.phi_xx), std::abs(c.phi_xy)});
        }
    }
    bump_spec_t s;
    s.kind = kind == sharpening_kind::cusp ? bump_kind::sharpen_psi : bump_kind::sharpen_phi;
    s.delta = delta;
    s.epsilon = epsilon;
    s.amplitude = 1.0 - epsilon;
    s.first_derivative_constant = first * delta;
    s.second_derivative_constant = second * delta * delta;
    return s;
}

} // namespace lw
