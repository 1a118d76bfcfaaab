// SPDX-License-Identifier: MIT
/**
    \file
    \brief wrinkling engine: zig-zags, the oscillator family, the box models, the flow, the cover and convergence
*/

#include <lw/wrinkling.hpp>
#include <gtest/gtest.h>
#include <random>

using namespace lw;

namespace {

auto point(std::initializer_list<double> xs) -> vec_t
{
    vec_t v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

auto standard_form(int n) -> mat_t
{
    mat_t omega = mat_t::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = mat_t::Identity(n, n);
    omega.bottomLeftCorner(n, n) = -mat_t::Identity(n, n);
    return omega;
}

auto test_oscillator(int N, double sigma) -> std::shared_ptr<oscillator_t const>
{
    auto params = scheduled_params(N, pi / 10.0, 0.1);
    params.sigma = sigma;
    return std::make_shared<oscillator_t const>(params, build_zeta(sigma, params.alpha));
}

// independent oracle: the zeta primitive by quadrature split at the piece boundaries
auto primitive_oracle(zeta_family_t const& z, double s, double x) -> double
{
    auto const l = z.layout(s);
    return integrate_split([&](double v) { return z.eval(l, v).value; }, 0.0, x, {l.x_c, l.x_e, 0.25}, 1e-15);
}

} // namespace

// --------------------------------------------------------------------------------------------------------------------
// Zig-zag
// --------------------------------------------------------------------------------------------------------------------

TEST(zigzag, cusp_points_sit_at_s_to_the_five_halves)
{
    for (double s : {0.1, 0.5, 1.0})
    {
        double const u = std::sqrt(s);
        EXPECT_NEAR(zigzag_x(s, u), std::pow(s, 2.5), 1e-15);
        EXPECT_NEAR(zigzag_y(s, u), -std::pow(s, 1.5), 1e-15);
        EXPECT_NEAR(zigzag_partials(s, u).x_u, 0.0, 1e-15);
    }
}

TEST(zigzag, closed_forms_match_their_integrals)
{
    for (double s : {-0.7, 0.0, 0.4, 1.0})
        for (double u : {-1.3, 0.2, 0.9, 1.6})
        {
            double const x = integrate([s](double w) { return 1.875 * (w * w - s) * (w * w - s); }, 0.0, u, 1e-13);
            EXPECT_NEAR(zigzag_x(s, u), x, 1e-13);
            // r_u = x_u y_s - x_s y_u, integrated from 0
            double const r = integrate(
                [s](double w) {
                    auto const d = zigzag_partials(s, w);
                    return d.x_u * d.y_s - d.x_s * d.y_u;
                },
                0.0, u, 1e-13);
            EXPECT_NEAR(zigzag_r(s, u), r, 1e-12);
        }
}

TEST(zigzag, scaled_curve_is_lagrangian_with_exact_jacobian)
{
    auto const m = zigzag_lagrangian(0.4, 7);
    std::mt19937_64 rng{3};
    std::uniform_real_distribution<double> u{-1.0, 1.0};
    for (int k = 0; k < 200; ++k)
    {
        vec_t const p = point({u(rng), 1.5 * u(rng)});
        EXPECT_LT(jacobian_discrepancy(m, p), 1e-8);
        EXPECT_LT(symplectic_defect(m.evaluate(p).jacobian, 2), 1e-14);
    }
}

TEST(zigzag, inversion_round_trips)
{
    for (double s : {-1.0, -0.2, 0.0, 0.3, 1.0})
        for (double X : {-3.0, -0.5, -1e-6, 0.0, 2e-7, 0.01, 0.7, 4.0})
        {
            double const u = zigzag_invert(s, X);
            EXPECT_NEAR(zigzag_x(s, u), X, 1e-14 * std::max(1.0, std::abs(X)));
        }
}

// --------------------------------------------------------------------------------------------------------------------
// Oscillator Family
// --------------------------------------------------------------------------------------------------------------------

TEST(oscillator, family_is_odd_and_periodic)
{
    auto const z = build_zeta(0.05, 0.3);
    for (double s : {-1.0, 0.0, 0.2, 1.0})
        for (double x : {0.01, 0.13, 0.3, 0.49})
        {
            auto const a = z->eval(s, x);
            auto const b = z->eval(s, -x);
            auto const c = z->eval(s, x + 3.0);
            EXPECT_NEAR(a.value, -b.value, 1e-15);
            EXPECT_NEAR(a.dx, b.dx, 1e-12);
            EXPECT_NEAR(a.value, c.value, 1e-12);
        }
}

TEST(oscillator, core_is_the_zigzag_graph)
{
    double const sigma = 0.05;
    auto const z = build_zeta(sigma, 0.3);
    for (double s : {0.3, 1.0})
    {
        auto const l = z->layout(s);
        for (double f : {0.1, 0.5, 0.99})
        {
            double const x = f * l.x_c;
            double const u = zigzag_invert(s, x / sigma);
            EXPECT_NEAR(z->eval(l, x).value, zigzag_y(s, u), 1e-14);
        }
    }
}

TEST(oscillator, constraints_hold_and_sign_tail)
{
    for (int N : {5, 9, 17, 33})
        for (double sigma : {0.1, 0.01, 1e-4})
        {
            auto const z = build_zeta(sigma, std::pow(N, -2.0 / 3.0));
            for (double s : {-1.0, 0.0, 1.0})
                for (double x = 0.25; x <= 0.5; x += 0.01) EXPECT_LE(z->eval(s, x).value, 1e-14);
            // s = 1 tail slope band
            for (double x = 2.0 * sigma + 1e-3; x <= 0.5; x += 0.01)
            {
                double const d = z->eval(1.0, x).dx;
                EXPECT_GE(d, 1.0 - 1e-9);
                EXPECT_LE(d, 2.0 + 1e-9);
            }
        }
}

TEST(oscillator, rejects_oversized_sigma)
{
    try
    {
        build_zeta(0.3, 0.3);
        FAIL() << "sigma = 0.3 accepted";
    }
    catch (error const& e)
    {
        EXPECT_EQ(e.kind(), error_kind::infeasible);
    }
}

TEST(oscillator, primitive_matches_quadrature)
{
    auto const z = build_zeta(0.05, 0.3);
    for (double s : {-1.0, -0.05, 0.0, 0.1, 0.5, 1.0})
        for (double x : {0.001, 0.04, 0.2, 0.37, 0.5})
            EXPECT_NEAR(z->primitive(z->layout(s), x), primitive_oracle(*z, s, x), 1e-14) << s << " " << x;
    // even and periodic
    auto const l = z->layout(0.6);
    EXPECT_NEAR(z->primitive(l, -0.3), z->primitive(l, 0.3), 1e-15);
    EXPECT_NEAR(z->primitive(l, 2.3), z->primitive(l, 0.3), 1e-13);
}

TEST(oscillator, axial_primitive_matches_quadrature_and_vanishes_at_both_ends)
{
    auto const osc = test_oscillator(5, 0.05);
    double const k = osc->frequency();
    for (double s : {-0.1, 0.4, 1.0})
    {
        auto const l = osc->zeta().layout(s);
        auto integrand = [&](double u) { return osc->psi_profile(std::abs(u)).f * osc->zeta().eval(l, k * u).value; };
        // breakpoints at the cusps and piece boundaries of every period
        std::vector<double> breaks;
        for (int j = -6; j <= 6; ++j)
            for (double off : {0.0, l.x_c, l.x_e, 0.25, -l.x_c, -l.x_e, -0.25, s > 0 ? 0.05 * std::pow(s, 2.5) : 0.0,
                               s > 0 ? -0.05 * std::pow(s, 2.5) : 0.0})
                breaks.push_back((j + off) / k);
        for (double y : {-0.97, -0.4, 0.0, 0.33, 0.98})
            EXPECT_NEAR(osc->axial_primitive(s, y), integrate_split(integrand, -1.0, y, breaks, 1e-13), 1e-11);
        EXPECT_NEAR(osc->axial_primitive(s, -1.0), 0.0, 1e-15);
        EXPECT_NEAR(osc->axial_primitive(s, 1.0), 0.0, 1e-15);
    }
}

// --------------------------------------------------------------------------------------------------------------------
// Box Models
// --------------------------------------------------------------------------------------------------------------------

TEST(box_model, lagrangian_and_legendrian_on_the_unit_box)
{
    auto const osc = test_oscillator(5, 0.05);
    for (int n : {1, 2})
        for (double t : {0.0, 0.5, 0.82, 0.86, 0.95})
        {
            auto const domain = cube_domain(n, -0.999, 0.999, n == 1 ? 512 : 48);
            EXPECT_LT(pullback_residual(lagrangian_ell(osc, unit_box(n), t, n, false), domain, form_kind::symplectic), 1e-12);
            EXPECT_LT(pullback_residual(lagrangian_ell(osc, unit_box(n), t, n, true), domain, form_kind::contact), 1e-12);
        }
}

TEST(box_model, primitive_vanishes_on_top_and_bottom)
{
    auto const osc = test_oscillator(9, 0.02);
    auto const m = lagrangian_ell(osc, unit_box(2), 0.3, 2, true);
    for (double x : {-0.5, 0.1, 0.7})
        for (double y : {-1.0, 1.0})
        {
            auto const j = m.evaluate(point({x, y}));
            EXPECT_NEAR(j.value[4], 0.0, 1e-14);
            EXPECT_NEAR(j.value[2], 0.0, 1e-14);
            EXPECT_NEAR(j.value[3], 0.0, 1e-14);
        }
}

TEST(box_model, jacobian_matches_differences_away_from_cusps)
{
    auto const osc = test_oscillator(5, 0.05);
    double const k = osc->frequency();
    std::mt19937_64 rng{5};
    std::uniform_real_distribution<double> u{-1.0, 1.0};
    int checked = 0;
    while (checked < 200)
    {
        double const t = 0.6 * u(rng);
        vec_t const q = point({0.75 * u(rng), 0.95 * u(rng)});
        double const r = std::hypot(t, q[0]);
        double const s = osc->eta_profile(r).f;
        double const x = k * q[1];
        double const cell = x - std::round(x);
        double const cusp = s > 0.0 ? 0.05 * std::pow(s, 2.5) : 0.0;
        if (std::min(std::abs(std::abs(cell) - cusp), std::abs(cell)) < 0.02) continue;
        ++checked;
        auto const m = lagrangian_ell(osc, unit_box(2), t, 2, true);
        mat_t const analytic = m.evaluate(q).jacobian;
        mat_t numeric(5, 2);
        double const h = 1e-6;
        for (int i = 0; i < 2; ++i)
        {
            vec_t a = q, b = q;
            a[i] -= h;
            b[i] += h;
            numeric.col(i) = (m.evaluate(b).value - m.evaluate(a).value) / (2.0 * h);
        }
        EXPECT_LT((analytic - numeric).cwiseAbs().maxCoeff() / std::max(1.0, analytic.cwiseAbs().maxCoeff()), 1e-5);
    }
}

TEST(box_model, scaling_follows_the_box)
{
    auto const osc = test_oscillator(5, 0.05);
    box_t box = unit_box(1);
    box.t = 0.4;
    box.qn = 0.2;
    box.b = 0.5;
    box.c = 0.3;
    vec_t const q = point({0.2 + 0.3 * 0.41});
    auto const scaled = box_model_jet(*osc, box, 0.4 + 0.5 * 0.3, q, true);
    auto const unit = box_model_jet(*osc, unit_box(1), 0.3, point({0.41}), true);
    EXPECT_NEAR(scaled.value[1], unit.value[1], 1e-15);
    EXPECT_NEAR(scaled.value[2], 0.3 * unit.value[2], 1e-15);
    EXPECT_NEAR(scaled.jacobian(1, 0), unit.jacobian(1, 0) / 0.3, 1e-10);
}

// --------------------------------------------------------------------------------------------------------------------
// Flow
// --------------------------------------------------------------------------------------------------------------------

TEST(flow, identity_on_the_zero_section)
{
    auto const field = bump_angle_field(2, pi / 3.0);
    vec_t const q = point({0.1, -0.2});
    auto const [qq, pp] = hamiltonian_flow(field, 1.0, 1.0, q, vec_t::Zero(2), pi / 10.0);
    EXPECT_LE((qq - q).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(pp.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(flow, time_one_map_is_symplectic)
{
    auto const field = bump_angle_field(2, pi / 3.0);
    std::mt19937_64 rng{9};
    std::uniform_real_distribution<double> u{-1.0, 1.0};
    mat_t const omega = standard_form(2);
    for (int k = 0; k < 20; ++k)
    {
        vec_t x(4);
        x << 0.2 * u(rng), 0.2 * u(rng), 0.1 * u(rng), 0.1 * u(rng);
        mat_t J(4, 4);
        double const h = 1e-5;
        auto map = [&](vec_t const& y) {
            auto const [qq, pp] = hamiltonian_flow(field, 1.0, 1.0, y.head(2), y.tail(2), pi / 10.0);
            vec_t out(4);
            out << qq, pp;
            return out;
        };
        for (int i = 0; i < 4; ++i)
        {
            vec_t a = x, b = x;
            a[i] -= h;
            b[i] += h;
            J.col(i) = (map(b) - map(a)) / (2.0 * h);
        }
        EXPECT_LT((J.transpose() * omega * J - omega).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(flow, fibre_direction_is_tilted_to_the_target_angle)
{
    auto const field = bump_angle_field(1, pi / 3.0);
    for (double q : {-0.3, 0.0, 0.25})
    {
        vec_t const base = point({q});
        double const h = 1e-6;
        auto const [qa, pa] = hamiltonian_flow(field, 1.0, 1.0, base, point({-h}), pi / 10.0);
        auto const [qb, pb] = hamiltonian_flow(field, 1.0, 1.0, base, point({h}), pi / 10.0);
        double const lam = field(1.0, base);
        EXPECT_NEAR((qb[0] - qa[0]) / (2.0 * h), std::cos(lam) / std::sin(lam), 1e-6);
        EXPECT_NEAR((pb[0] - pa[0]) / (2.0 * h), 1.0, 1e-6);
    }
}

TEST(flow, closed_form_is_exact_when_lambda_ignores_the_last_coordinate)
{
    angle_field_t field;
    field.n = 2;
    field.value = [](double t, vec_t const& q) { return t * (0.9 + 0.3 * std::sin(q[0])); };
    vec_t const q = point({0.3, 0.1});
    vec_t const p = point({0.2, -0.4});
    auto const [qa, pa] = hamiltonian_flow(field, 1.0, 1.0, q, p, 0.2);
    auto const [qb, pb] = closed_form_flow(field, 1.0, 1.0, q, p, 0.2);
    EXPECT_LT((qa - qb).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((pa - pb).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(flow, refuses_points_outside_omega_tau)
{
    auto const field = bump_angle_field(1, pi / 3.0);
    try
    {
        hamiltonian_flow(field, 0.05, 1.0, point({0.0}), point({0.1}), pi / 10.0);
        FAIL() << "flow accepted |lambda| <= tau";
    }
    catch (error const& e)
    {
        EXPECT_EQ(e.kind(), error_kind::outside_domain);
    }
}

// --------------------------------------------------------------------------------------------------------------------
// Box Cover
// --------------------------------------------------------------------------------------------------------------------

TEST(box_cover, zero_rotation_needs_no_boxes)
{
    auto const cover = build_box_cover(zero_angle_field(1), scheduled_params(5, pi / 10.0, 0.1));
    EXPECT_TRUE(cover.boxes.empty());
}

TEST(box_cover, boxes_are_special_and_cover_omega_two_tau)
{
    for (double amplitude : {pi / 3.0, -pi / 3.0})
    {
        auto const field = bump_angle_field(1, amplitude);
        auto const params = scheduled_params(9, pi / 10.0, 0.1);
        auto const cover = build_box_cover(field, params);
        ASSERT_FALSE(cover.boxes.empty());
        double const strip = 1.0 / (4.0 * params.N + 2.0);
        for (auto const& box : cover.boxes)
        {
            EXPECT_EQ(box.sign, amplitude > 0.0 ? 1 : -1);
            for (int i = 0; i <= 20; ++i)
                for (int j = 0; j <= 100; ++j)
                {
                    double const t = box.t + box.b * (-1.0 + 2.0 * i / 20.0);
                    double const y = -1.0 + 2.0 * j / 100.0;
                    double const lam = box.sign * field.extended(t, point({box.qn + y * box.c}));
                    EXPECT_GT(lam, params.tau);
                    if (std::abs(y) >= 1.0 - strip) EXPECT_LT(lam, 2.0 * params.tau);
                }
        }
        std::mt19937_64 rng{17};
        std::uniform_real_distribution<double> u{0.0, 1.0};
        for (int k = 0; k < 20000; ++k)
        {
            double const t = 2.0 * u(rng);
            vec_t const q = point({-1.0 + 2.0 * u(rng)});
            if (std::abs(field.extended(t, q)) > 2.0 * params.tau) EXPECT_TRUE(cover.covers(t, q)) << t << " " << q[0];
        }
        EXPECT_GT(cover.sigma_limit, 0.0);
    }
}

TEST(box_cover, overlapping_lattices_are_separated)
{
    auto const field = bump_angle_field(1, pi / 3.0);
    auto const params = scheduled_params(17, pi / 10.0, 0.1);
    auto const cover = build_box_cover(field, params);
    double const sigma = 0.5 * cover.sigma_limit;
    double const step = 2.0 / (2.0 * params.N + 1.0);
    for (auto const& a : cover.boxes)
        for (auto const& b : cover.boxes)
        {
            if (&a == &b || std::abs(a.t - b.t) >= a.b + b.b) continue;
            for (int ka = -params.N; ka <= params.N; ++ka)
                for (int kb = -params.N; kb <= params.N; ++kb)
                {
                    double const ca = a.qn + a.c * ka * step, cb = b.qn + b.c * kb * step;
                    double const wa = 2.0 * sigma * a.c * step, wb = 2.0 * sigma * b.c * step;
                    EXPECT_GT(std::abs(ca - cb), wa + wb);
                }
        }
}

// --------------------------------------------------------------------------------------------------------------------
// Composite
// --------------------------------------------------------------------------------------------------------------------

TEST(composite, zero_section_outside_the_boxes)
{
    auto const field = bump_angle_field(1, pi / 3.0);
    auto const family = composite_wrinkling(field, scheduled_params(5, pi / 10.0, 0.1));
    for (double q : {-0.99, 0.97})
    {
        auto const j = family->composite_jet(0.7, point({q}));
        EXPECT_EQ(j.value[1], 0.0);
        EXPECT_NEAR(j.value[0], q, 0.0);
    }
    // at t = 0 there is no rotation and no box
    EXPECT_EQ(family->defect(0.0, point({0.1})), 0.0);
}

TEST(composite, gauss_planes_approach_the_rotation)
{
    auto const field = bump_angle_field(1, pi / 3.0);
    convergence_options_t opts;
    opts.t_grid = 11;
    opts.q_grid = 801;
    auto const rows = convergence_report(field, {5, 33}, opts);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LT(rows[1].max_defect, rows[0].max_defect);
    EXPECT_LT(rows[1].max_defect, pi / 12.0);
    EXPECT_NEAR(rows[0].gamma, 1.0 / std::sqrt(5.0), 1e-15);
    EXPECT_NEAR(rows[1].alpha, std::pow(33.0, -2.0 / 3.0), 1e-15);
}
