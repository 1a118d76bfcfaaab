// SPDX-License-Identifier: MIT
/**
    \file
    \brief local models: closed forms against quadrature, jacobians against finite differences, forms, sharpening
*/

#include <lw/models.hpp>
#include <lw/planes.hpp>
#include <gtest/gtest.h>
#include <random>

using namespace lw;
using namespace testing;

namespace {

auto point(std::initializer_list<double> xs) -> vec_t
{
    vec_t v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

auto random_points(int dim, int count, double lo, double hi, unsigned seed) -> std::vector<vec_t>
{
    std::mt19937_64 rng{seed};
    std::uniform_real_distribution<double> u{lo, hi};
    std::vector<vec_t> out;
    for (int k = 0; k < count; ++k)
    {
        vec_t q(dim);
        for (int i = 0; i < dim; ++i) q[i] = u(rng);
        out.push_back(q);
    }
    return out;
}

// independent oracle: h and H by nested quadrature of their defining integrals
auto h_oracle(double c, double x) -> double
{
    return integrate([c](double u) { return (c + u * u) * (c + u * u); }, 0.0, x, 1e-15);
}

auto H_oracle(double c, double x) -> double
{
    return integrate([c](double u) { return h_oracle(c, u) * 3.0 * (c + u * u); }, 0.0, x, 1e-14);
}

} // namespace

// --------------------------------------------------------------------------------------------------------------------
// Wrinkle Core
// --------------------------------------------------------------------------------------------------------------------

TEST(wrinkle_core, closed_forms_match_quadrature)
{
    for (auto const& q : random_points(2, 50, -1.5, 1.5, 11))
    {
        auto const f = wrinkle_core(q[0], q[1]);
        EXPECT_NEAR(f.h, h_oracle(q[0], q[1]), 1e-12);
        EXPECT_NEAR(f.H, H_oracle(q[0], q[1]), 1e-11);
        EXPECT_NEAR(f.eta, q[1] * q[1] * q[1] + 3.0 * q[0] * q[1], 1e-15);
    }
}

TEST(wrinkle_core, frozen_values_at_unit_point)
{
    auto const f = wrinkle_core(-1.0, 1.0);
    EXPECT_DOUBLE_EQ(f.eta, -2.0);
    EXPECT_NEAR(f.h, 8.0 / 15.0, 1e-15);
    EXPECT_NEAR(f.H, -73.0 / 120.0, 1e-15);
    EXPECT_NEAR(h_oracle(-1.0, 1.0), 8.0 / 15.0, 1e-14);
    EXPECT_NEAR(H_oracle(-1.0, 1.0), -73.0 / 120.0, 1e-13);
}

TEST(wrinkle_core, vanishes_on_zero_section_and_h_is_odd)
{
    for (auto const& q : random_points(2, 50, -2.0, 2.0, 12))
    {
        auto const zero = wrinkle_core(q[0], 0.0);
        EXPECT_EQ(zero.eta, 0.0);
        EXPECT_EQ(zero.h, 0.0);
        EXPECT_EQ(zero.H, 0.0);
        EXPECT_NEAR(wrinkle_core(q[0], -q[1]).h, -wrinkle_core(q[0], q[1]).h, 1e-14);
    }
}

TEST(wrinkle_core, partials_match_differences)
{
    double const e = 1e-6;
    for (auto const& q : random_points(2, 50, -1.5, 1.5, 13))
    {
        double const c = q[0], x = q[1];
        auto const f = wrinkle_core(c, x);
        auto const cp = wrinkle_core(c + e, x), cm = wrinkle_core(c - e, x);
        auto const xp = wrinkle_core(c, x + e), xm = wrinkle_core(c, x - e);
        EXPECT_NEAR(f.H_c, (cp.H - cm.H) / (2 * e), 1e-7);
        EXPECT_NEAR(f.H_x, (xp.H - xm.H) / (2 * e), 1e-7);
        EXPECT_NEAR(f.K_c, (cp.K - cm.K) / (2 * e), 1e-7);
        EXPECT_NEAR(f.K_x, (xp.K - xm.K) / (2 * e), 1e-7);
        EXPECT_NEAR(f.K, f.H_c - f.h * f.eta_c, 1e-12);
    }
}

// --------------------------------------------------------------------------------------------------------------------
// Maps
// --------------------------------------------------------------------------------------------------------------------

TEST(models, lagrangian_wrinkle_n1_at_unit_point)
{
    auto const jet = eval_jet(wrinkle_lagrangian(1, true), point({1.0}));
    EXPECT_DOUBLE_EQ(jet.value[0], -2.0);
    EXPECT_NEAR(jet.value[1], 8.0 / 15.0, 1e-15);
    EXPECT_NEAR(jet.value[2], -73.0 / 120.0, 1e-15);
}

TEST(models, lagrangian_wrinkle_is_zero_section_on_q_n_zero)
{
    auto const map = wrinkle_lagrangian(3, false);
    for (auto q : random_points(3, 20, -1.2, 1.2, 14))
    {
        q[2] = 0.0;
        vec_t const v = eval_value(map, q);
        EXPECT_EQ(v.tail(3).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(models, analytic_jacobians_match_differences)
{
    auto const bump = build_reg_bump(0.2, 0.5);
    sharpening_params_t const p{2, 0.1, 0.1, 0.7};
    std::vector<map_descriptor_t> maps{
        wrinkle_smooth(1, 1),          wrinkle_smooth(3, 2),         embryo_map(2, 2),
        wrinkle_lagrangian(2, true),   wrinkle_lagrangian(3, false), embryo_lagrangian(2, true),
        fibered_wrinkle(2, 1, point({0.4}), true),
        regularize_lagrangian(2, bump, true),
        regularize_smooth(2, bump),    cusp_model(2, true),          cusp_sharpening(p, true),
        swallowtail_model(2, true),    swallowtail_sharpening(p, true),
    };
    for (auto const& map : maps)
    {
        double worst = 0.0;
        for (auto const& q : random_points(map.domain_dim, 200, -1.2, 1.2, 15))
            worst = std::max(worst, jacobian_discrepancy(map, q));
        // sharpenings vary on the scale delta, so probe their support too
        for (auto const& q : random_points(map.domain_dim, 200, -0.25, 0.25, 16))
            worst = std::max(worst, jacobian_discrepancy(map, q));
        EXPECT_LT(worst, 1e-6) << map.name;
    }
}

TEST(models, lagrangian_models_pull_back_forms_to_zero)
{
    auto const domain = cube_domain(2, -1.5, 1.5, 64);
    EXPECT_LT(pullback_residual(wrinkle_lagrangian(2, false), domain, form_kind::symplectic), 1e-8);
    EXPECT_LT(pullback_residual(wrinkle_lagrangian(2, true), domain, form_kind::contact), 1e-8);
    EXPECT_LT(pullback_residual(embryo_lagrangian(2, true), domain, form_kind::contact), 1e-8);
    EXPECT_LT(pullback_residual(fibered_wrinkle(2, 2, point({0.3, 0.5}), true), domain, form_kind::contact), 1e-8);
    auto const bump = build_reg_bump(0.2, 0.5);
    EXPECT_LT(pullback_residual(regularize_lagrangian(2, bump, true), domain, form_kind::contact), 1e-8);
    sharpening_params_t const p{2, 0.1, 0.01, 1.0};
    auto const near = cube_domain(2, -0.3, 0.3, 64);
    EXPECT_LT(pullback_residual(swallowtail_sharpening(p, true), near, form_kind::contact), 1e-8);
    auto const shell = cube_domain(2, -1.0, 1.0, 64);
    EXPECT_LT(pullback_residual(cusp_sharpening(p, true), shell, form_kind::contact), 1e-8);
}

TEST(models, wrinkle_singular_locus_is_unit_sphere)
{
    auto const map = wrinkle_smooth(2, 2);
    for (auto const& q : random_points(2, 200, -1.5, 1.5, 17))
    {
        Eigen::JacobiSVD<mat_t> svd(jacobian(map, q));
        double const smallest = svd.singularValues().minCoeff();
        if (std::abs(q.norm() - 1.0) > 1e-3) EXPECT_GT(smallest, 1e-9);
        vec_t const s = q.normalized();
        Eigen::JacobiSVD<mat_t> on(jacobian(map, s));
        EXPECT_LT(on.singularValues().minCoeff(), 1e-9);
    }
}

TEST(models, embryo_has_rank_n_minus_one_at_origin)
{
    auto const jet = eval_jet(embryo_map(2, 2), point({0.0, 0.0}));
    EXPECT_EQ(jet.value.norm(), 0.0);
    Eigen::JacobiSVD<mat_t> svd(jet.jacobian, Eigen::ComputeFullV);
    EXPECT_LT(svd.singularValues()[1], 1e-12);
    EXPECT_NEAR(std::abs(svd.matrixV()(1, 1)), 1.0, 1e-12);
}

TEST(models, fibered_wrinkle_reduces_and_degenerates)
{
    auto const plain = wrinkle_lagrangian(1, false);
    auto const fibered = fibered_wrinkle(1, 1, point({0.0}));
    for (auto const& q : random_points(1, 20, -1.5, 1.5, 18))
        EXPECT_EQ((eval_value(plain, q) - eval_value(fibered, q)).norm(), 0.0);
    // at |z| = 1 the only singular point is the origin
    auto const degenerate = fibered_wrinkle(2, 1, point({1.0}));
    EXPECT_LT(jacobian(degenerate, point({0.0, 0.0})).col(1).norm(), 1e-15);
    EXPECT_GT(jacobian(degenerate, point({0.2, 0.0})).col(1).norm(), 1e-3);
}

// --------------------------------------------------------------------------------------------------------------------
// Regularization
// --------------------------------------------------------------------------------------------------------------------

TEST(regularization, rejects_out_of_range_parameters)
{
    EXPECT_THROW(build_reg_bump(0.0, 0.5), error);
    EXPECT_THROW(build_reg_bump(0.2, 1.5), error);
}

TEST(regularization, agrees_with_wrinkle_outside_shell)
{
    double const delta = 0.2;
    auto const bump = build_reg_bump(delta, 0.5);
    auto const plain = wrinkle_lagrangian(2, true);
    auto const reg = regularize_lagrangian(2, bump, true);
    for (auto const& q : random_points(2, 400, -1.6, 1.6, 19))
    {
        if (std::abs(q.squaredNorm() - 1.0) < delta) continue;
        vec_t const a = eval_value(plain, q);
        vec_t const b = eval_value(reg, q);
        EXPECT_NEAR((a - b).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    }
}

TEST(regularization, moment_matches_direct_quadrature)
{
    auto const bump = build_reg_bump(0.3, 0.8);
    for (auto const& q : random_points(2, 40, -1.2, 1.2, 20))
    {
        double const c = q[0] - 0.4, x = q[1];
        auto const r = bump->terms(c, std::abs(x));
        double const direct = integrate([&](double u) { return bump->terms(c, u).phi * 3.0 * (c + u * u); }, 0.0,
                                        std::abs(x), 1e-15);
        EXPECT_NEAR(r.Phi, direct, 1e-12);
    }
}

TEST(regularization, is_an_immersion_with_positive_slope_on_sphere)
{
    auto const bump = build_reg_bump(0.2, 0.5);
    auto const reg = regularize_lagrangian(2, bump, false);
    auto const domain = cube_domain(2, -1.3, 1.3, 128);
    double smallest = 1e300;
    for (std::size_t i = 0; i < domain.point_count(); ++i)
    {
        Eigen::JacobiSVD<mat_t> svd(jacobian(reg, domain.point(i)));
        smallest = std::min(smallest, svd.singularValues().minCoeff());
    }
    EXPECT_GT(smallest, 0.0);
    for (int i = 0; i < 64; ++i)
    {
        double const x = -1.0 + 2.0 * (i + 0.5) / 64.0;
        EXPECT_GT(wrinkle_core(-x * x, x).h_x + bump->terms(-x * x, x).phi_x, 0.0);
    }
}

// --------------------------------------------------------------------------------------------------------------------
// Sharpening
// --------------------------------------------------------------------------------------------------------------------

TEST(sharpening, rejects_out_of_range_parameters)
{
    EXPECT_THROW(cusp_sharpening({2, 0.3, 0.1, 1.0}), error);
    EXPECT_THROW(swallowtail_sharpening({2, 0.1, 0.0, 1.0}), error);
    EXPECT_THROW(cusp_sharpening({2, 0.1, 0.1, 1.5}), error);
}

TEST(sharpening, time_zero_is_the_base_model)
{
    for (double eps : {1.0, 0.1})
    {
        sharpening_params_t const p{3, 0.1, eps, 0.0};
        for (auto const& q : random_points(3, 200, -1.0, 1.0, 21))
        {
            EXPECT_EQ((eval_value(cusp_sharpening(p, true), q) - eval_value(cusp_model(3, true), q)).norm(), 0.0);
            EXPECT_EQ((eval_value(swallowtail_sharpening(p, true), q) - eval_value(swallowtail_model(3, true), q)).norm(),
                      0.0);
        }
    }
}

TEST(sharpening, cusp_inner_box_is_scaled_model)
{
    double const d = 0.1, eps = 0.1;
    sharpening_params_t const p{2, d, eps, 1.0};
    vec_t const v = eval_value(cusp_sharpening(p), point({0.0, d / 2}));
    EXPECT_NEAR(v[0], 0.0, 1e-16);
    EXPECT_NEAR(v[1], d * d / 4, 1e-16);
    EXPECT_NEAR(v[2], 0.0, 1e-16);
    EXPECT_NEAR(v[3], eps * d * d * d / 8, 1e-16);
}

TEST(sharpening, families_equal_base_outside_support)
{
    double const d = 0.05;
    sharpening_params_t const p{2, d, 0.01, 1.0};
    auto const cusp = cusp_sharpening(p, true);
    auto const base = cusp_model(2, true);
    for (auto const& q : random_points(2, 500, -1.2, 1.2, 22))
    {
        if (std::abs(q[1]) <= 2 * d && std::abs(q[0]) <= 1 - d) continue;
        EXPECT_EQ((eval_value(cusp, q) - eval_value(base, q)).norm(), 0.0);
    }
    auto const tail = swallowtail_sharpening(p, true);
    auto const model = swallowtail_model(2, true);
    for (auto const& q : random_points(2, 500, -0.3, 0.3, 23))
    {
        if (std::abs(q[0]) <= 2 * d && std::abs(q[1]) <= 2 * d) continue;
        EXPECT_EQ((eval_value(tail, q) - eval_value(model, q)).norm(), 0.0);
    }
}

TEST(sharpening, swallowtail_inner_box_is_scaled_model)
{
    double const d = 0.1, eps = 0.1;
    sharpening_params_t const p{2, d, eps, 1.0};
    for (auto const& q : random_points(2, 100, -0.99 * d, 0.99 * d, 24))
    {
        vec_t const a = eval_value(swallowtail_sharpening(p, true), q);
        vec_t const b = eval_value(swallowtail_model(2, true), q);
        EXPECT_NEAR(a[2], eps * b[2], 1e-15);
        EXPECT_NEAR(a[3], eps * b[3], 1e-15);
        EXPECT_NEAR(a[4], eps * b[4], 1e-15);
    }
}

TEST(sharpening, swallowtail_model_frozen_values)
{
    auto const f = swallowtail_core(1.0, 1.0);
    EXPECT_DOUBLE_EQ(f.tau, -2.0);
    EXPECT_NEAR(f.g, 8.0 / 15.0, 1e-15);
    EXPECT_NEAR(f.G, integrate([](double u) { return swallowtail_core(1.0, u).g * 3.0 * (u * u - 1.0); }, 0.0, 1.0, 1e-15),
                1e-13);
}

TEST(sharpening, swallowtail_is_continuous_across_the_parabola)
{
    sharpening_params_t const p{2, 0.1, 0.01, 1.0};
    auto const map = swallowtail_sharpening(p, true);
    for (double y : {0.12, 0.15, 0.18, -0.13, -0.17})
    {
        double const x = y * y;
        vec_t const lo = eval_value(map, point({x - 1e-9, y}));
        vec_t const hi = eval_value(map, point({x + 1e-9, y}));
        EXPECT_LT((lo - hi).cwiseAbs().maxCoeff(), 1e-6);
        mat_t const jl = jacobian(map, point({x - 1e-9, y}));
        mat_t const jh = jacobian(map, point({x + 1e-9, y}));
        EXPECT_LT((jl - jh).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(sharpening, front_area_condition_holds_on_normal_fibres)
{
    // the front moves only in z and returns to the base outside the support, so int (p - p0) dQ vanishes per fibre
    sharpening_params_t const p{2, 0.1, 0.1, 1.0};
    auto const cusp = cusp_sharpening(p);
    auto const base = cusp_model(2);
    for (double y : {0.0, 0.5, 0.85, 0.88})
    {
        auto integrand = [&](double x) {
            vec_t const q = point({y, x});
            return (eval_value(cusp, q)[3] - eval_value(base, q)[3]) * 2.0 * x;
        };
        EXPECT_NEAR(integrate_split(integrand, -0.3, 0.3, {-0.2, -0.1, 0.1, 0.2}, 1e-14), 0.0, 1e-12);
    }
}

TEST(sharpening, bump_spec_reports_constants)
{
    auto const a = sharpening_bump_spec(sharpening_kind::cusp, 0.1, 0.1);
    auto const b = sharpening_bump_spec(sharpening_kind::cusp, 0.05, 0.1);
    EXPECT_GT(a.first_derivative_constant, 0.0);
    // the cutoff derivatives scale exactly as 1/delta
    EXPECT_NEAR(a.first_derivative_constant, b.first_derivative_constant, 0.05 * a.first_derivative_constant);
}

TEST(sharpening, c1_distance_is_quadratic_in_delta_and_within_the_linear_bound)
{
    for (auto kind : {sharpening_kind::cusp, sharpening_kind::swallowtail})
    {
        for (double eps : {0.1, 0.01})
        {
            double previous = 0.0;
            for (double delta : {0.1, 0.05, 0.025})
            {
                double const d = sharpening_c1_distance(kind, delta, eps, 1.0);
                EXPECT_LE(d, 2.5 * delta) << "delta " << delta << " eps " << eps;
                if (previous > 0.0)
                {
                    // halving delta divides the distance by about four, not two
                    EXPECT_GT(d / previous, 0.2);
                    EXPECT_LT(d / previous, 0.27);
                }
                previous = d;
            }
        }
        // eps = 1 switches the sharpening off: the family is the base model
        EXPECT_EQ(sharpening_c1_distance(kind, 0.1, 1.0, 1.0), 0.0);
    }
}
