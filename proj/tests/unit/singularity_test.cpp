// SPDX-License-Identifier: MIT
/**
    \file
    \brief singularity analysis: tangency loci, stratification, Maslov signs, double-fold pairing, quadratic splittings
*/

#include <lw/models.hpp>
#include <lw/singularity.hpp>
#include <gtest/gtest.h>
#include <random>

using namespace lw;
using namespace testing;

namespace {

auto cotangent_fibres(int n) -> foliation_spec_t
{
    foliation_spec_t f;
    f.kind = foliation_kind::cotangent_fibres;
    f.n = n;
    return f;
}

//! the same map with the fibre coordinates (and the jet coordinate) negated: an anti-symplectic reflection
auto reflect_fibre(map_descriptor_t const& m) -> map_descriptor_t
{
    map_descriptor_t r = m;
    int const n = m.domain_dim;
    r.name = m.name + "#reflected";
    r.evaluate = [inner = m.evaluate, n](vec_t const& q) {
        jet_t j = inner(q);
        auto const rows = static_cast<Eigen::Index>(j.value.size()) - n;
        j.value.tail(rows) *= -1.0;
        j.jacobian.bottomRows(rows) *= -1.0;
        return j;
    };
    return r;
}

auto random_symmetric(int n, std::mt19937_64& rng) -> mat_t
{
    std::uniform_real_distribution<double> u{-1.0, 1.0};
    mat_t a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = u(rng);
    return 0.5 * (a + a.transpose());
}

} // namespace

// --------------------------------------------------------------------------------------------------------------------
// Tangency Locus
// --------------------------------------------------------------------------------------------------------------------

TEST(tangency, wrinkle_locus_is_the_unit_circle)
{
    auto const domain = cube_domain(2, -1.3, 1.3, 257);
    auto const map = wrinkle_lagrangian(2, false);
    auto const locus = tangency_locus(map, cotangent_fibres(2), domain);
    ASSERT_FALSE(locus.cells.empty());
    ASSERT_EQ(locus.components.size(), 1u);
    EXPECT_TRUE(locus.closed[0]);
    for (auto const& c : locus.cells)
    {
        EXPECT_NEAR(c.point.norm(), 1.0, 1e-9);
        EXPECT_EQ(c.corank, 1);
    }
}

TEST(tangency, smooth_wrinkle_has_full_corank_one_but_the_lagrangian_wrinkle_is_immersed)
{
    auto const domain = cube_domain(2, -1.3, 1.3, 65);
    foliation_spec_t const fol = cotangent_fibres(2);
    auto const smooth = tangency_locus(wrinkle_smooth(2, 1), fol, domain);
    auto const lag = tangency_locus(regularize_lagrangian(2, build_reg_bump(0.1, 0.5), false), fol, domain);
    ASSERT_FALSE(smooth.cells.empty());
    ASSERT_FALSE(lag.cells.empty());
    for (auto const& c : smooth.cells) EXPECT_EQ(c.full_corank, 1);
    for (auto const& c : lag.cells) EXPECT_EQ(c.full_corank, 0);
}

TEST(tangency, one_dimensional_folds_are_isolated_points)
{
    auto const map = wrinkle_lagrangian(1, false);
    auto const locus = tangency_locus(map, cotangent_fibres(1), cube_domain(1, -1.5, 1.5, 301));
    ASSERT_EQ(locus.cells.size(), 2u);
    EXPECT_NEAR(locus.cells[0].point[0], -1.0, 1e-9);
    EXPECT_NEAR(locus.cells[1].point[0], 1.0, 1e-9);
}

TEST(tangency, rejects_mismatched_foliation)
{
    EXPECT_THROW(
        {
            try
            {
                tangency_locus(wrinkle_lagrangian(2, false), cotangent_fibres(3), cube_domain(2, -1.0, 1.0, 9));
            }
            catch (error const& e)
            {
                EXPECT_EQ(e.kind(), error_kind::dimension_mismatch);
                throw;
            }
        },
        error);
}

// --------------------------------------------------------------------------------------------------------------------
// Stratification
// --------------------------------------------------------------------------------------------------------------------

TEST(stratify, cusp_model_is_all_fold)
{
    auto const map = cusp_model(2, false);
    auto const s = stratify(map, tangency_locus(map, cotangent_fibres(2), cube_domain(2, -1.0, 1.0, 65)));
    ASSERT_GT(s.cells.size(), 10u);
    EXPECT_EQ(s.count(stratum_label::fold), s.cells.size());
}

TEST(stratify, regularized_wrinkle_has_exactly_two_pleats_on_the_equator)
{
    auto const map = regularize_lagrangian(2, build_reg_bump(0.1, 0.5), false);
    auto const s = stratify(map, tangency_locus(map, cotangent_fibres(2), cube_domain(2, -1.3, 1.3, 257)));
    ASSERT_EQ(s.count(stratum_label::pleat), 2u);
    std::vector<double> xs;
    for (auto const& c : s.cells)
    {
        if (c.label != stratum_label::pleat) continue;
        EXPECT_NEAR(c.point[1], 0.0, 1e-6);
        xs.push_back(c.point[0]);
    }
    std::sort(xs.begin(), xs.end());
    EXPECT_NEAR(xs[0], -1.0, 1e-6);
    EXPECT_NEAR(xs[1], 1.0, 1e-6);
    EXPECT_EQ(s.count(stratum_label::corank_two), 0u);
    EXPECT_EQ(s.count(stratum_label::fold) + 2u, s.cells.size());
}

TEST(stratify, pleat_count_is_stable_under_grid_refinement)
{
    auto const map = regularize_lagrangian(2, build_reg_bump(0.1, 0.5), false);
    for (int g : {129, 193, 257})
    {
        auto const s = stratify(map, tangency_locus(map, cotangent_fibres(2), cube_domain(2, -1.3, 1.3, g)));
        EXPECT_EQ(s.count(stratum_label::pleat), 2u) << "grid " << g;
    }
}

TEST(stratify, maslov_signs_flip_under_fibre_reflection)
{
    auto const map = regularize_lagrangian(1, build_reg_bump(0.1, 0.5), false);
    auto const domain = cube_domain(1, -1.5, 1.5, 301);
    auto const a = stratify(map, tangency_locus(map, cotangent_fibres(1), domain));
    auto const reflected = reflect_fibre(map);
    auto const b = stratify(reflected, tangency_locus(reflected, cotangent_fibres(1), domain));
    ASSERT_EQ(a.cells.size(), 2u);
    ASSERT_EQ(b.cells.size(), 2u);
    EXPECT_EQ(a.cells[0].maslov, -a.cells[1].maslov);
    for (std::size_t k = 0; k < 2; ++k)
    {
        EXPECT_NE(a.cells[k].maslov, 0);
        EXPECT_EQ(b.cells[k].maslov, -a.cells[k].maslov);
    }
}

TEST(stratify, legendrian_lift_keeps_the_maslov_signs)
{
    auto const domain = cube_domain(1, -1.5, 1.5, 301);
    auto const bump = build_reg_bump(0.1, 0.5);
    auto const lag = regularize_lagrangian(1, bump, false);
    auto const leg = regularize_lagrangian(1, bump, true);
    auto const a = stratify(lag, tangency_locus(lag, cotangent_fibres(1), domain));
    auto const b = stratify(leg, tangency_locus(leg, cotangent_fibres(1), domain));
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t k = 0; k < a.cells.size(); ++k) EXPECT_EQ(a.cells[k].maslov, b.cells[k].maslov);
}

// --------------------------------------------------------------------------------------------------------------------
// Double Folds
// --------------------------------------------------------------------------------------------------------------------

TEST(double_folds, nested_points_pair_from_the_inside)
{
    auto const r = pair_double_folds(std::vector<signed_point_t>{{-0.5, 1}, {-0.3, -1}, {0.3, -1}, {0.5, 1}});
    ASSERT_EQ(r.pairs.size(), 2u);
    std::vector<std::pair<std::size_t, std::size_t>> got;
    for (auto const& p : r.pairs) got.emplace_back(std::min(p.inner, p.outer), std::max(p.inner, p.outer));
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got[0], std::make_pair(std::size_t{0}, std::size_t{1}));
    EXPECT_EQ(got[1], std::make_pair(std::size_t{2}, std::size_t{3}));
    EXPECT_TRUE(r.leftovers.empty());
}

TEST(double_folds, equal_signs_are_left_over)
{
    auto const r = pair_double_folds(std::vector<signed_point_t>{{-0.5, 1}, {0.5, 1}});
    EXPECT_TRUE(r.pairs.empty());
    EXPECT_EQ(r.leftovers.size(), 2u);
}

TEST(double_folds, one_dimensional_wrinkle_is_one_double_fold)
{
    auto const map = regularize_lagrangian(1, build_reg_bump(0.1, 0.5), false);
    auto const s = stratify(map, tangency_locus(map, cotangent_fibres(1), cube_domain(1, -1.5, 1.5, 301)));
    auto const r = pair_double_folds(s);
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_TRUE(r.leftovers.empty());
    EXPECT_FALSE(r.pairs[0].witness.empty());
}

// --------------------------------------------------------------------------------------------------------------------
// Quadratic Forms
// --------------------------------------------------------------------------------------------------------------------

TEST(sos, product_form_splits_into_three_squares)
{
    // v1 v2 as a matrix has off-diagonal 1/2: (v1 + v2)^2 / 2 - v1^2 / 2 - v2^2 / 2
    mat_t q(2, 2);
    q << 0.0, 0.5, 0.5, 0.0;
    auto const terms = sos_decompose(q);
    ASSERT_EQ(terms.size(), 3u);
    for (auto const& t : terms)
    {
        if (t.channel.i == t.channel.j)
            EXPECT_DOUBLE_EQ(t.coefficient, -0.5);
        else
            EXPECT_DOUBLE_EQ(t.coefficient, 0.5);
    }
    EXPECT_LT((sos_reconstruct(terms, 2) - q).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(sos, reconstruction_of_random_forms)
{
    std::mt19937_64 rng{20261018};
    for (int n = 1; n <= 8; ++n)
        for (int k = 0; k < 200; ++k)
        {
            mat_t const q = random_symmetric(n, rng);
            auto const terms = sos_decompose(q);
            EXPECT_LT(operator_norm(sos_reconstruct(terms, n) - q), 1e-13);
            for (auto const& t : terms)
            {
                mat_t const term = t.coefficient * t.ell * t.ell.transpose();
                Eigen::JacobiSVD<mat_t> svd(term);
                int rank = 0;
                for (Eigen::Index a = 0; a < svd.singularValues().size(); ++a)
                    if (svd.singularValues()[a] > 1e-12) ++rank;
                EXPECT_LE(rank, 1);
                // the kernel is fixed by the channel and independent of the form
                mat_t const ker = t.channel.kernel(n);
                if (n > 1) EXPECT_LT((term * ker).cwiseAbs().maxCoeff(), 1e-15);
            }
        }
}

TEST(sos, rejects_asymmetric_input)
{
    mat_t q(2, 2);
    q << 1.0, 0.2, 0.3, 1.0;
    try
    {
        sos_decompose(q);
        FAIL() << "expected asymmetric_input";
    }
    catch (error const& e)
    {
        EXPECT_EQ(e.kind(), error_kind::asymmetric_input);
    }
}

TEST(sos, schedule_error_decreases_with_steps)
{
    std::mt19937_64 rng{7};
    quadratic_path_t path;
    int const n = 6;
    // unit-Lipschitz in the operator norm: each quarter moves by at most 1/4
    path.times.push_back(0.0);
    path.forms.push_back(random_symmetric(n, rng));
    for (int k = 1; k <= 4; ++k)
    {
        mat_t const step = random_symmetric(n, rng);
        path.times.push_back(k / 4.0);
        path.forms.push_back(path.forms.back() + 0.25 * step / operator_norm(step));
    }
    double previous = 1e300;
    for (int k : {16, 64, 256, 1024})
    {
        auto const s = piecewise_simple_schedule(path, k);
        EXPECT_LT(s.c0_error, previous);
        previous = s.c0_error;
        for (auto const& seg : s.segments) EXPECT_LE(seg.t0, seg.t1);
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(sos, schedule_is_exact_at_step_ends)
{
    mat_t a = mat_t::Identity(3, 3);
    mat_t b(3, 3);
    b << 0.0, 1.0, 0.0, 1.0, 2.0, -0.5, 0.0, -0.5, 1.0;
    quadratic_path_t path{{0.0, 1.0}, {a, b}};
    auto const s = piecewise_simple_schedule(path, 1);
    std::vector<double> c = s.initial;
    for (auto const& seg : s.segments) c[seg.channel] = seg.to;
    mat_t m = mat_t::Zero(3, 3);
    for (std::size_t k = 0; k < c.size(); ++k)
    {
        vec_t const l = s.channels[k].ell(3);
        m += c[k] * l * l.transpose();
    }
    EXPECT_LT((m - b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(sos, constant_path_has_zero_error)
{
    mat_t const q = mat_t::Identity(4, 4);
    auto const s = piecewise_simple_schedule(quadratic_path_t{{0.0, 1.0}, {q, q}}, 8);
    EXPECT_EQ(s.c0_error, 0.0);
    EXPECT_TRUE(s.segments.empty());
}

TEST(sos, schedule_error_is_first_order_in_the_step)
{
    // Q_t = t v1 v2: each 4x refinement divides the scheduling gap by 4
    mat_t q = mat_t::Zero(2, 2);
    q(0, 1) = q(1, 0) = 0.5;
    quadratic_path_t const path{{0.0, 1.0}, {mat_t::Zero(2, 2), q}};
    std::vector<double> errors;
    for (int k : {4, 16, 64}) errors.push_back(piecewise_simple_schedule(path, k).c0_error);
    for (std::size_t i = 1; i < errors.size(); ++i)
    {
        ASSERT_GT(errors[i], 0.0);
        EXPECT_NEAR(errors[i - 1] / errors[i], 4.0, 0.2);
    }
}

TEST(sos, each_channel_changes_in_a_palindromic_pair_of_segments)
{
    std::mt19937_64 rng{11};
    mat_t const a = random_symmetric(4, rng), b = random_symmetric(4, rng);
    auto const s = piecewise_simple_schedule(quadratic_path_t{{0.0, 1.0}, {a, b}}, 1);
    ASSERT_EQ(s.segments.size() % 2, 0u);
    std::size_t const half = s.segments.size() / 2;
    for (std::size_t j = 0; j < half; ++j)
        EXPECT_EQ(s.segments[j].channel, s.segments[s.segments.size() - 1 - j].channel);
    EXPECT_DOUBLE_EQ(s.segments[half - 1].t1, 0.5);
    for (std::size_t j = 1; j < s.segments.size(); ++j) EXPECT_DOUBLE_EQ(s.segments[j].t0, s.segments[j - 1].t1);
}
