// SPDX-License-Identifier: MIT
/**
    \file
    \brief Lagrangian planes: pullback residuals, Gauss planes, principal-angle distance, vertical defect

    Planes live in T*R^n with coordinates (q, p) or in J^1(R^n, R) with coordinates (q, p, z). The symplectic form is
    dp ^ dq and the contact form is dz - p dq. Distances between n-planes are the largest principal angle, so they
    bound the angle between any vector of one plane and the other plane; this is the uniform flavor of closeness the
    wrinkling estimates are stated in.
*/

#pragma once

#include <lw/core.hpp>
#include <lw/jet.hpp>
#include <algorithm>
#include <cmath>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Forms
// --------------------------------------------------------------------------------------------------------------------

//! dp ^ dq evaluated on two tangent vectors in (q, p[, z]) coordinates
inline auto symplectic_pairing(vec_t const& u, vec_t const& v, int n) noexcept -> double
{
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += u[n + i] * v[i] - u[i] * v[n + i];
    return sum;
}

//! (dz - p dq)(v) at the point with p-coordinates taken from value
inline auto contact_pairing(vec_t const& value, vec_t const& v, int n) noexcept -> double
{
    double sum = v[2 * n];
    for (int i = 0; i < n; ++i) sum -= value[n + i] * v[i];
    return sum;
}

enum class form_kind
{
    symplectic,
    contact,
};

//! largest symplectic pairing among jacobian columns at one point
inline auto symplectic_defect(mat_t const& jac, int n) -> double
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < jac.cols(); ++i)
        for (Eigen::Index j = i + 1; j < jac.cols(); ++j)
            worst = std::max(worst, std::abs(symplectic_pairing(jac.col(i), jac.col(j), n)));
    return worst;
}

//! largest contact-form value on jacobian columns at one point
inline auto contact_defect(vec_t const& value, mat_t const& jac, int n) -> double
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < jac.cols(); ++i) worst = std::max(worst, std::abs(contact_pairing(value, jac.col(i), n)));
    return worst;
}

/**
    max over the domain grid of the form evaluated on the map's tangent vectors

    For the symplectic form the target may be T*R^n or J^1 (the z coordinate is ignored); the contact form needs a
    J^1 target. Analytic jacobians are used when the descriptor has them.
*/
inline auto pullback_residual(map_descriptor_t const& map, param_domain_t const& domain, form_kind form) -> double
{
    domain.validate();
    require(static_cast<int>(domain.lower.size()) == map.domain_dim, error_kind::dimension_mismatch,
            map.name + ": domain dimension does not match the map");
    if (form == form_kind::symplectic)
        require(map.target == target_kind::cotangent || map.target == target_kind::jet1, error_kind::dimension_mismatch,
                map.name + ": symplectic residual needs a cotangent or 1-jet target");
    else
        require(map.target == target_kind::jet1, error_kind::dimension_mismatch,
                map.name + ": contact residual needs a 1-jet target");

    int const n = map.base_dim();
    std::size_t const count = domain.point_count();
    std::vector<double> worst(count, 0.0);
    parallel_for(count, [&](std::size_t i) {
        vec_t const q = domain.point(i);
        jet_t const jet = eval_jet(map, q, 1);
        worst[i] = form == form_kind::symplectic ? symplectic_defect(jet.jacobian, n)
                                                 : contact_defect(jet.value, jet.jacobian, n);
    });
    return count == 0 ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

// --------------------------------------------------------------------------------------------------------------------
// Planes
// --------------------------------------------------------------------------------------------------------------------

//! an n-plane in T*R^n (ambient 2n) or J^1(R^n, R) (ambient 2n + 1), spanned by the frame columns
struct lagrangian_plane_t
{
    int n = 0;
    bool contact = false;
    mat_t frame; //!< ambient x n

    auto ambient_dim() const noexcept -> int { return contact ? 2 * n + 1 : 2 * n; }
};

//! orthonormal basis of the frame's span; throws rank_deficient if the frame has rank below its column count
inline auto orthonormal_frame(mat_t const& frame) -> mat_t
{
    Eigen::JacobiSVD<mat_t> svd(frame, Eigen::ComputeThinU);
    auto const& s = svd.singularValues();
    double const scale = std::max(1.0, s.size() > 0 ? s[0] : 0.0);
    require(s.size() == frame.cols() && (s.size() == 0 || s[s.size() - 1] > 1e-12 * scale), error_kind::rank_deficient,
            "plane frame is rank deficient");
    return svd.matrixU().leftCols(frame.cols());
}

//! the horizontal plane span(d/dq_i)
inline auto horizontal_plane(int n, bool contact = false) -> lagrangian_plane_t
{
    lagrangian_plane_t p{n, contact, mat_t::Zero(contact ? 2 * n + 1 : 2 * n, n)};
    for (int i = 0; i < n; ++i) p.frame(i, i) = 1.0;
    return p;
}

//! the vertical plane span(d/dp_i), i.e. the tangent space of a cotangent fibre or front fibre
inline auto vertical_plane(int n, bool contact = false) -> lagrangian_plane_t
{
    lagrangian_plane_t p{n, contact, mat_t::Zero(contact ? 2 * n + 1 : 2 * n, n)};
    for (int i = 0; i < n; ++i) p.frame(n + i, i) = 1.0;
    return p;
}

//! max pairwise symplectic pairing of the frame plus, in the contact case, max of dz - p dq at the given point
inline auto plane_form_defect(lagrangian_plane_t const& plane, vec_t const& base_point = vec_t{}) -> double
{
    double worst = symplectic_defect(plane.frame, plane.n);
    if (plane.contact)
    {
        vec_t const at = base_point.size() == plane.ambient_dim() ? base_point : vec_t::Zero(plane.ambient_dim());
        worst = std::max(worst, contact_defect(at, plane.frame, plane.n));
    }
    return worst;
}

namespace detail {

//! sines of the principal angles from span(a) to span(b); both orthonormal, a has at most as many columns as b
inline auto principal_sines(mat_t const& a, mat_t const& b) -> vec_t
{
    mat_t const residual = a - b * (b.transpose() * a);
    Eigen::JacobiSVD<mat_t> svd(residual);
    vec_t s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::min(1.0, s[i]);
    return s;
}

inline auto largest_angle(mat_t const& a, mat_t const& b) -> double
{
    double const sine = principal_sines(a, b).maxCoeff();
    if (sine < 0.7) return std::asin(sine);
    Eigen::JacobiSVD<mat_t> svd(a.transpose() * b);
    double const cosine = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
    return std::acos(cosine);
}

} // namespace detail

/**
    largest principal angle between two n-planes, in radians

    Small angles come from the arcsine of the projection residual, large ones from the arccosine of the smallest
    singular value of the cross-gram matrix, so both ends keep full precision. Evaluating in both orders and taking
    the larger makes the result exactly symmetric.
*/
inline auto plane_distance(lagrangian_plane_t const& p, lagrangian_plane_t const& q) -> double
{
    require(p.ambient_dim() == q.ambient_dim() && p.frame.cols() == q.frame.cols(), error_kind::dimension_mismatch,
            "planes must have the same dimension and ambient dimension");
    mat_t const a = orthonormal_frame(p.frame);
    mat_t const b = orthonormal_frame(q.frame);
    return std::max(detail::largest_angle(a, b), detail::largest_angle(b, a));
}

enum class foliation_kind
{
    cotangent_fibres,
    front_fibres,
};

struct foliation_spec_t
{
    foliation_kind kind = foliation_kind::cotangent_fibres;
    int n = 0;
};

/**
    numerical dimension of the intersection of a plane with the leaf tangent span(d/dp_i)

    Counts the principal angles between the plane and the vertical n-plane that are below tol; 0 means the plane is
    transverse to the foliation.
*/
inline auto vertical_defect(lagrangian_plane_t const& plane, foliation_spec_t const& fol, double tol) -> int
{
    require(fol.n == plane.n, error_kind::dimension_mismatch, "foliation and plane dimensions differ");
    bool const contact = fol.kind == foliation_kind::front_fibres;
    require(contact == plane.contact, error_kind::dimension_mismatch,
            "front fibres need a 1-jet plane and cotangent fibres a cotangent plane");
    mat_t const a = orthonormal_frame(plane.frame);
    mat_t const v = vertical_plane(plane.n, plane.contact).frame;
    vec_t const sines = detail::principal_sines(a, v);
    double const threshold = std::sin(tol);
    return static_cast<int>((sines.array() < threshold).count());
}

// --------------------------------------------------------------------------------------------------------------------
// Gauss Planes
// --------------------------------------------------------------------------------------------------------------------

//! numerical rank threshold used by the Gauss plane: 1e-9 relative to the largest singular value (at least 1)
inline auto rank_threshold(double largest_singular_value) noexcept -> double
{
    return 1e-9 * std::max(1.0, largest_singular_value);
}

namespace detail {

inline auto plane_from_jacobian(map_descriptor_t const& map, mat_t const& jac) -> lagrangian_plane_t
{
    return {map.base_dim(), map.target == target_kind::jet1, jac};
}

//! unit image of the kernel direction, seen from parameter distance h along it
inline auto kernel_image(map_descriptor_t const& map, vec_t const& q, vec_t const& kernel, double h) -> vec_t
{
    vec_t v = jacobian(map, vec_t(q + h * kernel)) * kernel;
    double const norm = v.norm();
    require(norm > 0.0, error_kind::corank_too_high, map.name + ": kernel direction stays singular off the locus");
    return v / norm;
}

//! limit plane at a corank-1 point: regular part of the range plus the averaged two-sided kernel image at step h
inline auto limit_plane(map_descriptor_t const& map, vec_t const& q, mat_t const& regular, vec_t const& kernel,
                        double h) -> mat_t
{
    vec_t plus = kernel_image(map, q, kernel, h);
    vec_t minus = kernel_image(map, q, kernel, -h);
    if (plus.dot(minus) < 0.0) minus = -minus;
    // the projector average of two nearly equal lines has the normalized sum as its dominant direction
    vec_t dir = plus + minus;
    dir -= regular * (regular.transpose() * dir);
    double const norm = dir.norm();
    require(norm > 1e-12, error_kind::corank_too_high, map.name + ": limit direction collapses into the regular part");
    mat_t frame(regular.rows(), regular.cols() + 1);
    frame << regular, dir / norm;
    return frame;
}

} // namespace detail

//! step used to approach a corank-1 point along its kernel when forming the limit plane
inline constexpr double limit_plane_step = 1e-4;

/**
    tangent plane of the map's image at q, including corank-1 points where the tangent plane is a limit

    At regular points this is the span of the jacobian columns. Where the jacobian has rank n - 1 the plane is the
    span of the regular part of the range together with the limit of the normalized image of the kernel direction,
    taken from both sides at parameter distance 1e-4 and cross-checked against half that step (they must agree to
    1e-5 radians). Rank below n - 1 is rejected.
*/
inline auto gauss_plane(map_descriptor_t const& map, vec_t const& q) -> lagrangian_plane_t
{
    require(map.target == target_kind::cotangent || map.target == target_kind::jet1, error_kind::dimension_mismatch,
            map.name + ": Gauss planes need a cotangent or 1-jet target");
    mat_t const jac = jacobian(map, q);
    int const n = map.domain_dim;
    require(n == map.base_dim(), error_kind::dimension_mismatch, map.name + ": domain and base dimension differ");

    Eigen::JacobiSVD<mat_t> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto const& s = svd.singularValues();
    double const threshold = rank_threshold(s[0]);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > threshold) ++rank;
    if (rank == n) return detail::plane_from_jacobian(map, jac);
    require(rank == n - 1, error_kind::corank_too_high, map.name + ": jacobian corank exceeds 1");

    mat_t const regular = svd.matrixU().leftCols(n - 1);
    vec_t const kernel = svd.matrixV().col(n - 1);
    mat_t const coarse = detail::limit_plane(map, q, regular, kernel, limit_plane_step);
    mat_t const fine = detail::limit_plane(map, q, regular, kernel, 0.5 * limit_plane_step);
    lagrangian_plane_t result = detail::plane_from_jacobian(map, fine);
    double const agreement = plane_distance(detail::plane_from_jacobian(map, coarse), result);
    require(agreement < 1e-5, error_kind::precondition_failed,
            map.name + ": limit plane is not stable under step refinement");
    return result;
}

/**
    one-sided limit of the Gauss plane at a corank-1 point, approached along +kernel (side > 0) or -kernel

    Richardson extrapolation of the normalized kernel image at steps h and h/2 cancels the first-order drift, so the
    result matches the two-sided limit to O(h^2).
*/
inline auto one_sided_gauss_plane(map_descriptor_t const& map, vec_t const& q, int side) -> lagrangian_plane_t
{
    mat_t const jac = jacobian(map, q);
    int const n = map.domain_dim;
    Eigen::JacobiSVD<mat_t> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    mat_t const regular = svd.matrixU().leftCols(n - 1);
    vec_t const kernel = svd.matrixV().col(n - 1);
    double const h = side > 0 ? limit_plane_step : -limit_plane_step;
    vec_t const a = detail::kernel_image(map, q, kernel, h);
    vec_t b = detail::kernel_image(map, q, kernel, 0.5 * h);
    if (a.dot(b) < 0.0) b = -b;
    vec_t dir = 2.0 * b - a;
    dir -= regular * (regular.transpose() * dir);
    mat_t frame(regular.rows(), n);
    frame << regular, dir.normalized();
    return detail::plane_from_jacobian(map, frame);
}

} // namespace lw
