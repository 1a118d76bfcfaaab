// SPDX-License-Identifier: MIT
/**
    \file
    \brief map descriptors, parameter domains and 2-jets

    A map descriptor is a named evaluator from a parameter domain into one of three targets: the cotangent bundle
    T*R^n with coordinates (q, p), the 1-jet space J^1(R^n, R) with coordinates (q, p, z), or a plain euclidean space.
    Evaluators return a jet_t whose jacobian is filled in when the model has closed-form derivatives; otherwise
    eval_jet fills it by central differences with step 1e-5 (five-point in the interior, one-sided at box faces).

    Jacobians are stored target-major: jacobian(k, i) is the derivative of target coordinate k with respect to domain
    coordinate i, so the columns are the tangent vectors df(e_i).
*/

#pragma once

#include <lw/core.hpp>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Targets
// --------------------------------------------------------------------------------------------------------------------

enum class target_kind
{
    cotangent, //!< T*R^n, coordinates (q_1..q_n, p_1..p_n)
    jet1,      //!< J^1(R^n, R), coordinates (q_1..q_n, p_1..p_n, z)
    euclid,    //!< R^{n+r}
};

inline auto to_string(target_kind kind) noexcept -> char const*
{
    switch (kind)
    {
    case target_kind::cotangent: return "cotangent";
    case target_kind::jet1: return "jet1";
    case target_kind::euclid: return "euclid";
    }
    return "euclid";
}

// --------------------------------------------------------------------------------------------------------------------
// Jets
// --------------------------------------------------------------------------------------------------------------------

//! value, jacobian and optional hessian of a map at a point
struct jet_t
{
    vec_t value;
    mat_t jacobian;             //!< target_dim x domain_dim
    std::vector<mat_t> hessian; //!< one symmetric domain_dim x domain_dim block per target coordinate, or empty

    auto has_jacobian() const noexcept -> bool { return jacobian.size() > 0; }
    auto has_hessian() const noexcept -> bool { return !hessian.empty(); }
};

//! a named smooth map with its evaluator
struct map_descriptor_t
{
    using evaluator_t = std::function<jet_t(vec_t const&)>;

    std::string name;
    int domain_dim = 0;
    target_kind target = target_kind::euclid;
    int target_dim = 0;
    evaluator_t evaluate;
    bool analytic_jacobian = false;

    //! optional closed box the evaluator is total on; empty means all of R^domain_dim
    vec_t lower;
    vec_t upper;

    //! dimension n of the Lagrangian or Legendrian in the target, i.e. the number of q coordinates
    auto base_dim() const noexcept -> int
    {
        switch (target)
        {
        case target_kind::cotangent: return target_dim / 2;
        case target_kind::jet1: return (target_dim - 1) / 2;
        case target_kind::euclid: return target_dim;
        }
        return target_dim;
    }
};

//! target dimension implied by a kind and a base dimension n (r is the codimension for euclid targets)
inline auto target_dimension(target_kind kind, int n, int r = 0) noexcept -> int
{
    switch (kind)
    {
    case target_kind::cotangent: return 2 * n;
    case target_kind::jet1: return 2 * n + 1;
    case target_kind::euclid: return n + r;
    }
    return n + r;
}

// --------------------------------------------------------------------------------------------------------------------
// Parameter Domains
// --------------------------------------------------------------------------------------------------------------------

enum class domain_kind
{
    box,          //!< tensor grid over per-axis bounds
    annulus,      //!< n = 2: axis 0 is the radius, axis 1 the angle; points are returned in cartesian coordinates
    circle,       //!< n = 1 periodic parameter; the upper bound is excluded from the grid
    sphere_chart, //!< a box in chart coordinates, sampled like box
};

struct param_domain_t
{
    domain_kind kind = domain_kind::box;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> grid;

    auto validate() const -> void
    {
        require(!lower.empty() && lower.size() == upper.size() && lower.size() == grid.size(),
                error_kind::dimension_mismatch, "domain bounds and grid counts must have equal nonzero length");
        for (std::size_t a = 0; a < lower.size(); ++a)
        {
            require(grid[a] >= 2, error_kind::parameter_out_of_range, "grid counts must be at least 2 per axis");
            require(upper[a] > lower[a], error_kind::parameter_out_of_range, "domain bounds must have positive length");
        }
        if (kind == domain_kind::annulus)
        {
            require(lower.size() == 2, error_kind::dimension_mismatch, "annulus domains are two-dimensional");
            require(lower[0] >= 0.0, error_kind::parameter_out_of_range, "annulus radii must be non-negative");
        }
    }

    auto point_count() const noexcept -> std::size_t
    {
        std::size_t total = 1;
        for (int g : grid) total *= static_cast<std::size_t>(g);
        return total;
    }

    //! grid point with flat index i, first axis fastest, in model coordinates
    auto point(std::size_t i) const -> vec_t
    {
        std::size_t const dim = lower.size();
        vec_t raw(static_cast<Eigen::Index>(dim));
        for (std::size_t a = 0; a < dim; ++a)
        {
            std::size_t const g = static_cast<std::size_t>(grid[a]);
            std::size_t const k = i % g;
            i /= g;
            bool const periodic = kind == domain_kind::circle || (kind == domain_kind::annulus && a == 1);
            double const steps = periodic ? static_cast<double>(g) : static_cast<double>(g - 1);
            raw[static_cast<Eigen::Index>(a)] = lower[a] + (upper[a] - lower[a]) * static_cast<double>(k) / steps;
        }
        if (kind != domain_kind::annulus) return raw;
        vec_t xy(2);
        xy << raw[0] * std::cos(raw[1]), raw[0] * std::sin(raw[1]);
        return xy;
    }
};

//! a box domain with the same bounds and grid count on every axis
inline auto cube_domain(int dim, double lo, double hi, int grid) -> param_domain_t
{
    param_domain_t d;
    d.kind = domain_kind::box;
    d.lower.assign(static_cast<std::size_t>(dim), lo);
    d.upper.assign(static_cast<std::size_t>(dim), hi);
    d.grid.assign(static_cast<std::size_t>(dim), grid);
    return d;
}

// --------------------------------------------------------------------------------------------------------------------
// Evaluation
// --------------------------------------------------------------------------------------------------------------------

inline constexpr double fd_step = 1e-5;

namespace detail {

inline auto check_domain(map_descriptor_t const& map, vec_t const& q) -> void
{
    require(q.size() == map.domain_dim, error_kind::dimension_mismatch,
            map.name + ": expected a point of dimension " + std::to_string(map.domain_dim));
    require(q.allFinite(), error_kind::non_finite, map.name + ": non-finite domain point");
    if (map.lower.size() == 0) return;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        require(q[i] >= map.lower[i] && q[i] <= map.upper[i], error_kind::domain_violation,
                map.name + ": point outside the evaluator's domain");
}

inline auto raw_value(map_descriptor_t const& map, vec_t const& q) -> vec_t
{
    return map.evaluate(q).value;
}

} // namespace detail

//! value only
inline auto eval_value(map_descriptor_t const& map, vec_t const& q) -> vec_t
{
    detail::check_domain(map, q);
    vec_t v = detail::raw_value(map, q);
    require(v.allFinite(), error_kind::non_finite, map.name + ": evaluator returned a non-finite value");
    return v;
}

/**
    jacobian by central differences with step h

    The interior stencil is the fourth-order five-point one, so models whose cutoffs have large third derivatives
    (thin regularization shells) are still resolved at h = 1e-5. Near a face of the declared domain box the difference
    falls back to three points, one-sided at the face itself, so no sample leaves the domain.
*/
inline auto fd_jacobian(map_descriptor_t const& map, vec_t const& q, double h = fd_step) -> mat_t
{
    detail::check_domain(map, q);
    mat_t jac(map.target_dim, map.domain_dim);
    bool const bounded = map.lower.size() > 0;
    for (int i = 0; i < map.domain_dim; ++i)
    {
        vec_t a = q;
        vec_t b = q;
        bool const at_lower = bounded && q[i] - h < map.lower[i];
        bool const at_upper = bounded && q[i] + h > map.upper[i];
        if (at_lower && !at_upper)
        {
            vec_t c = q;
            b[i] += h;
            c[i] += 2.0 * h;
            jac.col(i) = (-3.0 * detail::raw_value(map, q) + 4.0 * detail::raw_value(map, b) - detail::raw_value(map, c)) /
                         (2.0 * h);
        }
        else if (at_upper && !at_lower)
        {
            vec_t c = q;
            a[i] -= h;
            c[i] -= 2.0 * h;
            jac.col(i) = (3.0 * detail::raw_value(map, q) - 4.0 * detail::raw_value(map, a) + detail::raw_value(map, c)) /
                         (2.0 * h);
        }
        else if (bounded && (q[i] - 2.0 * h < map.lower[i] || q[i] + 2.0 * h > map.upper[i]))
        {
            a[i] -= h;
            b[i] += h;
            jac.col(i) = (detail::raw_value(map, b) - detail::raw_value(map, a)) / (2.0 * h);
        }
        else
        {
            vec_t aa = q;
            vec_t bb = q;
            a[i] -= h;
            b[i] += h;
            aa[i] -= 2.0 * h;
            bb[i] += 2.0 * h;
            jac.col(i) = (8.0 * (detail::raw_value(map, b) - detail::raw_value(map, a)) - detail::raw_value(map, bb) +
                          detail::raw_value(map, aa)) /
                         (12.0 * h);
        }
    }
    require(jac.allFinite(), error_kind::non_finite, map.name + ": non-finite finite-difference jacobian");
    return jac;
}

//! analytic jacobian when the descriptor provides one, else finite differences
inline auto jacobian(map_descriptor_t const& map, vec_t const& q) -> mat_t
{
    if (!map.analytic_jacobian) return fd_jacobian(map, q);
    detail::check_domain(map, q);
    jet_t j = map.evaluate(q);
    require(j.jacobian.allFinite(), error_kind::non_finite, map.name + ": non-finite analytic jacobian");
    return j.jacobian;
}

/**
    2-jet of the map at q

    Order 1 fills value and jacobian. Order 2 adds the hessian, obtained by central differences of the jacobian
    (itself analytic when available) and symmetrized in the two domain indices.
*/
inline auto eval_jet(map_descriptor_t const& map, vec_t const& q, int order = 1) -> jet_t
{
    require(order == 1 || order == 2, error_kind::parameter_out_of_range, "jet order must be 1 or 2");
    detail::check_domain(map, q);
    jet_t jet = map.evaluate(q);
    require(jet.value.allFinite(), error_kind::non_finite, map.name + ": evaluator returned a non-finite value");
    require(jet.value.size() == map.target_dim, error_kind::dimension_mismatch, map.name + ": wrong target dimension");
    if (!map.analytic_jacobian || !jet.has_jacobian()) jet.jacobian = fd_jacobian(map, q);
    require(jet.jacobian.allFinite(), error_kind::non_finite, map.name + ": non-finite jacobian");
    if (order == 1) return jet;

    int const n = map.domain_dim;
    int const m = map.target_dim;
    std::vector<mat_t> hess(static_cast<std::size_t>(m), mat_t::Zero(n, n));
    double const h = 1e-4;
    for (int i = 0; i < n; ++i)
    {
        vec_t a = q;
        vec_t b = q;
        a[i] -= h;
        b[i] += h;
        bool const bounded = map.lower.size() > 0;
        double scale = 2.0 * h;
        if (bounded && a[i] < map.lower[i])
        {
            a = q;
            scale = h;
        }
        if (bounded && b[i] > map.upper[i])
        {
            b = q;
            scale = h;
        }
        mat_t const diff = (jacobian(map, b) - jacobian(map, a)) / scale;
        for (int k = 0; k < m; ++k) hess[static_cast<std::size_t>(k)].col(i) = diff.row(k).transpose();
    }
    for (auto& block : hess) block = 0.5 * (block + block.transpose()).eval();
    jet.hessian = std::move(hess);
    return jet;
}

//! relative discrepancy between analytic and finite-difference jacobians: max |A - F| / max(1, max |A|)
inline auto jacobian_discrepancy(map_descriptor_t const& map, vec_t const& q) -> double
{
    require(map.analytic_jacobian, error_kind::precondition_failed, map.name + ": no analytic jacobian to compare");
    mat_t const analytic = jacobian(map, q);
    mat_t const numeric = fd_jacobian(map, q);
    double const scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
    return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

} // namespace lw
