// SPDX-License-Identifier: MIT
/**
    \file
    \brief tangency loci, Thom-Boardman labels, Maslov co-orientations, double-fold pairing and quadratic-form splitting

    The tangency locus of a map f with the vertical foliation is where d(pi o f) drops rank, pi being the projection to
    the first n target coordinates. On a grid it is bracketed by sign changes of the signed smallest singular value
    sign(det) * sigma_min, which is a smooth defining function near corank-one points. Each bracketing cell gets one
    representative point projected onto the locus; in two dimensions the cells are chained into curves.

    Along a curve the kernel line l of d(pi o f) is compared with the locus normal nu: a fold has <l, nu> != 0 and a
    pleat is an isolated simple zero of <l, nu>. Pleats are found as sign changes of <l, nu> (with l transported
    continuously) and refined by bisection.

    The Maslov sign of a fold measures the rotation direction, as the point crosses the locus along nu, of the
    tangent line df(l) inside the plane spanned by the cokernel direction c and its dual fibre direction.

    The quadratic-form tools split a symmetric form into rank-one squares of dq_i and dq_i + dq_j and schedule a
    path of forms as a sequence of single-channel moves.
*/

#pragma once

#include "lw/core.hpp"
#include "lw/jet.hpp"
#include "lw/planes.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Defining Function
// --------------------------------------------------------------------------------------------------------------------

namespace detail {

//! d(pi o f): the rows of the jacobian carrying the first n target coordinates
inline auto horizontal_jacobian(map_descriptor_t const& map, vec_t const& q) -> mat_t
{
    return jacobian(map, q).topRows(map.domain_dim);
}

//! sign(det A) * sigma_min(A): changes sign transversally across a corank-one locus
inline auto signed_sigma(mat_t const& a) -> double
{
    Eigen::JacobiSVD<mat_t> svd(a);
    double const s = svd.singularValues()[a.cols() - 1];
    return a.determinant() < 0.0 ? -s : s;
}

inline auto signed_sigma_at(map_descriptor_t const& map, vec_t const& q) -> double
{
    return signed_sigma(horizontal_jacobian(map, q));
}

//! central-difference gradient of the signed smallest singular value
inline auto sigma_gradient(map_descriptor_t const& map, vec_t const& q, double h = 1e-6) -> vec_t
{
    vec_t g(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i)
    {
        vec_t a = q, b = q;
        a[i] += h;
        b[i] -= h;
        g[i] = (signed_sigma_at(map, a) - signed_sigma_at(map, b)) / (2.0 * h);
    }
    return g;
}

inline auto count_below(vec_t const& singular_values, double tol) -> int
{
    return static_cast<int>((singular_values.array() < tol).count());
}

//! root of f on the segment a..b with f(a) < 0 <= f(b) or the reverse, by bisection to machine resolution
template <typename func_t> auto bisect_segment(func_t&& f, vec_t a, vec_t b, double fa) -> vec_t
{
    for (int it = 0; it < 200; ++it)
    {
        vec_t const m = 0.5 * (a + b);
        if ((m - a).norm() <= 1e-15 * std::max(1.0, m.norm())) break;
        double const fm = f(m);
        if ((fm >= 0.0) == (fa >= 0.0))
        {
            a = m;
            fa = fm;
        }
        else
            b = m;
    }
    return 0.5 * (a + b);
}

} // namespace detail

// --------------------------------------------------------------------------------------------------------------------
// Tangency Locus
// --------------------------------------------------------------------------------------------------------------------

//! one grid cell through which the locus passes, with its representative point
struct tangency_cell_t
{
    std::size_t index = 0;          //!< flat cell index, first axis fastest
    vec_t point;                    //!< representative on the locus
    std::vector<std::size_t> edges; //!< ids of the bracketing grid edges (two-dimensional grids)
    int corank = 1;                 //!< corank of d(pi o f) at the representative
    int full_corank = 0;            //!< corank of the full differential df
    double sigma_min = 0.0;
};

struct tangency_locus_t
{
    int n = 0;
    param_domain_t domain;
    double scale = 0.0;     //!< largest singular value of d(pi o f) seen on the grid
    double rank_tol = 0.0;  //!< singular values below this count towards the corank
    std::vector<tangency_cell_t> cells;
    std::vector<std::vector<std::size_t>> components; //!< cell indices ordered along each connected piece
    std::vector<bool> closed;                        //!< whether each component is a closed curve

    auto cell_size() const -> double
    {
        double h = 0.0;
        for (std::size_t a = 0; a < domain.lower.size(); ++a)
        {
            double const d = (domain.upper[a] - domain.lower[a]) / (domain.grid[a] - 1);
            h += d * d;
        }
        return std::sqrt(h);
    }
};

namespace detail {

inline auto check_foliation(map_descriptor_t const& map, foliation_spec_t const& fol) -> void
{
    require(fol.n == map.domain_dim, error_kind::dimension_mismatch, "foliation dimension must equal the source dimension");
    require(map.target_dim >= map.domain_dim, error_kind::dimension_mismatch, "target must contain the n base coordinates");
    if (fol.kind == foliation_kind::front_fibres)
        require(map.target == target_kind::jet1, error_kind::dimension_mismatch, "front fibres need a 1-jet target");
}

//! Newton steps along the gradient of the signed smallest singular value, kept inside [lo, hi]
inline auto project_to_locus(map_descriptor_t const& map, vec_t q, vec_t const& lo, vec_t const& hi) -> vec_t
{
    for (int it = 0; it < 6; ++it)
    {
        double const f = signed_sigma_at(map, q);
        if (std::abs(f) < 1e-14) break;
        vec_t const g = sigma_gradient(map, q);
        double const g2 = g.squaredNorm();
        if (g2 < 1e-20) break;
        vec_t const next = q - (f / g2) * g;
        if ((next.array() < lo.array() - 1e-12).any() || (next.array() > hi.array() + 1e-12).any()) break;
        q = next;
    }
    return q;
}

inline auto finish_cell(map_descriptor_t const& map, tangency_cell_t& cell, double rank_tol) -> void
{
    mat_t const full = jacobian(map, cell.point);
    Eigen::JacobiSVD<mat_t> h(full.topRows(map.domain_dim));
    Eigen::JacobiSVD<mat_t> f(full);
    cell.sigma_min = h.singularValues()[map.domain_dim - 1];
    cell.corank = std::max(1, count_below(h.singularValues(), rank_tol));
    double const full_tol = 1e-6 * std::max(1.0, f.singularValues()[0]);
    cell.full_corank = count_below(f.singularValues(), full_tol);
}

} // namespace detail

/**
    cells of a grid on which the map becomes tangent to the vertical foliation

    One- and two-dimensional grids bracket sign changes of sign(det) * sigma_min on grid edges and place one
    representative per cell on the locus. Higher dimensions report grid nodes whose smallest singular value is below
    the rank tolerance. rel_tol scales the largest singular value seen on the grid.
*/
inline auto tangency_locus(map_descriptor_t const& map, foliation_spec_t const& fol, param_domain_t const& domain,
                           double rel_tol = 1e-6) -> tangency_locus_t
{
    domain.validate();
    detail::check_foliation(map, fol);
    int const n = map.domain_dim;
    require(static_cast<int>(domain.lower.size()) == n, error_kind::dimension_mismatch, "domain dimension must equal n");
    require(domain.kind == domain_kind::box || domain.kind == domain_kind::sphere_chart, error_kind::precondition_failed,
            "tangency loci are computed on box grids");

    std::size_t const nodes = domain.point_count();
    std::vector<double> f(nodes), smax(nodes);
    parallel_for(nodes, [&](std::size_t i) {
        mat_t const a = detail::horizontal_jacobian(map, domain.point(i));
        require(a.allFinite(), error_kind::non_finite, map.name + ": non-finite jacobian on the grid");
        Eigen::JacobiSVD<mat_t> svd(a);
        double const s = svd.singularValues()[n - 1];
        f[i] = a.determinant() < 0.0 ? -s : s;
        smax[i] = svd.singularValues()[0];
    });

    tangency_locus_t out;
    out.n = n;
    out.domain = domain;
    out.scale = *std::max_element(smax.begin(), smax.end());
    out.rank_tol = rel_tol * std::max(1.0, out.scale);
    auto const positive = [](double v) { return v >= 0.0; };
    auto const fn = [&map](vec_t const& q) { return detail::signed_sigma_at(map, q); };

    if (n == 1)
    {
        for (std::size_t k = 0; k + 1 < nodes; ++k)
        {
            if (positive(f[k]) == positive(f[k + 1])) continue;
            tangency_cell_t cell;
            cell.index = k;
            cell.point = detail::bisect_segment(fn, domain.point(k), domain.point(k + 1), f[k]);
            detail::finish_cell(map, cell, out.rank_tol);
            out.components.push_back({out.cells.size()});
            out.closed.push_back(false);
            out.cells.push_back(std::move(cell));
        }
        return out;
    }

    if (n == 2)
    {
        std::size_t const gx = static_cast<std::size_t>(domain.grid[0]);
        std::size_t const gy = static_cast<std::size_t>(domain.grid[1]);
        auto const node = [gx](std::size_t i, std::size_t j) { return i + gx * j; };
        // edge id: 2 * node + 0 for the edge towards +x, 2 * node + 1 for the edge towards +y
        std::map<std::size_t, vec_t> roots;
        auto const crossing = [&](std::size_t a, std::size_t b, std::size_t id) -> bool {
            if (positive(f[a]) == positive(f[b])) return false;
            if (!roots.count(id)) roots[id] = detail::bisect_segment(fn, domain.point(a), domain.point(b), f[a]);
            return true;
        };

        vec_t lo(2), hi(2);
        for (std::size_t j = 0; j + 1 < gy; ++j)
        {
            for (std::size_t i = 0; i + 1 < gx; ++i)
            {
                std::size_t const n00 = node(i, j), n10 = node(i + 1, j), n01 = node(i, j + 1), n11 = node(i + 1, j + 1);
                std::vector<std::size_t> edges;
                if (crossing(n00, n10, 2 * n00)) edges.push_back(2 * n00);         // bottom
                if (crossing(n10, n11, 2 * n10 + 1)) edges.push_back(2 * n10 + 1); // right
                if (crossing(n01, n11, 2 * n01)) edges.push_back(2 * n01);         // top
                if (crossing(n00, n01, 2 * n00 + 1)) edges.push_back(2 * n00 + 1); // left
                if (edges.empty()) continue;
                lo = domain.point(n00);
                hi = domain.point(n11);

                std::vector<std::vector<std::size_t>> pieces;
                if (edges.size() == 4)
                {
                    // saddle: join the crossings around the corner whose sign differs from the centre value
                    bool const centre = positive(fn(0.5 * (lo + hi)));
                    if (positive(f[n00]) != centre)
                        pieces = {{edges[3], edges[0]}, {edges[1], edges[2]}};
                    else
                        pieces = {{edges[0], edges[1]}, {edges[2], edges[3]}};
                }
                else
                    pieces = {edges};

                for (auto& piece : pieces)
                {
                    tangency_cell_t cell;
                    cell.index = i + (gx - 1) * j;
                    vec_t mid = vec_t::Zero(2);
                    for (std::size_t e : piece) mid += roots[e];
                    mid /= static_cast<double>(piece.size());
                    cell.point = detail::project_to_locus(map, mid, lo, hi);
                    cell.edges = std::move(piece);
                    out.cells.push_back(std::move(cell));
                }
            }
        }
        parallel_for(out.cells.size(), [&](std::size_t c) { detail::finish_cell(map, out.cells[c], out.rank_tol); });

        // chain cells sharing a bracketing edge
        std::map<std::size_t, std::vector<std::size_t>> by_edge;
        for (std::size_t c = 0; c < out.cells.size(); ++c)
            for (std::size_t e : out.cells[c].edges) by_edge[e].push_back(c);
        std::vector<bool> seen(out.cells.size(), false);
        auto const next_cell = [&](std::size_t c, std::size_t via) -> std::optional<std::size_t> {
            for (std::size_t d : by_edge[via])
                if (d != c) return d;
            return std::nullopt;
        };
        auto const other_edge = [&](std::size_t c, std::size_t e) -> std::optional<std::size_t> {
            for (std::size_t x : out.cells[c].edges)
                if (x != e) return x;
            return std::nullopt;
        };
        for (std::size_t start = 0; start < out.cells.size(); ++start)
        {
            if (seen[start]) continue;
            seen[start] = true;
            std::vector<std::size_t> forward{start}, backward;
            bool closed = false;
            // walk out through the first edge, then through the second
            for (int dir = 0; dir < 2 && !closed; ++dir)
            {
                auto& path = dir == 0 ? forward : backward;
                if (out.cells[start].edges.size() <= static_cast<std::size_t>(dir)) break;
                std::size_t cur = start;
                std::size_t via = out.cells[start].edges[static_cast<std::size_t>(dir)];
                for (;;)
                {
                    auto const nxt = next_cell(cur, via);
                    if (!nxt) break;
                    if (*nxt == start)
                    {
                        closed = true;
                        break;
                    }
                    if (seen[*nxt]) break;
                    seen[*nxt] = true;
                    path.push_back(*nxt);
                    auto const out_edge = other_edge(*nxt, via);
                    if (!out_edge) break;
                    cur = *nxt;
                    via = *out_edge;
                }
            }
            std::vector<std::size_t> chain(backward.rbegin(), backward.rend());
            chain.insert(chain.end(), forward.begin(), forward.end());
            out.components.push_back(std::move(chain));
            out.closed.push_back(closed);
        }
        return out;
    }

    for (std::size_t i = 0; i < nodes; ++i)
    {
        if (std::abs(f[i]) >= out.rank_tol) continue;
        tangency_cell_t cell;
        cell.index = i;
        cell.point = domain.point(i);
        detail::finish_cell(map, cell, out.rank_tol);
        out.components.push_back({out.cells.size()});
        out.closed.push_back(false);
        out.cells.push_back(std::move(cell));
    }
    return out;
}

// --------------------------------------------------------------------------------------------------------------------
// Maslov Sign
// --------------------------------------------------------------------------------------------------------------------

namespace detail {

inline auto has_fibre(map_descriptor_t const& map) noexcept -> bool
{
    return map.target == target_kind::cotangent || map.target == target_kind::jet1;
}

//! wrap an angle difference of lines into (-pi/2, pi/2]
inline auto wrap_line_angle(double d) noexcept -> double
{
    while (d > 0.5 * pi) d -= pi;
    while (d <= -0.5 * pi) d += pi;
    return d;
}

} // namespace detail

/**
    Maslov co-orientation sign of a corank-one tangency point

    Freezes the kernel line l and the cokernel direction c of d(pi o f) at q and follows the line spanned by
    (<d(pi o f) l, c>, <dp l, c>) while q moves by +-h along nu. Returns +1 for counter-clockwise rotation, -1 for
    clockwise and 0 when the rotation is below 1e-10 rad (indeterminate). Flipping p (or p and z) flips the sign.
*/
inline auto maslov_sign(map_descriptor_t const& map, vec_t const& q, vec_t const& kernel, vec_t const& normal,
                        double h = 1e-5) -> int
{
    require(detail::has_fibre(map), error_kind::precondition_failed, "Maslov signs need a cotangent or 1-jet target");
    int const n = map.domain_dim;
    require(kernel.size() == n && normal.size() == n, error_kind::dimension_mismatch, "kernel and normal live in the source");
    require(normal.norm() > 0.0 && kernel.norm() > 0.0, error_kind::precondition_failed, "kernel and normal must be nonzero");

    Eigen::JacobiSVD<mat_t> svd(detail::horizontal_jacobian(map, q), Eigen::ComputeFullU);
    vec_t const c = svd.matrixU().col(n - 1);
    vec_t const l = kernel.normalized();
    vec_t const nu = normal.normalized();
    auto const angle = [&](double s) {
        mat_t const j = jacobian(map, q + s * nu);
        double const base = c.dot(j.topRows(n) * l);
        double const fibre = c.dot(j.middleRows(n, n) * l);
        return std::atan2(fibre, base);
    };
    double const d = detail::wrap_line_angle(angle(h) - angle(-h));
    if (std::abs(d) < 1e-10) return 0;
    return d > 0.0 ? 1 : -1;
}

// --------------------------------------------------------------------------------------------------------------------
// Stratification
// --------------------------------------------------------------------------------------------------------------------

enum class stratum_label
{
    fold,          //!< Sigma^{10}: kernel transverse to the locus
    pleat,         //!< Sigma^{110}: simple tangency of the kernel with the locus
    higher_pleat,  //!< Sigma^{111...}: degenerate tangency of the kernel with the locus
    corank_two,    //!< Sigma^{>=2}
    indeterminate, //!< normal not resolvable (gradient below 1e-10)
};

inline auto to_string(stratum_label s) noexcept -> char const*
{
    switch (s)
    {
    case stratum_label::fold: return "S10";
    case stratum_label::pleat: return "S110";
    case stratum_label::higher_pleat: return "S111+";
    case stratum_label::corank_two: return "S2+";
    case stratum_label::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

struct stratum_cell_t
{
    std::size_t index = 0;
    vec_t point;
    int corank = 1;
    int full_corank = 0;
    stratum_label label = stratum_label::indeterminate;
    vec_t kernel; //!< unit kernel line of d(pi o f), transported continuously along each component
    vec_t normal; //!< unit locus normal
    int maslov = 0;
};

struct stratified_locus_t
{
    int n = 0;
    double cell_size = 0.0;
    std::vector<stratum_cell_t> cells;
    std::vector<std::vector<std::size_t>> components;
    std::vector<bool> closed;

    auto count(stratum_label s) const -> std::size_t
    {
        return static_cast<std::size_t>(
            std::count_if(cells.begin(), cells.end(), [s](stratum_cell_t const& c) { return c.label == s; }));
    }
};

//! sine threshold for "kernel tangent to the locus": 1e-3 rad
inline constexpr double pleat_angle_tol = 1e-3;

namespace detail {

inline auto kernel_line(map_descriptor_t const& map, vec_t const& q) -> vec_t
{
    Eigen::JacobiSVD<mat_t> svd(horizontal_jacobian(map, q), Eigen::ComputeFullV);
    return svd.matrixV().col(map.domain_dim - 1);
}

inline auto canonical_sign(vec_t v) -> vec_t
{
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    return v[k] < 0.0 ? vec_t(-v) : v;
}

//! outward orientation of a closed polygon's normals: +1 if counter-clockwise
inline auto polygon_orientation(std::vector<vec_t> const& pts) -> double
{
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        vec_t const& a = pts[i];
        vec_t const& b = pts[(i + 1) % pts.size()];
        area += a[0] * b[1] - a[1] * b[0];
    }
    return area >= 0.0 ? 1.0 : -1.0;
}

} // namespace detail

/**
    label every locus cell and attach kernel, normal and Maslov sign

    Normals: +d/dq in one dimension; outward for closed curves; the gradient of the signed smallest singular value
    for open curves. Kernels are transported continuously along each curve. A cell is labelled a pleat when it holds
    a sign change of <l, nu>, whose position is refined by bisection on the locus; the change is simple (S110) when
    |d<l,nu>/ds| exceeds 1e-3 per unit length, otherwise S111+.
*/
inline auto stratify(map_descriptor_t const& map, tangency_locus_t const& locus) -> stratified_locus_t
{
    int const n = locus.n;
    stratified_locus_t out;
    out.n = n;
    out.cell_size = locus.cell_size();
    out.components = locus.components;
    out.closed = locus.closed;
    out.cells.resize(locus.cells.size());

    std::vector<vec_t> grads(locus.cells.size());
    parallel_for(locus.cells.size(), [&](std::size_t c) {
        tangency_cell_t const& in = locus.cells[c];
        stratum_cell_t& s = out.cells[c];
        s.index = in.index;
        s.point = in.point;
        s.corank = in.corank;
        s.full_corank = in.full_corank;
        s.kernel = detail::canonical_sign(detail::kernel_line(map, in.point));
        grads[c] = detail::sigma_gradient(map, in.point);
    });

    for (std::size_t k = 0; k < locus.components.size(); ++k)
    {
        auto const& comp = locus.components[k];
        std::vector<vec_t> pts;
        for (std::size_t c : comp) pts.push_back(out.cells[c].point);
        double const orient = (n == 2 && locus.closed[k]) ? detail::polygon_orientation(pts) : 0.0;

        for (std::size_t idx = 0; idx < comp.size(); ++idx)
        {
            stratum_cell_t& s = out.cells[comp[idx]];
            vec_t const& g = grads[comp[idx]];
            if (n == 1)
                s.normal = vec_t::Ones(1);
            else if (g.norm() < 1e-10)
                s.normal = vec_t::Zero(n);
            else
            {
                s.normal = g.normalized();
                if (orient != 0.0 && comp.size() >= 3)
                {
                    vec_t const& a = out.cells[comp[(idx + comp.size() - 1) % comp.size()]].point;
                    vec_t const& b = out.cells[comp[(idx + 1) % comp.size()]].point;
                    vec_t const t = b - a;
                    vec_t outward(2);
                    outward << orient * t[1], -orient * t[0];
                    if (outward.dot(s.normal) < 0.0) s.normal = -s.normal;
                }
            }
            if (idx > 0 && s.kernel.dot(out.cells[comp[idx - 1]].kernel) < 0.0) s.kernel = -s.kernel;
        }

        for (std::size_t c : comp)
        {
            stratum_cell_t& s = out.cells[c];
            if (s.corank >= 2)
                s.label = stratum_label::corank_two;
            else if (n >= 2 && s.normal.norm() == 0.0)
                s.label = stratum_label::indeterminate;
            else
                s.label = stratum_label::fold;
        }

        if (n != 2 || comp.size() < 2) continue;
        std::size_t const links = locus.closed[k] ? comp.size() : comp.size() - 1;
        std::vector<bool> marked(comp.size(), false);
        for (std::size_t idx = 0; idx < links; ++idx)
        {
            std::size_t const ia = idx, ib = (idx + 1) % comp.size();
            stratum_cell_t const& a = out.cells[comp[ia]];
            stratum_cell_t const& b = out.cells[comp[ib]];
            if (a.label != stratum_label::fold || b.label != stratum_label::fold) continue;
            vec_t const lb = b.kernel.dot(a.kernel) < 0.0 ? vec_t(-b.kernel) : b.kernel;
            double const ga = a.kernel.dot(a.normal);
            double const gb = lb.dot(b.normal);
            if ((ga >= 0.0) == (gb >= 0.0)) continue;

            // bisect on the locus between the two representatives
            vec_t const lo = a.point.cwiseMin(b.point).array() - out.cell_size;
            vec_t const hi = a.point.cwiseMax(b.point).array() + out.cell_size;
            auto const g_at = [&](vec_t const& q) {
                vec_t l = detail::kernel_line(map, q);
                if (l.dot(a.kernel) < 0.0) l = -l;
                vec_t nu = detail::sigma_gradient(map, q);
                if (nu.dot(a.normal) < 0.0) nu = -nu;
                return l.dot(nu.normalized());
            };
            double s0 = 0.0, s1 = 1.0, g0 = ga;
            vec_t p = a.point;
            for (int it = 0; it < 50; ++it)
            {
                double const sm = 0.5 * (s0 + s1);
                p = detail::project_to_locus(map, (1.0 - sm) * a.point + sm * b.point, lo, hi);
                double const gm = g_at(p);
                if ((gm >= 0.0) == (g0 >= 0.0))
                {
                    s0 = sm;
                    g0 = gm;
                }
                else
                    s1 = sm;
                if ((s1 - s0) * (b.point - a.point).norm() < 1e-13) break;
            }
            std::size_t const host = (p - a.point).norm() <= (p - b.point).norm() ? ia : ib;
            if (marked[host]) continue;
            marked[host] = true;
            stratum_cell_t& h = out.cells[comp[host]];
            double const slope = std::abs(gb - ga) / std::max((b.point - a.point).norm(), 1e-300);
            h.point = p;
            h.kernel = host == ia ? detail::kernel_line(map, p) : detail::kernel_line(map, p);
            if (h.kernel.dot(a.kernel) < 0.0) h.kernel = -h.kernel;
            h.label = slope > 1e-3 ? stratum_label::pleat : stratum_label::higher_pleat;
        }
    }

    if (detail::has_fibre(map))
    {
        parallel_for(out.cells.size(), [&](std::size_t c) {
            stratum_cell_t& s = out.cells[c];
            if (s.corank == 1 && s.normal.norm() > 0.0) s.maslov = maslov_sign(map, s.point, s.kernel, s.normal);
        });
    }
    return out;
}

// --------------------------------------------------------------------------------------------------------------------
// Double-Fold Pairing
// --------------------------------------------------------------------------------------------------------------------

struct signed_point_t
{
    double position = 0.0;
    int sign = 0;
};

struct fold_pair_t
{
    std::size_t inner = 0; //!< component index (or point index in one dimension)
    std::size_t outer = 0;
    std::vector<vec_t> witness; //!< path in the region between the two components
};

struct double_fold_pairing_t
{
    std::vector<fold_pair_t> pairs;
    std::vector<std::size_t> leftovers;
};

/**
    innermost-first greedy pairing of fold points on a line

    Repeatedly pairs the closest neighbouring points of opposite Maslov sign, removes them and continues, so nested
    configurations pair from the inside out. Points with sign 0 never pair.
*/
inline auto pair_double_folds(std::vector<signed_point_t> const& points) -> double_fold_pairing_t
{
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a].position < points[b].position; });

    double_fold_pairing_t out;
    for (;;)
    {
        std::optional<std::size_t> best;
        double best_gap = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
        {
            signed_point_t const& a = points[order[i]];
            signed_point_t const& b = points[order[i + 1]];
            if (a.sign == 0 || b.sign == 0 || a.sign == b.sign) continue;
            double const gap = b.position - a.position;
            if (!best || gap < best_gap)
            {
                best = i;
                best_gap = gap;
            }
        }
        if (!best) break;
        fold_pair_t pair;
        pair.inner = order[*best];
        pair.outer = order[*best + 1];
        pair.witness = {vec_t::Constant(1, points[pair.inner].position), vec_t::Constant(1, points[pair.outer].position)};
        out.pairs.push_back(std::move(pair));
        order.erase(order.begin() + static_cast<std::ptrdiff_t>(*best), order.begin() + static_cast<std::ptrdiff_t>(*best) + 2);
    }
    out.leftovers = order;
    std::sort(out.leftovers.begin(), out.leftovers.end());
    return out;
}

namespace detail {

inline auto point_in_polygon(vec_t const& p, std::vector<vec_t> const& poly) -> bool
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
    {
        vec_t const& a = poly[i];
        vec_t const& b = poly[j];
        if ((a[1] > p[1]) != (b[1] > p[1]) && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0]) inside = !inside;
    }
    return inside;
}

inline auto polygon_area(std::vector<vec_t> const& pts) -> double
{
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        vec_t const& a = pts[i];
        vec_t const& b = pts[(i + 1) % pts.size()];
        area += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * std::abs(area);
}

} // namespace detail

//! majority Maslov sign of a component, 0 when undecided
inline auto component_sign(stratified_locus_t const& s, std::size_t k) -> int
{
    int plus = 0, minus = 0;
    for (std::size_t c : s.components[k])
    {
        if (s.cells[c].label != stratum_label::fold) continue;
        plus += s.cells[c].maslov > 0;
        minus += s.cells[c].maslov < 0;
    }
    return plus > minus ? 1 : (minus > plus ? -1 : 0);
}

/**
    pair the components of a stratified locus into double folds

    One dimension: the point pairing above. Two dimensions: closed curves are processed by increasing enclosed area;
    each pairs with the smallest unpaired curve enclosing it when their signs are opposite and no other unpaired curve
    lies in the annulus between them. Open curves and unmatched ones are leftovers. The witness is a straight path
    between the closest vertices.
*/
inline auto pair_double_folds(stratified_locus_t const& s) -> double_fold_pairing_t
{
    std::size_t const m = s.components.size();
    if (s.n == 1)
    {
        std::vector<signed_point_t> pts;
        for (std::size_t k = 0; k < m; ++k) pts.push_back({s.cells[s.components[k].front()].point[0], component_sign(s, k)});
        return pair_double_folds(pts);
    }
    require(s.n == 2, error_kind::precondition_failed, "double-fold pairing is implemented for n <= 2");

    std::vector<std::vector<vec_t>> polys(m);
    std::vector<double> area(m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
    {
        for (std::size_t c : s.components[k]) polys[k].push_back(s.cells[c].point);
        if (s.closed[k] && polys[k].size() >= 3) area[k] = detail::polygon_area(polys[k]);
    }
    auto const encloses = [&](std::size_t outer, std::size_t inner) {
        return outer != inner && area[outer] > area[inner] && detail::point_in_polygon(polys[inner].front(), polys[outer]);
    };

    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < m; ++k)
        if (area[k] > 0.0) order.push_back(k);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return area[a] < area[b]; });

    std::vector<bool> paired(m, false);
    double_fold_pairing_t out;
    for (std::size_t inner : order)
    {
        if (paired[inner]) continue;
        std::optional<std::size_t> parent;
        for (std::size_t cand : order)
            if (!paired[cand] && encloses(cand, inner) && (!parent || area[cand] < area[*parent])) parent = cand;
        if (!parent) continue;
        bool blocked = false;
        for (std::size_t other : order)
            if (other != inner && other != *parent && !paired[other] && encloses(*parent, other) && !encloses(other, inner) &&
                !encloses(inner, other))
                blocked = true;
        int const si = component_sign(s, inner), so = component_sign(s, *parent);
        if (blocked || si == 0 || so == 0 || si == so) continue;

        fold_pair_t pair;
        pair.inner = inner;
        pair.outer = *parent;
        double best = 1e300;
        vec_t from, to;
        for (vec_t const& a : polys[inner])
            for (vec_t const& b : polys[*parent])
                if ((a - b).squaredNorm() < best)
                {
                    best = (a - b).squaredNorm();
                    from = a;
                    to = b;
                }
        for (int i = 0; i <= 8; ++i) pair.witness.push_back(from + (to - from) * (i / 8.0));
        paired[inner] = paired[*parent] = true;
        out.pairs.push_back(std::move(pair));
    }
    for (std::size_t k = 0; k < m; ++k)
        if (!paired[k]) out.leftovers.push_back(k);
    return out;
}

// --------------------------------------------------------------------------------------------------------------------
// Quadratic Forms
// --------------------------------------------------------------------------------------------------------------------

//! one channel of the splitting: the square of dq_i (i == j) or of dq_i + dq_j (i < j)
struct sos_channel_t
{
    int i = 0;
    int j = 0;

    auto ell(int n) const -> vec_t
    {
        vec_t l = vec_t::Zero(n);
        l[i] += 1.0;
        if (j != i) l[j] += 1.0;
        return l;
    }

    //! basis of ker(ell) as columns: the fixed kernel of the channel
    auto kernel(int n) const -> mat_t
    {
        mat_t k = mat_t::Zero(n, n - 1);
        int col = 0;
        if (i != j)
        {
            k(i, col) = 1.0;
            k(j, col) = -1.0;
            ++col;
        }
        for (int a = 0; a < n; ++a)
            if (a != i && a != j) k(a, col++) = 1.0;
        return k;
    }
};

struct sos_term_t
{
    sos_channel_t channel;
    double coefficient = 0.0;
    vec_t ell;
};

//! all n(n+1)/2 channels: diagonal squares first, then pairs in lexicographic order
inline auto sos_channels(int n) -> std::vector<sos_channel_t>
{
    std::vector<sos_channel_t> out;
    for (int i = 0; i < n; ++i) out.push_back({i, i});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.push_back({i, j});
    return out;
}

inline auto check_symmetric(mat_t const& q) -> void
{
    require(q.rows() == q.cols() && q.rows() >= 1, error_kind::dimension_mismatch, "quadratic forms are square");
    require(q.allFinite(), error_kind::non_finite, "quadratic form has non-finite entries");
    double const scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    require((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, error_kind::asymmetric_input,
            "quadratic form matrix is not symmetric");
}

//! coefficients of Q in the channels of sos_channels: c_ij = Q_ij, c_ii = Q_ii - sum_{j != i} Q_ij
inline auto sos_coefficients(mat_t const& q) -> std::vector<double>
{
    int const n = static_cast<int>(q.rows());
    std::vector<double> c;
    for (sos_channel_t const& ch : sos_channels(n))
    {
        if (ch.i == ch.j)
        {
            double v = q(ch.i, ch.i);
            for (int j = 0; j < n; ++j)
                if (j != ch.i) v -= 0.5 * (q(ch.i, j) + q(j, ch.i));
            c.push_back(v);
        }
        else
            c.push_back(0.5 * (q(ch.i, ch.j) + q(ch.j, ch.i)));
    }
    return c;
}

/**
    split a symmetric form into rank-one squares Q = sum c (ell ell^T), ell in {dq_i, dq_i + dq_j}

    Terms with a zero coefficient are omitted. Each term has the fixed kernel ker(ell).
*/
inline auto sos_decompose(mat_t const& q) -> std::vector<sos_term_t>
{
    check_symmetric(q);
    int const n = static_cast<int>(q.rows());
    auto const channels = sos_channels(n);
    auto const coeffs = sos_coefficients(q);
    std::vector<sos_term_t> out;
    for (std::size_t k = 0; k < channels.size(); ++k)
        if (coeffs[k] != 0.0) out.push_back({channels[k], coeffs[k], channels[k].ell(n)});
    return out;
}

inline auto sos_reconstruct(std::vector<sos_term_t> const& terms, int n) -> mat_t
{
    mat_t q = mat_t::Zero(n, n);
    for (sos_term_t const& t : terms) q += t.coefficient * t.ell * t.ell.transpose();
    return q;
}

inline auto operator_norm(mat_t const& symmetric) -> double
{
    Eigen::SelfAdjointEigenSolver<mat_t> eig(symmetric, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

//! a path of symmetric forms sampled at increasing times from 0 to 1, linear in between
struct quadratic_path_t
{
    std::vector<double> times;
    std::vector<mat_t> forms;

    auto validate() const -> void
    {
        require(times.size() >= 2 && times.size() == forms.size(), error_kind::dimension_mismatch,
                "a form path needs at least two samples with matching times");
        require(times.front() == 0.0 && times.back() == 1.0, error_kind::parameter_out_of_range, "path times span [0, 1]");
        for (std::size_t i = 0; i < times.size(); ++i)
        {
            check_symmetric(forms[i]);
            require(forms[i].rows() == forms[0].rows(), error_kind::dimension_mismatch, "path forms share one size");
            if (i > 0) require(times[i] > times[i - 1], error_kind::parameter_out_of_range, "path times must increase");
        }
    }

    auto dim() const -> int { return static_cast<int>(forms.front().rows()); }

    auto at(double t) const -> mat_t
    {
        auto const it = std::upper_bound(times.begin(), times.end(), t);
        std::size_t k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - times.begin(), 1, static_cast<std::ptrdiff_t>(times.size()) - 1));
        double const w = (t - times[k - 1]) / (times[k] - times[k - 1]);
        return (1.0 - w) * forms[k - 1] + w * forms[k];
    }
};

//! one move: only channel `channel` changes, linearly from `from` to `to` over [t0, t1]
struct schedule_segment_t
{
    double t0 = 0.0;
    double t1 = 0.0;
    std::size_t channel = 0;
    double from = 0.0;
    double to = 0.0;
};

struct simple_schedule_t
{
    int n = 0;
    int steps = 0;
    std::vector<sos_channel_t> channels;
    std::vector<double> initial; //!< channel coefficients at t = 0
    std::vector<schedule_segment_t> segments;
    double c0_error = 0.0; //!< max over t of the operator norm of (scheduled - path)
};

/**
    approximate a path of forms by single-channel moves

    [0, 1] is cut into k steps. In each step every channel with a nonzero increment moves twice, by half its increment
    each time: first in an order that greedily keeps the partial sum of moves close (in Frobenius norm) to the straight
    increment of the step, then in the reverse order. Each move takes a share of its half-step proportional to its
    size, so the schedule meets the path at step ends and mid-steps. Between breakpoints both the schedule and the path are
    linear, so the C0 error is evaluated exactly at breakpoints and path samples.
*/
inline auto piecewise_simple_schedule(quadratic_path_t const& path, int k) -> simple_schedule_t
{
    path.validate();
    require(k >= 1, error_kind::parameter_out_of_range, "schedule needs at least one step");
    int const n = path.dim();
    simple_schedule_t out;
    out.n = n;
    out.steps = k;
    out.channels = sos_channels(n);
    std::size_t const m = out.channels.size();
    std::vector<mat_t> basis;
    for (auto const& ch : out.channels)
    {
        vec_t const l = ch.ell(n);
        basis.push_back(l * l.transpose());
    }

    out.initial = sos_coefficients(path.at(0.0));
    std::vector<double> current = out.initial;
    for (int step = 0; step < k; ++step)
    {
        double const t0 = static_cast<double>(step) / k, t1 = static_cast<double>(step + 1) / k;
        std::vector<double> const target = sos_coefficients(path.at(t1));
        std::vector<double> delta(m), weight(m);
        mat_t total = mat_t::Zero(n, n);
        double weight_sum = 0.0;
        for (std::size_t c = 0; c < m; ++c)
        {
            delta[c] = target[c] - current[c];
            weight[c] = std::abs(delta[c]) * (c < static_cast<std::size_t>(n) ? 1.0 : 2.0);
            weight_sum += weight[c];
            total += delta[c] * basis[c];
        }
        if (weight_sum == 0.0)
        {
            continue;
        }
        std::vector<bool> used(m, false);
        std::vector<std::size_t> order;
        mat_t partial = mat_t::Zero(n, n);
        double elapsed = 0.0;
        for (;;)
        {
            std::optional<std::size_t> best;
            double best_err = 0.0;
            for (std::size_t c = 0; c < m; ++c)
            {
                if (used[c] || weight[c] == 0.0) continue;
                double const frac = (elapsed + weight[c]) / weight_sum;
                double const err = (partial + delta[c] * basis[c] - frac * total).norm();
                if (!best || err < best_err)
                {
                    best = c;
                    best_err = err;
                }
            }
            if (!best) break;
            std::size_t const c = *best;
            used[c] = true;
            elapsed += weight[c];
            order.push_back(c);
            partial += delta[c] * basis[c];
        }
        // palindromic sweep: half of every change in the greedy order, the other half in reverse; the scheduled form
        // meets the path at mid-step and the intermediate gaps are halved
        double const mid = 0.5 * (t0 + t1);
        double half_elapsed = 0.0;
        for (std::size_t const c : order)
        {
            double const s0 = t0 + (mid - t0) * half_elapsed / weight_sum;
            half_elapsed += weight[c];
            double const s1 = t0 + (mid - t0) * half_elapsed / weight_sum;
            out.segments.push_back({s0, s1, c, current[c], current[c] + 0.5 * delta[c]});
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it)
        {
            std::size_t const c = *it;
            double const s0 = mid + (t1 - mid) * (weight_sum - half_elapsed) / weight_sum;
            half_elapsed -= weight[c];
            double const s1 = mid + (t1 - mid) * (weight_sum - half_elapsed) / weight_sum;
            out.segments.push_back({s0, s1, c, current[c] + 0.5 * delta[c], target[c]});
        }
        current = target;
    }

    // exact C0 error: both sides are piecewise linear between the union of breakpoints
    std::vector<double> cuts{0.0, 1.0};
    for (auto const& s : out.segments) cuts.push_back(s.t1);
    cuts.insert(cuts.end(), path.times.begin(), path.times.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // sweep the segments in order, tracking coefficients
    std::vector<double> coeff = out.initial;
    std::size_t seg = 0;
    double err = 0.0;
    auto const form_of = [&](std::vector<double> const& c) {
        mat_t q = mat_t::Zero(n, n);
        for (std::size_t i = 0; i < m; ++i) q += c[i] * basis[i];
        return q;
    };
    for (double t : cuts)
    {
        while (seg < out.segments.size() && out.segments[seg].t1 <= t)
        {
            coeff[out.segments[seg].channel] = out.segments[seg].to;
            ++seg;
        }
        std::vector<double> c = coeff;
        if (seg < out.segments.size() && out.segments[seg].t0 < t)
        {
            auto const& s = out.segments[seg];
            double const w = (t - s.t0) / (s.t1 - s.t0);
            c[s.channel] = (1.0 - w) * s.from + w * s.to;
        }
        err = std::max(err, operator_norm(form_of(c) - path.at(t)));
    }
    out.c0_error = err;
    return out;
}

} // namespace lw
