// SPDX-License-Identifier: MIT
/**
    \file
    \brief sphere caustic bookkeeping: the mod-8 stable kernel and the fold-only verdict for Lagrangian spheres

    A Lagrangian distribution V on S^n can be realized by a caustic with folds only when V is stably trivial as a real
    bundle. For even n this is governed by the Euler number e(V) together with the kernel of pi_{n-1}(O) -> pi_{n-1}(U),
    which Bott periodicity makes 8-periodic. When folds suffice, the fold locus bounds a region Y with
    chi(Y) = 1 +- e/2, i.e. e = 2 - 2 chi(Y) for one of the two orientations.
*/

#pragma once

#include "lw/core.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Stable Kernel
// --------------------------------------------------------------------------------------------------------------------

enum class kernel_group
{
    trivial,
    z2,
};

inline auto to_string(kernel_group g) noexcept -> char const*
{
    return g == kernel_group::z2 ? "Z/2" : "trivial";
}

//! kernel of pi_{n-1}(O) -> pi_{n-1}(U): Z/2 exactly when n = 1 or 2 mod 8
inline auto stable_kernel(int n) -> kernel_group
{
    require(n >= 1, error_kind::parameter_out_of_range, "stable_kernel needs n >= 1");
    int const r = n % 8;
    return r == 1 || r == 2 ? kernel_group::z2 : kernel_group::trivial;
}

// --------------------------------------------------------------------------------------------------------------------
// Sphere Caustic Verdict
// --------------------------------------------------------------------------------------------------------------------

struct sphere_caustic_query_t
{
    int n = 2;
    std::optional<long long> euler;     //!< Euler number e(V); meaningful for even n
    std::optional<bool> stably_trivial; //!< override when the stable class is known independently

    auto validate() const -> void
    {
        require(n >= 2, error_kind::parameter_out_of_range, "sphere caustic queries need n >= 2");
    }
};

enum class caustic_verdict
{
    foldable,
    needs_higher_singularity,
    undetermined_odd_n,
};

inline auto to_string(caustic_verdict v) noexcept -> char const*
{
    switch (v)
    {
    case caustic_verdict::foldable: return "foldable";
    case caustic_verdict::needs_higher_singularity: return "needs-higher-singularity";
    case caustic_verdict::undetermined_odd_n: return "undetermined-odd-n";
    }
    return "undetermined-odd-n";
}

struct obstruction_verdict_t
{
    caustic_verdict verdict = caustic_verdict::undetermined_odd_n;
    std::optional<std::array<long long, 2>> chi_y; //!< (1 + e/2, 1 - e/2) when foldable with a known e
    std::vector<std::string> notes;
};

/**
    decide whether a Lagrangian sphere with distribution V can have a fold-only caustic

    Even n with even e: foldable, with both Euler characteristic choices reported. Even n with odd e: a pleat is
    forced (the Hopf bundle on S^2 is the basic case). Even n without e: foldable when stable triviality is automatic
    (n not 1, 2 mod 8) or asserted by the override; otherwise e is required. Odd n is left undetermined. The verdict
    depends on e only through |e|.
*/
inline auto sphere_caustic_verdict(sphere_caustic_query_t const& q) -> obstruction_verdict_t
{
    q.validate();
    obstruction_verdict_t out;
    if (q.n % 2 == 1)
    {
        out.verdict = caustic_verdict::undetermined_odd_n;
        out.notes.emplace_back("odd n: pi_n(U_n) is nonzero, so the Euler number alone does not decide the question");
        return out;
    }
    if (q.euler)
    {
        long long const e = *q.euler;
        if (e % 2 != 0)
        {
            out.verdict = caustic_verdict::needs_higher_singularity;
            out.notes.emplace_back("odd Euler number: V is not stably trivial and a Sigma^110 pleat is unavoidable");
            return out;
        }
        out.verdict = caustic_verdict::foldable;
        out.chi_y = std::array<long long, 2>{1 + e / 2, 1 - e / 2};
        out.notes.emplace_back("fold locus bounds Y with chi(Y) = 1 +- e/2");
        return out;
    }
    if (q.stably_trivial)
    {
        out.verdict = *q.stably_trivial ? caustic_verdict::foldable : caustic_verdict::needs_higher_singularity;
        out.notes.emplace_back(*q.stably_trivial ? "stably trivial by assumption" : "not stably trivial by assumption");
        return out;
    }
    require(stable_kernel(q.n) == kernel_group::trivial, error_kind::precondition_failed,
            "n = " + std::to_string(q.n) + " is 2 mod 8: the Euler number is needed to decide stable triviality");
    out.verdict = caustic_verdict::foldable;
    out.notes.emplace_back("stable triviality is automatic for even n not congruent to 2 mod 8");
    return out;
}

} // namespace lw
