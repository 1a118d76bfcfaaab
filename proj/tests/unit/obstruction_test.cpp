// SPDX-License-Identifier: MIT
/**
    \file
    \brief sphere caustic bookkeeping: stable kernel periodicity, Hopf obstruction, Euler characteristic relation
*/

#include <lw/obstruction.hpp>
#include <gtest/gtest.h>

using namespace lw;
using namespace testing;

namespace {

// independent oracle: pi_k(O) from the Bott table; pi_k(U) is torsion-free, so the kernel of the
// complexification on pi_{n-1} is Z/2 exactly where pi_{n-1}(O) = Z/2
auto homotopy_of_o(int k) -> char const*
{
    static char const* const table[8] = {"Z/2", "Z/2", "0", "Z", "0", "0", "0", "Z"};
    return table[k % 8];
}

} // namespace

TEST(stable_kernel, matches_bott_periodicity)
{
    for (int n = 1; n <= 64; ++n)
    {
        bool const z2 = std::string(homotopy_of_o(n - 1)) == "Z/2";
        EXPECT_EQ(stable_kernel(n) == kernel_group::z2, z2) << "n = " << n;
        EXPECT_EQ(stable_kernel(n), stable_kernel(n + 8));
    }
    EXPECT_STREQ(to_string(stable_kernel(2)), "Z/2");
    EXPECT_STREQ(to_string(stable_kernel(4)), "trivial");
}

TEST(stable_kernel, rejects_non_positive_n)
{
    try
    {
        stable_kernel(0);
        FAIL() << "expected parameter_out_of_range";
    }
    catch (error const& e)
    {
        EXPECT_EQ(e.kind(), error_kind::parameter_out_of_range);
    }
}

TEST(sphere_caustic, hopf_bundle_needs_a_pleat)
{
    for (long long e : {1LL, -1LL, 3LL, -5LL})
    {
        auto const v = sphere_caustic_verdict({2, e, std::nullopt});
        EXPECT_EQ(v.verdict, caustic_verdict::needs_higher_singularity) << "e = " << e;
        EXPECT_FALSE(v.chi_y.has_value());
        ASSERT_FALSE(v.notes.empty());
        EXPECT_NE(v.notes[0].find("Sigma^110"), std::string::npos);
    }
}

TEST(sphere_caustic, even_euler_number_is_foldable_with_matching_euler_characteristic)
{
    for (int n : {2, 4, 6, 10})
        for (long long e = -6; e <= 6; e += 2)
        {
            auto const v = sphere_caustic_verdict({n, e, std::nullopt});
            EXPECT_EQ(v.verdict, caustic_verdict::foldable);
            ASSERT_TRUE(v.chi_y.has_value());
            // e = 2 - 2 chi(Y) for one orientation, e = 2 chi(Y) - 2 for the other
            EXPECT_EQ(2 - 2 * (*v.chi_y)[1], e);
            EXPECT_EQ(2 * (*v.chi_y)[0] - 2, e);
        }
}

TEST(sphere_caustic, verdict_depends_only_on_the_size_of_e)
{
    for (long long e = 0; e <= 9; ++e)
        EXPECT_EQ(sphere_caustic_verdict({2, e, std::nullopt}).verdict, sphere_caustic_verdict({2, -e, std::nullopt}).verdict);
}

TEST(sphere_caustic, odd_dimension_is_undetermined)
{
    EXPECT_EQ(sphere_caustic_verdict({3, 2LL, std::nullopt}).verdict, caustic_verdict::undetermined_odd_n);
    EXPECT_EQ(sphere_caustic_verdict({9, std::nullopt, std::nullopt}).verdict, caustic_verdict::undetermined_odd_n);
}

TEST(sphere_caustic, missing_euler_number)
{
    EXPECT_EQ(sphere_caustic_verdict({4, std::nullopt, std::nullopt}).verdict, caustic_verdict::foldable);
    EXPECT_EQ(sphere_caustic_verdict({2, std::nullopt, true}).verdict, caustic_verdict::foldable);
    EXPECT_EQ(sphere_caustic_verdict({2, std::nullopt, false}).verdict, caustic_verdict::needs_higher_singularity);
    try
    {
        sphere_caustic_verdict({10, std::nullopt, std::nullopt});
        FAIL() << "expected precondition_failed";
    }
    catch (error const& e)
    {
        EXPECT_EQ(e.kind(), error_kind::precondition_failed);
    }
}

TEST(sphere_caustic, verdict_names)
{
    EXPECT_STREQ(to_string(caustic_verdict::foldable), "foldable");
    EXPECT_STREQ(to_string(caustic_verdict::needs_higher_singularity), "needs-higher-singularity");
    EXPECT_STREQ(to_string(caustic_verdict::undetermined_odd_n), "undetermined-odd-n");
}
