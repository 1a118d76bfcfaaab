// SPDX-License-Identifier: MIT
/**
    \file
    \brief model catalog: spec parsing, defaults, rejection of unknown names, closedness of every entry
*/

#include <lw/catalog.hpp>
#include <lw/planes.hpp>
#include <gtest/gtest.h>

using namespace lw;
using namespace testing;

namespace {

auto expect_config_error(std::string const& text) -> void
{
    try
    {
        resolve_model(text);
        ADD_FAILURE() << "expected config_error for " << text;
    }
    catch (error const& e)
    {
        EXPECT_EQ(e.kind(), error_kind::config_error) << text;
    }
}

} // namespace

TEST(catalog, parses_family_and_parameters)
{
    auto const s = parse_model_spec("cusp-sharpening?n=2&delta=0.05&eps=0.1&t=1");
    EXPECT_EQ(s.family, "cusp-sharpening");
    ASSERT_EQ(s.params.size(), 4u);
    EXPECT_DOUBLE_EQ(s.params.at("delta"), 0.05);
    EXPECT_DOUBLE_EQ(s.params.at("t"), 1.0);
    EXPECT_TRUE(parse_model_spec("wrinkle").params.empty());
}

TEST(catalog, rejects_bad_specs)
{
    expect_config_error("no-such-model");
    expect_config_error("wrinkle?n=2&colour=3");
    expect_config_error("wrinkle?n=two");
    expect_config_error("wrinkle?n=2.5");
    expect_config_error("wrinkle?=2");
    expect_config_error("?n=2");
}

TEST(catalog, defaults_fill_missing_parameters)
{
    auto const m = resolve_model("wrinkle");
    EXPECT_EQ(m.map.domain_dim, 2);
    EXPECT_EQ(m.map.target_dim, 3);
    EXPECT_EQ(canonical_model_name(m), "wrinkle?n=2&r=1");
    auto const k = resolve_model("lagrangian-wrinkle?n=3");
    EXPECT_EQ(k.map.domain_dim, 3);
    EXPECT_EQ(k.domain.lower.size(), 3u);
}

TEST(catalog, every_entry_builds_and_is_closed_where_it_should_be)
{
    for (auto const& entry : model_catalog())
    {
        auto r = resolve_model(entry.family);
        r.domain.grid.assign(r.domain.grid.size(), 9);
        ASSERT_EQ(r.map.domain_dim, static_cast<int>(r.domain.lower.size())) << entry.family;
        double const tol = entry.jacobian_oracle ? 1e-10 : 1e-6;
        if (entry.closedness == closedness_kind::symplectic)
            EXPECT_LT(pullback_residual(r.map, r.domain, form_kind::symplectic), tol) << entry.family;
        if (entry.closedness == closedness_kind::contact)
            EXPECT_LT(pullback_residual(r.map, r.domain, form_kind::contact), tol) << entry.family;
    }
}

TEST(catalog, oscillating_model_is_excluded_from_the_jacobian_oracle)
{
    EXPECT_FALSE(find_catalog_entry("lagrangian-ell").jacobian_oracle);
    EXPECT_FALSE(find_catalog_entry("legendrian-ell").jacobian_oracle);
    EXPECT_TRUE(find_catalog_entry("cusp").jacobian_oracle);
}
