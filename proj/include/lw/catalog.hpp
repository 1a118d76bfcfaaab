// SPDX-License-Identifier: MIT
/**
    \file
    \brief named model catalog: "family?key=value&..." strings resolved into map descriptors with default domains

    Every local model and the oscillating model are addressable by a family name plus parameters, for example
    "lagrangian-wrinkle?n=2" or "cusp-sharpening?n=2&delta=0.05&eps=0.1&t=1". Unknown families and unknown keys are
    rejected. Each entry also states which closedness form its pullback should kill and a default sampling domain.
*/

#pragma once

#include "lw/core.hpp"
#include "lw/jet.hpp"
#include "lw/models.hpp"
#include "lw/planes.hpp"
#include "lw/wrinkling.hpp"

#include <cmath>
#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lw {

// --------------------------------------------------------------------------------------------------------------------
// Model Specs
// --------------------------------------------------------------------------------------------------------------------

//! a parsed "family?key=value&..." string
struct model_spec_t
{
    std::string family;
    std::map<std::string, double> params;
};

inline auto parse_model_spec(std::string const& text) -> model_spec_t
{
    model_spec_t spec;
    auto const q = text.find('?');
    spec.family = text.substr(0, q);
    require(!spec.family.empty(), error_kind::config_error, "model name is empty");
    if (q == std::string::npos) return spec;
    std::string rest = text.substr(q + 1);
    while (!rest.empty())
    {
        auto const amp = rest.find('&');
        std::string const item = rest.substr(0, amp);
        rest = amp == std::string::npos ? std::string{} : rest.substr(amp + 1);
        if (item.empty()) continue;
        auto const eq = item.find('=');
        require(eq != std::string::npos && eq > 0, error_kind::config_error, "model parameter '" + item + "' needs key=value");
        std::string const key = item.substr(0, eq);
        std::string const value = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(value, &used);
        }
        catch (std::exception const&)
        {
            used = 0;
        }
        require(used == value.size() && !value.empty() && std::isfinite(v), error_kind::config_error,
                "model parameter '" + key + "' is not a finite number");
        spec.params[key] = v;
    }
    return spec;
}

// --------------------------------------------------------------------------------------------------------------------
// Catalog
// --------------------------------------------------------------------------------------------------------------------

//! what the pullback check of a model should test
enum class closedness_kind
{
    none,        //!< smooth maps into euclidean space
    symplectic,  //!< Lagrangian into T*R^n
    contact,     //!< Legendrian into J^1(R^n, R)
};

using params_t = std::map<std::string, double>;

struct catalog_entry_t
{
    std::string family;
    std::string summary;
    params_t defaults; //!< the accepted keys and their default values
    std::function<map_descriptor_t(params_t const&)> build;
    std::function<param_domain_t(params_t const&)> domain;
    closedness_kind closedness = closedness_kind::none;
    bool jacobian_oracle = true; //!< part of the analytic-vs-difference jacobian check
    double residual_floor = 0.0; //!< smallest pullback residual bound that is meaningful for this entry
};

namespace detail {

inline auto int_param(params_t const& p, std::string const& key) -> int
{
    double const v = p.at(key);
    require(v == std::round(v) && std::abs(v) < 1e6, error_kind::config_error, "parameter '" + key + "' must be an integer");
    return static_cast<int>(v);
}

inline auto wrinkle_domain(params_t const& p) -> param_domain_t
{
    return cube_domain(int_param(p, "n"), -1.5, 1.5, 65);
}

inline auto sharpening(params_t const& p) -> sharpening_params_t
{
    return {int_param(p, "n"), p.at("delta"), p.at("eps"), p.at("t")};
}

inline auto ell_model(params_t const& p, bool lift) -> map_descriptor_t
{
    int const n = int_param(p, "n");
    wrinkle_params_t w;
    w.N = int_param(p, "N");
    w.gamma = p.at("gamma");
    w.alpha = p.at("alpha");
    w.sigma = p.at("sigma");
    w.delta = p.at("delta");
    w.validate();
    auto const osc = std::make_shared<oscillator_t const>(w, build_zeta(w.sigma, w.alpha));
    return lagrangian_ell(osc, unit_box(n), 0.0, n, lift);
}

inline auto make_catalog() -> std::vector<catalog_entry_t>
{
    std::vector<catalog_entry_t> c;
    auto const add = [&c](std::string family, std::string summary, params_t defaults,
                          std::function<map_descriptor_t(params_t const&)> build,
                          std::function<param_domain_t(params_t const&)> domain, closedness_kind closedness,
                          bool oracle = true, double floor = 0.0) {
        c.push_back({std::move(family), std::move(summary), std::move(defaults), std::move(build), std::move(domain),
                     closedness, oracle, floor});
    };
    auto const wrinkle_pair = [&](std::string lag, std::string leg, std::string summary, params_t defaults,
                                  std::function<map_descriptor_t(params_t const&, bool)> build,
                                  std::function<param_domain_t(params_t const&)> domain) {
        add(lag, summary, defaults, [build](params_t const& p) { return build(p, false); }, domain, closedness_kind::symplectic);
        add(leg, summary + " (Legendrian lift)", defaults, [build](params_t const& p) { return build(p, true); }, domain,
            closedness_kind::contact);
    };

    add("wrinkle", "smooth wrinkle W_{n,r} into R^{n+r}", {{"n", 2}, {"r", 1}},
        [](params_t const& p) { return wrinkle_smooth(int_param(p, "n"), int_param(p, "r")); }, wrinkle_domain,
        closedness_kind::none);
    add("embryo", "embryo E_{n,r} into R^{n+r}", {{"n", 2}, {"r", 1}},
        [](params_t const& p) { return embryo_map(int_param(p, "n"), int_param(p, "r")); }, wrinkle_domain,
        closedness_kind::none);
    wrinkle_pair("lagrangian-wrinkle", "legendrian-wrinkle", "Lagrangian wrinkle L_n", {{"n", 2}},
                 [](params_t const& p, bool lift) { return wrinkle_lagrangian(int_param(p, "n"), lift); }, wrinkle_domain);
    wrinkle_pair("lagrangian-embryo", "legendrian-embryo", "Lagrangian embryo", {{"n", 2}},
                 [](params_t const& p, bool lift) { return embryo_lagrangian(int_param(p, "n"), lift); }, wrinkle_domain);
    wrinkle_pair("fibered-wrinkle", "fibered-legendrian-wrinkle", "fibered Lagrangian wrinkle at |z| = z",
                 {{"n", 2}, {"m", 1}, {"z", 0.3}},
                 [](params_t const& p, bool lift) {
                     int const m = int_param(p, "m");
                     vec_t z = vec_t::Zero(m);
                     z[0] = p.at("z");
                     return fibered_wrinkle(int_param(p, "n"), m, z, lift);
                 },
                 wrinkle_domain);
    wrinkle_pair("regularized-wrinkle", "regularized-legendrian-wrinkle", "regularized Lagrangian wrinkle",
                 {{"n", 2}, {"delta", 0.1}, {"amplitude", 0.5}},
                 [](params_t const& p, bool lift) {
                     return regularize_lagrangian(int_param(p, "n"), build_reg_bump(p.at("delta"), p.at("amplitude")), lift);
                 },
                 wrinkle_domain);
    add("regularized-smooth-wrinkle", "regularized smooth wrinkle into R^{2n}", {{"n", 2}, {"delta", 0.1}, {"amplitude", 0.5}},
        [](params_t const& p) {
            return regularize_smooth(int_param(p, "n"), build_reg_bump(p.at("delta"), p.at("amplitude")));
        },
        wrinkle_domain, closedness_kind::none);
    wrinkle_pair("cusp", "legendrian-cusp", "cusp model C_n", {{"n", 2}},
                 [](params_t const& p, bool lift) { return cusp_model(int_param(p, "n"), lift); },
                 [](params_t const& p) { return cube_domain(int_param(p, "n"), -1.0, 1.0, 65); });
    wrinkle_pair("cusp-sharpening", "legendrian-cusp-sharpening", "sharpened cusp C_{n,t}",
                 {{"n", 2}, {"delta", 0.1}, {"eps", 0.1}, {"t", 1.0}},
                 [](params_t const& p, bool lift) { return cusp_sharpening(sharpening(p), lift); },
                 [](params_t const& p) { return cube_domain(int_param(p, "n"), -1.0, 1.0, 65); });
    wrinkle_pair("swallowtail", "legendrian-swallowtail", "birth/death of zig-zags G_n", {{"n", 2}},
                 [](params_t const& p, bool lift) { return swallowtail_model(int_param(p, "n"), lift); },
                 [](params_t const& p) { return cube_domain(int_param(p, "n"), -0.5, 0.5, 65); });
    wrinkle_pair("swallowtail-sharpening", "legendrian-swallowtail-sharpening", "sharpened birth/death G_{n,t}",
                 {{"n", 2}, {"delta", 0.1}, {"eps", 0.1}, {"t", 1.0}},
                 [](params_t const& p, bool lift) { return swallowtail_sharpening(sharpening(p), lift); },
                 [](params_t const& p) { return cube_domain(int_param(p, "n"), -0.3, 0.3, 65); });

    // the oscillating model has vertical tangencies at its cusps, so difference quotients are not a fair oracle, and
    // its primitive comes from quadrature, which limits the closedness residual to about 1e-6
    params_t const ell_defaults{{"n", 2}, {"N", 5}, {"gamma", 0.3}, {"alpha", 0.1}, {"sigma", 0.05}, {"delta", 0.1}};
    auto const ell_domain = [](params_t const& p) { return cube_domain(int_param(p, "n"), -1.0, 1.0, 65); };
    add("lagrangian-ell", "oscillating Lagrangian model on the unit box", ell_defaults,
        [](params_t const& p) { return ell_model(p, false); }, ell_domain, closedness_kind::symplectic, false, 1e-6);
    add("legendrian-ell", "oscillating Legendrian model on the unit box", ell_defaults,
        [](params_t const& p) { return ell_model(p, true); }, ell_domain, closedness_kind::contact, false, 1e-6);
    return c;
}

} // namespace detail

inline auto model_catalog() -> std::vector<catalog_entry_t> const&
{
    static std::vector<catalog_entry_t> const catalog = detail::make_catalog();
    return catalog;
}

inline auto find_catalog_entry(std::string const& family) -> catalog_entry_t const&
{
    for (auto const& e : model_catalog())
        if (e.family == family) return e;
    require(false, error_kind::config_error, "unknown model family '" + family + "'");
    return model_catalog().front();
}

//! defaults overridden by the spec's parameters; unknown keys are rejected
inline auto resolve_params(catalog_entry_t const& entry, params_t const& given) -> params_t
{
    params_t p = entry.defaults;
    for (auto const& [key, value] : given)
    {
        require(p.count(key) != 0, error_kind::config_error, "model '" + entry.family + "' has no parameter '" + key + "'");
        p[key] = value;
    }
    return p;
}

struct resolved_model_t
{
    catalog_entry_t const* entry = nullptr;
    params_t params;
    map_descriptor_t map;
    param_domain_t domain;
};

inline auto resolve_model(std::string const& text) -> resolved_model_t
{
    model_spec_t const spec = parse_model_spec(text);
    catalog_entry_t const& entry = find_catalog_entry(spec.family);
    resolved_model_t r;
    r.entry = &entry;
    r.params = resolve_params(entry, spec.params);
    r.map = entry.build(r.params);
    r.domain = entry.domain(r.params);
    return r;
}

//! canonical "family?key=value&..." text with every parameter spelled out, keys sorted
inline auto canonical_model_name(resolved_model_t const& r) -> std::string
{
    std::string s = r.entry->family;
    char sep = '?';
    for (auto const& [key, value] : r.params)
    {
        char buf[64];
        auto const res = std::to_chars(buf, buf + sizeof buf, value); // shortest text that round-trips
        s += sep + key + "=" + std::string(buf, res.ptr);
        sep = '&';
    }
    return s;
}

} // namespace lw
