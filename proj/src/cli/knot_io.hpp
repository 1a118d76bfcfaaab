// SPDX-License-Identifier: MIT
/**
    \file
    \brief JSON front and decoration descriptions and the built-in fronts addressable by name

    Fronts are given either by Fourier coefficients (of q and z, or of q and the slope p) for closed fronts, or by
    polynomial coefficients of q' and p for a chart over [0, 1]. docs/formats.md lists the exact shapes.
*/

#pragma once

#include <lw/knots.hpp>

#include <json.hpp>

#include <string>

namespace lw::cli {

//! front from a JSON object with "kind" in {"fourier", "fourier-lift", "polynomial-chart"}
auto front_from_json(nlohmann::json const& j) -> knot_front_t;

/**
    built-in front by spec string

    "eye", "figure-eight", "figure-eight-flipped", and "takeover-plain", "takeover-nested", "takeover-dying" with
    optional parameters, e.g. "takeover-dying?eta=0.3&tau=0.75".
*/
auto builtin_front(std::string const& spec) -> knot_front_t;

//! the decoration a built-in front is meant to carry, or the canonical one of its singularities
auto builtin_decoration(std::string const& spec, knot_front_t const& front) -> decoration_t;

//! decoration from {"points": [...], "intervals": [[from, to], ...]}
auto decoration_from_json(nlohmann::json const& j) -> decoration_t;

auto decoration_to_json(decoration_t const& d) -> nlohmann::json;
auto report_to_json(knot_front_t const& front, decoration_t const& d, decoration_report_t const& r) -> nlohmann::json;

} // namespace lw::cli
