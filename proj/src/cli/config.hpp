// SPDX-License-Identifier: MIT
/**
    \file
    \brief scenario configuration: one declarative JSON file, strict key checking, flag overrides applied on top

    Every field has a default, so an empty object is a valid configuration. Unknown keys at any level are rejected
    with config_error rather than ignored, so a typo never silently falls back to a default.
*/

#pragma once

#include <lw/catalog.hpp>
#include <lw/planes.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lw::cli {

//! per-axis values; a single number in the file or on the command line applies to every axis
struct axis_values_t
{
    std::vector<double> values;

    auto at(std::size_t axis, std::size_t dim) const -> double;
};

struct domain_config_t
{
    std::optional<axis_values_t> lower;
    std::optional<axis_values_t> upper;
    std::optional<axis_values_t> grid;
};

struct output_config_t
{
    std::string csv;  //!< empty or "-" means stdout
    std::string svg;  //!< empty means no SVG
    std::string json; //!< empty or "-" means stdout
    std::string format = "csv"; //!< model-eval mesh format: csv or json
};

struct tolerance_config_t
{
    double residual = 1e-8;    //!< pullback residual bound of verify
    double jacobian = 1e-6;    //!< relative jacobian discrepancy bound of verify
    int samples = 1000;        //!< random points for the jacobian check
    double rank_rel = 1e-6;    //!< relative rank threshold of sing-analyze
};

struct convergence_config_t
{
    std::vector<int> schedule{5, 9, 17, 33};
    double amplitude = pi / 3.0; //!< max |lambda| of the bump profile
    double tau = pi / 10.0;
    double delta = 0.1;
    int t_grid = 81;
    int q_grid = 4001;
};

struct knot_config_t
{
    std::string builtin = "figure-eight"; //!< used when no front object is given
    std::optional<nlohmann::json> front;      //!< front description, see docs/formats.md
    std::optional<nlohmann::json> decoration; //!< {"points": [...], "intervals": [[a, b], ...]} or "canonical"
};

struct obstruction_config_t
{
    std::optional<int> n;
    std::optional<long long> euler;
    std::optional<bool> stably_trivial;
};

struct scenario_config_t
{
    std::string model;                 //!< catalog spec, e.g. "cusp-sharpening?n=2&delta=0.05"
    std::map<std::string, double> params; //!< parameter overrides merged over the spec's own
    domain_config_t domain;
    std::string foliation = "cotangent-fibres";
    output_config_t output;
    tolerance_config_t tolerances;
    unsigned long long seed = 1;
    convergence_config_t convergence;
    knot_config_t knot;
    obstruction_config_t obstruction;
};

//! strict conversion of a JSON object; throws config_error on unknown keys or wrong types
auto parse_config(nlohmann::json const& j) -> scenario_config_t;

//! reads and parses a configuration file
auto load_config_file(std::string const& path) -> scenario_config_t;

//! the selected model with all parameter layers merged and its domain with overrides applied
auto resolve_scenario_model(scenario_config_t const& cfg) -> resolved_model_t;

auto parse_foliation(std::string const& name, int n) -> foliation_spec_t;

} // namespace lw::cli
