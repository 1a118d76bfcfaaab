// SPDX-License-Identifier: MIT
/**
    \file
    \brief strict JSON configuration parsing and model resolution
*/

#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lw::cli {

using nlohmann::json;

auto axis_values_t::at(std::size_t axis, std::size_t dim) const -> double
{
    require(values.size() == 1 || values.size() == dim, error_kind::config_error,
            "per-axis values need 1 or " + std::to_string(dim) + " entries");
    return values.size() == 1 ? values[0] : values[axis];
}

namespace {

auto check_keys(json const& j, std::string const& where, std::set<std::string> const& allowed) -> void
{
    require(j.is_object(), error_kind::config_error, where + " must be a JSON object");
    for (auto const& [key, value] : j.items())
    {
        (void)value;
        require(allowed.count(key) != 0, error_kind::config_error, "unknown configuration key '" + where + "." + key + "'");
    }
}

auto get_number(json const& j, std::string const& where) -> double
{
    require(j.is_number(), error_kind::config_error, where + " must be a number");
    double const v = j.get<double>();
    require(std::isfinite(v), error_kind::config_error, where + " must be finite");
    return v;
}

auto get_int(json const& j, std::string const& where) -> long long
{
    double const v = get_number(j, where);
    require(v == std::round(v) && std::abs(v) < 9e15, error_kind::config_error, where + " must be an integer");
    return static_cast<long long>(v);
}

auto get_string(json const& j, std::string const& where) -> std::string
{
    require(j.is_string(), error_kind::config_error, where + " must be a string");
    return j.get<std::string>();
}

auto get_axis(json const& j, std::string const& where) -> axis_values_t
{
    axis_values_t a;
    if (j.is_array())
    {
        require(!j.empty(), error_kind::config_error, where + " must not be empty");
        for (std::size_t i = 0; i < j.size(); ++i) a.values.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
    }
    else
        a.values.push_back(get_number(j, where));
    return a;
}

} // namespace

auto parse_config(json const& j) -> scenario_config_t
{
    scenario_config_t c;
    check_keys(j, "config",
               {"model", "params", "domain", "foliation", "output", "tolerances", "seed", "convergence", "knot", "obstruction"});
    if (j.contains("model")) c.model = get_string(j["model"], "model");
    if (j.contains("params"))
    {
        require(j["params"].is_object(), error_kind::config_error, "params must be a JSON object");
        for (auto const& [key, value] : j["params"].items()) c.params[key] = get_number(value, "params." + key);
    }
    if (j.contains("domain"))
    {
        json const& d = j["domain"];
        check_keys(d, "domain", {"lower", "upper", "grid"});
        if (d.contains("lower")) c.domain.lower = get_axis(d["lower"], "domain.lower");
        if (d.contains("upper")) c.domain.upper = get_axis(d["upper"], "domain.upper");
        if (d.contains("grid")) c.domain.grid = get_axis(d["grid"], "domain.grid");
    }
    if (j.contains("foliation")) c.foliation = get_string(j["foliation"], "foliation");
    if (j.contains("output"))
    {
        json const& o = j["output"];
        check_keys(o, "output", {"csv", "svg", "json", "format"});
        if (o.contains("csv")) c.output.csv = get_string(o["csv"], "output.csv");
        if (o.contains("svg")) c.output.svg = get_string(o["svg"], "output.svg");
        if (o.contains("json")) c.output.json = get_string(o["json"], "output.json");
        if (o.contains("format")) c.output.format = get_string(o["format"], "output.format");
    }
    if (j.contains("tolerances"))
    {
        json const& t = j["tolerances"];
        check_keys(t, "tolerances", {"residual", "jacobian", "samples", "rank_rel"});
        if (t.contains("residual")) c.tolerances.residual = get_number(t["residual"], "tolerances.residual");
        if (t.contains("jacobian")) c.tolerances.jacobian = get_number(t["jacobian"], "tolerances.jacobian");
        if (t.contains("samples")) c.tolerances.samples = static_cast<int>(get_int(t["samples"], "tolerances.samples"));
        if (t.contains("rank_rel")) c.tolerances.rank_rel = get_number(t["rank_rel"], "tolerances.rank_rel");
    }
    if (j.contains("seed"))
    {
        long long const s = get_int(j["seed"], "seed");
        require(s >= 0, error_kind::config_error, "seed must be non-negative");
        c.seed = static_cast<unsigned long long>(s);
    }
    if (j.contains("convergence"))
    {
        json const& v = j["convergence"];
        check_keys(v, "convergence", {"schedule", "amplitude", "tau", "delta", "t_grid", "q_grid"});
        if (v.contains("schedule"))
        {
            require(v["schedule"].is_array(), error_kind::config_error, "convergence.schedule must be an array");
            c.convergence.schedule.clear();
            for (auto const& x : v["schedule"]) c.convergence.schedule.push_back(static_cast<int>(get_int(x, "convergence.schedule")));
        }
        if (v.contains("amplitude")) c.convergence.amplitude = get_number(v["amplitude"], "convergence.amplitude");
        if (v.contains("tau")) c.convergence.tau = get_number(v["tau"], "convergence.tau");
        if (v.contains("delta")) c.convergence.delta = get_number(v["delta"], "convergence.delta");
        if (v.contains("t_grid")) c.convergence.t_grid = static_cast<int>(get_int(v["t_grid"], "convergence.t_grid"));
        if (v.contains("q_grid")) c.convergence.q_grid = static_cast<int>(get_int(v["q_grid"], "convergence.q_grid"));
    }
    if (j.contains("knot"))
    {
        json const& k = j["knot"];
        check_keys(k, "knot", {"builtin", "front", "decoration"});
        if (k.contains("builtin")) c.knot.builtin = get_string(k["builtin"], "knot.builtin");
        if (k.contains("front")) c.knot.front = k["front"];
        if (k.contains("decoration")) c.knot.decoration = k["decoration"];
    }
    if (j.contains("obstruction"))
    {
        json const& o = j["obstruction"];
        check_keys(o, "obstruction", {"n", "euler", "stably_trivial"});
        if (o.contains("n")) c.obstruction.n = static_cast<int>(get_int(o["n"], "obstruction.n"));
        if (o.contains("euler")) c.obstruction.euler = get_int(o["euler"], "obstruction.euler");
        if (o.contains("stably_trivial"))
        {
            require(o["stably_trivial"].is_boolean(), error_kind::config_error, "obstruction.stably_trivial must be a boolean");
            c.obstruction.stably_trivial = o["stably_trivial"].get<bool>();
        }
    }
    return c;
}

auto load_config_file(std::string const& path) -> scenario_config_t
{
    std::ifstream file{path};
    require(static_cast<bool>(file), error_kind::config_error, "cannot open configuration file '" + path + "'");
    json j;
    try
    {
        j = json::parse(file);
    }
    catch (json::parse_error const& e)
    {
        throw error{error_kind::config_error, "configuration file '" + path + "' is not valid JSON: " + e.what()};
    }
    return parse_config(j);
}

auto resolve_scenario_model(scenario_config_t const& cfg) -> resolved_model_t
{
    require(!cfg.model.empty(), error_kind::config_error, "no model selected (use --model or the 'model' key)");
    model_spec_t spec = parse_model_spec(cfg.model);
    for (auto const& [key, value] : cfg.params) spec.params[key] = value;
    catalog_entry_t const& entry = find_catalog_entry(spec.family);
    resolved_model_t r;
    r.entry = &entry;
    r.params = resolve_params(entry, spec.params);
    r.map = entry.build(r.params);
    r.domain = entry.domain(r.params);

    std::size_t const dim = r.domain.lower.size();
    for (std::size_t a = 0; a < dim; ++a)
    {
        if (cfg.domain.lower) r.domain.lower[a] = cfg.domain.lower->at(a, dim);
        if (cfg.domain.upper) r.domain.upper[a] = cfg.domain.upper->at(a, dim);
        if (cfg.domain.grid)
        {
            double const g = cfg.domain.grid->at(a, dim);
            require(g == std::round(g) && g >= 2.0 && g <= 1e6, error_kind::config_error, "grid counts must be integers >= 2");
            r.domain.grid[a] = static_cast<int>(g);
        }
    }
    r.domain.validate();
    return r;
}

auto parse_foliation(std::string const& name, int n) -> foliation_spec_t
{
    foliation_spec_t f;
    f.n = n;
    if (name == "cotangent-fibres")
        f.kind = foliation_kind::cotangent_fibres;
    else if (name == "front-fibres")
        f.kind = foliation_kind::front_fibres;
    else
        throw error{error_kind::config_error, "unknown foliation '" + name + "' (cotangent-fibres or front-fibres)"};
    return f;
}

} // namespace lw::cli
