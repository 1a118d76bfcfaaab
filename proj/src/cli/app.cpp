// SPDX-License-Identifier: MIT
/**
    \file
    \brief lwkit argument parsing and dispatch
*/

#include "cli/app.hpp"

#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

namespace lw::cli {

namespace {

//! every flag as an optional, so "not given" and "given with the default value" stay distinguishable
struct overrides_t
{
    std::optional<std::string> config;
    std::optional<std::string> model;
    std::optional<double> n;
    std::vector<std::string> params;
    std::vector<double> lower, upper, grid;
    std::optional<std::string> foliation;
    std::optional<std::string> csv, svg, json, format;
    std::optional<unsigned long long> seed;
    std::optional<double> residual_tol, jacobian_tol, rank_rel;
    std::optional<int> samples;
    std::vector<int> schedule;
    std::optional<double> amplitude, tau, delta;
    std::optional<int> t_grid, q_grid;
    std::optional<std::string> front, front_file, decoration, decoration_file;
    std::optional<long long> euler;
    std::optional<bool> stably_trivial;
};

auto read_json_file(std::string const& path, std::string const& what) -> nlohmann::json
{
    std::ifstream file{path};
    require(static_cast<bool>(file), error_kind::config_error, "cannot open " + what + " file '" + path + "'");
    try
    {
        return nlohmann::json::parse(file);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw error{error_kind::config_error, what + " file '" + path + "' is not valid JSON: " + e.what()};
    }
}

auto layered_config(overrides_t const& o, bool model_n) -> scenario_config_t
{
    scenario_config_t c = o.config ? load_config_file(*o.config) : scenario_config_t{};
    if (o.model) c.model = *o.model;
    if (o.n)
    {
        if (model_n)
            c.params["n"] = *o.n;
        else
        {
            require(*o.n == std::round(*o.n), error_kind::config_error, "--n must be an integer");
            c.obstruction.n = static_cast<int>(*o.n);
        }
    }
    for (auto const& kv : o.params)
    {
        model_spec_t const s = parse_model_spec("x?" + kv);
        require(s.params.size() == 1, error_kind::config_error, "--param expects key=value, got '" + kv + "'");
        c.params[s.params.begin()->first] = s.params.begin()->second;
    }
    if (!o.lower.empty()) c.domain.lower = axis_values_t{o.lower};
    if (!o.upper.empty()) c.domain.upper = axis_values_t{o.upper};
    if (!o.grid.empty()) c.domain.grid = axis_values_t{o.grid};
    if (o.foliation) c.foliation = *o.foliation;
    if (o.csv) c.output.csv = *o.csv;
    if (o.svg) c.output.svg = *o.svg;
    if (o.json) c.output.json = *o.json;
    if (o.format) c.output.format = *o.format;
    if (o.seed) c.seed = *o.seed;
    if (o.residual_tol) c.tolerances.residual = *o.residual_tol;
    if (o.jacobian_tol) c.tolerances.jacobian = *o.jacobian_tol;
    if (o.rank_rel) c.tolerances.rank_rel = *o.rank_rel;
    if (o.samples) c.tolerances.samples = *o.samples;
    if (!o.schedule.empty()) c.convergence.schedule = o.schedule;
    if (o.amplitude) c.convergence.amplitude = *o.amplitude;
    if (o.tau) c.convergence.tau = *o.tau;
    if (o.delta) c.convergence.delta = *o.delta;
    if (o.t_grid) c.convergence.t_grid = *o.t_grid;
    if (o.q_grid) c.convergence.q_grid = *o.q_grid;
    if (o.front)
    {
        c.knot.builtin = *o.front;
        c.knot.front.reset();
    }
    if (o.front_file) c.knot.front = read_json_file(*o.front_file, "front");
    if (o.decoration)
    {
        if (*o.decoration == "canonical")
            c.knot.decoration = nlohmann::json("canonical");
        else
        {
            try
            {
                c.knot.decoration = nlohmann::json::parse(*o.decoration);
            }
            catch (nlohmann::json::parse_error const& e)
            {
                throw error{error_kind::config_error, std::string("--decoration is not valid JSON: ") + e.what()};
            }
        }
    }
    if (o.decoration_file) c.knot.decoration = read_json_file(*o.decoration_file, "decoration");
    if (o.euler) c.obstruction.euler = *o.euler;
    if (o.stably_trivial) c.obstruction.stably_trivial = *o.stably_trivial;
    return c;
}

auto add_common(CLI::App* sub, overrides_t& o) -> void
{
    sub->add_option("--config", o.config, "scenario configuration file (JSON); flags override its fields");
    sub->add_option("--json", o.json, "JSON output path ('-' for stdout)");
}

auto add_model(CLI::App* sub, overrides_t& o) -> void
{
    sub->add_option("--model", o.model, "catalog model, e.g. lagrangian-wrinkle or cusp-sharpening?n=2&delta=0.05");
    sub->add_option("--n", o.n, "dimension parameter n of the model");
    sub->add_option("--param", o.params, "extra model parameter key=value (repeatable)");
    sub->add_option("--lower", o.lower, "domain lower bound (one value or one per axis)");
    sub->add_option("--upper", o.upper, "domain upper bound (one value or one per axis)");
    sub->add_option("--grid", o.grid, "grid nodes per axis (one value or one per axis)");
}

} // namespace

auto run_app(int argc, char const* const* argv, std::ostream& out, std::ostream& err) -> int
{
    CLI::App app{"lwkit: wrinkled Lagrangian and Legendrian models, singularity analysis and front validation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lwkit 1.0.0");
    overrides_t o;

    struct command_t
    {
        CLI::App* sub;
        std::function<int(scenario_config_t const&, std::ostream&)> run;
        bool model_n;
    };
    std::vector<command_t> commands;

    auto* models = app.add_subcommand("models", "list the model catalog as JSON");
    add_common(models, o);
    commands.push_back({models, run_models, true});

    auto* eval = app.add_subcommand("model-eval", "sample a catalog model on its domain grid (CSV or JSON mesh)");
    add_common(eval, o);
    add_model(eval, o);
    eval->add_option("--csv", o.csv, "CSV output path ('-' for stdout)");
    eval->add_option("--format", o.format, "mesh format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    commands.push_back({eval, run_model_eval, true});

    auto* verify = app.add_subcommand("verify", "run the invariant checks of a model; JSON pass/fail report");
    add_common(verify, o);
    add_model(verify, o);
    verify->add_option("--seed", o.seed, "seed of the random jacobian sample points");
    verify->add_option("--residual-tol", o.residual_tol, "pullback residual bound");
    verify->add_option("--jacobian-tol", o.jacobian_tol, "relative jacobian discrepancy bound");
    verify->add_option("--samples", o.samples, "random points for the jacobian check");
    commands.push_back({verify, run_verify, true});

    auto* sing = app.add_subcommand("sing-analyze", "tangency locus and strata as CSV, optional SVG overlay (n <= 2)");
    add_common(sing, o);
    add_model(sing, o);
    sing->add_option("--csv", o.csv, "CSV output path ('-' for stdout)");
    sing->add_option("--svg", o.svg, "SVG output path");
    sing->add_option("--foliation", o.foliation, "cotangent-fibres or front-fibres");
    sing->add_option("--rank-rel", o.rank_rel, "relative singular-value threshold of the corank");
    commands.push_back({sing, run_sing_analyze, true});

    auto* conv = app.add_subcommand("wrinkle-converge", "Gauss-map defect of the wrinkling construction per N (CSV)");
    add_common(conv, o);
    conv->add_option("--csv", o.csv, "CSV output path ('-' for stdout)");
    conv->add_option("--schedule", o.schedule, "values of N")->delimiter(',');
    conv->add_option("--amplitude", o.amplitude, "max |lambda| of the angle profile (radians)");
    conv->add_option("--tau", o.tau, "cutoff angle tau");
    conv->add_option("--delta", o.delta, "shell width delta");
    conv->add_option("--t-grid", o.t_grid, "samples of t");
    conv->add_option("--q-grid", o.q_grid, "samples of q");
    commands.push_back({conv, run_wrinkle_converge, true});

    auto* knot = app.add_subcommand("knot-validate", "validate a front against a decoration (JSON, optional SVG)");
    add_common(knot, o);
    knot->add_option("--svg", o.svg, "SVG output path");
    knot->add_option("--front", o.front, "built-in front, e.g. figure-eight or takeover-plain?eta=0.5");
    knot->add_option("--front-file", o.front_file, "front description file (JSON)");
    knot->add_option("--decoration", o.decoration, "decoration as inline JSON, or 'canonical'");
    knot->add_option("--decoration-file", o.decoration_file, "decoration file (JSON)");
    commands.push_back({knot, run_knot_validate, true});

    auto* obstruct = app.add_subcommand("obstruct", "fold-only caustic verdict for a Lagrangian sphere (JSON)");
    add_common(obstruct, o);
    obstruct->add_option("--n", o.n, "sphere dimension");
    obstruct->add_option("--euler", o.euler, "Euler number of the Lagrangian distribution");
    obstruct->add_option("--stably-trivial", o.stably_trivial, "override: the distribution is stably trivial (true/false)");
    commands.push_back({obstruct, run_obstruct, false});

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        out << app.help();
        for (auto const& c : commands)
            if (c.sub->parsed()) out << c.sub->help();
        return exit_ok;
    }
    catch (CLI::CallForVersion const&)
    {
        out << "lwkit 1.0.0\n";
        return exit_ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << error_json("usage-error", e.what()) << '\n';
        return exit_validation;
    }

    try
    {
        for (auto const& c : commands)
            if (c.sub->parsed()) return c.run(layered_config(o, c.model_n), out);
        err << error_json("usage-error", "no subcommand given") << '\n';
        return exit_validation;
    }
    catch (error const& e)
    {
        err << error_json(to_string(e.kind()), e.what()) << '\n';
        return exit_code_for(e.kind());
    }
    catch (std::exception const& e)
    {
        err << error_json("internal", e.what()) << '\n';
        return exit_internal;
    }
}

} // namespace lw::cli
