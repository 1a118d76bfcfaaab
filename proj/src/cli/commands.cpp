// SPDX-License-Identifier: MIT
/**
    \file
    \brief subcommand implementations: sampling, verification, singularity export, convergence, knots, obstruction
*/

#include "cli/commands.hpp"

#include "cli/emit.hpp"
#include "cli/knot_io.hpp"

#include <lw/catalog.hpp>
#include <lw/knots.hpp>
#include <lw/obstruction.hpp>
#include <lw/planes.hpp>
#include <lw/singularity.hpp>
#include <lw/wrinkling.hpp>

#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <random>
#include <sstream>

namespace lw::cli {

using nlohmann::json;

auto exit_code_for(error_kind kind) noexcept -> int
{
    return kind == error_kind::internal ? exit_internal : exit_validation;
}

auto error_json(std::string_view kind, std::string const& message) -> std::string
{
    return json{{"error", {{"kind", std::string(kind)}, {"message", message}}}}.dump();
}

namespace {

auto closedness_name(closedness_kind k) -> char const*
{
    switch (k)
    {
    case closedness_kind::none: return "none";
    case closedness_kind::symplectic: return "symplectic";
    case closedness_kind::contact: return "contact";
    }
    return "none";
}

auto dump(json const& j) -> std::string
{
    return j.dump(2) + "\n";
}

auto axis_name(char prefix, int k) -> std::string
{
    return std::string(1, prefix) + std::to_string(k + 1);
}

} // namespace

// --------------------------------------------------------------------------------------------------------------------
// models
// --------------------------------------------------------------------------------------------------------------------

auto run_models(scenario_config_t const& cfg, std::ostream& out) -> int
{
    json list = json::array();
    for (auto const& e : model_catalog())
        list.push_back(json{{"family", e.family},
                            {"summary", e.summary},
                            {"defaults", e.defaults},
                            {"closedness", closedness_name(e.closedness)},
                            {"jacobian_oracle", e.jacobian_oracle}});
    write_text(cfg.output.json, dump(list), out);
    return exit_ok;
}

// --------------------------------------------------------------------------------------------------------------------
// model-eval
// --------------------------------------------------------------------------------------------------------------------

auto run_model_eval(scenario_config_t const& cfg, std::ostream& out) -> int
{
    resolved_model_t const m = resolve_scenario_model(cfg);
    std::size_t const count = m.domain.point_count();
    std::vector<vec_t> values(count);
    parallel_for(count, [&](std::size_t i) { values[i] = eval_value(m.map, m.domain.point(i)); });

    int const n = m.map.domain_dim;
    int const t = m.map.target_dim;
    if (cfg.output.format == "json")
    {
        json points = json::array(), vals = json::array();
        for (std::size_t i = 0; i < count; ++i)
        {
            vec_t const q = m.domain.point(i);
            points.push_back(std::vector<double>(q.data(), q.data() + q.size()));
            vals.push_back(std::vector<double>(values[i].data(), values[i].data() + values[i].size()));
        }
        json const mesh{{"model", canonical_model_name(m)},
                        {"domain_dim", n},
                        {"target", to_string(m.map.target)},
                        {"target_dim", t},
                        {"lower", m.domain.lower},
                        {"upper", m.domain.upper},
                        {"grid", m.domain.grid},
                        {"points", points},
                        {"values", vals}};
        write_text(cfg.output.json, dump(mesh), out);
        return exit_ok;
    }
    require(cfg.output.format == "csv", error_kind::config_error, "output format must be csv or json");
    std::vector<std::string> header{"index"};
    for (int k = 0; k < n; ++k) header.push_back(axis_name('q', k));
    for (int k = 0; k < t; ++k) header.push_back(axis_name('f', k));
    csv_table_t table{header};
    for (std::size_t i = 0; i < count; ++i)
    {
        vec_t const q = m.domain.point(i);
        std::vector<std::string> row{csv_table_t::cell(static_cast<long long>(i))};
        for (int k = 0; k < n; ++k) row.push_back(csv_table_t::cell(q[k]));
        for (int k = 0; k < t; ++k) row.push_back(csv_table_t::cell(values[i][k]));
        table.add_row(std::move(row));
    }
    std::ostringstream s;
    table.write(s);
    write_text(cfg.output.csv, s.str(), out);
    return exit_ok;
}

// --------------------------------------------------------------------------------------------------------------------
// verify
// --------------------------------------------------------------------------------------------------------------------

auto run_verify(scenario_config_t const& cfg, std::ostream& out) -> int
{
    resolved_model_t const m = resolve_scenario_model(cfg);
    json checks = json::array();
    bool pass = true;
    auto const record = [&](std::string name, double value, double tol) {
        bool const ok = value < tol;
        pass = pass && ok;
        checks.push_back(json{{"name", std::move(name)}, {"value", value}, {"tolerance", tol}, {"pass", ok}});
    };

    double const residual_tol = std::max(cfg.tolerances.residual, m.entry->residual_floor);
    if (m.entry->closedness != closedness_kind::none)
        record("symplectic-residual", pullback_residual(m.map, m.domain, form_kind::symplectic), residual_tol);
    if (m.entry->closedness == closedness_kind::contact)
        record("contact-residual", pullback_residual(m.map, m.domain, form_kind::contact), residual_tol);

    if (m.entry->jacobian_oracle && m.map.analytic_jacobian)
    {
        require(cfg.tolerances.samples >= 1, error_kind::config_error, "tolerances.samples must be positive");
        std::mt19937_64 rng{cfg.seed};
        std::vector<vec_t> points;
        for (int k = 0; k < cfg.tolerances.samples; ++k)
        {
            vec_t q(m.map.domain_dim);
            for (int a = 0; a < m.map.domain_dim; ++a)
            {
                std::uniform_real_distribution<double> u{m.domain.lower[a], m.domain.upper[a]};
                q[a] = u(rng);
            }
            points.push_back(q);
        }
        std::vector<double> worst(points.size(), 0.0);
        parallel_for(points.size(), [&](std::size_t i) { worst[i] = jacobian_discrepancy(m.map, points[i]); });
        record("jacobian-discrepancy", *std::max_element(worst.begin(), worst.end()), cfg.tolerances.jacobian);
    }

    json const report{{"model", canonical_model_name(m)},
                      {"grid", m.domain.grid},
                      {"pass", pass},
                      {"checks", checks}};
    write_text(cfg.output.json, dump(report), out);
    return pass ? exit_ok : exit_verification;
}

// --------------------------------------------------------------------------------------------------------------------
// sing-analyze
// --------------------------------------------------------------------------------------------------------------------

namespace {

auto label_colour(stratum_cell_t const& c) -> std::string
{
    switch (c.label)
    {
    case stratum_label::fold: return c.maslov > 0 ? "#1f77b4" : c.maslov < 0 ? "#d62728" : "#555555";
    case stratum_label::pleat: return "#2ca02c";
    case stratum_label::higher_pleat: return "#ff7f0e";
    case stratum_label::corank_two: return "#9467bd";
    case stratum_label::indeterminate: return "#aaaaaa";
    }
    return "#aaaaaa";
}

auto locus_svg(stratified_locus_t const& s, param_domain_t const& domain, std::string const& title) -> std::string
{
    bool const planar = s.n == 2;
    double const x0 = domain.lower[0], x1 = domain.upper[0];
    double const y0 = planar ? domain.lower[1] : -0.5 * (x1 - x0);
    double const y1 = planar ? domain.upper[1] : 0.5 * (x1 - x0);
    svg_scene_t scene{x0, x1, y0, y1};
    scene.frame();
    if (!planar) scene.segment(x0, 0.0, x1, 0.0, svg_style_t{"#999999", "none", 0.5});
    for (std::size_t k = 0; k < s.components.size(); ++k)
    {
        std::vector<double> xs, ys;
        for (std::size_t idx : s.components[k])
        {
            xs.push_back(s.cells[idx].point[0]);
            ys.push_back(planar ? s.cells[idx].point[1] : 0.0);
        }
        if (planar) scene.polyline(xs, ys, svg_style_t{"#333333", "none", 1.0}, s.closed[k]);
    }
    double const tick = 2.0 * s.cell_size;
    for (std::size_t i = 0; i < s.cells.size(); ++i)
    {
        auto const& c = s.cells[i];
        double const x = c.point[0];
        double const y = planar ? c.point[1] : 0.0;
        if (planar && c.kernel.size() == 2 && i % 4 == 0)
            scene.segment(x - tick * c.kernel[0], y - tick * c.kernel[1], x + tick * c.kernel[0], y + tick * c.kernel[1],
                          svg_style_t{"#bbbbbb", "none", 0.5});
        bool const special = c.label != stratum_label::fold;
        std::string const colour = label_colour(c);
        scene.circle(x, y, special ? 5.0 : 1.5, svg_style_t{colour, colour, 0.5},
                     std::string(to_string(c.label)) + " maslov " + std::to_string(c.maslov));
    }
    scene.text(x0, y1, title);
    std::ostringstream o;
    scene.write(o);
    return o.str();
}

} // namespace

auto run_sing_analyze(scenario_config_t const& cfg, std::ostream& out) -> int
{
    resolved_model_t m = resolve_scenario_model(cfg);
    int const n = m.map.domain_dim;
    require(n <= 2, error_kind::precondition_failed, "sing-analyze exports loci for n <= 2 only");
    if (!cfg.domain.grid) m.domain.grid.assign(static_cast<std::size_t>(n), n == 1 ? 1025 : 257);
    m.domain.validate();
    foliation_spec_t const fol = parse_foliation(cfg.foliation, n);
    tangency_locus_t const locus = tangency_locus(m.map, fol, m.domain, cfg.tolerances.rank_rel);
    stratified_locus_t const s = stratify(m.map, locus);

    std::vector<std::string> header{"cell_index"};
    for (int k = 0; k < n; ++k) header.push_back(axis_name('q', k));
    header.insert(header.end(), {"corank", "label"});
    for (int k = 0; k < n; ++k) header.push_back(axis_name('k', k));
    header.push_back("maslov");
    csv_table_t table{header};
    for (auto const& c : s.cells)
    {
        std::vector<std::string> row{csv_table_t::cell(static_cast<long long>(c.index))};
        for (int k = 0; k < n; ++k) row.push_back(csv_table_t::cell(c.point[k]));
        row.push_back(csv_table_t::cell(static_cast<long long>(c.corank)));
        row.push_back(to_string(c.label));
        for (int k = 0; k < n; ++k) row.push_back(csv_table_t::cell(c.kernel.size() == n ? c.kernel[k] : 0.0));
        row.push_back(csv_table_t::cell(static_cast<long long>(c.maslov)));
        table.add_row(std::move(row));
    }
    std::ostringstream csv;
    table.write(csv);
    write_text(cfg.output.csv, csv.str(), out);

    if (!cfg.output.svg.empty()) write_text(cfg.output.svg, locus_svg(s, m.domain, canonical_model_name(m)), out);
    if (!cfg.output.json.empty())
    {
        json counts;
        for (stratum_label l : {stratum_label::fold, stratum_label::pleat, stratum_label::higher_pleat,
                                stratum_label::corank_two, stratum_label::indeterminate})
            counts[to_string(l)] = s.count(l);
        json pairs = json::array();
        auto const pairing = pair_double_folds(s);
        for (auto const& p : pairing.pairs) pairs.push_back(json{{"inner", p.inner}, {"outer", p.outer}});
        json const summary{{"model", canonical_model_name(m)},
                           {"grid", m.domain.grid},
                           {"cells", s.cells.size()},
                           {"components", s.components.size()},
                           {"counts", counts},
                           {"double_fold_pairs", pairs},
                           {"unpaired", pairing.leftovers}};
        write_text(cfg.output.json, dump(summary), out);
    }
    return exit_ok;
}

// --------------------------------------------------------------------------------------------------------------------
// wrinkle-converge
// --------------------------------------------------------------------------------------------------------------------

auto run_wrinkle_converge(scenario_config_t const& cfg, std::ostream& out) -> int
{
    convergence_config_t const& c = cfg.convergence;
    require(!c.schedule.empty(), error_kind::config_error, "convergence schedule is empty");
    require(c.amplitude > 0.0 && c.amplitude < pi / 2.0, error_kind::parameter_out_of_range,
            "profile amplitude must lie in (0, pi/2)");
    convergence_options_t opts;
    opts.tau = c.tau;
    opts.delta = c.delta;
    opts.t_grid = c.t_grid;
    opts.q_grid = c.q_grid;
    auto const rows = convergence_report(bump_angle_field(1, c.amplitude), c.schedule, opts);

    csv_table_t table{{"N", "gamma", "alpha", "sigma", "max_defect_radians", "grid", "runtime_ms"}};
    for (auto const& r : rows)
        table.add_row({csv_table_t::cell(static_cast<long long>(r.N)), csv_table_t::cell(r.gamma), csv_table_t::cell(r.alpha),
                       csv_table_t::cell(r.sigma), csv_table_t::cell(r.max_defect),
                       csv_table_t::cell(static_cast<long long>(r.grid)), csv_table_t::cell(r.runtime_ms)});
    std::ostringstream s;
    table.write(s);
    write_text(cfg.output.csv, s.str(), out);
    return exit_ok;
}

// --------------------------------------------------------------------------------------------------------------------
// knot-validate
// --------------------------------------------------------------------------------------------------------------------

namespace {

auto front_svg(knot_front_t const& front, decoration_t const& d, decoration_report_t const& r) -> std::string
{
    constexpr int samples = 2000;
    std::vector<double> xs, ys;
    for (int k = 0; k <= samples; ++k)
    {
        front_jet_t const j = front.evaluate(static_cast<double>(k) / samples - (k == samples && front.periodic ? 1e-12 : 0.0));
        xs.push_back(j.q);
        ys.push_back(j.z);
    }
    auto const [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    auto const [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    double const pad = 0.08 * std::max({*xmax - *xmin, *ymax - *ymin, 1e-6});
    svg_scene_t scene{*xmin - pad, *xmax + pad, *ymin - pad, *ymax + pad};
    scene.polyline(xs, ys, svg_style_t{"black", "none", 1.2});
    for (auto const& s : r.singularities)
    {
        front_jet_t const j = front.evaluate(s.t);
        std::string const colour = s.kind == front_singularity_kind::embryo ? "#2ca02c" : s.maslov > 0 ? "#1f77b4" : "#d62728";
        scene.circle(j.q, j.z, 4.0, svg_style_t{colour, colour, 0.5},
                     std::string(to_string(s.kind)) + " t=" + format_double(s.t, svg_digits) + " maslov " +
                         std::to_string(s.maslov));
    }
    for (std::size_t k = 0; k < d.points.size(); ++k)
    {
        front_jet_t const j = front.evaluate(d.points[k]);
        scene.circle(j.q, j.z, 8.0, svg_style_t{"#555555", "none", 1.0});
        scene.text(j.q, j.z, " P" + std::to_string(k + 1));
    }
    for (std::size_t k = 0; k < d.intervals.size(); ++k)
        for (double t : {d.intervals[k].from, d.intervals[k].to})
        {
            front_jet_t const j = front.evaluate(t);
            scene.circle(j.q, j.z, 8.0, svg_style_t{"#ff7f0e", "none", 1.0});
            scene.text(j.q, j.z, " I" + std::to_string(k + 1));
        }
    scene.text(*xmin - pad, *ymax + pad, front.name + (r.ok ? "  ok" : "  invalid"));
    std::ostringstream o;
    scene.write(o);
    return o.str();
}

} // namespace

auto run_knot_validate(scenario_config_t const& cfg, std::ostream& out) -> int
{
    knot_front_t const front = cfg.knot.front ? front_from_json(*cfg.knot.front) : builtin_front(cfg.knot.builtin);
    decoration_t d;
    if (cfg.knot.decoration && !(cfg.knot.decoration->is_string() && cfg.knot.decoration->get<std::string>() == "canonical"))
        d = decoration_from_json(*cfg.knot.decoration);
    else if (cfg.knot.decoration || cfg.knot.front)
        d = canonical_decoration(detect_front_singularities(front));
    else
        d = builtin_decoration(cfg.knot.builtin, front);

    decoration_report_t const r = validate_decoration(front, d);
    write_text(cfg.output.json, dump(report_to_json(front, d, r)), out);
    if (!cfg.output.svg.empty()) write_text(cfg.output.svg, front_svg(front, d, r), out);
    return r.ok ? exit_ok : exit_verification;
}

// --------------------------------------------------------------------------------------------------------------------
// obstruct
// --------------------------------------------------------------------------------------------------------------------

auto run_obstruct(scenario_config_t const& cfg, std::ostream& out) -> int
{
    sphere_caustic_query_t q;
    q.n = cfg.obstruction.n.value_or(2);
    q.euler = cfg.obstruction.euler;
    q.stably_trivial = cfg.obstruction.stably_trivial;
    obstruction_verdict_t const v = sphere_caustic_verdict(q);
    json j{{"n", q.n},
           {"euler", q.euler ? json(*q.euler) : json(nullptr)},
           {"stable_kernel", to_string(stable_kernel(q.n))},
           {"verdict", to_string(v.verdict)},
           {"chi_Y", v.chi_y ? json(*v.chi_y) : json(nullptr)},
           {"notes", v.notes}};
    write_text(cfg.output.json, dump(j), out);
    return exit_ok;
}

} // namespace lw::cli
