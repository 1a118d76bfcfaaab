// SPDX-License-Identifier: MIT
/**
    \file
    \brief JSON front and decoration parsing
*/

#include "cli/knot_io.hpp"

#include <lw/catalog.hpp>

#include <cmath>
#include <set>

namespace lw::cli {

using nlohmann::json;

namespace {

auto check_keys(json const& j, std::string const& where, std::set<std::string> const& allowed) -> void
{
    require(j.is_object(), error_kind::config_error, where + " must be a JSON object");
    for (auto const& [key, value] : j.items())
    {
        (void)value;
        require(allowed.count(key) != 0, error_kind::config_error, "unknown key '" + where + "." + key + "'");
    }
}

auto number_list(json const& j, std::string const& where) -> std::vector<double>
{
    require(j.is_array(), error_kind::config_error, where + " must be an array of numbers");
    std::vector<double> out;
    for (auto const& x : j)
    {
        require(x.is_number() && std::isfinite(x.get<double>()), error_kind::config_error, where + " must hold finite numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

auto fourier_from_json(json const& j, std::string const& where) -> fourier_t
{
    check_keys(j, where, {"a", "b"});
    fourier_t f;
    if (j.contains("a")) f.a = number_list(j["a"], where + ".a");
    if (j.contains("b")) f.b = number_list(j["b"], where + ".b");
    return f;
}

//! polynomial sum c_k t^k with its first two derivatives
auto polynomial(std::vector<double> c) -> std::function<scalar3_t(double)>
{
    return [c = std::move(c)](double t) {
        scalar3_t v{0.0, 0.0, 0.0};
        for (std::size_t k = c.size(); k-- > 0;)
        {
            v.d2 = v.d2 * t + 2.0 * v.d1;
            v.d1 = v.d1 * t + v.f;
            v.f = v.f * t + c[k];
        }
        return v;
    };
}

auto samples_of(json const& j) -> int
{
    if (!j.contains("samples")) return 4096;
    require(j["samples"].is_number_integer() && j["samples"].get<int>() >= 64, error_kind::config_error,
            "front samples must be an integer >= 64");
    return j["samples"].get<int>();
}

} // namespace

auto front_from_json(json const& j) -> knot_front_t
{
    require(j.is_object() && j.contains("kind") && j["kind"].is_string(), error_kind::config_error,
            "a front needs a string 'kind'");
    std::string const kind = j["kind"].get<std::string>();
    std::string const name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : kind;
    if (kind == "fourier")
    {
        check_keys(j, "front", {"kind", "name", "q", "z", "samples"});
        require(j.contains("q") && j.contains("z"), error_kind::config_error, "a fourier front needs 'q' and 'z'");
        return fourier_front(name, fourier_from_json(j["q"], "front.q"), fourier_from_json(j["z"], "front.z"), samples_of(j));
    }
    if (kind == "fourier-lift")
    {
        check_keys(j, "front", {"kind", "name", "q", "p", "samples"});
        require(j.contains("q") && j.contains("p"), error_kind::config_error, "a fourier-lift front needs 'q' and 'p'");
        return fourier_lift_front(name, fourier_from_json(j["q"], "front.q"), fourier_from_json(j["p"], "front.p"),
                                  samples_of(j));
    }
    if (kind == "polynomial-chart")
    {
        check_keys(j, "front", {"kind", "name", "qdot", "p", "samples"});
        require(j.contains("qdot") && j.contains("p"), error_kind::config_error, "a polynomial-chart front needs 'qdot' and 'p'");
        return chart_front(name, polynomial(number_list(j["qdot"], "front.qdot")), polynomial(number_list(j["p"], "front.p")),
                           samples_of(j));
    }
    throw error{error_kind::config_error, "unknown front kind '" + kind + "' (fourier, fourier-lift, polynomial-chart)"};
}

auto builtin_front(std::string const& spec) -> knot_front_t
{
    model_spec_t const s = parse_model_spec(spec);
    auto const param = [&s](std::string const& key, double fallback) {
        auto const it = s.params.find(key);
        return it == s.params.end() ? fallback : it->second;
    };
    std::set<std::string> allowed;
    knot_front_t front;
    if (s.family == "eye")
        front = eye_front();
    else if (s.family == "figure-eight")
        front = figure_eight_front(false);
    else if (s.family == "figure-eight-flipped")
        front = figure_eight_front(true);
    else if (s.family == "takeover-plain" || s.family == "takeover-nested" || s.family == "takeover-dying")
    {
        allowed = {"eta", "tau"};
        takeover_kind const kind = s.family == "takeover-plain"    ? takeover_kind::plain
                                   : s.family == "takeover-nested" ? takeover_kind::nested
                                                                   : takeover_kind::dying;
        front = zigzag_takeover(kind, param("eta", 0.0), param("tau", 0.0));
    }
    else
        throw error{error_kind::config_error, "unknown built-in front '" + s.family + "'"};
    for (auto const& [key, value] : s.params)
    {
        (void)value;
        require(allowed.count(key) != 0, error_kind::config_error, "built-in front '" + s.family + "' has no parameter '" + key + "'");
    }
    return front;
}

auto builtin_decoration(std::string const& spec, knot_front_t const& front) -> decoration_t
{
    std::string const family = parse_model_spec(spec).family;
    if (family == "figure-eight" || family == "figure-eight-flipped") return figure_eight_decoration();
    return canonical_decoration(detect_front_singularities(front));
}

auto decoration_from_json(json const& j) -> decoration_t
{
    check_keys(j, "decoration", {"points", "intervals"});
    decoration_t d;
    if (j.contains("points")) d.points = number_list(j["points"], "decoration.points");
    if (j.contains("intervals"))
    {
        require(j["intervals"].is_array(), error_kind::config_error, "decoration.intervals must be an array");
        for (auto const& i : j["intervals"])
        {
            auto const ends = number_list(i, "decoration.intervals[]");
            require(ends.size() == 2, error_kind::config_error, "each decoration interval is [from, to]");
            d.intervals.push_back({ends[0], ends[1]});
        }
    }
    return d;
}

auto decoration_to_json(decoration_t const& d) -> json
{
    json intervals = json::array();
    for (auto const& i : d.intervals) intervals.push_back(json::array({i.from, i.to}));
    return json{{"points", d.points}, {"intervals", intervals}};
}

auto report_to_json(knot_front_t const& front, decoration_t const& d, decoration_report_t const& r) -> json
{
    json sing = json::array();
    for (auto const& s : r.singularities)
        sing.push_back(json{{"t", s.t}, {"kind", to_string(s.kind)}, {"maslov", s.maslov}});
    json violations = json::array();
    for (auto const& v : r.violations)
        violations.push_back(json{{"kind", to_string(v.kind)}, {"t", v.t}, {"message", v.message}});
    return json{{"front", front.name},
                {"ok", r.ok},
                {"decoration", decoration_to_json(d)},
                {"singularities", sing},
                {"violations", violations}};
}

} // namespace lw::cli
