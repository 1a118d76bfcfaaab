// SPDX-License-Identifier: MIT
/**
    \file
    \brief CSV and SVG emitters
*/

#include "cli/emit.hpp"

#include <lw/core.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lw::cli {

auto format_double(double value, int digits) -> std::string
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    if (value == 0.0) return "0"; // folds -0 into 0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

// --------------------------------------------------------------------------------------------------------------------
// CSV
// --------------------------------------------------------------------------------------------------------------------

csv_table_t::csv_table_t(std::vector<std::string> header) : header_{std::move(header)} {}

auto csv_table_t::add_row(std::vector<std::string> cells) -> void
{
    require(cells.size() == header_.size(), error_kind::internal, "csv row width does not match the header");
    rows_.push_back(std::move(cells));
}

namespace {

auto quote(std::string const& cell) -> std::string
{
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell)
    {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

auto write_row(std::ostream& out, std::vector<std::string> const& cells) -> void
{
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i > 0) out << ',';
        out << quote(cells[i]);
    }
    out << '\n';
}

auto escape_xml(std::string const& s) -> std::string
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

auto style_attrs(svg_style_t const& s) -> std::string
{
    return "stroke=\"" + s.stroke + "\" fill=\"" + s.fill + "\" stroke-width=\"" + format_double(s.width, svg_digits) + "\"";
}

} // namespace

auto csv_table_t::write(std::ostream& out) const -> void
{
    write_row(out, header_);
    for (auto const& row : rows_) write_row(out, row);
}

// --------------------------------------------------------------------------------------------------------------------
// SVG
// --------------------------------------------------------------------------------------------------------------------

svg_scene_t::svg_scene_t(double x0, double x1, double y0, double y1, int pixels)
    : x0_{x0}, x1_{x1}, y0_{y0}, y1_{y1}, pixels_{pixels}
{
    require(x1 > x0 && y1 > y0, error_kind::parameter_out_of_range, "svg data box must have positive extent");
    scale_ = static_cast<double>(pixels) / std::max(x1 - x0, y1 - y0);
}

auto svg_scene_t::px(double x) const -> std::string
{
    return format_double((x - x0_) * scale_, svg_digits);
}

auto svg_scene_t::py(double y) const -> std::string
{
    return format_double((y1_ - y) * scale_, svg_digits);
}

auto svg_scene_t::polyline(std::vector<double> const& xs, std::vector<double> const& ys, svg_style_t const& style,
                           bool closed) -> void
{
    require(xs.size() == ys.size(), error_kind::internal, "svg polyline coordinates differ in length");
    if (xs.empty()) return;
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (i > 0) pts += ' ';
        pts += px(xs[i]) + "," + py(ys[i]);
    }
    char const* tag = closed ? "polygon" : "polyline";
    items_.push_back(std::string("<") + tag + " points=\"" + pts + "\" " + style_attrs(style) + "/>");
}

auto svg_scene_t::circle(double x, double y, double radius_px, svg_style_t const& style, std::string const& title) -> void
{
    std::string item = "<circle cx=\"" + px(x) + "\" cy=\"" + py(y) + "\" r=\"" + format_double(radius_px, svg_digits) +
                       "\" " + style_attrs(style);
    if (title.empty())
        item += "/>";
    else
        item += "><title>" + escape_xml(title) + "</title></circle>";
    items_.push_back(std::move(item));
}

auto svg_scene_t::segment(double xa, double ya, double xb, double yb, svg_style_t const& style) -> void
{
    items_.push_back("<line x1=\"" + px(xa) + "\" y1=\"" + py(ya) + "\" x2=\"" + px(xb) + "\" y2=\"" + py(yb) + "\" " +
                     style_attrs(style) + "/>");
}

auto svg_scene_t::text(double x, double y, std::string const& label, int size_px) -> void
{
    items_.push_back("<text x=\"" + px(x) + "\" y=\"" + py(y) + "\" font-size=\"" + std::to_string(size_px) +
                     "\" font-family=\"monospace\">" + escape_xml(label) + "</text>");
}

auto svg_scene_t::frame() -> void
{
    polyline({x0_, x1_, x1_, x0_}, {y0_, y0_, y1_, y1_}, svg_style_t{"#999999", "none", 0.5}, true);
}

auto svg_scene_t::write(std::ostream& out) const -> void
{
    std::string const w = format_double((x1_ - x0_) * scale_, svg_digits);
    std::string const h = format_double((y1_ - y0_) * scale_, svg_digits);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
        << ' ' << h << "\">\n";
    for (auto const& item : items_) out << "  " << item << '\n';
    out << "</svg>\n";
}

// --------------------------------------------------------------------------------------------------------------------
// Routing
// --------------------------------------------------------------------------------------------------------------------

auto write_text(std::string const& path, std::string const& text, std::ostream& fallback) -> void
{
    if (path.empty() || path == "-")
    {
        fallback << text;
        return;
    }
    std::ofstream file{path, std::ios::binary};
    require(static_cast<bool>(file), error_kind::config_error, "cannot open output file '" + path + "'");
    file << text;
    require(static_cast<bool>(file), error_kind::config_error, "failed writing output file '" + path + "'");
}

} // namespace lw::cli
