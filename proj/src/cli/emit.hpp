// SPDX-License-Identifier: MIT
/**
    \file
    \brief output emitters: CSV tables with 17 significant digits, SVG scenes with 9, and file/stdout routing

    All float text goes through format_double so identical inputs give byte-identical files on every platform the
    standard library's %.*g formatting agrees on.
*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lw::cli {

inline constexpr int csv_digits = 17;
inline constexpr int svg_digits = 9;

//! shortest "%.<digits>g" rendering; non-finite values become "nan", "inf" or "-inf"
auto format_double(double value, int digits) -> std::string;

// --------------------------------------------------------------------------------------------------------------------
// CSV
// --------------------------------------------------------------------------------------------------------------------

//! a header plus rows of already formatted cells; quoting is applied to cells containing separators
class csv_table_t
{
public:
    explicit csv_table_t(std::vector<std::string> header);

    auto add_row(std::vector<std::string> cells) -> void;
    auto row_count() const noexcept -> std::size_t { return rows_.size(); }
    auto write(std::ostream& out) const -> void;

    static auto cell(double value) -> std::string { return format_double(value, csv_digits); }
    static auto cell(long long value) -> std::string { return std::to_string(value); }
    static auto cell(std::string value) -> std::string { return value; }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// --------------------------------------------------------------------------------------------------------------------
// SVG
// --------------------------------------------------------------------------------------------------------------------

struct svg_style_t
{
    std::string stroke = "black";
    std::string fill = "none";
    double width = 1.0;
};

/**
    a minimal SVG scene in data coordinates

    The view box is the data box [x0, x1] x [y0, y1] mapped onto a fixed pixel canvas with y pointing up. Stroke
    widths and radii are given in pixels.
*/
class svg_scene_t
{
public:
    svg_scene_t(double x0, double x1, double y0, double y1, int pixels = 600);

    auto polyline(std::vector<double> const& xs, std::vector<double> const& ys, svg_style_t const& style, bool closed = false)
        -> void;
    auto circle(double x, double y, double radius_px, svg_style_t const& style, std::string const& title = {}) -> void;
    auto segment(double xa, double ya, double xb, double yb, svg_style_t const& style) -> void;
    auto text(double x, double y, std::string const& label, int size_px = 12) -> void;
    auto frame() -> void;
    auto write(std::ostream& out) const -> void;

private:
    auto px(double x) const -> std::string;
    auto py(double y) const -> std::string;

    double x0_, x1_, y0_, y1_;
    int pixels_;
    double scale_;
    std::vector<std::string> items_;
};

// --------------------------------------------------------------------------------------------------------------------
// Routing
// --------------------------------------------------------------------------------------------------------------------

//! writes text to `path`, or to `fallback` when path is empty or "-"; throws config_error when the file cannot be opened
auto write_text(std::string const& path, std::string const& text, std::ostream& fallback) -> void;

} // namespace lw::cli
