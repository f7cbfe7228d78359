#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stereorange/scenario.hpp"

namespace stereorange {

namespace detail {

inline constexpr double svg_width = 800.0;
inline constexpr double svg_height = 500.0;
inline constexpr double svg_margin_left = 72.0;
inline constexpr double svg_margin_right = 16.0;
inline constexpr double svg_margin_top = 16.0;
inline constexpr double svg_margin_bottom = 56.0;

inline void append_fixed(std::string& out, double value, int precision = 2) {
    std::array<char, 48> buffer;
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(),
                                         value, std::chars_format::fixed, precision);
    out.append(buffer.data(), end);
}

inline void append_shortest(std::string& out, double value) {
    std::array<char, 48> buffer;
    const auto [end, ec] =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    out.append(buffer.data(), end);
}

/// Round-number tick spacing: the 1-2-2.5-5 ladder value whose tick count
/// over [lo, hi] lands closest to six, preferring counts within five to eight.
inline double nice_tick_step(double lo, double hi) {
    const double base = std::pow(10.0, std::floor(std::log10(hi - lo)) - 1.0);
    double best_step = base;
    double best_score = std::numeric_limits<double>::max();
    for (int decade = 0; decade < 4; ++decade) {
        for (const double mantissa : {1.0, 2.0, 2.5, 5.0}) {
            const double step = base * mantissa * std::pow(10.0, decade);
            const double count =
                std::floor(hi / step + 1e-9) - std::ceil(lo / step - 1e-9) + 1.0;
            double score = std::abs(count - 6.0);
            if (count < 5.0 || count > 8.0) score += 100.0;
            if (score < best_score) {
                best_score = score;
                best_step = step;
            }
        }
    }
    return best_step;
}

inline std::vector<double> tick_positions(double lo, double hi, double step) {
    std::vector<double> ticks;
    const double first = std::ceil(lo / step - 1e-9) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) {
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return ticks;
}

struct PlotSeries {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<double> values;  // NaN marks a gap
};

inline const char* series_color(LensProjection model) {
    return model == LensProjection::Pinhole ? "#1f77b4" : "#d62728";
}

}  // namespace detail

/// Renders one or two sweeps as a standalone SVG 1.1 line chart in a fixed
/// 800x500 viewport: one polyline per (result, error kind) series, range error
/// on the y axis in centimeters, the sweep variable on the x axis, and a
/// legend naming each series. Output depends only on the inputs.
inline void emit_plot(std::span<const SweepResult> results, std::ostream& out) {
    if (results.empty() || results.size() > 2) {
        throw std::invalid_argument("emit_plot: expected one or two results");
    }
    for (const SweepResult& result : results) {
        if (result.rows.empty()) {
            throw std::invalid_argument("emit_plot: result has no rows");
        }
        if (result.config.sweep.variable != results[0].config.sweep.variable ||
            result.grid != results[0].grid) {
            throw std::invalid_argument(
                "emit_plot: results must share the sweep variable and grid");
        }
    }

    std::vector<detail::PlotSeries> series;
    for (const SweepResult& result : results) {
        detail::PlotSeries analytic;
        analytic.label = std::string(to_string(result.model)) + " analytic";
        analytic.color = detail::series_color(result.model);
        bool any_oracle = false;
        detail::PlotSeries oracle;
        oracle.label = std::string(to_string(result.model)) + " oracle";
        oracle.color = analytic.color;
        oracle.dashed = true;
        for (const ErrorBudgetRow& row : result.rows) {
            analytic.values.push_back(row.analytic_range_error_m * 100.0);  // m -> cm
            if (row.oracle_range_error_m) {
                oracle.values.push_back(*row.oracle_range_error_m * 100.0);
                any_oracle = true;
            } else {
                oracle.values.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        series.push_back(std::move(analytic));
        if (any_oracle) series.push_back(std::move(oracle));
    }

    const std::vector<double>& grid = results[0].grid;
    const double x_lo = grid.front();
    const double x_hi = grid.back();
    double y_hi = 0.0;
    for (const detail::PlotSeries& s : series) {
        for (double v : s.values) {
            if (std::isfinite(v)) y_hi = std::max(y_hi, v);
        }
    }
    if (!(y_hi > 0.0)) y_hi = 1.0;
    const double y_step = detail::nice_tick_step(0.0, y_hi);
    y_hi = std::ceil(y_hi / y_step) * y_step;
    const double x_step = detail::nice_tick_step(x_lo, x_hi);

    const double plot_left = detail::svg_margin_left;
    const double plot_right = detail::svg_width - detail::svg_margin_right;
    const double plot_top = detail::svg_margin_top;
    const double plot_bottom = detail::svg_height - detail::svg_margin_bottom;
    const auto x_of = [&](double x) {
        return plot_left + (x - x_lo) / (x_hi - x_lo) * (plot_right - plot_left);
    };
    const auto y_of = [&](double y) {
        return plot_bottom - y / y_hi * (plot_bottom - plot_top);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    svg += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";

    // gridlines and ticks
    for (double t : detail::tick_positions(0.0, y_hi, y_step)) {
        const double y = y_of(t);
        svg += "<line x1=\"";
        detail::append_fixed(svg, plot_left);
        svg += "\" y1=\"";
        detail::append_fixed(svg, y);
        svg += "\" x2=\"";
        detail::append_fixed(svg, plot_right);
        svg += "\" y2=\"";
        detail::append_fixed(svg, y);
        svg += "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"";
        detail::append_fixed(svg, plot_left - 8.0);
        svg += "\" y=\"";
        detail::append_fixed(svg, y + 4.0);
        svg += "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">";
        detail::append_shortest(svg, t);
        svg += "</text>\n";
    }
    for (double t : detail::tick_positions(x_lo, x_hi, x_step)) {
        const double x = x_of(t);
        svg += "<line x1=\"";
        detail::append_fixed(svg, x);
        svg += "\" y1=\"";
        detail::append_fixed(svg, plot_bottom);
        svg += "\" x2=\"";
        detail::append_fixed(svg, x);
        svg += "\" y2=\"";
        detail::append_fixed(svg, plot_bottom + 5.0);
        svg += "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"";
        detail::append_fixed(svg, x);
        svg += "\" y=\"";
        detail::append_fixed(svg, plot_bottom + 20.0);
        svg += "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">";
        detail::append_shortest(svg, t);
        svg += "</text>\n";
    }

    // axes
    svg += "<line x1=\"";
    detail::append_fixed(svg, plot_left);
    svg += "\" y1=\"";
    detail::append_fixed(svg, plot_top);
    svg += "\" x2=\"";
    detail::append_fixed(svg, plot_left);
    svg += "\" y2=\"";
    detail::append_fixed(svg, plot_bottom);
    svg += "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"";
    detail::append_fixed(svg, plot_left);
    svg += "\" y1=\"";
    detail::append_fixed(svg, plot_bottom);
    svg += "\" x2=\"";
    detail::append_fixed(svg, plot_right);
    svg += "\" y2=\"";
    detail::append_fixed(svg, plot_bottom);
    svg += "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // axis labels
    const char* x_label = "";
    switch (results[0].config.sweep.variable) {
    case SweepVariable::BearingDeg: x_label = "bearing [deg]"; break;
    case SweepVariable::DepthM: x_label = "depth [m]"; break;
    case SweepVariable::BaselineM: x_label = "baseline [m]"; break;
    }
    svg += "<text x=\"";
    detail::append_fixed(svg, (plot_left + plot_right) / 2.0);
    svg += "\" y=\"";
    detail::append_fixed(svg, detail::svg_height - 14.0);
    svg += "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">";
    svg += x_label;
    svg += "</text>\n";
    svg += "<text x=\"18\" y=\"";
    detail::append_fixed(svg, (plot_top + plot_bottom) / 2.0);
    svg += "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 ";
    detail::append_fixed(svg, (plot_top + plot_bottom) / 2.0);
    svg += ")\">range error [cm]</text>\n";

    // data series
    for (const detail::PlotSeries& s : series) {
        std::string points;
        const auto flush = [&]() {
            if (points.empty()) return;
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += s.color;
            svg += "\" stroke-width=\"2\"";
            if (s.dashed) svg += " stroke-dasharray=\"6 4\"";
            svg += " points=\"";
            svg += points;
            svg += "\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double v = s.values[i];
            if (!std::isfinite(v) || v < 0.0) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            detail::append_fixed(points, x_of(grid[i]));
            points += ',';
            detail::append_fixed(points, y_of(std::min(v, y_hi)));
        }
        flush();
    }

    // legend
    double legend_y = plot_top + 16.0;
    for (const detail::PlotSeries& s : series) {
        svg += "<line x1=\"";
        detail::append_fixed(svg, plot_left + 14.0);
        svg += "\" y1=\"";
        detail::append_fixed(svg, legend_y - 4.0);
        svg += "\" x2=\"";
        detail::append_fixed(svg, plot_left + 44.0);
        svg += "\" y2=\"";
        detail::append_fixed(svg, legend_y - 4.0);
        svg += "\" stroke=\"";
        svg += s.color;
        svg += "\" stroke-width=\"2\"";
        if (s.dashed) svg += " stroke-dasharray=\"6 4\"";
        svg += "/>\n";
        svg += "<text x=\"";
        detail::append_fixed(svg, plot_left + 50.0);
        svg += "\" y=\"";
        detail::append_fixed(svg, legend_y);
        svg += "\" font-family=\"sans-serif\" font-size=\"13\">";
        svg += s.label;
        svg += "</text>\n";
        legend_y += 18.0;
    }

    svg += "</svg>\n";
    out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    if (!out) {
        throw std::runtime_error("emit_plot: write failed");
    }
}

inline void emit_plot(const SweepResult& result, std::ostream& out) {
    emit_plot(std::span<const SweepResult>(&result, 1), out);
}

}  // namespace stereorange
