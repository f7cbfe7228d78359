#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stereorange/scenario.hpp"

namespace stereorange {

/// Pinned column order; the golden-file test keeps it stable.
inline constexpr std::string_view csv_header =
    "sweep_variable,bearing_deg,depth_m,range_m,model,"
    "analytic_depth_error_m,analytic_range_error_m,"
    "oracle_range_error_m,oracle_relative_deviation";

namespace detail {

/// Shortest decimal form that parses back to the same double. Non-finite
/// values become empty cells.
inline void append_cell(std::string& out, double value) {
    if (!std::isfinite(value)) return;
    std::array<char, 32> buffer;
    const auto [end, ec] =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    out.append(buffer.data(), end);
}

}  // namespace detail

/// Writes one or more sweeps sharing a schema as UTF-8 CSV with LF endings:
/// a header line, then one row per grid point per result. Failed rows keep
/// their known inputs and leave the unavailable cells empty.
inline void emit_csv(std::span<const SweepResult> results, std::ostream& out) {
    if (results.empty()) {
        throw std::invalid_argument("emit_csv: no results to write");
    }
    std::string text;
    text += csv_header;
    text += '\n';
    for (const SweepResult& result : results) {
        if (result.rows.empty()) {
            throw std::invalid_argument("emit_csv: result has no rows");
        }
        const bool bearing_sweep =
            result.config.sweep.variable == SweepVariable::BearingDeg;
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            const ErrorBudgetRow& row = result.rows[i];
            // Degrees come from the config verbatim; converting the stored
            // radians back would perturb the last decimal digit.
            const double bearing_deg =
                bearing_sweep ? result.grid[i] : result.config.query.bearing_deg;
            detail::append_cell(text, result.grid[i]);
            text += ',';
            detail::append_cell(text, bearing_deg);
            text += ',';
            detail::append_cell(text, row.depth_m);
            text += ',';
            detail::append_cell(text, row.range_m);
            text += ',';
            text += to_string(row.model);
            text += ',';
            detail::append_cell(text, row.analytic_depth_error_m);
            text += ',';
            detail::append_cell(text, row.analytic_range_error_m);
            text += ',';
            if (row.oracle_range_error_m) {
                detail::append_cell(text, *row.oracle_range_error_m);
            }
            text += ',';
            if (row.oracle_relative_deviation) {
                detail::append_cell(text, *row.oracle_relative_deviation);
            }
            text += '\n';
        }
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("emit_csv: write failed");
    }
}

inline void emit_csv(const SweepResult& result, std::ostream& out) {
    emit_csv(std::span<const SweepResult>(&result, 1), out);
}

}  // namespace stereorange
