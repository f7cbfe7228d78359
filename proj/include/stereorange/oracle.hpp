#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "stereorange/error_budget.hpp"
#include "stereorange/geometry.hpp"

namespace stereorange {

/// Default finite-difference step as a fraction of the pose range. Keeps the
/// O(h^2) truncation of the central difference near 1e-10 relative while the
/// roundoff contribution stays around 1e-11.
inline constexpr double default_fd_step_rel = 1e-5;

/// Central-difference derivative of the exact disparity with respect to range
/// at fixed bearing, in pixels per meter. Negative: disparity falls with range.
inline double disparity_range_derivative_fd(const StereoRig& rig,
                                            const ObjectPose& pose,
                                            double step_m) {
    if (!(step_m > 0.0)) {
        throw std::domain_error(
            "disparity_range_derivative_fd: step_m must be positive, got " +
            std::to_string(step_m));
    }
    if (!(pose.range_m() - step_m > 0.0)) {
        throw std::domain_error(
            "disparity_range_derivative_fd: step_m " + std::to_string(step_m) +
            " m reaches past the origin at range " + std::to_string(pose.range_m()) +
            " m");
    }
    const double bearing = pose.bearing_rad();
    const double d_plus = disparity(
        rig, ObjectPose::from_range_bearing(pose.range_m() + step_m, bearing));
    const double d_minus = disparity(
        rig, ObjectPose::from_range_bearing(pose.range_m() - step_m, bearing));
    return (d_plus - d_minus) / (2.0 * step_m);
}

/// First-order range error propagated through the exact geometry:
/// |dd / (dd/dR)|. No small-baseline approximation.
inline double range_error_fd(const StereoRig& rig, const ObjectPose& pose,
                             double disparity_error_px, double step_m) {
    if (!(disparity_error_px > 0.0)) {
        throw std::domain_error("range_error_fd: disparity_error_px must be positive");
    }
    return std::abs(disparity_error_px /
                    disparity_range_derivative_fd(rig, pose, step_m));
}

inline double range_error_fd(const StereoRig& rig, const ObjectPose& pose,
                             double disparity_error_px) {
    return range_error_fd(rig, pose, disparity_error_px,
                          default_fd_step_rel * pose.range_m());
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Standard normal draw that depends only on (seed, index): two SplitMix64
/// words fed through the Box-Muller transform. Independent of iteration
/// order, so results are reproducible under any future parallel chunking.
inline double gaussian_sample(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t stream = splitmix64(seed ^ 0x8a5cd789635d2dffULL);
    const std::uint64_t a = splitmix64(stream + 2 * index);
    const std::uint64_t b = splitmix64(stream + 2 * index + 1);
    const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;       // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

struct MonteCarloSummary {
    double mean_range_m = 0.0;
    double std_range_m = 0.0;
    std::int64_t sample_count = 0;    // samples that inverted successfully
    std::int64_t rejected_count = 0;  // noisy disparities outside the achievable interval
};

/// Propagates Gaussian disparity noise (sigma = disparity_sigma_px) through
/// the exact inverse geometry. Draw i depends only on (seed, i), so reruns
/// with the same inputs are bit-identical. Throws if more than 1% of the
/// samples fail to invert.
inline MonteCarloSummary monte_carlo_range_error(const StereoRig& rig,
                                                 const ObjectPose& pose,
                                                 double disparity_sigma_px,
                                                 std::int64_t samples,
                                                 std::uint64_t seed) {
    if (samples < 100) {
        throw std::domain_error("monte_carlo_range_error: needs at least 100 samples, got " +
                                std::to_string(samples));
    }
    if (!(disparity_sigma_px > 0.0)) {
        throw std::domain_error(
            "monte_carlo_range_error: disparity_sigma_px must be positive");
    }

    const double d_true = disparity(rig, pose);
    const double bearing = pose.bearing_rad();

    // Welford accumulation keeps the variance stable for sigma << range.
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const double noisy =
            d_true + disparity_sigma_px *
                         detail::gaussian_sample(seed, static_cast<std::uint64_t>(i));
        double range;
        try {
            range = range_from_disparity(rig, bearing, noisy);
        } catch (const no_solution_error&) {
            ++rejected;
            continue;
        }
        ++accepted;
        const double delta = range - mean;
        mean += delta / static_cast<double>(accepted);
        m2 += delta * (range - mean);
    }

    if (rejected * 100 > samples) {
        throw std::runtime_error(
            "monte_carlo_range_error: " + std::to_string(rejected) + " of " +
            std::to_string(samples) +
            " samples fell outside the invertible disparity interval (>1%)");
    }

    MonteCarloSummary summary;
    summary.mean_range_m = mean;
    summary.std_range_m =
        accepted > 1 ? std::sqrt(m2 / static_cast<double>(accepted - 1)) : 0.0;
    summary.sample_count = accepted;
    summary.rejected_count = rejected;
    return summary;
}

/// Closed-form errors plus, when fd_step_rel > 0, the finite-difference oracle
/// and its relative deviation. A pose the rig cannot evaluate yields a row
/// with an error marker instead of aborting the report.
inline ErrorBudgetRow evaluate_budget_row(const StereoRig& rig,
                                          const ObjectPose& pose,
                                          double disparity_error_px,
                                          double fd_step_rel = 0.0) {
    ErrorBudgetRow row;
    row.model = rig.projection();
    row.bearing_rad = pose.bearing_rad();
    row.depth_m = pose.depth_m();
    row.range_m = pose.range_m();
    try {
        const ErrorQuery query(rig, pose.depth_m(), pose.bearing_rad(),
                               disparity_error_px);
        row.analytic_depth_error_m = depth_error(query);
        row.analytic_range_error_m = range_error(query);
    } catch (const std::domain_error& e) {
        row.error = e.what();
        return row;
    }
    if (fd_step_rel > 0.0) {
        try {
            const double oracle = range_error_fd(rig, pose, disparity_error_px,
                                                 fd_step_rel * pose.range_m());
            row.oracle_range_error_m = oracle;
            row.oracle_relative_deviation =
                std::abs(row.analytic_range_error_m - oracle) / oracle;
        } catch (const std::domain_error& e) {
            row.error = e.what();
        }
    }
    return row;
}

/// Quantifies how well the closed forms track the exact geometry over a pose
/// sweep. Deviation is reported relative to the oracle.
inline std::vector<ErrorBudgetRow> deviation_report(
    const StereoRig& rig, const std::vector<ObjectPose>& sweep,
    double disparity_error_px, double fd_step_rel = default_fd_step_rel) {
    if (sweep.empty()) {
        throw std::invalid_argument("deviation_report: sweep must not be empty");
    }
    if (!(fd_step_rel > 0.0)) {
        throw std::domain_error("deviation_report: fd_step_rel must be positive");
    }
    std::vector<ErrorBudgetRow> rows;
    rows.reserve(sweep.size());
    for (const ObjectPose& pose : sweep) {
        rows.push_back(evaluate_budget_row(rig, pose, disparity_error_px, fd_step_rel));
    }
    return rows;
}

}  // namespace stereorange
