#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "stereorange/geometry.hpp"

namespace stereorange {

/// One evaluation point for the closed-form error budget: an object at depth
/// Z and bearing theta seen by `rig` with disparity noise `disparity_error_px`.
class ErrorQuery {
public:
    ErrorQuery(StereoRig rig, double depth_m, double bearing_rad,
               double disparity_error_px)
        : rig_(std::move(rig)),
          depth_m_(depth_m),
          bearing_rad_(bearing_rad),
          disparity_error_px_(disparity_error_px) {
        if (!(depth_m > 0.0)) {
            throw std::domain_error("ErrorQuery: depth_m must be positive, got " +
                                    std::to_string(depth_m));
        }
        if (!(disparity_error_px > 0.0)) {
            throw std::domain_error(
                "ErrorQuery: disparity_error_px must be positive, got " +
                std::to_string(disparity_error_px));
        }
        if (!(std::abs(bearing_rad) < std::numbers::pi / 2.0)) {
            throw std::domain_error("ErrorQuery: |bearing| must be below pi/2, got " +
                                    std::to_string(bearing_rad) + " rad");
        }
    }

    const StereoRig& rig() const { return rig_; }
    double depth_m() const { return depth_m_; }
    double bearing_rad() const { return bearing_rad_; }
    double disparity_error_px() const { return disparity_error_px_; }

private:
    StereoRig rig_;
    double depth_m_;
    double bearing_rad_;
    double disparity_error_px_;
};

/// Depth error of a pinhole rig: Z^2 * dd / (f * B). Quadratic in depth,
/// independent of bearing.
inline double depth_error_pinhole(const ErrorQuery& q) {
    return q.depth_m() * q.depth_m() * q.disparity_error_px() /
           (q.rig().focal_px() * q.rig().baseline_m());
}

/// Converts a depth error to the range error along the line of sight:
/// dR = dZ / cos(theta).
inline double depth_to_range_error(double depth_error_m, double bearing_rad) {
    if (!(depth_error_m > 0.0)) {
        throw std::domain_error("depth_to_range_error: depth_error_m must be positive");
    }
    if (!(std::abs(bearing_rad) < std::numbers::pi / 2.0)) {
        throw std::domain_error("depth_to_range_error: |bearing| must be below pi/2");
    }
    return depth_error_m / std::cos(bearing_rad);
}

/// Range error of a pinhole rig: Z^2 * dd / (f * B') with the foreshortened
/// baseline B' = B * cos(theta).
inline double range_error_pinhole(const ErrorQuery& q) {
    return depth_error_pinhole(q) / std::cos(q.bearing_rad());
}

/// Depth error of an equidistant fisheye rig: the pinhole value scaled by
/// (1 + tan^2 theta), the peripheral loss of angular resolution.
inline double depth_error_fisheye(const ErrorQuery& q) {
    const double t = std::tan(q.bearing_rad());
    return depth_error_pinhole(q) * (1.0 + t * t);
}

/// Range error of an equidistant fisheye rig:
/// Z^2 * dd / (f * B * cos(theta)) * (1 + tan^2 theta).
inline double range_error_fisheye(const ErrorQuery& q) {
    return depth_error_fisheye(q) / std::cos(q.bearing_rad());
}

/// Depth error under the rig's own projection law.
inline double depth_error(const ErrorQuery& q) {
    return q.rig().projection() == LensProjection::Pinhole ? depth_error_pinhole(q)
                                                           : depth_error_fisheye(q);
}

/// Range error under the rig's own projection law.
inline double range_error(const ErrorQuery& q) {
    return q.rig().projection() == LensProjection::Pinhole ? range_error_pinhole(q)
                                                           : range_error_fisheye(q);
}

/// One sweep sample: the pose, the closed-form errors, and (when a validation
/// pass ran) the finite-difference oracle value with its relative deviation.
/// `error` marks grid points the rig cannot evaluate; their numeric fields
/// stay NaN/absent.
struct ErrorBudgetRow {
    double bearing_rad = 0.0;
    double depth_m = std::numeric_limits<double>::quiet_NaN();
    double range_m = std::numeric_limits<double>::quiet_NaN();
    double analytic_depth_error_m = std::numeric_limits<double>::quiet_NaN();
    double analytic_range_error_m = std::numeric_limits<double>::quiet_NaN();
    LensProjection model = LensProjection::Pinhole;
    std::optional<double> oracle_range_error_m;
    std::optional<double> oracle_relative_deviation;
    std::optional<std::string> error;

    /// True when even the closed forms could not be evaluated. Rows whose
    /// oracle pass failed keep their analytic values and only carry `error`.
    bool failed() const { return !std::isfinite(analytic_range_error_m); }
};

}  // namespace stereorange
