#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stereorange/projection.hpp"

namespace stereorange {

/// R = Z / cos(theta): line-of-sight distance of an object at perpendicular
/// depth Z and bearing theta.
inline double range_from_depth(double depth_m, double bearing_rad) {
    if (!(depth_m > 0.0)) {
        throw std::domain_error("range_from_depth: depth_m must be positive, got " +
                                std::to_string(depth_m));
    }
    if (!(std::abs(bearing_rad) < std::numbers::pi / 2.0)) {
        throw std::domain_error("range_from_depth: |bearing| must be below pi/2");
    }
    return depth_m / std::cos(bearing_rad);
}

/// Z = R * cos(theta).
inline double depth_from_range(double range_m, double bearing_rad) {
    if (!(range_m > 0.0)) {
        throw std::domain_error("depth_from_range: range_m must be positive, got " +
                                std::to_string(range_m));
    }
    if (!(std::abs(bearing_rad) < std::numbers::pi / 2.0)) {
        throw std::domain_error("depth_from_range: |bearing| must be below pi/2");
    }
    return range_m * std::cos(bearing_rad);
}

/// Target location on the horizontal epipolar plane, anchored at the midpoint
/// between the two cameras. Bearing is measured from the rig's forward axis,
/// positive toward the left camera's side.
class ObjectPose {
public:
    static ObjectPose from_range_bearing(double range_m, double bearing_rad) {
        return ObjectPose(range_m, bearing_rad);
    }
    static ObjectPose from_depth_bearing(double depth_m, double bearing_rad) {
        return ObjectPose(range_from_depth(depth_m, bearing_rad), bearing_rad);
    }

    double range_m() const { return range_m_; }
    double bearing_rad() const { return bearing_rad_; }
    double depth_m() const { return range_m_ * std::cos(bearing_rad_); }
    /// Lateral offset from the rig centerline.
    double cross_m() const { return range_m_ * std::sin(bearing_rad_); }

private:
    ObjectPose(double range_m, double bearing_rad)
        : range_m_(range_m), bearing_rad_(bearing_rad) {
        if (!(range_m > 0.0)) {
            throw std::domain_error("ObjectPose: range_m must be positive, got " +
                                    std::to_string(range_m));
        }
        if (!(std::abs(bearing_rad) < std::numbers::pi / 2.0)) {
            throw std::domain_error(
                "ObjectPose: |bearing| must be below pi/2, got " +
                std::to_string(bearing_rad) + " rad");
        }
    }

    double range_m_;
    double bearing_rad_;
};

/// Two identical cameras sharing one projection law, separated horizontally by
/// baseline_m.
class StereoRig {
public:
    StereoRig(LensProjection projection, CameraIntrinsics intrinsics,
              double baseline_m)
        : projection_(projection), intrinsics_(intrinsics), baseline_m_(baseline_m) {
        validate_intrinsics(intrinsics_, projection_);
        if (!(baseline_m > 0.0)) {
            throw std::domain_error("StereoRig: baseline_m must be positive, got " +
                                    std::to_string(baseline_m));
        }
    }

    LensProjection projection() const { return projection_; }
    const CameraIntrinsics& intrinsics() const { return intrinsics_; }
    double focal_px() const { return intrinsics_.focal_px; }
    double baseline_m() const { return baseline_m_; }

    StereoRig with_baseline(double baseline_m) const {
        return StereoRig(projection_, intrinsics_, baseline_m);
    }

    /// Same focal length and baseline under the other projection law. A
    /// pinhole twin of a 180-degree fisheye keeps its HFOV just below the
    /// pole so the intrinsics stay representable.
    StereoRig with_projection(LensProjection projection) const {
        CameraIntrinsics cam = intrinsics_;
        if (projection == LensProjection::Pinhole) {
            cam.hfov_rad = std::min(cam.hfov_rad, std::numbers::pi - 1e-6);
        }
        return StereoRig(projection, cam, baseline_m_);
    }

private:
    LensProjection projection_;
    CameraIntrinsics intrinsics_;
    double baseline_m_;
};

struct CameraBearings {
    double left_rad;
    double right_rad;
};

/// Ray angles from each camera center to the object. left_rad > right_rad for
/// every valid pose.
inline CameraBearings camera_bearings(const StereoRig& rig, const ObjectPose& pose) {
    const double x = pose.cross_m();
    const double z = pose.depth_m();
    const double half_baseline = rig.baseline_m() / 2.0;
    return {std::atan2(x + half_baseline, z), std::atan2(x - half_baseline, z)};
}

/// Total disparity in pixels: the signed projection difference between the two
/// cameras. For a pinhole rig this collapses to f*B/Z at any bearing.
inline double disparity(const StereoRig& rig, const ObjectPose& pose) {
    const CameraBearings b = camera_bearings(rig, pose);
    return project(rig.projection(), rig.focal_px(), b.left_rad) -
           project(rig.projection(), rig.focal_px(), b.right_rad);
}

/// B' = B * cos(theta): baseline component perpendicular to the line of sight.
inline double effective_baseline(double baseline_m, double bearing_rad) {
    if (!(baseline_m > 0.0)) {
        throw std::domain_error("effective_baseline: baseline_m must be positive");
    }
    if (!(std::abs(bearing_rad) < std::numbers::pi / 2.0)) {
        throw std::domain_error("effective_baseline: |bearing| must be below pi/2");
    }
    return baseline_m * std::cos(bearing_rad);
}

/// Requested disparity cannot be produced by any range in the search bracket.
/// Carries the achievable disparity interval at the queried bearing.
class no_solution_error : public std::domain_error {
public:
    no_solution_error(const std::string& what, double achievable_min_px,
                      double achievable_max_px)
        : std::domain_error(what),
          min_px_(achievable_min_px),
          max_px_(achievable_max_px) {}

    double achievable_min_px() const { return min_px_; }
    double achievable_max_px() const { return max_px_; }

private:
    double min_px_;
    double max_px_;
};

namespace detail {

inline constexpr double max_search_range_m = 1e7;
inline constexpr double bisection_residual_px = 1e-12;
inline constexpr int bisection_max_iterations = 200;

}  // namespace detail

/// Range whose disparity at the given bearing equals disparity_px, found by
/// bisection over [baseline, 1e7 m]. Disparity decreases strictly with range,
/// so the bracket is valid whenever the target lies inside the achievable
/// interval.
inline double range_from_disparity(const StereoRig& rig, double bearing_rad,
                                   double disparity_px) {
    double lo = rig.baseline_m();
    double hi = detail::max_search_range_m;
    const double d_near =
        disparity(rig, ObjectPose::from_range_bearing(lo, bearing_rad));
    const double d_far =
        disparity(rig, ObjectPose::from_range_bearing(hi, bearing_rad));
    if (!(disparity_px >= d_far && disparity_px <= d_near)) {
        throw no_solution_error(
            "range_from_disparity: disparity " + std::to_string(disparity_px) +
                " px is outside the achievable interval [" + std::to_string(d_far) +
                ", " + std::to_string(d_near) + "] px at bearing " +
                std::to_string(bearing_rad) + " rad",
            d_far, d_near);
    }

    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < detail::bisection_max_iterations; ++i) {
        mid = 0.5 * (lo + hi);
        const double d_mid =
            disparity(rig, ObjectPose::from_range_bearing(mid, bearing_rad));
        if (std::abs(d_mid - disparity_px) <= detail::bisection_residual_px) {
            return mid;
        }
        if (d_mid > disparity_px) {
            lo = mid;  // object is farther out
        } else {
            hi = mid;
        }
        if (hi - lo <= mid * 4.0 * std::numeric_limits<double>::epsilon()) {
            break;  // bracket has collapsed to adjacent doubles
        }
    }
    return mid;
}

}  // namespace stereorange
