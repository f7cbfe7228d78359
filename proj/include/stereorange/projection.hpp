#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stereorange {

/// Projection law mapping an incident ray angle to a radial distance from the
/// image center. Pinhole: r = f*tan(theta). Equidistant fisheye: r = f*theta.
enum class LensProjection { Pinhole, EquidistantFisheye };

inline const char* to_string(LensProjection proj) {
    return proj == LensProjection::Pinhole ? "pinhole" : "fisheye";
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

namespace detail {

// tan is numerically explosive near the pole; reject slightly early.
inline constexpr double pinhole_pole_margin = 1e-9;

inline constexpr double pinhole_max_angle =
    std::numbers::pi / 2.0 - pinhole_pole_margin;

}  // namespace detail

/// Radial image distance (signed pixels) of a ray at `theta_rad` off the
/// optical axis. Odd in theta and strictly increasing on the valid domain:
/// |theta| < pi/2 for pinhole, |theta| <= pi for fisheye.
inline double project(LensProjection proj, double focal_px, double theta_rad) {
    if (!(focal_px > 0.0)) {
        throw std::domain_error("project: focal_px must be positive, got " +
                                std::to_string(focal_px));
    }
    switch (proj) {
    case LensProjection::Pinhole:
        if (!(std::abs(theta_rad) < detail::pinhole_max_angle)) {
            throw std::domain_error(
                "project: pinhole ray angle " + std::to_string(theta_rad) +
                " rad is at or beyond the +-pi/2 pole");
        }
        // abs/copysign keeps the result exactly odd in theta.
        return std::copysign(focal_px * std::tan(std::abs(theta_rad)), theta_rad);
    case LensProjection::EquidistantFisheye:
        if (!(std::abs(theta_rad) <= std::numbers::pi)) {
            throw std::domain_error(
                "project: fisheye ray angle " + std::to_string(theta_rad) +
                " rad exceeds +-pi");
        }
        return focal_px * theta_rad;
    }
    throw std::logic_error("project: unhandled projection kind");
}

/// Inverse of project(). Fisheye radii are bounded by focal_px*pi.
inline double unproject(LensProjection proj, double focal_px, double radius_px) {
    if (!(focal_px > 0.0)) {
        throw std::domain_error("unproject: focal_px must be positive, got " +
                                std::to_string(focal_px));
    }
    switch (proj) {
    case LensProjection::Pinhole:
        return std::atan(radius_px / focal_px);
    case LensProjection::EquidistantFisheye:
        if (!(std::abs(radius_px) <= focal_px * std::numbers::pi)) {
            throw std::domain_error(
                "unproject: fisheye radius " + std::to_string(radius_px) +
                " px maps beyond +-pi (limit " +
                std::to_string(focal_px * std::numbers::pi) + " px)");
        }
        return radius_px / focal_px;
    }
    throw std::logic_error("unproject: unhandled projection kind");
}

/// Focal length (pixels) that places a ray at `half_hfov_rad` exactly
/// `half_width_px` from the image center. A pinhole lens cannot reach a 90
/// degree half-FOV: r = f*tan(theta) needs an unbounded sensor there.
inline double focal_from_fov(LensProjection proj, double half_width_px,
                             double half_hfov_rad) {
    if (!(half_width_px > 0.0)) {
        throw std::domain_error("focal_from_fov: half_width_px must be positive");
    }
    switch (proj) {
    case LensProjection::Pinhole:
        if (!(half_hfov_rad > 0.0 && half_hfov_rad < std::numbers::pi / 2.0)) {
            throw std::domain_error(
                "focal_from_fov: pinhole half-FOV must lie in (0, pi/2), got " +
                std::to_string(half_hfov_rad) + " rad");
        }
        return half_width_px / std::tan(half_hfov_rad);
    case LensProjection::EquidistantFisheye:
        if (!(half_hfov_rad > 0.0 && half_hfov_rad <= std::numbers::pi / 2.0)) {
            throw std::domain_error(
                "focal_from_fov: fisheye half-FOV must lie in (0, pi/2], got " +
                std::to_string(half_hfov_rad) + " rad");
        }
        return half_width_px / half_hfov_rad;
    }
    throw std::logic_error("focal_from_fov: unhandled projection kind");
}

/// Horizontal intrinsics of one camera. pixel_pitch_um documents the physical
/// sensor; every error formula here is pixel-denominated.
struct CameraIntrinsics {
    double focal_px = 0.0;
    int sensor_width_px = 0;
    double pixel_pitch_um = 0.0;
    double hfov_rad = 0.0;

    static CameraIntrinsics from_fov(LensProjection proj, int sensor_width_px,
                                     double hfov_rad, double pixel_pitch_um);
};

inline void validate_intrinsics(const CameraIntrinsics& cam, LensProjection proj) {
    if (!(cam.focal_px > 0.0)) {
        throw std::domain_error("intrinsics: focal_px must be positive, got " +
                                std::to_string(cam.focal_px));
    }
    if (cam.sensor_width_px < 2) {
        throw std::domain_error("intrinsics: sensor_width_px must be >= 2, got " +
                                std::to_string(cam.sensor_width_px));
    }
    if (!(cam.pixel_pitch_um > 0.0)) {
        throw std::domain_error("intrinsics: pixel_pitch_um must be positive");
    }
    if (!(cam.hfov_rad > 0.0 && cam.hfov_rad <= std::numbers::pi)) {
        throw std::domain_error("intrinsics: hfov_rad must lie in (0, pi], got " +
                                std::to_string(cam.hfov_rad));
    }
    if (proj == LensProjection::Pinhole && !(cam.hfov_rad < std::numbers::pi)) {
        throw std::domain_error(
            "intrinsics: a pinhole camera cannot cover a 180 degree HFOV");
    }
}

inline CameraIntrinsics CameraIntrinsics::from_fov(LensProjection proj,
                                                   int sensor_width_px,
                                                   double hfov_rad,
                                                   double pixel_pitch_um) {
    CameraIntrinsics cam;
    cam.sensor_width_px = sensor_width_px;
    cam.pixel_pitch_um = pixel_pitch_um;
    cam.hfov_rad = hfov_rad;
    if (sensor_width_px >= 2 && hfov_rad > 0.0) {
        cam.focal_px = focal_from_fov(proj, sensor_width_px / 2.0, hfov_rad / 2.0);
    }
    validate_intrinsics(cam, proj);
    return cam;
}

}  // namespace stereorange
