#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "stereorange/geometry.hpp"
#include "support/reference_geometry.hpp"

using stereorange::CameraBearings;
using stereorange::CameraIntrinsics;
using stereorange::LensProjection;
using stereorange::ObjectPose;
using stereorange::StereoRig;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

StereoRig reference_rig(LensProjection proj) {
    CameraIntrinsics cam;
    cam.focal_px = 1222.3;
    cam.sensor_width_px = 3840;
    cam.pixel_pitch_um = 2.1;
    cam.hfov_rad = proj == LensProjection::Pinhole ? stereorange::deg_to_rad(179.0)
                                                   : std::numbers::pi;
    return StereoRig(proj, cam, 1.0);
}

}  // namespace

TEST_CASE("depth and range conversions", "[geometry]") {
    CHECK(stereorange::range_from_depth(10.0, 0.0) == 10.0);
    CHECK_THAT(stereorange::range_from_depth(10.0, stereorange::deg_to_rad(60.0)),
               WithinRel(20.0, 1e-12));
    CHECK_THAT(stereorange::depth_from_range(10.0, stereorange::deg_to_rad(30.0)),
               WithinRel(8.6602540378443865, 1e-12));
    CHECK_THROWS_AS(stereorange::range_from_depth(-1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(stereorange::depth_from_range(10.0, 1.6), std::domain_error);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> bearing(-1.5, 1.5);
    std::uniform_real_distribution<double> depth(0.01, 1e4);
    for (int i = 0; i < 300; ++i) {
        const double z = depth(rng);
        const double theta = bearing(rng);
        const double back = stereorange::depth_from_range(
            stereorange::range_from_depth(z, theta), theta);
        CHECK(std::abs(back - z) <= 1e-12 * z);
    }
}

TEST_CASE("object pose construction", "[geometry]") {
    const ObjectPose pose = ObjectPose::from_depth_bearing(10.0, stereorange::deg_to_rad(30.0));
    CHECK_THAT(pose.depth_m(), WithinRel(10.0, 1e-12));
    CHECK_THAT(pose.range_m(), WithinRel(10.0 / std::cos(stereorange::deg_to_rad(30.0)), 1e-15));
    CHECK_THROWS_AS(ObjectPose::from_depth_bearing(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(ObjectPose::from_range_bearing(-2.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(ObjectPose::from_range_bearing(2.0, std::numbers::pi / 2.0),
                    std::domain_error);
}

TEST_CASE("stereo rig invariants", "[geometry]") {
    CHECK_THROWS_AS(StereoRig(LensProjection::Pinhole,
                              CameraIntrinsics::from_fov(LensProjection::Pinhole, 1920,
                                                         1.0, 3.0),
                              0.0),
                    std::domain_error);
    const StereoRig rig = reference_rig(LensProjection::EquidistantFisheye);
    CHECK(rig.with_baseline(2.0).baseline_m() == 2.0);
    const StereoRig twin = rig.with_projection(LensProjection::Pinhole);
    CHECK(twin.focal_px() == rig.focal_px());
    CHECK(twin.intrinsics().hfov_rad < std::numbers::pi);
}

TEST_CASE("camera bearings", "[geometry]") {
    const StereoRig rig = reference_rig(LensProjection::Pinhole);

    const CameraBearings on_axis =
        camera_bearings(rig, ObjectPose::from_range_bearing(10.0, 0.0));
    CHECK_THAT(on_axis.left_rad, WithinRel(0.049958395721942761, 1e-12));
    CHECK_THAT(on_axis.right_rad, WithinRel(-0.049958395721942761, 1e-12));

    const CameraBearings wide = camera_bearings(
        rig.with_baseline(2.0), ObjectPose::from_depth_bearing(1.0, 0.0));
    CHECK_THAT(wide.left_rad, WithinRel(std::numbers::pi / 4.0, 1e-12));
    CHECK_THAT(wide.right_rad, WithinRel(-std::numbers::pi / 4.0, 1e-12));

    const CameraBearings off_axis = camera_bearings(
        rig, ObjectPose::from_depth_bearing(10.0, stereorange::deg_to_rad(30.0)));
    CHECK_THAT(off_axis.left_rad, WithinRel(0.56028761160418066, 1e-12));
    CHECK_THAT(off_axis.right_rad, WithinRel(0.48528766426792943, 1e-12));
    CHECK(off_axis.left_rad > off_axis.right_rad);
}

TEST_CASE("disparity under both models", "[geometry]") {
    const StereoRig pinhole = reference_rig(LensProjection::Pinhole);
    const StereoRig fisheye = reference_rig(LensProjection::EquidistantFisheye);
    const ObjectPose center = ObjectPose::from_depth_bearing(10.0, 0.0);

    CHECK_THAT(disparity(pinhole, center), WithinRel(122.23, 1e-9));
    CHECK_THAT(disparity(fisheye, center), WithinRel(122.12829418186127, 1e-9));

    // Pinhole disparity only depends on depth.
    const ObjectPose oblique = ObjectPose::from_depth_bearing(10.0, stereorange::deg_to_rad(30.0));
    CHECK_THAT(disparity(pinhole, oblique), WithinRel(122.23, 1e-12));
}

TEST_CASE("pinhole disparity is bearing-invariant at fixed depth", "[geometry][property]") {
    const StereoRig rig = reference_rig(LensProjection::Pinhole);
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> depth(2.0, 100.0);
    std::uniform_real_distribution<double> bearing(-stereorange::deg_to_rad(80.0),
                                                   stereorange::deg_to_rad(80.0));
    for (int i = 0; i < 300; ++i) {
        const double z = depth(rng);
        const double d = disparity(rig, ObjectPose::from_depth_bearing(z, bearing(rng)));
        const double d_center = rig.focal_px() * rig.baseline_m() / z;
        CHECK(std::abs(d - d_center) <= 1e-12 * d_center);
    }
}

TEST_CASE("disparity decreases strictly with range", "[geometry][property]") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> bearing(-1.2, 1.2);
    std::uniform_real_distribution<double> range(2.0, 1e4);
    for (const LensProjection proj :
         {LensProjection::Pinhole, LensProjection::EquidistantFisheye}) {
        const StereoRig rig = reference_rig(proj);
        for (int i = 0; i < 200; ++i) {
            const double theta = bearing(rng);
            double r1 = range(rng);
            double r2 = range(rng);
            if (r1 == r2) continue;
            if (r1 > r2) std::swap(r1, r2);
            CHECK(disparity(rig, ObjectPose::from_range_bearing(r1, theta)) >
                  disparity(rig, ObjectPose::from_range_bearing(r2, theta)));
        }
    }
}

TEST_CASE("disparity matches the reference trigonometry", "[geometry]") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> bearing(-1.3, 1.3);
    std::uniform_real_distribution<double> range(1.5, 500.0);
    for (const LensProjection proj :
         {LensProjection::Pinhole, LensProjection::EquidistantFisheye}) {
        const StereoRig rig = reference_rig(proj);
        for (int i = 0; i < 100; ++i) {
            const double theta = bearing(rng);
            const double r = range(rng);
            const double expected = static_cast<double>(
                refgeom::disparity(proj == LensProjection::EquidistantFisheye,
                                   rig.focal_px(), rig.baseline_m(), r, theta));
            CHECK_THAT(disparity(rig, ObjectPose::from_range_bearing(r, theta)),
                       WithinRel(expected, 1e-12));
        }
    }
}

TEST_CASE("effective baseline", "[geometry]") {
    CHECK(stereorange::effective_baseline(1.0, 0.0) == 1.0);
    CHECK_THAT(stereorange::effective_baseline(1.0, stereorange::deg_to_rad(60.0)),
               WithinRel(0.5, 1e-12));
    CHECK_THAT(stereorange::effective_baseline(2.5, stereorange::deg_to_rad(30.0)),
               WithinRel(2.1650635094610966, 1e-12));
    CHECK_THROWS_AS(stereorange::effective_baseline(0.0, 0.1), std::domain_error);

    std::mt19937 rng(8);
    std::uniform_real_distribution<double> bearing(1e-6, 1.57);
    std::uniform_real_distribution<double> baseline(0.01, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double b = baseline(rng);
        const double shortened = stereorange::effective_baseline(b, bearing(rng));
        CHECK(shortened > 0.0);
        CHECK(shortened < b);
    }
}

TEST_CASE("range_from_disparity inverts the forward model", "[geometry]") {
    const StereoRig pinhole = reference_rig(LensProjection::Pinhole);
    const StereoRig fisheye = reference_rig(LensProjection::EquidistantFisheye);

    CHECK_THAT(range_from_disparity(pinhole, 0.0, 122.23), WithinAbs(10.0, 1e-6));
    CHECK_THAT(range_from_disparity(fisheye, 0.0, 122.12829418186127),
               WithinAbs(10.0, 1e-6));
    // A disparity rounded to three decimals still lands within a millimeter.
    CHECK_THAT(range_from_disparity(fisheye, 0.0, 122.128), WithinAbs(10.0, 1e-3));
}

TEST_CASE("range_from_disparity reports the achievable interval", "[geometry]") {
    const StereoRig rig = reference_rig(LensProjection::EquidistantFisheye);
    for (const double bad : {0.0, 1e9}) {
        try {
            range_from_disparity(rig, 0.0, bad);
            FAIL("expected no_solution_error");
        } catch (const stereorange::no_solution_error& e) {
            CHECK(e.achievable_min_px() > 0.0);
            CHECK(e.achievable_max_px() > e.achievable_min_px());
            CHECK(std::string(e.what()).find("achievable") != std::string::npos);
        }
    }
}

TEST_CASE("inversion round-trip across the working envelope", "[geometry][property]") {
    std::mt19937 rng(20240818);
    std::uniform_real_distribution<double> log_ratio(std::log(2.0), std::log(1e4));
    std::uniform_real_distribution<double> bearing(-stereorange::deg_to_rad(80.0),
                                                   stereorange::deg_to_rad(80.0));
    for (const LensProjection proj :
         {LensProjection::Pinhole, LensProjection::EquidistantFisheye}) {
        const StereoRig rig = reference_rig(proj);
        for (int i = 0; i < 150; ++i) {
            const double r = rig.baseline_m() * std::exp(log_ratio(rng));
            const double theta = bearing(rng);
            const double d = disparity(rig, ObjectPose::from_range_bearing(r, theta));
            const double back = range_from_disparity(rig, theta, d);
            CHECK(std::abs(back - r) <= 1e-6 * r);
        }
    }
}
