#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stereorange/error_budget.hpp"
#include "stereorange/geometry.hpp"
#include "stereorange/oracle.hpp"
#include "stereorange/projection.hpp"

namespace stereorange {

/// Scenario file could not be read, parsed, or validated.
class config_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepVariable { BearingDeg, DepthM, BaselineM };

inline const char* to_string(SweepVariable variable) {
    switch (variable) {
    case SweepVariable::BearingDeg: return "bearing_deg";
    case SweepVariable::DepthM: return "depth_m";
    case SweepVariable::BaselineM: return "baseline_m";
    }
    return "unknown";
}

struct RigConfig {
    LensProjection projection = LensProjection::Pinhole;
    int sensor_width_px = 0;
    double hfov_deg = 0.0;
    double pixel_pitch_um = 0.0;
    double baseline_m = 0.0;
    std::optional<double> focal_px;  // derived from the FOV when absent
};

struct QueryConfig {
    double depth_m = 0.0;
    double disparity_error_px = 0.0;
    double bearing_deg = 0.0;  // held fixed for depth and baseline sweeps
};

struct SweepConfig {
    SweepVariable variable = SweepVariable::BearingDeg;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
};

struct MonteCarloConfig {
    double sigma_px = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

struct ValidationConfig {
    bool enabled = false;
    double fd_step_rel = default_fd_step_rel;
    std::optional<MonteCarloConfig> monte_carlo;
};

struct ScenarioConfig {
    RigConfig rig;
    QueryConfig query;
    SweepConfig sweep;
    ValidationConfig validation;

    StereoRig make_rig() const { return make_rig(rig.projection); }

    /// Rig under `model`, reusing the configured focal length and baseline so
    /// pinhole/fisheye twins of one scenario stay directly comparable.
    StereoRig make_rig(LensProjection model) const {
        CameraIntrinsics cam;
        cam.sensor_width_px = rig.sensor_width_px;
        cam.pixel_pitch_um = rig.pixel_pitch_um;
        cam.hfov_rad = deg_to_rad(rig.hfov_deg);
        cam.focal_px = rig.focal_px
                           ? *rig.focal_px
                           : focal_from_fov(rig.projection, rig.sensor_width_px / 2.0,
                                            cam.hfov_rad / 2.0);
        StereoRig configured(rig.projection, cam, rig.baseline_m);
        return model == rig.projection ? configured : configured.with_projection(model);
    }
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& object, const char* where,
                                std::initializer_list<const char*> allowed) {
    for (const auto& item : object.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
                return item.key() == key;
            }) == allowed.end()) {
            throw config_error(std::string(where) + ": unknown key \"" +
                               item.key() + "\"");
        }
    }
}

inline const json& require(const json& object, const char* where, const char* key) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw config_error(std::string(where) + ": missing required key \"" + key +
                           "\"");
    }
    return *it;
}

inline double number_at(const json& object, const char* where, const char* key) {
    const json& value = require(object, where, key);
    if (!value.is_number()) {
        throw config_error(std::string(where) + "." + key + ": expected a number");
    }
    return value.get<double>();
}

inline RigConfig parse_rig(const json& node) {
    if (!node.is_object()) throw config_error("rig: expected an object");
    reject_unknown_keys(node, "rig",
                        {"projection", "sensor_width_px", "hfov_deg",
                         "pixel_pitch_um", "baseline_m", "focal_px"});
    RigConfig rig;

    const json& proj = require(node, "rig", "projection");
    if (!proj.is_string()) throw config_error("rig.projection: expected a string");
    const std::string name = proj.get<std::string>();
    if (name == "pinhole") {
        rig.projection = LensProjection::Pinhole;
    } else if (name == "fisheye") {
        rig.projection = LensProjection::EquidistantFisheye;
    } else {
        throw config_error("rig.projection: expected \"pinhole\" or \"fisheye\", got \"" +
                           name + "\"");
    }

    const json& width = require(node, "rig", "sensor_width_px");
    if (!width.is_number_integer() || width.get<std::int64_t>() < 2) {
        throw config_error("rig.sensor_width_px: expected an integer >= 2");
    }
    rig.sensor_width_px = width.get<int>();

    rig.hfov_deg = number_at(node, "rig", "hfov_deg");
    if (!(rig.hfov_deg > 0.0 && rig.hfov_deg <= 180.0)) {
        throw config_error("rig.hfov_deg: must lie in (0, 180]");
    }
    if (rig.projection == LensProjection::Pinhole && rig.hfov_deg >= 180.0) {
        throw config_error(
            "rig.hfov_deg: a pinhole camera cannot cover 180 degrees");
    }

    rig.pixel_pitch_um = number_at(node, "rig", "pixel_pitch_um");
    if (!(rig.pixel_pitch_um > 0.0)) {
        throw config_error("rig.pixel_pitch_um: must be positive");
    }

    rig.baseline_m = number_at(node, "rig", "baseline_m");
    if (!(rig.baseline_m > 0.0)) {
        throw config_error("rig.baseline_m: must be positive");
    }

    if (node.contains("focal_px")) {
        const double focal = number_at(node, "rig", "focal_px");
        if (!(focal > 0.0)) throw config_error("rig.focal_px: must be positive");
        const double derived = focal_from_fov(
            rig.projection, rig.sensor_width_px / 2.0, deg_to_rad(rig.hfov_deg) / 2.0);
        if (std::abs(focal - derived) > 0.5) {
            throw config_error("rig.focal_px: " + std::to_string(focal) +
                               " px disagrees with the FOV-derived value " +
                               std::to_string(derived) + " px by more than 0.5 px");
        }
        rig.focal_px = focal;
    }
    return rig;
}

inline QueryConfig parse_query(const json& node) {
    if (!node.is_object()) throw config_error("query: expected an object");
    reject_unknown_keys(node, "query",
                        {"depth_m", "disparity_error_px", "bearing_deg"});
    QueryConfig query;
    query.depth_m = number_at(node, "query", "depth_m");
    if (!(query.depth_m > 0.0)) throw config_error("query.depth_m: must be positive");
    query.disparity_error_px = number_at(node, "query", "disparity_error_px");
    if (!(query.disparity_error_px > 0.0)) {
        throw config_error("query.disparity_error_px: must be positive");
    }
    if (node.contains("bearing_deg")) {
        query.bearing_deg = number_at(node, "query", "bearing_deg");
        if (!(std::abs(query.bearing_deg) < 90.0)) {
            throw config_error("query.bearing_deg: must lie in (-90, 90)");
        }
    }
    return query;
}

inline SweepConfig parse_sweep(const json& node) {
    if (!node.is_object()) throw config_error("sweep: expected an object");
    reject_unknown_keys(node, "sweep", {"variable", "start", "stop", "steps"});
    SweepConfig sweep;

    const json& variable = require(node, "sweep", "variable");
    if (!variable.is_string()) throw config_error("sweep.variable: expected a string");
    const std::string name = variable.get<std::string>();
    if (name == "bearing_deg") {
        sweep.variable = SweepVariable::BearingDeg;
    } else if (name == "depth_m") {
        sweep.variable = SweepVariable::DepthM;
    } else if (name == "baseline_m") {
        sweep.variable = SweepVariable::BaselineM;
    } else {
        throw config_error(
            "sweep.variable: expected \"bearing_deg\", \"depth_m\" or \"baseline_m\", got \"" +
            name + "\"");
    }

    sweep.start = number_at(node, "sweep", "start");
    sweep.stop = number_at(node, "sweep", "stop");
    if (!(sweep.start < sweep.stop)) {
        throw config_error("sweep.start: must be strictly below sweep.stop");
    }
    if (sweep.variable != SweepVariable::BearingDeg && !(sweep.start > 0.0)) {
        throw config_error(std::string("sweep.start: ") + to_string(sweep.variable) +
                           " sweeps must start above zero");
    }

    const json& steps = require(node, "sweep", "steps");
    if (!steps.is_number_integer() || steps.get<std::int64_t>() < 2) {
        throw config_error("sweep.steps: expected an integer >= 2");
    }
    sweep.steps = steps.get<int>();
    return sweep;
}

inline ValidationConfig parse_validation(const json& node) {
    if (!node.is_object()) throw config_error("validation: expected an object");
    reject_unknown_keys(node, "validation", {"enabled", "fd_step_rel", "monte_carlo"});
    ValidationConfig validation;
    if (node.contains("enabled")) {
        const json& enabled = node.at("enabled");
        if (!enabled.is_boolean()) {
            throw config_error("validation.enabled: expected a boolean");
        }
        validation.enabled = enabled.get<bool>();
    }
    if (node.contains("fd_step_rel")) {
        validation.fd_step_rel = number_at(node, "validation", "fd_step_rel");
        if (!(validation.fd_step_rel > 0.0 && validation.fd_step_rel < 0.5)) {
            throw config_error("validation.fd_step_rel: must lie in (0, 0.5)");
        }
    }
    if (node.contains("monte_carlo")) {
        const json& mc_node = node.at("monte_carlo");
        if (!mc_node.is_object()) {
            throw config_error("validation.monte_carlo: expected an object");
        }
        reject_unknown_keys(mc_node, "validation.monte_carlo",
                            {"sigma_px", "samples", "seed"});
        MonteCarloConfig mc;
        mc.sigma_px = number_at(mc_node, "validation.monte_carlo", "sigma_px");
        if (!(mc.sigma_px > 0.0)) {
            throw config_error("validation.monte_carlo.sigma_px: must be positive");
        }
        const json& samples = require(mc_node, "validation.monte_carlo", "samples");
        if (!samples.is_number_integer() || samples.get<std::int64_t>() < 100) {
            throw config_error(
                "validation.monte_carlo.samples: expected an integer >= 100");
        }
        mc.samples = samples.get<std::int64_t>();
        const json& seed = require(mc_node, "validation.monte_carlo", "seed");
        if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0) {
            throw config_error(
                "validation.monte_carlo.seed: expected a non-negative integer");
        }
        mc.seed = seed.get<std::uint64_t>();
        validation.monte_carlo = mc;
    }
    return validation;
}

}  // namespace detail

/// Parses and validates a scenario from JSON text. `origin` names the source
/// in error messages (typically the file path).
inline ScenarioConfig parse_config(const std::string& text,
                                   const std::string& origin = "<config>") {
    detail::json root;
    try {
        root = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw config_error(origin + ": " + e.what());
    }
    try {
        if (!root.is_object()) throw config_error("top level: expected an object");
        detail::reject_unknown_keys(root, "top level",
                                    {"rig", "query", "sweep", "validation"});
        ScenarioConfig config;
        config.rig = detail::parse_rig(detail::require(root, "top level", "rig"));
        config.query =
            detail::parse_query(detail::require(root, "top level", "query"));
        config.sweep =
            detail::parse_sweep(detail::require(root, "top level", "sweep"));
        if (root.contains("validation")) {
            config.validation = detail::parse_validation(root.at("validation"));
        }
        return config;
    } catch (const config_error& e) {
        throw config_error(origin + ": " + e.what());
    }
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error(path.string() + ": cannot open config file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) {
        throw config_error(path.string() + ": read failure");
    }
    return parse_config(text.str(), path.string());
}

struct SweepSummary {
    double max_analytic_range_error_m = 0.0;
    double bearing_at_max_rad = 0.0;
    std::optional<double> max_oracle_deviation;
};

struct SweepResult {
    ScenarioConfig config;  // echo of the inputs that produced the rows
    LensProjection model = LensProjection::Pinhole;
    std::vector<double> grid;  // sweep variable values, ascending
    std::vector<ErrorBudgetRow> rows;
    SweepSummary summary;
    std::optional<MonteCarloSummary> monte_carlo;
};

/// Evaluates the configured sweep under `model`. Grid points the rig cannot
/// evaluate become marker rows; the run aborts only when every row fails.
/// With validation enabled each row gains oracle columns, and the optional
/// Monte Carlo check runs at the middle grid point.
inline SweepResult run_sweep(const ScenarioConfig& config, LensProjection model) {
    SweepResult result;
    result.config = config;
    result.model = model;

    const StereoRig base_rig = config.make_rig(model);
    const double fd_step_rel =
        config.validation.enabled ? config.validation.fd_step_rel : 0.0;
    const int steps = config.sweep.steps;
    result.grid.reserve(steps);
    result.rows.reserve(steps);

    std::size_t failed = 0;
    std::string last_error;
    for (int i = 0; i < steps; ++i) {
        const double value = config.sweep.start +
                             (config.sweep.stop - config.sweep.start) * i /
                                 static_cast<double>(steps - 1);
        result.grid.push_back(value);

        double bearing_rad = deg_to_rad(config.query.bearing_deg);
        double depth_m = config.query.depth_m;
        double baseline_m = base_rig.baseline_m();
        switch (config.sweep.variable) {
        case SweepVariable::BearingDeg: bearing_rad = deg_to_rad(value); break;
        case SweepVariable::DepthM: depth_m = value; break;
        case SweepVariable::BaselineM: baseline_m = value; break;
        }

        ErrorBudgetRow row;
        row.model = model;
        row.bearing_rad = bearing_rad;
        try {
            const StereoRig rig = config.sweep.variable == SweepVariable::BaselineM
                                      ? base_rig.with_baseline(baseline_m)
                                      : base_rig;
            const ObjectPose pose = ObjectPose::from_depth_bearing(depth_m, bearing_rad);
            row = evaluate_budget_row(rig, pose, config.query.disparity_error_px,
                                      fd_step_rel);
        } catch (const std::domain_error& e) {
            row.depth_m = depth_m;
            row.error = e.what();
        }
        if (row.failed()) {
            ++failed;
            last_error = row.error.value_or("unknown failure");
        }
        result.rows.push_back(std::move(row));
    }

    if (failed == result.rows.size()) {
        throw std::domain_error("run_sweep: every grid point failed; last error: " +
                                last_error);
    }

    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const ErrorBudgetRow& row = result.rows[i];
        if (!row.failed() &&
            row.analytic_range_error_m > result.summary.max_analytic_range_error_m) {
            result.summary.max_analytic_range_error_m = row.analytic_range_error_m;
            result.summary.bearing_at_max_rad = row.bearing_rad;
        }
        if (row.oracle_relative_deviation &&
            *row.oracle_relative_deviation >
                result.summary.max_oracle_deviation.value_or(-1.0)) {
            result.summary.max_oracle_deviation = *row.oracle_relative_deviation;
        }
    }

    if (config.validation.enabled && config.validation.monte_carlo) {
        const ErrorBudgetRow& mid = result.rows[result.rows.size() / 2];
        if (!mid.failed()) {
            const MonteCarloConfig& mc = *config.validation.monte_carlo;
            const StereoRig rig =
                config.sweep.variable == SweepVariable::BaselineM
                    ? base_rig.with_baseline(result.grid[result.rows.size() / 2])
                    : base_rig;
            result.monte_carlo = monte_carlo_range_error(
                rig, ObjectPose::from_range_bearing(mid.range_m, mid.bearing_rad),
                mc.sigma_px, mc.samples, mc.seed);
        }
    }
    return result;
}

inline SweepResult run_sweep(const ScenarioConfig& config) {
    return run_sweep(config, config.rig.projection);
}

}  // namespace stereorange
