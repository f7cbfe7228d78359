#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stereorange/stereorange.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_domain_error = 3;
constexpr int exit_io_error = 4;

/// Opens `path` for writing or throws an I/O failure the main handler maps to
/// exit code 4.
std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot open output file: " + path);
    }
    return out;
}

std::vector<stereorange::LensProjection> models_to_run(
    const stereorange::ScenarioConfig& config, const std::string& model_arg) {
    using stereorange::LensProjection;
    if (model_arg == "pinhole") return {LensProjection::Pinhole};
    if (model_arg == "fisheye") return {LensProjection::EquidistantFisheye};
    if (model_arg == "both") {
        return {LensProjection::Pinhole, LensProjection::EquidistantFisheye};
    }
    return {config.rig.projection};
}

int run_sweep_command(const std::string& config_path, const std::string& csv_path,
                      const std::string& svg_path, const std::string& model_arg) {
    const stereorange::ScenarioConfig config = stereorange::load_config(config_path);

    std::vector<stereorange::SweepResult> results;
    for (const stereorange::LensProjection model : models_to_run(config, model_arg)) {
        results.push_back(stereorange::run_sweep(config, model));
    }

    if (!csv_path.empty()) {
        std::ofstream out = open_output(csv_path);
        stereorange::emit_csv(results, out);
        out.flush();
        if (!out) throw std::ios_base::failure("write failed: " + csv_path);
    } else {
        stereorange::emit_csv(results, std::cout);
    }

    if (!svg_path.empty()) {
        std::ofstream out = open_output(svg_path);
        stereorange::emit_plot(results, out);
        out.flush();
        if (!out) throw std::ios_base::failure("write failed: " + svg_path);
    }
    return exit_ok;
}

void print_result_report(const stereorange::SweepResult& result) {
    std::size_t failed = 0;
    for (const auto& row : result.rows) {
        if (row.failed()) ++failed;
    }
    std::printf("model: %s\n", stereorange::to_string(result.model));
    std::printf("  rows: %zu (%zu failed)\n", result.rows.size(), failed);
    std::printf("  max analytic range error: %.6g m at bearing %.6g deg\n",
                result.summary.max_analytic_range_error_m,
                stereorange::rad_to_deg(result.summary.bearing_at_max_rad));
    if (result.summary.max_oracle_deviation) {
        std::printf("  max |analytic - oracle| / oracle: %.6g\n",
                    *result.summary.max_oracle_deviation);
    }
    if (result.monte_carlo) {
        const auto& mc = *result.monte_carlo;
        const auto& mid = result.rows[result.rows.size() / 2];
        std::printf("  monte carlo at %s = %.6g:\n",
                    stereorange::to_string(result.config.sweep.variable),
                    result.grid[result.rows.size() / 2]);
        std::printf("    mean range: %.6g m   std: %.6g m   (%lld samples, %lld rejected)\n",
                    mc.mean_range_m, mc.std_range_m,
                    static_cast<long long>(mc.sample_count),
                    static_cast<long long>(mc.rejected_count));
        if (mid.oracle_range_error_m) {
            std::printf("    oracle range error: %.6g m   std/oracle: %.4f\n",
                        *mid.oracle_range_error_m,
                        mc.std_range_m / *mid.oracle_range_error_m);
        }
    }
}

int run_validate_command(const std::string& config_path, bool with_monte_carlo) {
    stereorange::ScenarioConfig config = stereorange::load_config(config_path);
    config.validation.enabled = true;
    if (with_monte_carlo && !config.validation.monte_carlo) {
        stereorange::MonteCarloConfig mc;
        mc.sigma_px = config.query.disparity_error_px;
        mc.samples = 100000;
        mc.seed = 42;
        config.validation.monte_carlo = mc;
    }
    if (!with_monte_carlo) {
        config.validation.monte_carlo.reset();
    }

    const stereorange::SweepResult result = stereorange::run_sweep(config);
    std::printf("config: %s\n", config_path.c_str());
    print_result_report(result);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytic depth/range error budgets for pinhole and equidistant "
                 "fisheye stereo rigs"};
    app.set_version_flag("--version", std::string("stereorange ") + stereorange::version);
    app.require_subcommand(1);

    std::string config_path;
    std::string csv_path;
    std::string svg_path;
    std::string model_arg = "config";
    CLI::App* sweep =
        app.add_subcommand("sweep", "Evaluate the configured sweep and emit CSV/SVG");
    sweep->add_option("--config", config_path, "Scenario config file (JSON)")
        ->required();
    sweep->add_option("--csv", csv_path, "Write the CSV table here (default: stdout)");
    sweep->add_option("--svg", svg_path, "Write an SVG chart here");
    sweep->add_option("--model", model_arg,
                      "Projection model override: pinhole, fisheye or both "
                      "(default: the config's projection)")
        ->check(CLI::IsMember({"pinhole", "fisheye", "both"}));

    std::string validate_config_path;
    bool with_monte_carlo = false;
    CLI::App* validate = app.add_subcommand(
        "validate", "Re-run the sweep against the finite-difference oracle and "
                    "report the worst deviation");
    validate->add_option("--config", validate_config_path, "Scenario config file (JSON)")
        ->required();
    validate->add_flag("--mc", with_monte_carlo,
                       "Also run the Monte Carlo consistency check at the sweep midpoint");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (sweep->parsed()) {
            return run_sweep_command(config_path, csv_path, svg_path, model_arg);
        }
        return run_validate_command(validate_config_path, with_monte_carlo);
    } catch (const stereorange::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain_error;
    }
}
