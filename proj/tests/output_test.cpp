#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stereorange/csv.hpp"
#include "stereorange/svg.hpp"

using nlohmann::json;
using stereorange::LensProjection;
using stereorange::ScenarioConfig;
using stereorange::SweepResult;

namespace {

json small_config(bool validation) {
    json config{
        {"rig",
         {{"projection", "fisheye"},
          {"sensor_width_px", 3840},
          {"hfov_deg", 180.0},
          {"pixel_pitch_um", 2.1},
          {"baseline_m", 1.0}}},
        {"query", {{"depth_m", 10.0}, {"disparity_error_px", 0.2}}},
        {"sweep",
         {{"variable", "bearing_deg"}, {"start", 0.0}, {"stop", 60.0}, {"steps", 61}}}};
    if (validation) config["validation"] = {{"enabled", true}};
    return config;
}

SweepResult small_sweep(bool validation) {
    return stereorange::run_sweep(stereorange::parse_config(small_config(validation).dump()));
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(begin));
            break;
        }
        cells.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
    return cells;
}

double parse_double(const std::string& cell) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    REQUIRE(ec == std::errc());
    REQUIRE(ptr == cell.data() + cell.size());
    return value;
}

std::string emit_csv_string(const SweepResult& result) {
    std::ostringstream out;
    stereorange::emit_csv(result, out);
    return out.str();
}

std::string emit_svg_string(std::vector<SweepResult> results) {
    std::ostringstream out;
    stereorange::emit_plot(std::span<const SweepResult>(results.data(), results.size()),
                           out);
    return out.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("csv header matches the pinned golden file", "[csv]") {
    std::ifstream golden(std::string(STEREORANGE_GOLDEN_DIR) + "/csv_header.txt");
    REQUIRE(golden.good());
    std::string expected;
    std::getline(golden, expected);
    CHECK(std::string(stereorange::csv_header) == expected);
    const std::string csv = emit_csv_string(small_sweep(false));
    CHECK(split_lines(csv)[0] == expected);
}

TEST_CASE("csv has one line per grid point plus the header", "[csv]") {
    const std::string csv = emit_csv_string(small_sweep(false));
    CHECK(split_lines(csv).size() == 62);
    CHECK(csv.find('\r') == std::string::npos);  // LF only
}

TEST_CASE("csv keeps the oracle columns empty without validation", "[csv]") {
    const auto lines = split_lines(emit_csv_string(small_sweep(false)));
    const auto cells = split_cells(lines[1]);
    REQUIRE(cells.size() == 9);
    CHECK(cells[4] == "fisheye");
    CHECK(cells[7].empty());
    CHECK(cells[8].empty());
}

TEST_CASE("csv round-trips every number bit-exactly", "[csv]") {
    const SweepResult result = small_sweep(true);
    const auto lines = split_lines(emit_csv_string(result));
    REQUIRE(lines.size() == result.rows.size() + 1);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto cells = split_cells(lines[i + 1]);
        REQUIRE(cells.size() == 9);
        CHECK(parse_double(cells[0]) == result.grid[i]);
        CHECK(parse_double(cells[1]) == result.grid[i]);  // bearing sweep
        CHECK(parse_double(cells[2]) == result.rows[i].depth_m);
        CHECK(parse_double(cells[3]) == result.rows[i].range_m);
        CHECK(parse_double(cells[5]) == result.rows[i].analytic_depth_error_m);
        CHECK(parse_double(cells[6]) == result.rows[i].analytic_range_error_m);
        REQUIRE(result.rows[i].oracle_range_error_m.has_value());
        CHECK(parse_double(cells[7]) == *result.rows[i].oracle_range_error_m);
        CHECK(parse_double(cells[8]) == *result.rows[i].oracle_relative_deviation);
    }
}

TEST_CASE("csv concatenates multiple results in order", "[csv]") {
    const ScenarioConfig config = stereorange::parse_config(small_config(false).dump());
    const std::vector<SweepResult> results{
        stereorange::run_sweep(config, LensProjection::Pinhole),
        stereorange::run_sweep(config, LensProjection::EquidistantFisheye)};
    std::ostringstream out;
    stereorange::emit_csv(std::span<const SweepResult>(results.data(), results.size()),
                          out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 123);
    CHECK(split_cells(lines[1])[4] == "pinhole");
    CHECK(split_cells(lines[62])[4] == "fisheye");
}

TEST_CASE("csv rejects empty input", "[csv]") {
    std::ostringstream out;
    CHECK_THROWS_AS(stereorange::emit_csv(std::span<const SweepResult>(), out),
                    std::invalid_argument);
}

TEST_CASE("svg output is deterministic", "[svg]") {
    const SweepResult result = small_sweep(false);
    CHECK(emit_svg_string({result}) == emit_svg_string({result}));
}

TEST_CASE("svg draws one polyline per series", "[svg]") {
    const SweepResult plain = small_sweep(false);
    const std::string one_curve = emit_svg_string({plain});
    CHECK(count_occurrences(one_curve, "<polyline") == 1);

    const SweepResult validated = small_sweep(true);
    const std::string with_oracle = emit_svg_string({validated});
    CHECK(count_occurrences(with_oracle, "<polyline") == 2);

    const ScenarioConfig config = stereorange::parse_config(small_config(false).dump());
    const std::string two_models = emit_svg_string(
        {stereorange::run_sweep(config, LensProjection::Pinhole),
         stereorange::run_sweep(config, LensProjection::EquidistantFisheye)});
    CHECK(count_occurrences(two_models, "<polyline") == 2);
    CHECK(two_models.find("pinhole analytic") != std::string::npos);
    CHECK(two_models.find("fisheye analytic") != std::string::npos);
}

TEST_CASE("svg carries labeled axes and a standalone 1.1 document", "[svg]") {
    const std::string svg = emit_svg_string({small_sweep(false)});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("viewBox=\"0 0 800 500\"") != std::string::npos);
    CHECK(svg.find("bearing [deg]") != std::string::npos);
    CHECK(svg.find("range error [cm]") != std::string::npos);
}

TEST_CASE("svg rejects mismatched grids", "[svg]") {
    const SweepResult a = small_sweep(false);
    json other = small_config(false);
    other["sweep"]["steps"] = 31;
    const SweepResult b = stereorange::run_sweep(stereorange::parse_config(other.dump()));
    std::vector<SweepResult> mixed{a, b};
    std::ostringstream out;
    CHECK_THROWS_AS(
        stereorange::emit_plot(std::span<const SweepResult>(mixed.data(), mixed.size()), out),
        std::invalid_argument);
}
