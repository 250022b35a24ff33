#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "mfsim/errors.hpp"
#include "mfsim/evaluation.hpp"
#include "mfsim/report.hpp"
#include "mfsim/serialization.hpp"

using namespace mfsim;

namespace {

std::vector<Vec2> straight_polyline(double length, double step, double y = 0.0) {
    std::vector<Vec2> out;
    for (double x = 0.0; x <= length + 1e-9; x += step) out.push_back({x, y});
    return out;
}

Scenario small_scenario(double radius, double angle_deg) {
    GridSpec grid;
    grid.radii = {radius};
    grid.angles_deg = {angle_deg};
    return generate_grid(grid, default_template())[0];
}

// Splits CSV text into rows of doubles (skipping the header).
std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell.empty() ? NAN : std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("lateral displacement: identical polylines give d == 0") {
    const auto ref = straight_polyline(50.0, 0.5);
    const auto series = lateral_displacement(ref, ref);
    for (const DisplacementSample& s : series) CHECK(s.d == 0.0);
}

TEST_CASE("lateral displacement: +0.5 m shifted comparison, s advancing") {
    const auto ref = straight_polyline(50.0, 0.5);
    const auto cmp = straight_polyline(50.0, 0.5, 0.5);
    const auto series = lateral_displacement(ref, cmp);
    REQUIRE(series.size() == cmp.size());
    for (size_t i = 1; i < series.size(); ++i) {
        CHECK(series[i].d == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(series[i].s > series[i - 1].s);
    }
}

TEST_CASE("lateral displacement on concentric circles: |d| = 0.3 within 1e-3") {
    // Dense reference polyline on a 10 m radius arc; comparison 0.3 m inside.
    std::vector<Vec2> ref, cmp;
    for (double phi = 0.0; phi <= kPi / 2.0; phi += 1e-4) {
        ref.push_back({10.0 * std::sin(phi), 10.0 * (1.0 - std::cos(phi))});
    }
    for (double phi = 0.05; phi <= kPi / 2.0 - 0.05; phi += 0.01) {
        cmp.push_back({9.7 * std::sin(phi), 10.0 - 9.7 * std::cos(phi)});
    }
    const auto series = lateral_displacement(ref, cmp);
    for (const DisplacementSample& s : series) {
        CHECK(std::abs(std::abs(s.d) - 0.3) < 1e-3);
        CHECK(s.d > 0.0);  // inside a left turn = left of travel direction
    }
}

TEST_CASE("reflection flips the displacement sign exactly") {
    const auto ref = straight_polyline(40.0, 0.5);
    std::vector<Vec2> cmp, mirrored;
    for (double x = 2.0; x <= 38.0; x += 0.7) {
        const double y = 0.8 * std::sin(x / 5.0);
        cmp.push_back({x, y});
        mirrored.push_back({x, -y});
    }
    const auto a = lateral_displacement(ref, cmp);
    const auto b = lateral_displacement(ref, mirrored);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].d == -b[i].d);
        CHECK(a[i].s == b[i].s);
    }
}

TEST_CASE("compare_runs: log against itself gives all-zero aggregates") {
    const Scenario scenario = small_scenario(20.0, 60.0);
    RunConfig config;
    config.backend = Fidelity::low;
    const RunLog log = run_scenario(scenario, config);
    const auto metrics = compare_runs(log, log);
    REQUIRE(metrics.size() == 1);
    CHECK(metrics[0].max_abs_d == 0.0);
    CHECK(metrics[0].mean_abs_d == 0.0);
    CHECK(metrics[0].rmse_pos == 0.0);
    CHECK(metrics[0].rmse_v == 0.0);
    CHECK(metrics[0].max_abs_orientation == 0.0);
}

TEST_CASE("orientation error wraps the short way around") {
    // reference 3.10 rad vs comparison -3.10 rad -> +0.0832..., not -6.2
    const double wrapped = angle_diff(-3.10, 3.10);
    CHECK(wrapped == doctest::Approx(2.0 * kPi - 6.20).epsilon(1e-12));
    CHECK(wrapped > 0.0);
}

TEST_CASE("compare_runs rejects mismatched scenario ids") {
    RunConfig config;
    const RunLog a = run_scenario(small_scenario(20.0, 60.0), config);
    const RunLog b = run_scenario(small_scenario(20.0, 90.0), config);
    CHECK_THROWS_AS(compare_runs(a, b), ComparisonError);
}

TEST_CASE("|d| is bounded by the position error at every aligned index") {
    const Scenario scenario = small_scenario(15.0, 90.0);
    RunConfig low, high;
    low.backend = Fidelity::low;
    high.backend = Fidelity::high;
    const RunLog ref = run_scenario(scenario, low);
    const RunLog cmp = run_scenario(scenario, high);
    const auto metrics = compare_runs(ref, cmp);
    REQUIRE(metrics.size() == 1);
    const ErrorMetrics& m = metrics[0];
    REQUIRE(m.lateral.size() == m.position_error.size());
    for (size_t i = 0; i < m.lateral.size(); ++i)
        CHECK(std::abs(m.lateral[i].d) <= m.position_error[i] + 1e-12);
    CHECK(m.max_abs_d > 0.0);
}

TEST_CASE("aggregate_grid: single cell, duplicates, missing cells") {
    const HeatmapCell one{10.0, 90.0, 0.4};
    const HeatmapTable single = aggregate_grid(std::vector<HeatmapCell>{one});
    CHECK(single.radii.size() == 1);
    CHECK(single.angles_deg.size() == 1);
    CHECK(single.at(10.0, 90.0) == 0.4);

    const std::vector<HeatmapCell> dup = {{10.0, 90.0, 0.4}, {10.0, 90.0, 0.5}};
    CHECK_THROWS_AS(aggregate_grid(dup), AggregationError);

    const std::vector<HeatmapCell> sparse = {
        {10.0, 60.0, 0.4}, {10.0, 90.0, 0.6}, {20.0, 90.0, 0.3}};
    const HeatmapTable table = aggregate_grid(sparse);
    CHECK(table.missing_count() == 1);
    CHECK_FALSE(table.at(20.0, 60.0).has_value());
}

TEST_CASE("heatmap cell values are permutation invariant") {
    std::vector<HeatmapCell> cells = {
        {10.0, 60.0, 0.4}, {10.0, 90.0, 0.6}, {20.0, 60.0, 0.2}, {20.0, 90.0, 0.3}};
    const HeatmapTable a = aggregate_grid(cells);
    std::reverse(cells.begin(), cells.end());
    const HeatmapTable b = aggregate_grid(cells);
    CHECK(a.radii == b.radii);
    CHECK(a.angles_deg == b.angles_deg);
    CHECK(a.cells == b.cells);
}

TEST_CASE("runtime stats table formats two decimals and both backends") {
    std::map<Fidelity, TimingStats> stats;
    stats[Fidelity::low] = timing_stats({1.0, 2.0, 3.0});
    stats[Fidelity::high] = timing_stats({10.0, 20.0, 30.0});
    const std::string table = runtime_stats_table(stats);
    CHECK(table.find("Minimum,1.00,10.00") != std::string::npos);
    CHECK(table.find("Std. Deviation,1.00,10.00") != std::string::npos);
    CHECK(table.find("Median,2.00,20.00") != std::string::npos);
}

TEST_CASE("runtime_stats needs at least one completed run") {
    BatchReport report;
    BatchRunRef failed;
    failed.completed = false;
    report.runs.push_back(failed);
    CHECK_THROWS_AS(runtime_stats(report), StatsError);
}

TEST_CASE("aggregates recomputed from the emitted CSVs match in-memory values") {
    const Scenario scenario = small_scenario(15.0, 90.0);
    RunConfig low, high;
    low.backend = Fidelity::low;
    high.backend = Fidelity::high;
    const RunLog ref = run_scenario(scenario, low);
    const RunLog cmp = run_scenario(scenario, high);
    const auto metrics = compare_runs(ref, cmp);
    REQUIRE(metrics.size() == 1);
    const ErrorMetrics& m = metrics[0];

    const auto d_rows = parse_csv(displacement_csv(m.lateral));
    double max_abs = 0.0, sum_abs = 0.0;
    for (const auto& row : d_rows) {
        max_abs = std::max(max_abs, std::abs(row[1]));
        sum_abs += std::abs(row[1]);
    }
    CHECK(std::abs(max_abs - m.max_abs_d) < 1e-9);
    CHECK(std::abs(sum_abs / d_rows.size() - m.mean_abs_d) < 1e-9);

    const auto v_rows = parse_csv(velocity_csv(m));
    double sum_v2 = 0.0;
    for (const auto& row : v_rows) {
        const double dv = row[2] - row[1];
        sum_v2 += dv * dv;
    }
    CHECK(std::abs(std::sqrt(sum_v2 / v_rows.size()) - m.rmse_v) < 1e-9);
}

TEST_CASE("render_reports writes deterministic artifact sets") {
    const Scenario scenario = small_scenario(20.0, 90.0);
    RunConfig low, high;
    low.backend = Fidelity::low;
    high.backend = Fidelity::high;
    const RunLog ref = run_scenario(scenario, low);
    const RunLog cmp = run_scenario(scenario, high);
    const auto metrics = compare_runs(ref, cmp);

    const auto dir = std::filesystem::temp_directory_path() / "mfsim_report_test";
    std::filesystem::remove_all(dir);
    const auto files = render_reports(scenario, ref, cmp, metrics, dir);
    CHECK(files.size() == 5);  // scene + 2 csv + 2 svg
    for (const auto& f : files) CHECK(std::filesystem::exists(f));

    // Re-render from the same inputs: byte-identical artifacts.
    std::vector<std::string> before;
    for (const auto& f : files) before.push_back(read_text_file(f));
    const auto files2 = render_reports(scenario, ref, cmp, metrics, dir);
    for (size_t i = 0; i < files2.size(); ++i)
        CHECK(read_text_file(files2[i]) == before[i]);

    const HeatmapTable table =
        aggregate_grid(std::vector<HeatmapCell>{{10, 60, 0.1}, {10, 90, 0.2}});
    const auto heat_files = render_heatmap(table, "max", dir);
    CHECK(heat_files.size() == 2);
    const std::string csv = read_text_file(heat_files[0]);
    CHECK(csv.rfind("radius_m,60,90\n", 0) == 0);
}
