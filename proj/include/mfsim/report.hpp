#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mfsim/evaluation.hpp"
#include "mfsim/scenario.hpp"

namespace mfsim {

struct Curve {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};

/// s_m,d_m rows.
std::string displacement_csv(std::span<const DisplacementSample> series);
/// t_s,v_ref_mps,v_cmp_mps rows.
std::string velocity_csv(const ErrorMetrics& metrics);
/// Header row of angles (deg), first column of radii (m); empty cells for
/// missing runs.
std::string heatmap_csv(const HeatmapTable& table);

/// Standalone SVG writers (no plotting runtime needed).
std::string scene_svg(const std::vector<Lanelet>& lanelets, std::span<const Curve> trajectories,
                      std::span<const GoalRegion> goals, const std::string& title);
std::string curves_svg(std::span<const Curve> curves, const std::string& title,
                       const std::string& x_label, const std::string& y_label);
std::string heatmap_svg(const HeatmapTable& table, const std::string& title);

/// Emits the per-scenario artifact set: top-down scene plot, d-over-s and
/// v-over-t curves (SVG) plus CSVs of every plotted series. File names are
/// deterministic: <scenario_id>__<suffix>.<ext>.
/// Pure function of the inputs; never re-runs simulations.
std::vector<std::filesystem::path> render_reports(const Scenario& scenario,
                                                  const RunLog& reference,
                                                  const RunLog& comparison,
                                                  const std::vector<ErrorMetrics>& metrics,
                                                  const std::filesystem::path& out_dir);

std::vector<std::filesystem::path> render_heatmap(const HeatmapTable& table,
                                                  const std::string& metric_name,
                                                  const std::filesystem::path& out_dir);

}  // namespace mfsim
