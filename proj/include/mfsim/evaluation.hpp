#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mfsim/cosim.hpp"

namespace mfsim {

struct DisplacementSample {
    double s = 0.0;  // arclength of the projection foot on the reference
    double d = 0.0;  // signed, positive left of the reference travel direction
};

/// Signed cross-track series of a comparison polyline against a reference
/// polyline. Ties at polyline kinks resolve toward smaller s.
std::vector<DisplacementSample> lateral_displacement(std::span<const Vec2> reference,
                                                     std::span<const Vec2> comparison);

/// Cross-fidelity error series for one agent, aligned by step index and
/// truncated to the shorter run.
struct ErrorMetrics {
    int agent_id = 0;
    int aligned_count = 0;
    std::vector<double> t;                        // timestamps, shared by both logs
    std::vector<DisplacementSample> lateral;      // d over s
    std::vector<double> position_error;           // m, by aligned index
    std::vector<double> orientation_error;        // rad, wrapped to (-pi, pi]
    std::vector<double> v_ref;                    // m/s
    std::vector<double> v_cmp;                    // m/s
    std::vector<double> velocity_error;           // v_cmp - v_ref
    double max_abs_d = 0.0;
    double mean_abs_d = 0.0;
    double rmse_pos = 0.0;
    double rmse_v = 0.0;
    double max_abs_orientation = 0.0;
};

/// Compares executed trajectories of two runs of the same scenario
/// (reference first; by convention the low-fidelity run).
/// Throws ComparisonError on mismatched scenario ids or step sizes.
std::vector<ErrorMetrics> compare_runs(const RunLog& reference, const RunLog& comparison);

/// Planned-vs-executed variant within a single log (per agent).
std::vector<ErrorMetrics> compare_planned_vs_executed(const RunLog& log);

enum class HeatmapMetric { max_abs_d, mean_abs_d };

struct HeatmapCell {
    double radius = 0.0;
    double angle_deg = 0.0;
    double value = 0.0;
};

struct HeatmapTable {
    std::vector<double> radii;       // row keys, ascending
    std::vector<double> angles_deg;  // column keys, ascending
    /// cells[row][col]; nullopt marks a missing (failed or absent) run.
    std::vector<std::vector<std::optional<double>>> cells;

    std::optional<double> at(double radius, double angle_deg) const;
    int missing_count() const;
};

/// Builds the radius x angle table from per-scenario aggregates.
/// Throws AggregationError on duplicate (radius, angle) keys.
HeatmapTable aggregate_grid(std::span<const HeatmapCell> values);

/// Five Table-style statistics per backend over completed runs.
/// Throws StatsError when a backend has no completed run.
std::map<Fidelity, TimingStats> runtime_stats(const BatchReport& report);

/// Two-decimal seconds table with Minimum/Maximum/Mean/Median/Std rows.
std::string runtime_stats_table(const std::map<Fidelity, TimingStats>& stats);

}  // namespace mfsim
