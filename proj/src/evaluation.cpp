#include "mfsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "mfsim/errors.hpp"

namespace mfsim {

std::vector<DisplacementSample> lateral_displacement(std::span<const Vec2> reference,
                                                     std::span<const Vec2> comparison) {
    if (reference.size() < 2)
        throw ValidationError("lateral_displacement: reference polyline needs >= 2 points");

    // Cumulative arclength of the reference polyline.
    std::vector<double> arclength(reference.size(), 0.0);
    for (size_t i = 1; i < reference.size(); ++i)
        arclength[i] = arclength[i - 1] + (reference[i] - reference[i - 1]).norm();

    std::vector<DisplacementSample> out;
    out.reserve(comparison.size());
    for (const Vec2& p : comparison) {
        double best_d2 = std::numeric_limits<double>::infinity();
        double best_s = 0.0;
        double best_sign = 0.0;
        for (size_t i = 0; i + 1 < reference.size(); ++i) {
            const Vec2 a = reference[i];
            const Vec2 ab = reference[i + 1] - a;
            const double len2 = ab.squared_norm();
            if (len2 == 0.0) continue;
            const double t = clamp((p - a).dot(ab) / len2, 0.0, 1.0);
            const Vec2 foot = a + t * ab;
            const double d2 = (p - foot).squared_norm();
            // Kink ambiguities resolve toward smaller s: an improvement must
            // beat the incumbent by more than floating-point noise.
            if (d2 < best_d2 - 1e-12) {
                best_d2 = d2;
                best_s = arclength[i] + t * (arclength[i + 1] - arclength[i]);
                best_sign = ab.cross(p - foot) >= 0.0 ? 1.0 : -1.0;
            }
        }
        out.push_back({best_s, best_sign * std::sqrt(best_d2)});
    }
    return out;
}

namespace {

struct AlignedAgentSeries {
    int agent_id = 0;
    std::vector<double> t;
    std::vector<VehicleState> reference;
    std::vector<VehicleState> comparison;
};

std::vector<AlignedAgentSeries> align(const RunLog& ref_log, const RunLog& cmp_log) {
    std::map<int, std::map<int, VehicleState>> ref_states, cmp_states;
    std::map<int, double> step_time;
    for (const StepRecord& record : ref_log.steps) {
        step_time[record.step_index] = record.t;
        for (const AgentStepRecord& a : record.agents)
            ref_states[a.agent_id][record.step_index] = a.executed;
    }
    for (const StepRecord& record : cmp_log.steps) {
        step_time[record.step_index] = record.t;
        for (const AgentStepRecord& a : record.agents)
            cmp_states[a.agent_id][record.step_index] = a.executed;
    }
    std::vector<AlignedAgentSeries> out;
    for (const auto& [agent_id, ref_series] : ref_states) {
        auto it = cmp_states.find(agent_id);
        if (it == cmp_states.end()) continue;
        AlignedAgentSeries series;
        series.agent_id = agent_id;
        for (const auto& [step, state] : ref_series) {
            auto jt = it->second.find(step);
            if (jt == it->second.end()) continue;
            series.t.push_back(step_time[step]);
            series.reference.push_back(state);
            series.comparison.push_back(jt->second);
        }
        out.push_back(std::move(series));
    }
    return out;
}

ErrorMetrics metrics_from_series(const AlignedAgentSeries& series) {
    ErrorMetrics m;
    m.agent_id = series.agent_id;
    m.aligned_count = static_cast<int>(series.t.size());
    m.t = series.t;

    std::vector<Vec2> ref_polyline;
    ref_polyline.reserve(series.reference.size());
    for (const VehicleState& s : series.reference) ref_polyline.push_back({s.x, s.y});
    std::vector<Vec2> cmp_points;
    cmp_points.reserve(series.comparison.size());
    for (const VehicleState& s : series.comparison) cmp_points.push_back({s.x, s.y});

    if (ref_polyline.size() >= 2) m.lateral = lateral_displacement(ref_polyline, cmp_points);

    double sum_abs_d = 0.0, sum_pos2 = 0.0, sum_v2 = 0.0;
    for (size_t i = 0; i < series.t.size(); ++i) {
        const VehicleState& r = series.reference[i];
        const VehicleState& c = series.comparison[i];
        const double pos_err = (Vec2{c.x, c.y} - Vec2{r.x, r.y}).norm();
        const double ori_err = angle_diff(c.heading, r.heading);
        const double v_err = c.v - r.v;
        m.position_error.push_back(pos_err);
        m.orientation_error.push_back(ori_err);
        m.v_ref.push_back(r.v);
        m.v_cmp.push_back(c.v);
        m.velocity_error.push_back(v_err);
        sum_pos2 += pos_err * pos_err;
        sum_v2 += v_err * v_err;
        m.max_abs_orientation = std::max(m.max_abs_orientation, std::abs(ori_err));
    }
    for (const DisplacementSample& d : m.lateral) {
        m.max_abs_d = std::max(m.max_abs_d, std::abs(d.d));
        sum_abs_d += std::abs(d.d);
    }
    const size_t n = series.t.size();
    if (n > 0) {
        m.rmse_pos = std::sqrt(sum_pos2 / n);
        m.rmse_v = std::sqrt(sum_v2 / n);
    }
    if (!m.lateral.empty()) m.mean_abs_d = sum_abs_d / m.lateral.size();
    return m;
}

}  // namespace

std::vector<ErrorMetrics> compare_runs(const RunLog& reference, const RunLog& comparison) {
    if (reference.scenario_id != comparison.scenario_id)
        throw ComparisonError("compare_runs: scenario ids differ ('" + reference.scenario_id +
                              "' vs '" + comparison.scenario_id + "')");
    const double dt_ref = reference.config.dt_plan;
    const double dt_cmp = comparison.config.dt_plan;
    if (dt_ref != dt_cmp)
        throw ComparisonError("compare_runs: dt_plan differs between the runs");

    std::vector<ErrorMetrics> out;
    for (const AlignedAgentSeries& series : align(reference, comparison))
        out.push_back(metrics_from_series(series));
    return out;
}

std::vector<ErrorMetrics> compare_planned_vs_executed(const RunLog& log) {
    std::map<int, AlignedAgentSeries> per_agent;
    for (const StepRecord& record : log.steps) {
        for (const AgentStepRecord& a : record.agents) {
            AlignedAgentSeries& series = per_agent[a.agent_id];
            series.agent_id = a.agent_id;
            series.t.push_back(record.t);
            VehicleState planned;
            planned.x = a.planned_ref.x;
            planned.y = a.planned_ref.y;
            planned.heading = a.planned_ref.heading;
            planned.v = a.planned_ref.v;
            planned.t = record.t;
            series.reference.push_back(planned);
            series.comparison.push_back(a.executed);
        }
    }
    std::vector<ErrorMetrics> out;
    for (const auto& [_, series] : per_agent) out.push_back(metrics_from_series(series));
    return out;
}

std::optional<double> HeatmapTable::at(double radius, double angle_deg) const {
    for (size_t r = 0; r < radii.size(); ++r) {
        if (radii[r] != radius) continue;
        for (size_t c = 0; c < angles_deg.size(); ++c)
            if (angles_deg[c] == angle_deg) return cells[r][c];
    }
    return std::nullopt;
}

int HeatmapTable::missing_count() const {
    int missing = 0;
    for (const auto& row : cells)
        for (const auto& cell : row)
            if (!cell) ++missing;
    return missing;
}

HeatmapTable aggregate_grid(std::span<const HeatmapCell> values) {
    std::set<std::pair<double, double>> seen;
    std::set<double> radii, angles;
    for (const HeatmapCell& cell : values) {
        if (!seen.insert({cell.radius, cell.angle_deg}).second) {
            std::ostringstream msg;
            msg << "aggregate_grid: duplicate key (r=" << cell.radius
                << ", gamma=" << cell.angle_deg << ")";
            throw AggregationError(msg.str());
        }
        radii.insert(cell.radius);
        angles.insert(cell.angle_deg);
    }
    HeatmapTable table;
    table.radii.assign(radii.begin(), radii.end());
    table.angles_deg.assign(angles.begin(), angles.end());
    table.cells.assign(table.radii.size(),
                       std::vector<std::optional<double>>(table.angles_deg.size()));
    for (const HeatmapCell& cell : values) {
        const size_t r = std::lower_bound(table.radii.begin(), table.radii.end(), cell.radius) -
                         table.radii.begin();
        const size_t c = std::lower_bound(table.angles_deg.begin(), table.angles_deg.end(),
                                          cell.angle_deg) -
                         table.angles_deg.begin();
        table.cells[r][c] = cell.value;
    }
    return table;
}

std::map<Fidelity, TimingStats> runtime_stats(const BatchReport& report) {
    std::map<Fidelity, std::vector<double>> clocks;
    for (const BatchRunRef& run : report.runs)
        if (run.completed) clocks[run.backend].push_back(run.wall_clock_seconds);
    if (clocks.empty()) throw StatsError("runtime_stats: no completed runs");
    std::map<Fidelity, TimingStats> out;
    for (auto& [fidelity, values] : clocks) out[fidelity] = timing_stats(values);
    return out;
}

std::string runtime_stats_table(const std::map<Fidelity, TimingStats>& stats) {
    std::ostringstream out;
    out << "Statistic";
    for (const auto& [fidelity, _] : stats)
        out << "," << (fidelity == Fidelity::low ? "Low-Fidelity" : "High-Fidelity");
    out << "\n";
    const char* names[] = {"Minimum", "Maximum", "Mean", "Median", "Std. Deviation"};
    for (int row = 0; row < 5; ++row) {
        out << names[row];
        for (const auto& [_, s] : stats) {
            const double v = row == 0   ? s.min
                             : row == 1 ? s.max
                             : row == 2 ? s.mean
                             : row == 3 ? s.median
                                        : s.std_dev;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", v);
            out << "," << buf;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace mfsim
