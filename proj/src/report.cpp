#include "mfsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mfsim/errors.hpp"
#include "mfsim/serialization.hpp"

namespace mfsim {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt3(double v) { return fmt(v, "%.3f"); }

struct Bounds {
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void include(double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }
};

// Maps data space to a y-flipped SVG viewport with margins.
struct Viewport {
    Bounds data;
    double width = 800.0;
    double height = 600.0;
    double margin = 50.0;

    double sx(double x) const {
        const double span = std::max(1e-9, data.max_x - data.min_x);
        return margin + (x - data.min_x) / span * (width - 2 * margin);
    }
    double sy(double y) const {
        const double span = std::max(1e-9, data.max_y - data.min_y);
        return height - margin - (y - data.min_y) / span * (height - 2 * margin);
    }
};

void svg_open(std::ostringstream& out, double width, double height) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_polyline(std::ostringstream& out, const Viewport& vp, std::span<const Vec2> points,
                  const std::string& color, double stroke_width, bool dashed = false) {
    if (points.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke_width
        << "\"";
    if (dashed) out << " stroke-dasharray=\"6,4\"";
    out << " points=\"";
    for (const Vec2& p : points) out << fmt3(vp.sx(p.x)) << "," << fmt3(vp.sy(p.y)) << " ";
    out << "\"/>\n";
}

void svg_text(std::ostringstream& out, double x, double y, const std::string& text,
              int size = 13, const std::string& color = "#333") {
    out << "<text x=\"" << fmt3(x) << "\" y=\"" << fmt3(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" fill=\"" << color << "\">" << text << "</text>\n";
}

// Three-stop gradient, dark to bright for increasing u in [0, 1].
std::string heat_color(double u) {
    u = clamp(u, 0.0, 1.0);
    double r, g, b;
    if (u < 0.5) {
        const double v = u / 0.5;
        r = 68 + v * (33 - 68);
        g = 1 + v * (144 - 1);
        b = 84 + v * (140 - 84);
    } else {
        const double v = (u - 0.5) / 0.5;
        r = 33 + v * (253 - 33);
        g = 144 + v * (231 - 144);
        b = 140 + v * (37 - 140);
    }
    char buf[10];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r), static_cast<int>(g),
                  static_cast<int>(b));
    return buf;
}

void axes_with_ticks(std::ostringstream& out, const Viewport& vp, const std::string& x_label,
                     const std::string& y_label) {
    out << "<line x1=\"" << vp.margin << "\" y1=\"" << vp.height - vp.margin << "\" x2=\""
        << vp.width - vp.margin << "\" y2=\"" << vp.height - vp.margin
        << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << vp.margin << "\" y1=\"" << vp.margin << "\" x2=\"" << vp.margin
        << "\" y2=\"" << vp.height - vp.margin << "\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = vp.data.min_x + i * (vp.data.max_x - vp.data.min_x) / 5.0;
        const double fy = vp.data.min_y + i * (vp.data.max_y - vp.data.min_y) / 5.0;
        svg_text(out, vp.sx(fx) - 10, vp.height - vp.margin + 18, fmt(fx, "%.3g"), 11);
        svg_text(out, 6, vp.sy(fy) + 4, fmt(fy, "%.3g"), 11);
    }
    svg_text(out, vp.width / 2 - 30, vp.height - 8, x_label);
    svg_text(out, 8, vp.margin - 12, y_label);
}

}  // namespace

std::string displacement_csv(std::span<const DisplacementSample> series) {
    std::string out = "s_m,d_m\n";
    for (const DisplacementSample& sample : series) {
        out += fmt(sample.s);
        out += ',';
        out += fmt(sample.d);
        out += '\n';
    }
    return out;
}

std::string velocity_csv(const ErrorMetrics& metrics) {
    std::string out = "t_s,v_ref_mps,v_cmp_mps\n";
    for (size_t i = 0; i < metrics.t.size(); ++i) {
        out += fmt(metrics.t[i]);
        out += ',';
        out += fmt(metrics.v_ref[i]);
        out += ',';
        out += fmt(metrics.v_cmp[i]);
        out += '\n';
    }
    return out;
}

std::string heatmap_csv(const HeatmapTable& table) {
    std::string out = "radius_m";
    for (double angle : table.angles_deg) {
        out += ',';
        out += fmt(angle, "%g");
    }
    out += '\n';
    for (size_t r = 0; r < table.radii.size(); ++r) {
        out += fmt(table.radii[r], "%g");
        for (size_t c = 0; c < table.angles_deg.size(); ++c) {
            out += ',';
            if (table.cells[r][c]) out += fmt(*table.cells[r][c]);
        }
        out += '\n';
    }
    return out;
}

std::string scene_svg(const std::vector<Lanelet>& lanelets, std::span<const Curve> trajectories,
                      std::span<const GoalRegion> goals, const std::string& title) {
    Viewport vp;
    for (const Lanelet& lanelet : lanelets) {
        for (const Vec2& p : lanelet.left_boundary) vp.data.include(p.x, p.y);
        for (const Vec2& p : lanelet.right_boundary) vp.data.include(p.x, p.y);
    }
    for (const Curve& curve : trajectories)
        for (size_t i = 0; i < curve.x.size(); ++i) vp.data.include(curve.x[i], curve.y[i]);
    for (const GoalRegion& goal : goals) {
        vp.data.include(goal.center.x - goal.radius, goal.center.y - goal.radius);
        vp.data.include(goal.center.x + goal.radius, goal.center.y + goal.radius);
    }
    if (!vp.data.valid()) throw ValidationError("scene_svg: nothing to draw");

    // Keep the aspect ratio square so roads are not distorted.
    const double span_x = std::max(1e-9, vp.data.max_x - vp.data.min_x);
    const double span_y = std::max(1e-9, vp.data.max_y - vp.data.min_y);
    vp.height = clamp(vp.width * span_y / span_x, 220.0, 1400.0) + 2 * vp.margin;

    std::ostringstream out;
    svg_open(out, vp.width, vp.height);
    svg_text(out, vp.margin, 24, title, 15, "#000");
    for (const GoalRegion& goal : goals) {
        const double rx = std::abs(vp.sx(goal.center.x + goal.radius) - vp.sx(goal.center.x));
        out << "<circle cx=\"" << fmt3(vp.sx(goal.center.x)) << "\" cy=\""
            << fmt3(vp.sy(goal.center.y)) << "\" r=\"" << fmt3(rx)
            << "\" fill=\"#f2e28a\" fill-opacity=\"0.5\" stroke=\"#b8a23a\"/>\n";
    }
    for (const Lanelet& lanelet : lanelets) {
        svg_polyline(out, vp, lanelet.left_boundary, "#888888", 1.5);
        svg_polyline(out, vp, lanelet.right_boundary, "#888888", 1.5);
    }
    double legend_y = 40.0;
    for (const Curve& curve : trajectories) {
        std::vector<Vec2> pts(curve.x.size());
        for (size_t i = 0; i < curve.x.size(); ++i) pts[i] = {curve.x[i], curve.y[i]};
        svg_polyline(out, vp, pts, curve.color, 2.0, &curve != &trajectories[0]);
        svg_text(out, vp.width - 190, legend_y, curve.label, 12, curve.color);
        legend_y += 16.0;
    }
    out << "</svg>\n";
    return out.str();
}

std::string curves_svg(std::span<const Curve> curves, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
    Viewport vp;
    vp.width = 760.0;
    vp.height = 420.0;
    for (const Curve& curve : curves)
        for (size_t i = 0; i < curve.x.size(); ++i) vp.data.include(curve.x[i], curve.y[i]);
    if (!vp.data.valid()) throw ValidationError("curves_svg: nothing to draw");
    if (vp.data.max_y - vp.data.min_y < 1e-9) {
        vp.data.min_y -= 0.5;
        vp.data.max_y += 0.5;
    }

    std::ostringstream out;
    svg_open(out, vp.width, vp.height);
    svg_text(out, vp.margin, 24, title, 15, "#000");
    axes_with_ticks(out, vp, x_label, y_label);
    double legend_y = 40.0;
    for (const Curve& curve : curves) {
        std::vector<Vec2> pts(curve.x.size());
        for (size_t i = 0; i < curve.x.size(); ++i) pts[i] = {curve.x[i], curve.y[i]};
        svg_polyline(out, vp, pts, curve.color, 1.8);
        svg_text(out, vp.width - 200, legend_y, curve.label, 12, curve.color);
        legend_y += 16.0;
    }
    out << "</svg>\n";
    return out.str();
}

std::string heatmap_svg(const HeatmapTable& table, const std::string& title) {
    const size_t rows = table.radii.size();
    const size_t cols = table.angles_deg.size();
    if (rows == 0 || cols == 0) throw ValidationError("heatmap_svg: empty table");
    const double cell = 56.0, left = 90.0, top = 60.0;
    const double width = left + cols * cell + 40.0;
    const double height = top + rows * cell + 60.0;

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (const auto& row : table.cells)
        for (const auto& c : row)
            if (c) {
                vmin = std::min(vmin, *c);
                vmax = std::max(vmax, *c);
            }
    if (!(vmin <= vmax)) {
        vmin = 0.0;
        vmax = 1.0;
    }
    const double span = std::max(1e-12, vmax - vmin);

    std::ostringstream out;
    svg_open(out, width, height);
    svg_text(out, left, 24, title, 15, "#000");
    for (size_t c = 0; c < cols; ++c)
        svg_text(out, left + c * cell + 14, top - 8, fmt(table.angles_deg[c], "%g"), 12);
    for (size_t r = 0; r < rows; ++r) {
        svg_text(out, 16, top + r * cell + cell / 2 + 4, "r=" + fmt(table.radii[r], "%g"), 12);
        for (size_t c = 0; c < cols; ++c) {
            const auto& value = table.cells[r][c];
            const std::string color = value ? heat_color((*value - vmin) / span) : "#dddddd";
            out << "<rect x=\"" << fmt3(left + c * cell) << "\" y=\"" << fmt3(top + r * cell)
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << color
                << "\" stroke=\"white\"/>\n";
            if (value) {
                const double u = (*value - vmin) / span;
                svg_text(out, left + c * cell + 5, top + r * cell + cell / 2 + 4,
                         fmt(*value, "%.3f"), 10, u > 0.6 ? "#222" : "#eee");
            } else {
                svg_text(out, left + c * cell + 17, top + r * cell + cell / 2 + 4, "n/a", 10,
                         "#666");
            }
        }
    }
    svg_text(out, left, top + rows * cell + 28, "columns: turn angle gamma (deg)", 12);
    out << "</svg>\n";
    return out.str();
}

std::vector<std::filesystem::path> render_reports(const Scenario& scenario,
                                                  const RunLog& reference,
                                                  const RunLog& comparison,
                                                  const std::vector<ErrorMetrics>& metrics,
                                                  const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::filesystem::path path = out_dir / name;
        write_text_file(path, content);
        written.push_back(path);
    };

    const std::string id = scenario.scenario_id;
    const std::vector<Lanelet> lanelets = scenario.build_lanelets();

    std::vector<Curve> trajs;
    for (const AgentSpec& agent : scenario.agents) {
        Curve ref_curve;
        ref_curve.label = "agent " + std::to_string(agent.agent_id) + " " +
                          to_string(reference.backend) + " (reference)";
        ref_curve.color = "#1f77b4";
        for (const Vec2& p : reference.executed_polyline(agent.agent_id)) {
            ref_curve.x.push_back(p.x);
            ref_curve.y.push_back(p.y);
        }
        Curve cmp_curve;
        cmp_curve.label = "agent " + std::to_string(agent.agent_id) + " " +
                          to_string(comparison.backend);
        cmp_curve.color = "#d62728";
        for (const Vec2& p : comparison.executed_polyline(agent.agent_id)) {
            cmp_curve.x.push_back(p.x);
            cmp_curve.y.push_back(p.y);
        }
        trajs.push_back(std::move(ref_curve));
        trajs.push_back(std::move(cmp_curve));
    }
    std::vector<GoalRegion> goals;
    for (const AgentSpec& agent : scenario.agents) goals.push_back(agent.goal);
    emit(id + "__scene.svg", scene_svg(lanelets, trajs, goals, id));

    for (const ErrorMetrics& m : metrics) {
        const std::string agent_tag =
            metrics.size() > 1 ? "_a" + std::to_string(m.agent_id) : "";
        emit(id + agent_tag + "__d_over_s.csv", displacement_csv(m.lateral));
        emit(id + agent_tag + "__v_over_t.csv", velocity_csv(m));

        Curve d_curve;
        d_curve.label = "d (agent " + std::to_string(m.agent_id) + ")";
        d_curve.color = "#d62728";
        for (const DisplacementSample& s : m.lateral) {
            d_curve.x.push_back(s.s);
            d_curve.y.push_back(s.d);
        }
        emit(id + agent_tag + "__d_over_s.svg",
             curves_svg(std::vector<Curve>{d_curve}, id + ": lateral displacement", "s (m)",
                        "d (m)"));

        Curve v_ref_curve{"v reference", m.t, m.v_ref, "#1f77b4"};
        Curve v_cmp_curve{"v comparison", m.t, m.v_cmp, "#d62728"};
        emit(id + agent_tag + "__v_over_t.svg",
             curves_svg(std::vector<Curve>{v_ref_curve, v_cmp_curve}, id + ": velocity profile",
                        "t (s)", "v (m/s)"));
    }
    return written;
}

std::vector<std::filesystem::path> render_heatmap(const HeatmapTable& table,
                                                  const std::string& metric_name,
                                                  const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    std::vector<std::filesystem::path> written;
    const std::filesystem::path csv = out_dir / ("heatmap_" + metric_name + ".csv");
    write_text_file(csv, heatmap_csv(table));
    written.push_back(csv);
    const std::filesystem::path svg = out_dir / ("heatmap_" + metric_name + ".svg");
    write_text_file(svg, heatmap_svg(table, "lateral displacement |d| (" + metric_name + ", m)"));
    written.push_back(svg);
    return written;
}

}  // namespace mfsim
