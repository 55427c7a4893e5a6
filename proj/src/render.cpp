#include "gathersim/render.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gathersim/configuration.hpp"

namespace gathersim {

namespace {

std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Box {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    bool any = false;

    void add(double x, double y, double margin = 0.0) {
        if (!any) {
            min_x = x - margin;
            max_x = x + margin;
            min_y = y - margin;
            max_y = y + margin;
            any = true;
            return;
        }
        min_x = std::min(min_x, x - margin);
        max_x = std::max(max_x, x + margin);
        min_y = std::min(min_y, y - margin);
        max_y = std::max(max_y, y + margin);
    }
};

// SVG y grows downward; world coordinates are flipped on emission.
double fy(double y) { return -y; }

void emit_arc_path(std::string& svg, const ArcPath& arc, Point from, double sw,
                   int robot) {
    Point end = arc.end();
    double a_from = angle_of(from - arc.circle.center);
    double remaining = arc.ccw() ? ccw_delta(a_from, arc.end_angle)
                                 : ccw_delta(arc.end_angle, a_from);
    int large = remaining > kPi ? 1 : 0;
    int sweep = arc.ccw() ? 0 : 1;  // orientation flips with the y axis
    svg += "  <path class=\"flight\" data-robot=\"" + std::to_string(robot) +
           "\" d=\"M " + fmt(from.x) + " " + fmt(fy(from.y)) + " A " +
           fmt(arc.circle.radius) + " " + fmt(arc.circle.radius) + " 0 " +
           std::to_string(large) + " " + std::to_string(sweep) + " " + fmt(end.x) +
           " " + fmt(fy(end.y)) + "\" fill=\"none\" stroke=\"#2a6\" stroke-width=\"" +
           fmt(sw) + "\" stroke-dasharray=\"" + fmt(3.0 * sw) + "\"/>\n";
}

}  // namespace

std::vector<std::string> render_frames(const Trace& trace, const RenderOptions& opts) {
    std::vector<std::string> frames;
    if (trace.empty()) return frames;
    int every = std::max(1, opts.every);
    auto samples = trace_positions(trace);

    std::vector<size_t> picks;
    for (size_t i = 0; i < samples.size(); i += every) picks.push_back(i);

    // Shared bounds across frames so the view does not jump around.
    Box box;
    std::vector<Circle> secs(picks.size());
    for (size_t f = 0; f < picks.size(); ++f) {
        const TraceSample& s = samples[picks[f]];
        Circle sec = smallest_enclosing_circle(s.positions);
        secs[f] = sec;
        box.add(sec.center.x, fy(sec.center.y), sec.radius);
        for (Point p : s.positions) box.add(p.x, fy(p.y));
    }
    double span = std::max(box.max_x - box.min_x, box.max_y - box.min_y);
    if (span <= 0.0) span = 1.0;
    double margin = 0.08 * span;
    double w = box.max_x - box.min_x + 2.0 * margin;
    double h = box.max_y - box.min_y + 2.0 * margin;
    double sw = 0.004 * span;   // stroke width
    double dot = 0.012 * span;  // robot dot radius

    for (size_t f = 0; f < picks.size(); ++f) {
        const TraceSample& s = samples[picks[f]];
        const Circle& sec = secs[f];
        double eps = eps_for(sec.radius);
        std::string svg;
        svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" +
               fmt(box.min_x - margin) + " " + fmt(box.min_y - margin) + " " + fmt(w) +
               " " + fmt(h) + "\">\n";
        svg += "  <rect x=\"" + fmt(box.min_x - margin) + "\" y=\"" +
               fmt(box.min_y - margin) + "\" width=\"" + fmt(w) + "\" height=\"" +
               fmt(h) + "\" fill=\"#ffffff\"/>\n";
        svg += "  <circle class=\"sec\" cx=\"" + fmt(sec.center.x) + "\" cy=\"" +
               fmt(fy(sec.center.y)) + "\" r=\"" + fmt(sec.radius) +
               "\" fill=\"none\" stroke=\"#999\" stroke-width=\"" + fmt(sw) + "\"/>\n";

        if (opts.cells) {
            try {
                CellDecomposition cells = make_cells(Snapshot{s.positions}, eps);
                for (double a : cells.ray_angles) {
                    Point e{sec.center.x + sec.radius * std::cos(a),
                            sec.center.y + sec.radius * std::sin(a)};
                    svg += "  <line class=\"cell-ray\" x1=\"" + fmt(sec.center.x) +
                           "\" y1=\"" + fmt(fy(sec.center.y)) + "\" x2=\"" + fmt(e.x) +
                           "\" y2=\"" + fmt(fy(e.y)) +
                           "\" stroke=\"#ccc\" stroke-width=\"" + fmt(0.7 * sw) +
                           "\" stroke-dasharray=\"" + fmt(2.0 * sw) + "\"/>\n";
                }
            } catch (const std::domain_error&) {
                // multiplicity present or too few boundary robots: no rays
            }
        }

        for (size_t i = 0; i < s.positions.size(); ++i) {
            if (!s.flight_event[i]) continue;
            const TraceEvent& ms = trace[*s.flight_event[i]];
            Path path = event_path(ms);
            if (const auto* arc = std::get_if<ArcPath>(&path)) {
                emit_arc_path(svg, *arc, s.positions[i], sw, static_cast<int>(i));
            } else {
                Point end = path_end(path);
                svg += "  <line class=\"flight\" data-robot=\"" + std::to_string(i) +
                       "\" x1=\"" + fmt(s.positions[i].x) + "\" y1=\"" +
                       fmt(fy(s.positions[i].y)) + "\" x2=\"" + fmt(end.x) +
                       "\" y2=\"" + fmt(fy(end.y)) + "\" stroke=\"#2a6\" stroke-width=\"" +
                       fmt(sw) + "\" stroke-dasharray=\"" + fmt(3.0 * sw) + "\"/>\n";
            }
        }

        MultiplicityView view = multiplicity_view(Snapshot{s.positions}, eps);
        for (const auto& loc : view.locations) {
            bool multi = loc.flag == Occupied::multiple;
            svg += "  <circle class=\"";
            svg += multi ? "mult" : "robot";
            svg += "\" cx=\"" + fmt(loc.where.x) + "\" cy=\"" + fmt(fy(loc.where.y)) +
                   "\" r=\"" + fmt(multi ? 1.8 * dot : dot) + "\" fill=\"" +
                   (multi ? "#c2302a" : "#23395d") + "\"/>\n";
        }
        svg += "</svg>\n";
        frames.push_back(std::move(svg));
    }
    return frames;
}

int render_trace_to_dir(const Trace& trace, const std::string& out_dir,
                        const RenderOptions& opts) {
    std::vector<std::string> frames = render_frames(trace, opts);
    std::filesystem::create_directories(out_dir);
    for (size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.svg", i);
        std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
        out << frames[i];
    }
    return static_cast<int>(frames.size());
}

}  // namespace gathersim
