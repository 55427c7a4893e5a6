#include "gathersim/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

namespace gathersim {

std::string report_to_json(const InvariantReport& report) {
    nlohmann::json j;
    j["pass"] = report.all_pass();
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : report.checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["applicable"] = c.applicable;
        cj["samples"] = c.samples;
        if (c.measured) cj["measured"] = *c.measured;
        if (c.witness) {
            cj["witness"] = {{"t_from", c.witness->t_from},
                             {"t_to", c.witness->t_to},
                             {"robot", c.witness->robot}};
        }
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j.dump(2);
}

double lemma2_bound(double r, double delta) {
    double inner = (r + delta) * (r + delta) - 2.0 * delta * delta;
    return 0.5 * (r - delta) + 0.5 * std::sqrt(std::max(inner, 0.0));
}

double arc_progress_floor(double r, double s) { return r * (1.0 - std::cos(s / r)); }

namespace {

struct RoundView {
    struct Move {
        int robot;
        Point from;
        Point to;
        PathStyle style;
        MoveExtent extent;
        double traveled;
        Point path_end;
    };
    double t = 0.0;
    std::vector<Point> before;  // positions at round start
    std::vector<Move> moves;
    std::vector<std::pair<int, Point>> looks;
};

// Per-round reconstruction of an SSYNC trace, plus the final configuration.
std::pair<std::vector<RoundView>, std::vector<Point>> collect_rounds(
    const Trace& trace, const std::vector<TraceSample>& samples) {
    std::vector<RoundView> rounds;
    RoundView* cur = nullptr;
    std::map<int, size_t> open_start;  // robot -> move index in current round
    for (size_t i = 0; i < trace.size(); ++i) {
        const TraceEvent& ev = trace[i];
        switch (ev.kind) {
            case EventKind::round_start:
                rounds.emplace_back();
                cur = &rounds.back();
                cur->t = ev.t;
                cur->before = samples[i].positions;
                open_start.clear();
                break;
            case EventKind::look:
                if (cur) cur->looks.emplace_back(ev.robot, ev.pos);
                break;
            case EventKind::move_start:
                if (cur) {
                    open_start[ev.robot] = cur->moves.size();
                    cur->moves.push_back({ev.robot, ev.pos, ev.pos,
                                          ev.style.value_or(PathStyle::straight),
                                          ev.extent.value_or(MoveExtent::full), 0.0,
                                          ev.dest.value_or(ev.pos)});
                }
                break;
            case EventKind::move_end:
                if (cur && open_start.count(ev.robot)) {
                    RoundView::Move& m = cur->moves[open_start[ev.robot]];
                    m.to = ev.pos;
                    m.traveled = ev.traveled.value_or(distance(m.from, ev.pos));
                }
                break;
            default:
                break;
        }
    }
    std::vector<Point> final_pos =
        samples.empty() ? std::vector<Point>{} : samples.back().positions;
    return {rounds, final_pos};
}

CheckResult not_applicable(std::string name, std::string why) {
    CheckResult c;
    c.name = std::move(name);
    c.applicable = false;
    c.detail = std::move(why);
    return c;
}

bool has_multiplicity(const std::vector<Point>& pos, double eps) {
    return !multiplicity_view(Snapshot{pos}, eps).multiplicity_points().empty();
}

}  // namespace

CheckResult check_radius_monotone(const RunResult& run,
                                  std::vector<RadiusSample>* samples_out) {
    if (run.scheduler != "ssync" || run.protocol != ProtocolKind::gather_k)
        return not_applicable("radius_monotone", "SSYNC gather_k traces only");
    CheckResult c;
    c.name = "radius_monotone";
    auto samples = trace_positions(run.trace);
    auto [rounds, final_pos] = collect_rounds(run.trace, samples);
    double min_decrease = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < rounds.size(); ++r) {
        const std::vector<Point>& before = rounds[r].before;
        const std::vector<Point>& after =
            r + 1 < rounds.size() ? rounds[r + 1].before : final_pos;
        if (has_multiplicity(before, run.eps) || has_multiplicity(after, run.eps))
            break;  // pre-multiplicity phase only
        Circle s0 = smallest_enclosing_circle(before);
        Circle s1 = smallest_enclosing_circle(after);
        if (distance(s0.center, s1.center) <= run.eps) continue;
        ++c.samples;
        double decrease = s0.radius - s1.radius;
        min_decrease = std::min(min_decrease, decrease);
        if (samples_out)
            samples_out->push_back({static_cast<long>(r), distance(s0.center, s1.center),
                                    s0.radius, s1.radius});
        if (!(s1.radius < s0.radius)) {
            c.pass = false;
            c.witness = CheckWitness{rounds[r].t, rounds[r].t + 1.0, -1};
        }
    }
    if (c.samples > 0) c.measured = min_decrease;
    return c;
}

CheckResult check_lemma2_bound(const RunResult& run,
                               std::vector<RadialMoveSample>* samples_out) {
    if (run.scheduler != "ssync" || run.protocol != ProtocolKind::gather_k)
        return not_applicable("lemma2_bound", "SSYNC gather_k traces only");
    CheckResult c;
    c.name = "lemma2_bound";
    auto samples = trace_positions(run.trace);
    auto [rounds, final_pos] = collect_rounds(run.trace, samples);
    double worst_margin = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < rounds.size(); ++r) {
        const std::vector<Point>& before = rounds[r].before;
        if (has_multiplicity(before, run.eps)) break;
        Circle sec = smallest_enclosing_circle(before);
        const std::vector<Point>& after =
            r + 1 < rounds.size() ? rounds[r + 1].before : final_pos;
        Circle next_sec = smallest_enclosing_circle(after);
        for (const RoundView::Move& m : rounds[r].moves) {
            if (m.style != PathStyle::straight) continue;
            Point to_center = sec.center - m.from;
            double d = norm(to_center);
            if (d <= run.eps) continue;
            Point step = m.to - m.from;
            // Radial mover: the step points at the center and stays short of it.
            if (std::abs(cross(to_center, step)) > run.eps * d) continue;
            if (dot(step, to_center) < 0.0) continue;
            if (norm(step) > d + run.eps) continue;
            double delta = norm(step);
            double bound = lemma2_bound(sec.radius, delta);
            double next_dist = distance(m.to, next_sec.center);
            ++c.samples;
            worst_margin = std::min(worst_margin, bound - next_dist);
            if (samples_out)
                samples_out->push_back({static_cast<long>(r), m.robot, delta, sec.radius,
                                        bound, next_dist});
            if (next_dist > bound + 1e-9) {
                c.pass = false;
                c.witness = CheckWitness{rounds[r].t, rounds[r].t + 1.0, m.robot};
            }
        }
    }
    if (c.samples > 0) c.measured = worst_margin;
    return c;
}

CheckResult check_arc_progress(const RunResult& run,
                               std::vector<ArcMoveSample>* samples_out) {
    CheckResult c;
    c.name = "arc_progress";
    auto samples = trace_positions(run.trace);
    bool ssync = run.scheduler == "ssync";
    // Configuration the robot computed on: round start for SSYNC, the
    // move_start instant for ASYNC_IC (zero look-to-move gap).
    std::vector<Point> round_cfg;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::map<int, std::pair<size_t, Circle>> open;  // robot -> (start idx, sec)
    for (size_t i = 0; i < run.trace.size(); ++i) {
        const TraceEvent& ev = run.trace[i];
        if (ev.kind == EventKind::round_start) round_cfg = samples[i].positions;
        if (ev.kind == EventKind::move_start && ev.style == PathStyle::circular) {
            const std::vector<Point>& cfg = ssync ? round_cfg : samples[i].positions;
            if (cfg.empty() || has_multiplicity(cfg, run.eps)) continue;
            Circle sec = smallest_enclosing_circle(cfg);
            // The lemma concerns full moves aimed at the SEC center.
            if (!ev.dest || distance(*ev.dest, sec.center) > 4.0 * run.eps) continue;
            open[ev.robot] = {i, sec};
        }
        if (ev.kind == EventKind::move_end && open.count(ev.robot)) {
            auto [start_idx, sec] = open[ev.robot];
            open.erase(ev.robot);
            double traveled = ev.traveled.value_or(0.0);
            if (std::abs(traveled - run.s_min) > 1e-9 * (1.0 + run.s_min)) continue;
            Point from = run.trace[start_idx].pos;
            double progress =
                distance(from, sec.center) - distance(ev.pos, sec.center);
            double floor = arc_progress_floor(sec.radius, traveled);
            ++c.samples;
            worst_margin = std::min(worst_margin, progress - floor);
            if (samples_out)
                samples_out->push_back({ev.t, ev.robot, sec.radius, progress, floor});
            if (progress < floor - 1e-9) {
                c.pass = false;
                c.witness = CheckWitness{run.trace[start_idx].t, ev.t, ev.robot};
            }
        }
    }
    if (c.samples > 0) c.measured = worst_margin;
    return c;
}

CheckResult check_single_multiplicity(const RunResult& run) {
    CheckResult c;
    c.name = "single_multiplicity";
    if (!is_legal(run.initial, run.eps))
        return not_applicable("single_multiplicity", "initial snapshot not legal");
    std::optional<Point> formed_at;
    for (const TraceSample& s : trace_positions(run.trace)) {
        auto mults = multiplicity_view(Snapshot{s.positions}, run.eps)
                         .multiplicity_points();
        ++c.samples;
        if (mults.size() > 1) {
            c.pass = false;
            c.witness = CheckWitness{s.t, s.t, -1};
            c.detail = "two multiplicity points coexist";
            break;
        }
        if (mults.size() == 1) {
            if (!formed_at) {
                formed_at = mults.front();
            } else if (distance(*formed_at, mults.front()) > 4.0 * run.eps) {
                c.pass = false;
                c.witness = CheckWitness{s.t, s.t, -1};
                c.detail = "multiplicity location moved";
                break;
            }
        }
    }
    return c;
}

CheckResult check_sec_invariant(const RunResult& run) {
    if (run.protocol != ProtocolKind::async_gather)
        return not_applicable("sec_invariant", "async_gather traces only");
    CheckResult c;
    c.name = "sec_invariant";
    Circle sec0 = smallest_enclosing_circle(run.initial.positions);
    double tol = 4.0 * run.eps;
    double max_dev = 0.0;
    for (const TraceSample& s : trace_positions(run.trace)) {
        if (has_multiplicity(s.positions, run.eps)) break;
        Circle sec = smallest_enclosing_circle(s.positions);
        double dev = std::max(distance(sec.center, sec0.center),
                              std::abs(sec.radius - sec0.radius));
        max_dev = std::max(max_dev, dev);
        ++c.samples;
        if (dev > tol) {
            c.pass = false;
            c.witness = CheckWitness{s.t, s.t, -1};
            break;
        }
    }
    c.measured = max_dev;
    return c;
}

CheckResult check_transition_graph(const RunResult& run) {
    if (run.protocol != ProtocolKind::async_gather)
        return not_applicable("transition_graph", "async_gather traces only");
    CheckResult c;
    c.name = "transition_graph";
    int n = static_cast<int>(run.initial.size());
    const std::vector<Point>& p0 = run.initial.positions;
    auto samples = trace_positions(run.trace);
    ConfigTag last_tag = ConfigTag::Cell;
    for (const TraceSample& s : samples) {
        ConfigTag tag = classify(Snapshot{s.positions}, n, run.eps).tag;
        last_tag = tag;
        ++c.samples;
        if (is_starred(tag)) {
            bool moved = false;
            for (size_t i = 0; i < s.positions.size(); ++i)
                if (distance(s.positions[i], p0[i]) > run.eps) moved = true;
            if (moved) {
                c.pass = false;
                c.witness = CheckWitness{s.t, s.t, -1};
                c.detail = "equal-occupancy class re-entered after a move (" +
                           to_string(tag) + ")";
                return c;
            }
        }
    }
    if (run.outcome != RunOutcome::gathered) {
        c.pass = false;
        c.detail = "run did not end gathered within budget";
        return c;
    }
    int crashed = 0;
    for (const TraceEvent& ev : run.trace)
        if (ev.kind == EventKind::crash) ++crashed;
    if (n - crashed >= 2 && last_tag != ConfigTag::Mult) {
        c.pass = false;
        c.detail = "final configuration is not a multiplicity";
    }
    return c;
}

CheckResult check_fairness(const RunResult& run, double fairness_bound) {
    CheckResult c;
    c.name = "fairness";
    double bound = fairness_bound > 0.0 ? fairness_bound : run.fairness_bound;
    if (bound <= 0.0) return not_applicable("fairness", "no fairness bound recorded");
    int n = static_cast<int>(run.initial.size());
    std::vector<double> last_look(n, 0.0);
    std::vector<double> crash_at(n, std::numeric_limits<double>::infinity());
    double tol = 1e-9;
    double max_gap = 0.0;
    for (const TraceEvent& ev : run.trace) {
        if (ev.kind == EventKind::crash) crash_at[ev.robot] = ev.t;
        if (ev.kind != EventKind::look) continue;
        double gap = ev.t - last_look[ev.robot];
        max_gap = std::max(max_gap, gap);
        ++c.samples;
        if (gap > bound + tol && ev.t <= crash_at[ev.robot]) {
            c.pass = false;
            c.witness = CheckWitness{last_look[ev.robot], ev.t, ev.robot};
        }
        last_look[ev.robot] = ev.t;
    }
    for (int i = 0; i < n; ++i) {
        double horizon = std::min(crash_at[i], run.end_time);
        double gap = horizon - last_look[i];
        max_gap = std::max(max_gap, gap);
        if (gap > bound + tol) {
            c.pass = false;
            c.witness = CheckWitness{last_look[i], horizon, i};
        }
    }
    c.measured = max_gap;
    return c;
}

CheckResult check_wait_freedom(const RunResult& run) {
    if (run.protocol != ProtocolKind::gather_k)
        return not_applicable("wait_freedom", "gather_k traces only");
    CheckResult c;
    c.name = "wait_freedom";
    auto samples = trace_positions(run.trace);
    for (size_t i = 0; i < run.trace.size(); ++i) {
        const TraceEvent& ev = run.trace[i];
        if (ev.kind != EventKind::look) continue;
        auto mults = multiplicity_view(Snapshot{samples[i].positions}, run.eps)
                         .multiplicity_points();
        Point dest = mults.size() == 1
                         ? mults.front()
                         : smallest_enclosing_circle(samples[i].positions).center;
        if (mults.size() > 1) continue;  // protocol undefined here
        if (distance(ev.pos, dest) <= run.eps) continue;
        ++c.samples;
        bool moved = false;
        for (size_t j = i + 1; j < run.trace.size(); ++j) {
            const TraceEvent& next = run.trace[j];
            if (next.robot == ev.robot && next.kind == EventKind::move_start) {
                moved = true;
                break;
            }
            if (next.robot == ev.robot && next.kind == EventKind::look) break;
            if (next.kind == EventKind::round_end) break;
        }
        if (!moved) {
            c.pass = false;
            c.witness = CheckWitness{ev.t, ev.t, ev.robot};
            break;
        }
    }
    return c;
}

InvariantReport standard_report(const RunResult& run, double fairness_bound) {
    InvariantReport report;
    if (run.scheduler == "ssync" && run.protocol == ProtocolKind::gather_k) {
        report.checks.push_back(check_radius_monotone(run));
        report.checks.push_back(check_lemma2_bound(run));
        report.checks.push_back(check_arc_progress(run));
        report.checks.push_back(check_single_multiplicity(run));
        report.checks.push_back(check_wait_freedom(run));
        report.checks.push_back(check_fairness(run, fairness_bound));
    } else if (run.protocol == ProtocolKind::async_gather) {
        report.checks.push_back(check_single_multiplicity(run));
        report.checks.push_back(check_sec_invariant(run));
        report.checks.push_back(check_transition_graph(run));
        report.checks.push_back(check_arc_progress(run));
        report.checks.push_back(check_fairness(run, fairness_bound));
    } else {
        report.checks.push_back(check_single_multiplicity(run));
        if (run.scheduler == "ssync")
            report.checks.push_back(check_fairness(run, fairness_bound));
    }
    return report;
}

}  // namespace gathersim
