#include "gathersim/engine.hpp"

#include <algorithm>
#include <queue>

#include "json.hpp"

namespace gathersim {

std::string to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::gather_k: return "gather_k";
        case ProtocolKind::async_gather: return "async_gather";
        case ProtocolKind::mirror_demo: return "mirror_demo";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::init: return "init";
        case EventKind::round_start: return "round_start";
        case EventKind::round_end: return "round_end";
        case EventKind::look: return "look";
        case EventKind::move_start: return "move_start";
        case EventKind::move_end: return "move_end";
        case EventKind::crash: return "crash";
    }
    return "?";
}

std::string to_string(RunOutcome o) {
    switch (o) {
        case RunOutcome::gathered: return "gathered";
        case RunOutcome::budget_exhausted: return "budget_exhausted";
        case RunOutcome::protocol_error: return "protocol_error";
    }
    return "?";
}

namespace {

EventKind event_kind_from(const std::string& s) {
    if (s == "init") return EventKind::init;
    if (s == "round_start") return EventKind::round_start;
    if (s == "round_end") return EventKind::round_end;
    if (s == "look") return EventKind::look;
    if (s == "move_start") return EventKind::move_start;
    if (s == "move_end") return EventKind::move_end;
    if (s == "crash") return EventKind::crash;
    throw std::runtime_error("unknown trace event kind: " + s);
}

}  // namespace

std::string trace_to_jsonl(const Trace& trace) {
    std::string out;
    for (const TraceEvent& ev : trace) {
        nlohmann::json j;
        j["t"] = ev.t;
        j["robot"] = ev.robot;
        j["kind"] = to_string(ev.kind);
        j["x"] = ev.pos.x;
        j["y"] = ev.pos.y;
        if (ev.dest) {
            j["dest_x"] = ev.dest->x;
            j["dest_y"] = ev.dest->y;
        }
        if (ev.style)
            j["style"] = *ev.style == PathStyle::straight ? "straight" : "circular";
        if (ev.extent) j["extent"] = *ev.extent == MoveExtent::full ? "full" : "half";
        if (ev.arc) {
            j["cx"] = ev.arc->center.x;
            j["cy"] = ev.arc->center.y;
            j["cr"] = ev.arc->radius;
            j["a0"] = ev.arc->start_angle;
            j["a1"] = ev.arc->end_angle;
            j["ccw"] = ev.arc->ccw;
        }
        if (ev.traveled) j["traveled"] = *ev.traveled;
        out += j.dump();
        out += '\n';
    }
    return out;
}

Trace trace_from_jsonl(const std::string& text) {
    Trace trace;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        TraceEvent ev;
        ev.t = j.at("t").get<double>();
        ev.robot = j.at("robot").get<int>();
        ev.kind = event_kind_from(j.at("kind").get<std::string>());
        ev.pos = {j.at("x").get<double>(), j.at("y").get<double>()};
        if (j.contains("dest_x"))
            ev.dest = Point{j["dest_x"].get<double>(), j["dest_y"].get<double>()};
        if (j.contains("style"))
            ev.style = j["style"] == "straight" ? PathStyle::straight : PathStyle::circular;
        if (j.contains("extent"))
            ev.extent = j["extent"] == "full" ? MoveExtent::full : MoveExtent::half;
        if (j.contains("cx")) {
            ArcInfo a;
            a.center = {j["cx"].get<double>(), j["cy"].get<double>()};
            a.radius = j["cr"].get<double>();
            a.start_angle = j["a0"].get<double>();
            a.end_angle = j["a1"].get<double>();
            a.ccw = j["ccw"].get<bool>();
            ev.arc = a;
        }
        if (j.contains("traveled")) ev.traveled = j["traveled"].get<double>();
        trace.push_back(ev);
    }
    return trace;
}

Path event_path(const TraceEvent& ev) {
    if (ev.kind != EventKind::move_start || !ev.dest)
        throw std::domain_error("event_path: not a move_start event");
    if (ev.arc) {
        return ArcPath{Circle{ev.arc->center, ev.arc->radius}, ev.arc->start_angle,
                       ev.arc->end_angle,
                       ev.arc->ccw ? ArcOrientation::counterclockwise
                                   : ArcOrientation::clockwise};
    }
    return Segment{ev.pos, *ev.dest};
}

std::vector<TraceSample> trace_positions(const Trace& trace) {
    int n = 0;
    for (const TraceEvent& ev : trace)
        if (ev.kind == EventKind::init) n = std::max(n, ev.robot + 1);
    // Seed all starting positions up front so samples taken while the init
    // prefix is still being replayed already see the complete configuration.
    std::vector<Point> pos(n);
    for (const TraceEvent& ev : trace)
        if (ev.kind == EventKind::init) pos[ev.robot] = ev.pos;
    struct Flight {
        Path path;
        double t0;
        size_t event;
    };
    std::vector<std::optional<Flight>> flights(n);
    std::vector<TraceSample> samples;
    samples.reserve(trace.size());

    for (size_t idx = 0; idx < trace.size(); ++idx) {
        const TraceEvent& ev = trace[idx];
        switch (ev.kind) {
            case EventKind::init:
                pos[ev.robot] = ev.pos;
                break;
            case EventKind::move_start:
                flights[ev.robot] = Flight{event_path(ev), ev.t, idx};
                break;
            case EventKind::move_end:
            case EventKind::crash:
                if (ev.robot >= 0) {
                    pos[ev.robot] = ev.pos;
                    flights[ev.robot].reset();
                }
                break;
            default:
                break;
        }
        TraceSample s;
        s.t = ev.t;
        s.event_index = idx;
        s.positions.resize(n);
        s.flight_event.resize(n);
        for (int i = 0; i < n; ++i) {
            if (flights[i]) {
                double len = path_length(flights[i]->path);
                double traveled = std::clamp(ev.t - flights[i]->t0, 0.0, len);
                s.positions[i] = point_along_path(flights[i]->path, traveled);
                s.flight_event[i] = flights[i]->event;
            } else {
                s.positions[i] = pos[i];
            }
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

Point current_position(const RobotState& r, double t) {
    if (!r.flight) return r.pos;
    double traveled = std::clamp(t - r.flight->start_time, 0.0, r.flight->planned);
    return point_along_path(r.flight->path, traveled);
}

Snapshot world_snapshot(const WorldState& w, double t) {
    Snapshot s;
    s.positions.reserve(w.robots.size());
    for (const RobotState& r : w.robots) s.positions.push_back(current_position(r, t));
    return s;
}

void inject_crash(WorldState& w, int robot, double time) {
    RobotState& r = w.robots.at(robot);
    if (r.crashed) return;
    r.crash_time = std::min(r.crash_time, time);
    if (time <= w.clock) {
        r.pos = current_position(r, time);
        r.flight.reset();
        r.crashed = true;
    }
}

double truncate_move(const Path& path, Adversary& adv, double s_min) {
    double len = path_length(path);
    if (len <= s_min) return len;
    return std::clamp(adv.stop_distance(len, s_min), s_min, len);
}

namespace {

class BenignAdversary final : public Adversary {
public:
    std::vector<int> select_round(long, const std::vector<int>& alive) override {
        return alive;
    }
    double stop_distance(double path_len, double) override { return path_len; }
    double idle_time(double, double) override { return 0.0; }
    double initial_activation(int) override { return 0.0; }
};

class UniformRandomAdversary final : public Adversary {
public:
    explicit UniformRandomAdversary(uint64_t seed) : rng_(seed) {}

    std::vector<int> select_round(long, const std::vector<int>& alive) override {
        std::vector<int> out;
        for (int i : alive)
            if (rng_() & 1u) out.push_back(i);
        if (out.empty() && !alive.empty()) {
            std::uniform_int_distribution<size_t> pick(0, alive.size() - 1);
            out.push_back(alive[pick(rng_)]);
        }
        return out;
    }
    double stop_distance(double path_len, double s_min) override {
        std::uniform_real_distribution<double> d(s_min, path_len);
        return d(rng_);
    }
    double idle_time(double move_duration, double fairness_bound) override {
        if (move_duration <= 0.0) {
            std::uniform_real_distribution<double> d(0.25 * fairness_bound,
                                                     0.5 * fairness_bound);
            return d(rng_);
        }
        double room = std::max(0.0, fairness_bound - move_duration);
        std::uniform_real_distribution<double> d(0.0, room);
        return d(rng_);
    }
    double initial_activation(int) override {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(rng_);
    }

private:
    std::mt19937_64 rng_;
};

class GreedyMinimalAdversary final : public Adversary {
public:
    std::vector<int> select_round(long, const std::vector<int>& alive) override {
        // Singleton activation, round-robin over robot ids.
        for (size_t step = 0; step < alive.size(); ++step) {
            for (int i : alive) {
                if (i > last_) {
                    last_ = i;
                    return {i};
                }
            }
            last_ = -1;  // wrap
        }
        return {};
    }
    double stop_distance(double, double s_min) override { return s_min; }
    double idle_time(double, double) override { return 0.0; }
    double initial_activation(int robot) override { return 1e-3 * robot; }

private:
    int last_ = -1;
};

class ScriptedAdversary final : public Adversary {
public:
    explicit ScriptedAdversary(AdversaryConfig cfg) : cfg_(std::move(cfg)) {}

    std::vector<int> select_round(long round, const std::vector<int>& alive) override {
        if (cfg_.activations.empty()) return alive;
        const auto& req = cfg_.activations[round % cfg_.activations.size()];
        std::vector<int> out;
        for (int i : req)
            if (std::find(alive.begin(), alive.end(), i) != alive.end())
                out.push_back(i);
        return out;
    }
    double stop_distance(double path_len, double s_min) override {
        if (!cfg_.stops.empty()) {
            double d = cfg_.stops[std::min(cursor_, cfg_.stops.size() - 1)];
            ++cursor_;
            return d;
        }
        return cfg_.stop_full ? path_len : s_min;
    }
    double idle_time(double, double) override { return 0.0; }
    double initial_activation(int) override { return 0.0; }

private:
    AdversaryConfig cfg_;
    size_t cursor_ = 0;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& cfg, uint64_t seed) {
    if (cfg.kind == "benign") return std::make_unique<BenignAdversary>();
    if (cfg.kind == "uniform_random") return std::make_unique<UniformRandomAdversary>(seed);
    if (cfg.kind == "greedy_minimal") return std::make_unique<GreedyMinimalAdversary>();
    if (cfg.kind == "scripted") return std::make_unique<ScriptedAdversary>(cfg);
    throw std::runtime_error("unknown adversary kind: " + cfg.kind);
}

namespace {

MoveCommand compute(ProtocolKind k, const Snapshot& s, Point self, int n, double eps,
                    double s_min) {
    switch (k) {
        case ProtocolKind::gather_k: return gather_k(s, self, eps, s_min);
        case ProtocolKind::async_gather: return async_gather(s, self, n, eps, s_min);
        case ProtocolKind::mirror_demo: return mirror_demo(s, self, eps);
    }
    throw std::logic_error("unknown protocol");
}

struct Defaults {
    double s_min;
    double eps;
    double fairness;
};

Defaults resolve_defaults(const Snapshot& initial, const EngineConfig& cfg,
                          bool ssync) {
    Circle sec = smallest_enclosing_circle(initial.positions);
    double eps = cfg.eps > 0.0 ? cfg.eps : eps_for(sec.radius);
    double s_min = cfg.s_min > 0.0
                       ? cfg.s_min
                       : 0.05 * (sec.radius > 0.0 ? sec.radius : 1.0);
    double fairness = cfg.fairness_bound;
    if (fairness <= 0.0)
        fairness = ssync ? std::max(10.0, 2.0 * static_cast<double>(initial.size()))
                         : 10.0;
    return {s_min, eps, fairness};
}

void emit_init(WorldState& w) {
    for (size_t i = 0; i < w.robots.size(); ++i) {
        TraceEvent ev;
        ev.t = 0.0;
        ev.robot = static_cast<int>(i);
        ev.kind = EventKind::init;
        ev.pos = w.robots[i].pos;
        w.history.push_back(ev);
    }
}

TraceEvent move_start_event(double t, int robot, Point pos, const MoveCommand& cmd) {
    TraceEvent ev;
    ev.t = t;
    ev.robot = robot;
    ev.kind = EventKind::move_start;
    ev.pos = pos;
    ev.dest = path_end(cmd.path);
    ev.style = cmd.style;
    ev.extent = cmd.extent;
    if (const auto* arc = std::get_if<ArcPath>(&cmd.path)) {
        ev.arc = ArcInfo{arc->circle.center, arc->circle.radius, arc->start_angle,
                         arc->end_angle, arc->ccw()};
    }
    return ev;
}

// Gathered means a stable state: every non-crashed robot at one point, none
// in flight, and a lone survivor additionally at its own destination.
bool stable_gathered(const WorldState& w, ProtocolKind proto, int n, double t,
                     double eps, double s_min) {
    std::vector<int> alive;
    for (size_t i = 0; i < w.robots.size(); ++i) {
        if (w.robots[i].crashed) continue;
        if (w.robots[i].flight) return false;
        alive.push_back(static_cast<int>(i));
    }
    if (alive.empty()) return true;
    for (size_t j = 1; j < alive.size(); ++j) {
        if (distance(w.robots[alive[j]].pos, w.robots[alive[0]].pos) > eps) return false;
    }
    if (alive.size() >= 2) return true;
    Snapshot s = world_snapshot(w, t);
    try {
        return compute(proto, s, w.robots[alive[0]].pos, n, eps, s_min).stay;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

RunResult run_ssync(const Snapshot& initial, ProtocolKind protocol, Adversary& adv,
                    long budget_rounds, const EngineConfig& cfg) {
    int n = static_cast<int>(initial.size());
    Defaults d = resolve_defaults(initial, cfg, /*ssync=*/true);
    WorldState w;
    w.s_min = d.s_min;
    w.eps = d.eps;
    for (Point p : initial.positions) {
        RobotState r;
        r.pos = p;
        w.robots.push_back(r);
    }
    for (const CrashEntry& c : cfg.crashes)
        w.robots.at(c.robot).crash_time = std::min(w.robots.at(c.robot).crash_time, c.time);
    emit_init(w);

    RunResult res;
    res.initial = initial;
    res.s_min = d.s_min;
    res.eps = d.eps;
    res.protocol = protocol;
    res.scheduler = "ssync";
    res.fairness_bound = d.fairness;

    std::vector<long> last_act(n, -1);
    long round = 0;
    while (true) {
        w.clock = static_cast<double>(round);
        for (int i = 0; i < n; ++i) {
            RobotState& r = w.robots[i];
            if (!r.crashed && r.crash_time <= w.clock) {
                r.crashed = true;
                TraceEvent ev;
                ev.t = w.clock;
                ev.robot = i;
                ev.kind = EventKind::crash;
                ev.pos = r.pos;
                w.history.push_back(ev);
            }
        }
        if (stable_gathered(w, protocol, n, w.clock, d.eps, d.s_min)) {
            res.outcome = RunOutcome::gathered;
            res.end_time = w.clock;
            break;
        }
        if (round >= budget_rounds) {
            res.outcome = RunOutcome::budget_exhausted;
            res.end_time = w.clock;
            break;
        }

        std::vector<int> alive;
        for (int i = 0; i < n; ++i)
            if (!w.robots[i].crashed) alive.push_back(i);

        std::vector<int> subset = adv.select_round(round, alive);
        for (int i : alive)
            if (round - last_act[i] >= static_cast<long>(d.fairness))
                subset.push_back(i);
        std::sort(subset.begin(), subset.end());
        subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
        subset.erase(std::remove_if(subset.begin(), subset.end(),
                                    [&](int i) { return w.robots[i].crashed; }),
                     subset.end());
        if (subset.empty()) subset.push_back(alive.front());

        TraceEvent rs;
        rs.t = w.clock;
        rs.kind = EventKind::round_start;
        w.history.push_back(rs);

        Snapshot snap = world_snapshot(w, w.clock);
        for (int i : subset) {
            TraceEvent ev;
            ev.t = w.clock;
            ev.robot = i;
            ev.kind = EventKind::look;
            ev.pos = w.robots[i].pos;
            w.history.push_back(ev);
        }

        std::vector<MoveCommand> cmds;
        cmds.reserve(subset.size());
        bool failed = false;
        for (int i : subset) {
            try {
                cmds.push_back(compute(protocol, snap, w.robots[i].pos, n, d.eps, d.s_min));
            } catch (const std::exception& e) {
                res.outcome = RunOutcome::protocol_error;
                res.end_time = w.clock;
                res.message = e.what();
                failed = true;
                break;
            }
        }
        if (failed) break;

        for (size_t s = 0; s < subset.size(); ++s) {
            int i = subset[s];
            last_act[i] = round;
            const MoveCommand& cmd = cmds[s];
            if (cmd.stay) continue;
            double traveled = truncate_move(cmd.path, adv, d.s_min);
            Point newpos = point_along_path(cmd.path, traveled);
            if (distance(newpos, cmd.destination) <= d.eps) newpos = cmd.destination;
            w.history.push_back(move_start_event(w.clock, i, w.robots[i].pos, cmd));
            TraceEvent me;
            me.t = w.clock;
            me.robot = i;
            me.kind = EventKind::move_end;
            me.pos = newpos;
            me.traveled = traveled;
            w.history.push_back(me);
            w.robots[i].pos = newpos;
        }

        TraceEvent re;
        re.t = w.clock;
        re.kind = EventKind::round_end;
        w.history.push_back(re);
        ++round;
    }
    res.trace = std::move(w.history);
    return res;
}

namespace {

struct QueuedEvent {
    double t;
    int rank;  // 0 crash, 1 move_end, 2 activation
    long seq;
    int robot;

    bool operator>(const QueuedEvent& o) const {
        if (t != o.t) return t > o.t;
        if (rank != o.rank) return rank > o.rank;
        return seq > o.seq;
    }
};

}  // namespace

RunResult run_async_ic(const Snapshot& initial, ProtocolKind protocol, Adversary& adv,
                       double budget_time, const EngineConfig& cfg) {
    int n = static_cast<int>(initial.size());
    Defaults d = resolve_defaults(initial, cfg, /*ssync=*/false);

    if (protocol == ProtocolKind::async_gather) {
        ConfigClass cc = classify(initial, n, d.eps);
        if (is_starred(cc.tag) && cc.symmetric) throw InadmissibleConfigurationError();
    }

    WorldState w;
    w.s_min = d.s_min;
    w.eps = d.eps;
    for (Point p : initial.positions) {
        RobotState r;
        r.pos = p;
        w.robots.push_back(r);
    }
    emit_init(w);

    RunResult res;
    res.initial = initial;
    res.s_min = d.s_min;
    res.eps = d.eps;
    res.protocol = protocol;
    res.scheduler = "async_ic";
    res.fairness_bound = d.fairness;

    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> q;
    long seq = 0;
    for (const CrashEntry& c : cfg.crashes) {
        w.robots.at(c.robot).crash_time =
            std::min(w.robots.at(c.robot).crash_time, c.time);
        q.push({c.time, 0, seq++, c.robot});
    }
    for (int i = 0; i < n; ++i) {
        double t0 = std::clamp(adv.initial_activation(i), 0.0, d.fairness);
        q.push({t0, 2, seq++, i});
    }

    if (stable_gathered(w, protocol, n, 0.0, d.eps, d.s_min)) {
        res.outcome = RunOutcome::gathered;
        res.end_time = 0.0;
        res.trace = std::move(w.history);
        return res;
    }

    while (!q.empty()) {
        QueuedEvent ev = q.top();
        q.pop();
        if (ev.t > budget_time) {
            res.outcome = RunOutcome::budget_exhausted;
            res.end_time = budget_time;
            break;
        }
        w.clock = ev.t;
        RobotState& r = w.robots[ev.robot];

        if (ev.rank == 0) {  // crash
            if (r.crashed) continue;
            r.pos = current_position(r, ev.t);
            r.flight.reset();
            r.crashed = true;
            TraceEvent te;
            te.t = ev.t;
            te.robot = ev.robot;
            te.kind = EventKind::crash;
            te.pos = r.pos;
            w.history.push_back(te);
        } else if (ev.rank == 1) {  // move_end
            if (r.crashed || !r.flight) continue;
            if (r.flight->start_time + r.flight->planned > ev.t + 1e-12) continue;
            double traveled = r.flight->planned;
            Point endpos = point_along_path(r.flight->path, traveled);
            if (r.flight->snap_to && distance(endpos, *r.flight->snap_to) <= d.eps)
                endpos = *r.flight->snap_to;
            double duration = traveled;
            r.pos = endpos;
            r.flight.reset();
            TraceEvent te;
            te.t = ev.t;
            te.robot = ev.robot;
            te.kind = EventKind::move_end;
            te.pos = endpos;
            te.traveled = traveled;
            w.history.push_back(te);
            double idle = std::clamp(adv.idle_time(duration, d.fairness), 0.0,
                                     std::max(0.0, d.fairness - duration));
            q.push({ev.t + idle, 2, seq++, ev.robot});
        } else {  // activation
            if (r.crashed || r.flight) continue;
            Snapshot snap = world_snapshot(w, ev.t);
            MoveCommand cmd;
            try {
                cmd = compute(protocol, snap, r.pos, n, d.eps, d.s_min);
            } catch (const std::exception& e) {
                res.outcome = RunOutcome::protocol_error;
                res.end_time = ev.t;
                res.message = e.what();
                res.trace = std::move(w.history);
                return res;
            }
            TraceEvent lk;
            lk.t = ev.t;
            lk.robot = ev.robot;
            lk.kind = EventKind::look;
            lk.pos = r.pos;
            w.history.push_back(lk);
            if (cmd.stay) {
                double idle = adv.idle_time(0.0, d.fairness);
                if (idle <= 1e-9) idle = 0.5 * d.fairness;
                q.push({ev.t + std::min(idle, d.fairness), 2, seq++, ev.robot});
            } else {
                double planned = truncate_move(cmd.path, adv, d.s_min);
                r.flight = InFlight{cmd.path, planned, ev.t,
                                    cmd.extent == MoveExtent::full
                                        ? std::optional<Point>(cmd.destination)
                                        : std::nullopt};
                w.history.push_back(move_start_event(ev.t, ev.robot, r.pos, cmd));
                q.push({ev.t + planned, 1, seq++, ev.robot});
            }
        }

        if (stable_gathered(w, protocol, n, ev.t, d.eps, d.s_min)) {
            res.outcome = RunOutcome::gathered;
            res.end_time = ev.t;
            break;
        }
    }
    res.trace = std::move(w.history);
    return res;
}

RunResult run_scripted_async(const Snapshot& initial, const std::vector<ScriptStep>& script,
                             const EngineConfig& cfg) {
    Defaults d = resolve_defaults(initial, cfg, /*ssync=*/false);
    WorldState w;
    w.s_min = d.s_min;
    w.eps = d.eps;
    for (Point p : initial.positions) {
        RobotState r;
        r.pos = p;
        w.robots.push_back(r);
    }
    emit_init(w);

    struct Item {
        double t;
        int kind;  // 0 look, 1 move_start, 2 move_end
        size_t step;
    };
    std::vector<Item> items;
    for (size_t i = 0; i < script.size(); ++i) {
        items.push_back({script[i].t_look, 0, i});
        items.push_back({script[i].t_move_start, 1, i});
        items.push_back({script[i].t_move_end, 2, i});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.kind != b.kind) return a.kind > b.kind;  // end moves before new looks
        return a.step < b.step;
    });

    // Scripted flights move at whatever speed covers the segment in time.
    std::vector<std::optional<size_t>> active(w.robots.size());
    std::vector<Point> move_from(script.size());
    auto pos_at = [&](int robot, double t) {
        if (active[robot]) {
            const ScriptStep& st = script[*active[robot]];
            double span = st.t_move_end - st.t_move_start;
            double f = span > 0.0 ? std::clamp((t - st.t_move_start) / span, 0.0, 1.0)
                                  : 1.0;
            Point a = move_from[*active[robot]];
            return Point{a.x + (st.dest.x - a.x) * f, a.y + (st.dest.y - a.y) * f};
        }
        return w.robots[robot].pos;
    };

    for (const Item& it : items) {
        const ScriptStep& st = script[it.step];
        w.clock = it.t;
        TraceEvent ev;
        ev.t = it.t;
        ev.robot = st.robot;
        if (it.kind == 0) {
            ev.kind = EventKind::look;
            ev.pos = pos_at(st.robot, it.t);
        } else if (it.kind == 1) {
            Point from = pos_at(st.robot, it.t);
            w.robots[st.robot].pos = from;
            move_from[it.step] = from;
            active[st.robot] = it.step;
            ev.kind = EventKind::move_start;
            ev.pos = from;
            ev.dest = st.dest;
            ev.style = PathStyle::straight;
            ev.extent = MoveExtent::full;
        } else {
            active[st.robot].reset();
            w.robots[st.robot].pos = st.dest;
            ev.kind = EventKind::move_end;
            ev.pos = st.dest;
            ev.traveled = distance(move_from[it.step], st.dest);
        }
        w.history.push_back(ev);
    }

    RunResult res;
    res.initial = initial;
    res.s_min = d.s_min;
    res.eps = d.eps;
    res.scheduler = "scripted_async";
    res.end_time = items.empty() ? 0.0 : items.back().t;
    bool coincide = true;
    for (size_t i = 1; i < w.robots.size(); ++i)
        if (distance(w.robots[i].pos, w.robots[0].pos) > d.eps) coincide = false;
    res.outcome = coincide ? RunOutcome::gathered : RunOutcome::budget_exhausted;
    res.trace = std::move(w.history);
    return res;
}

}  // namespace gathersim
