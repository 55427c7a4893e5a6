#pragma once

// Ground-truth world simulation: SSYNC round scheduler, ASYNC_IC event-driven
// scheduler, crash-fault injection and Behavior-1 movement truncation, driven
// by pluggable adversaries. One engine invocation owns its WorldState; the
// produced trace is immutable afterwards.

#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gathersim/configuration.hpp"
#include "gathersim/protocols.hpp"

namespace gathersim {

enum class ProtocolKind { gather_k, async_gather, mirror_demo };

std::string to_string(ProtocolKind k);

enum class EventKind { init, round_start, round_end, look, move_start, move_end, crash };

std::string to_string(EventKind k);

struct ArcInfo {
    Point center;
    double radius = 0.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
    bool ccw = true;
};

struct TraceEvent {
    double t = 0.0;
    int robot = -1;
    EventKind kind = EventKind::init;
    Point pos;
    std::optional<Point> dest;       // move_start: endpoint of the commanded path
    std::optional<PathStyle> style;  // move_start
    std::optional<MoveExtent> extent;
    std::optional<ArcInfo> arc;      // move_start on a circular path
    std::optional<double> traveled;  // move_end
};

using Trace = std::vector<TraceEvent>;

std::string trace_to_jsonl(const Trace& trace);
Trace trace_from_jsonl(const std::string& text);

// Commanded path of a move_start event, reassembled from its fields.
Path event_path(const TraceEvent& ev);

// Ground-truth world after each event of a trace, replayed from the init
// events. In-flight robots are interpolated at the sample time (unit speed).
struct TraceSample {
    double t = 0.0;
    size_t event_index = 0;
    std::vector<Point> positions;
    // Set while a robot is between move_start and move_end: index of the
    // move_start event it is flying on.
    std::vector<std::optional<size_t>> flight_event;
};

std::vector<TraceSample> trace_positions(const Trace& trace);

struct InFlight {
    Path path;
    double planned = 0.0;     // distance the adversary lets this move cover
    double start_time = 0.0;  // unit speed: ends at start_time + planned
    std::optional<Point> snap_to;
};

struct RobotState {
    Point pos;
    bool crashed = false;
    double crash_time = std::numeric_limits<double>::infinity();
    std::optional<InFlight> flight;
};

struct WorldState {
    double clock = 0.0;
    std::vector<RobotState> robots;
    double s_min = 0.0;
    double eps = 0.0;
    Trace history;
};

// Position of the robot at time t, interpolating an in-flight path.
Point current_position(const RobotState& r, double t);

Snapshot world_snapshot(const WorldState& w, double t);

// Schedule a crash: from `time` on the robot is frozen at the position it
// holds at that instant. Applies immediately when time <= world.clock.
void inject_crash(WorldState& w, int robot, double time);

struct CrashEntry {
    int robot = 0;
    double time = 0.0;
};

// Behavior 1: a move shorter than s_min completes; otherwise the adversary
// picks the traveled distance anywhere in [s_min, path length].
class Adversary;
double truncate_move(const Path& path, Adversary& adv, double s_min);

class Adversary {
public:
    virtual ~Adversary() = default;
    // SSYNC: subset of `alive` (robot indices) to activate this round. The
    // engine enforces the fairness floor on top of the returned set.
    virtual std::vector<int> select_round(long round, const std::vector<int>& alive) = 0;
    // Chosen traveled distance for a path of the given length (> s_min).
    virtual double stop_distance(double path_len, double s_min) = 0;
    // ASYNC_IC: idle time after a cycle whose move took `move_duration`.
    virtual double idle_time(double move_duration, double fairness_bound) = 0;
    virtual double initial_activation(int robot) = 0;
};

struct AdversaryConfig {
    std::string kind = "benign";  // benign | uniform_random | greedy_minimal | scripted
    double fairness_bound = 0.0;  // 0: engine default
    // scripted only:
    std::vector<std::vector<int>> activations;  // cycled per round
    std::vector<double> stops;                  // consumed in order, last repeats
    bool stop_full = true;
};

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& cfg, uint64_t seed);

enum class RunOutcome { gathered, budget_exhausted, protocol_error };

std::string to_string(RunOutcome o);

struct RunResult {
    RunOutcome outcome = RunOutcome::budget_exhausted;
    double end_time = 0.0;
    Trace trace;
    Snapshot initial;
    double s_min = 0.0;
    double eps = 0.0;
    ProtocolKind protocol = ProtocolKind::gather_k;
    std::string scheduler;  // ssync | async_ic | scripted_async
    double fairness_bound = 0.0;
    std::string message;
};

struct EngineConfig {
    double s_min = 0.0;          // 0: 0.05 x initial SEC radius
    double eps = 0.0;            // 0: eps_for(initial SEC radius)
    double fairness_bound = 0.0; // 0: max(10, 2n) rounds / 10 time units
    std::vector<CrashEntry> crashes;
};

// Semi-synchronous rounds: every activated robot completes one atomic
// look-compute-move cycle per round; all activated robots of a round see the
// identical snapshot.
RunResult run_ssync(const Snapshot& initial, ProtocolKind protocol, Adversary& adv,
                    long budget_rounds, const EngineConfig& cfg = {});

// ASYNC_IC: look+compute are instantaneous, movement takes time at unit
// speed, activations interleave under the fairness bound. Rejects symmetric
// equal-occupancy initial configurations (InadmissibleConfigurationError).
RunResult run_async_ic(const Snapshot& initial, ProtocolKind protocol, Adversary& adv,
                       double budget_time, const EngineConfig& cfg = {});

// Scripted full-ASYNC replay (demo-only): explicit look / move windows with
// dictated destinations, used to reproduce stale-look failures.
struct ScriptStep {
    int robot = 0;
    double t_look = 0.0;
    double t_move_start = 0.0;
    double t_move_end = 0.0;
    Point dest;
};

RunResult run_scripted_async(const Snapshot& initial, const std::vector<ScriptStep>& script,
                             const EngineConfig& cfg = {});

}  // namespace gathersim
