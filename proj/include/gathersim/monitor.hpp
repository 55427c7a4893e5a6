#pragma once

// Post-hoc invariant checking over traces. Every check is a pure function of
// a finished run; re-checking is idempotent and checks are independent.

#include <optional>
#include <string>
#include <vector>

#include "gathersim/engine.hpp"

namespace gathersim {

struct CheckWitness {
    double t_from = 0.0;
    double t_to = 0.0;
    int robot = -1;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    bool applicable = true;  // false: precondition absent, vacuous pass
    std::optional<double> measured;
    std::optional<CheckWitness> witness;
    long samples = 0;
    std::string detail;
};

struct InvariantReport {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

std::string report_to_json(const InvariantReport& report);

// Whenever the SEC center moves between consecutive cycles (pre-multiplicity,
// SSYNC), the SEC radius strictly decreases.
struct RadiusSample {
    long round = 0;
    double center_move = 0.0;
    double radius_before = 0.0;
    double radius_after = 0.0;
};
CheckResult check_radius_monotone(const RunResult& run,
                                  std::vector<RadiusSample>* samples = nullptr);

// A robot that moved radially by delta toward the center of a radius-r SEC is
// at distance at most (r-d)/2 + sqrt((r+d)^2 - 2d^2)/2 from the next center.
double lemma2_bound(double r, double delta);
struct RadialMoveSample {
    long round = 0;
    int robot = -1;
    double delta = 0.0;
    double radius = 0.0;
    double bound = 0.0;
    double next_dist = 0.0;
};
CheckResult check_lemma2_bound(const RunResult& run,
                               std::vector<RadialMoveSample>* samples = nullptr);

// A robot that covered arc length exactly S on a circular path gained at
// least r(1 - cos(S/r)) of radial progress toward the SEC center.
double arc_progress_floor(double r, double s);
struct ArcMoveSample {
    double t = 0.0;
    int robot = -1;
    double radius = 0.0;
    double progress = 0.0;
    double floor = 0.0;
};
CheckResult check_arc_progress(const RunResult& run,
                               std::vector<ArcMoveSample>* samples = nullptr);

// At every event time there is at most one multiplicity point, and once
// formed its location never changes. Requires a legal initial snapshot.
CheckResult check_single_multiplicity(const RunResult& run);

// The SEC of the initial configuration stays the SEC of every configuration
// until the first multiplicity point forms (async_gather traces).
CheckResult check_sec_invariant(const RunResult& run);

// Equal-occupancy classes appear only in the initial configuration and the
// run ends at a multiplicity followed by gathering (async_gather traces).
CheckResult check_transition_graph(const RunResult& run);

// Scheduler audit: no non-crashed robot ever waits longer than the fairness
// bound between looks.
CheckResult check_fairness(const RunResult& run, double fairness_bound);

// Wait-freedom audit for gather_k traces: an activated robot away from the
// destination always records a positive move.
CheckResult check_wait_freedom(const RunResult& run);

// The checks applicable to this run's protocol and scheduler.
InvariantReport standard_report(const RunResult& run, double fairness_bound = 0.0);

}  // namespace gathersim
