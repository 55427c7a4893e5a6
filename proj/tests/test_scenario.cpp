#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "gathersim/monitor.hpp"
#include "gathersim/render.hpp"
#include "gathersim/scenario.hpp"

using namespace gathersim;

namespace {

const char* kBundled[] = {
    "ssync_n3_f2",    "fig4_chain",     "impossibility_two_mult",
    "fig5_async_script", "fig8_c0_asym", "fig8_c1k_asym",
    "fig8_c12_asym",  "fig8_c12p1k_asym", "async_n7_k3",
};

std::string scenario_path(const std::string& name) {
    return std::string(SCENARIO_DIR) + "/" + name + ".json";
}

Point on_circle(double deg, double r = 1.0) {
    return {r * std::cos(deg * kPi / 180.0), r * std::sin(deg * kPi / 180.0)};
}

struct ParsedArc {
    double x0, y0, r, x1, y1;
    int large, sweep;
};

// Pull every flight arc path out of an SVG document.
std::vector<ParsedArc> parse_flight_arcs(const std::string& svg) {
    std::vector<ParsedArc> out;
    size_t pos = 0;
    while ((pos = svg.find("class=\"flight\"", pos)) != std::string::npos) {
        size_t d = svg.find("d=\"M ", pos);
        size_t line_end = svg.find('\n', pos);
        pos += 10;
        if (d == std::string::npos || d > line_end) continue;
        ParsedArc a{};
        double r2 = 0.0;
        if (std::sscanf(svg.c_str() + d, "d=\"M %lf %lf A %lf %lf 0 %d %d %lf %lf",
                        &a.x0, &a.y0, &a.r, &r2, &a.large, &a.sweep, &a.x1,
                        &a.y1) == 8)
            out.push_back(a);
    }
    return out;
}

}  // namespace

TEST_CASE("bundled scenarios parse, validate and round-trip") {
    for (const char* name : kBundled) {
        CAPTURE(name);
        Scenario sc = load_scenario(scenario_path(name));
        REQUIRE_NOTHROW(validate_scenario(sc));
        std::string text = scenario_to_json(sc);
        Scenario back = scenario_from_json(text);
        REQUIRE(back == sc);
        REQUIRE(scenario_to_json(back) == text);
    }
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(scenario_from_json("{ not json"), ScenarioError);
    CHECK_THROWS_AS(scenario_from_json("[1,2,3]"), ScenarioError);
    CHECK_THROWS_AS(scenario_from_json("{\"robots\": [[0,0]], \"bogus\": 1}"),
                    ScenarioError);
    CHECK_THROWS_AS(scenario_from_json("{\"robots\": \"zero\"}"), ScenarioError);

    Scenario sc = load_scenario(scenario_path("ssync_n3_f2"));
    Scenario bad = sc;
    bad.crashes.push_back({9, 1.0});
    bad.fault_budget = 3;
    CHECK_THROWS_AS(validate_scenario(bad), ScenarioError);

    bad = sc;
    bad.fault_budget = 3;  // > n-1
    CHECK_THROWS_AS(validate_scenario(bad), ScenarioError);

    bad = sc;
    bad.scheduler = "async_ic";  // gather_k is an ssync protocol
    CHECK_THROWS_AS(validate_scenario(bad), ScenarioError);

    bad = sc;
    bad.initial.positions.resize(2);  // n < 3
    CHECK_THROWS_AS(validate_scenario(bad), ScenarioError);
}

TEST_CASE("async admissibility: the symmetric taxonomy classes are rejected") {
    Scenario sc;
    sc.name = "symmetric_c1k";
    for (int i = 0; i < 6; ++i) sc.initial.positions.push_back(on_circle(60.0 * i));
    sc.initial.positions.push_back({0, 0});
    sc.scheduler = "async_ic";
    sc.protocol = "async_gather";
    sc.budget = 100;
    CHECK_THROWS_AS(validate_scenario(sc), ScenarioError);
    // the asymmetric variant passes
    Scenario ok = load_scenario(scenario_path("fig8_c1k_asym"));
    CHECK_NOTHROW(validate_scenario(ok));
}

TEST_CASE("fault budgets follow the scheduling mode") {
    Scenario sc = load_scenario(scenario_path("async_n7_k3"));
    CHECK_NOTHROW(validate_scenario(sc));
    sc.fault_budget = 2;  // floor(7/2) - 2 = 1
    CHECK_THROWS_AS(validate_scenario(sc), ScenarioError);
}

TEST_CASE("ssync_n3_f2 gathers with a clean report") {
    Scenario sc = load_scenario(scenario_path("ssync_n3_f2"));
    RunResult res = run_scenario(sc);
    CHECK(res.outcome == RunOutcome::gathered);
    InvariantReport report = standard_report(res);
    CHECK(report.all_pass());
}

TEST_CASE("impossibility scenario never drops below two occupied locations") {
    Scenario sc = load_scenario(scenario_path("impossibility_two_mult"));
    sc.budget = 300;
    RunResult res = run_scenario(sc);
    CHECK(res.outcome == RunOutcome::budget_exhausted);
    int rounds = 0;
    for (const TraceSample& sample : trace_positions(res.trace)) {
        if (res.trace[sample.event_index].kind != EventKind::round_start) continue;
        ++rounds;
        std::vector<Point> reps;
        for (Point p : sample.positions) {
            bool found = false;
            for (Point r : reps)
                if (distance(p, r) <= res.eps) found = true;
            if (!found) reps.push_back(p);
        }
        REQUIRE(reps.size() >= 2);
    }
    CHECK(rounds == 300);
}

TEST_CASE("the scripted stale-look demo violates single multiplicity") {
    Scenario sc = load_scenario(scenario_path("fig5_async_script"));
    RunResult res = run_scenario(sc);
    CheckResult c = check_single_multiplicity(res);
    CHECK(c.applicable);
    CHECK_FALSE(c.pass);
}

TEST_CASE("scenario runs are byte-deterministic") {
    Scenario sc = load_scenario(scenario_path("fig4_chain"));
    RunResult a = run_scenario(sc);
    RunResult b = run_scenario(sc);
    CHECK(a.outcome == RunOutcome::gathered);
    CHECK(trace_to_jsonl(a.trace) == trace_to_jsonl(b.trace));

    Scenario sc2 = load_scenario(scenario_path("async_n7_k3"));
    RunResult c = run_scenario(sc2);
    RunResult d = run_scenario(sc2);
    CHECK(c.outcome == RunOutcome::gathered);
    CHECK(trace_to_jsonl(c.trace) == trace_to_jsonl(d.trace));
}

TEST_CASE("render: frame count is ceil(events/every) and output is byte-stable") {
    Scenario sc = load_scenario(scenario_path("ssync_n3_f2"));
    RunResult res = run_scenario(sc);
    RenderOptions opts;
    opts.every = 3;
    auto frames = render_frames(res.trace, opts);
    size_t events = res.trace.size();
    CHECK(frames.size() == (events + 2) / 3);
    auto again = render_frames(res.trace, opts);
    REQUIRE(frames.size() == again.size());
    for (size_t i = 0; i < frames.size(); ++i) REQUIRE(frames[i] == again[i]);
}

TEST_CASE("render: empty trace renders zero frames") {
    CHECK(render_frames({}, {}).empty());
}

TEST_CASE("render: blocked-chain arcs re-parse consistently with the trace") {
    Scenario sc = load_scenario(scenario_path("fig4_chain"));
    RunResult res = run_scenario(sc);
    REQUIRE(res.outcome == RunOutcome::gathered);
    RenderOptions opts;
    opts.every = 1;
    auto frames = render_frames(res.trace, opts);
    REQUIRE(frames.size() == res.trace.size());

    int parsed_arcs = 0;
    for (size_t i = 0; i < res.trace.size(); ++i) {
        const TraceEvent& ev = res.trace[i];
        if (ev.kind != EventKind::move_start || !ev.arc) continue;
        auto arcs = parse_flight_arcs(frames[i]);
        REQUIRE(!arcs.empty());
        for (const ParsedArc& a : arcs) {
            ++parsed_arcs;
            // svg y axis is flipped on emission
            Point start{a.x0, -a.y0};
            Point end{a.x1, -a.y1};
            REQUIRE(a.r == doctest::Approx(ev.arc->radius).epsilon(1e-4));
            REQUIRE(distance(start, ev.pos) < 1e-4);
            REQUIRE(distance(end, *ev.dest) < 1e-4);
            // the arc lands on the common destination: the SEC center
            REQUIRE(norm(end) < 1e-4);
            // implied supporting circle passes through the destination
            REQUIRE(std::abs(distance(ev.arc->center, end) - a.r) < 1e-4);
        }
    }
    CHECK(parsed_arcs >= 3);
}

TEST_CASE("trace written as a json array holds the same objects as jsonl") {
    Scenario sc = load_scenario(scenario_path("ssync_n3_f2"));
    RunResult res = run_scenario(sc);
    std::string jsonl = trace_to_jsonl(res.trace);
    Trace back = trace_from_jsonl(jsonl);
    CHECK(back.size() == res.trace.size());
}
