#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "gathersim/monitor.hpp"

using namespace gathersim;

namespace {

Point on_circle(double deg, double r = 1.0) {
    return {r * std::cos(deg * kPi / 180.0), r * std::sin(deg * kPi / 180.0)};
}

Snapshot triangle_plus_interior() {
    Snapshot s;
    for (double deg : {90.0, 210.0, 330.0}) s.positions.push_back(on_circle(deg));
    s.positions.push_back({0.2, 0.1});
    s.positions.push_back({-0.3, 0.15});
    s.positions.push_back({0.1, -0.35});
    s.positions.push_back({-0.05, 0.4});
    return s;
}

RunResult ssync_run(const Snapshot& s, const std::string& adversary, uint64_t seed,
                    EngineConfig cfg = {}, long budget = 10000) {
    auto adv = make_adversary({.kind = adversary}, seed);
    return run_ssync(s, ProtocolKind::gather_k, *adv, budget, cfg);
}

TraceEvent ev(double t, int robot, EventKind kind, Point pos) {
    TraceEvent e;
    e.t = t;
    e.robot = robot;
    e.kind = kind;
    e.pos = pos;
    return e;
}

}  // namespace

TEST_CASE("lemma2_bound closed form") {
    // r=1, delta=0.5: 0.25 + 0.5*sqrt(1.75)
    CHECK(lemma2_bound(1.0, 0.5) == doctest::Approx(0.911437827766).epsilon(1e-9));
    CHECK(lemma2_bound(1.0, 0.0) == doctest::Approx(1.0));
    // delta = r: the mover reached the center
    CHECK(lemma2_bound(1.0, 1.0) == doctest::Approx(0.5 * std::sqrt(2.0)));
}

TEST_CASE("arc_progress_floor closed form") {
    CHECK(arc_progress_floor(1.0, 0.1) ==
          doctest::Approx(4.99583472197e-3).epsilon(1e-9));
    // a straight radial mover covers S, far above the floor
    CHECK(0.1 >= arc_progress_floor(1.0, 0.1));
}

TEST_CASE("radius_monotone passes on a benign run and reports samples") {
    RunResult res = ssync_run(triangle_plus_interior(), "uniform_random", 3);
    REQUIRE(res.outcome == RunOutcome::gathered);
    std::vector<RadiusSample> samples;
    CheckResult c = check_radius_monotone(res, &samples);
    CHECK(c.pass);
    for (const RadiusSample& s : samples) CHECK(s.radius_after < s.radius_before);
}

TEST_CASE("radius_monotone fails on a fabricated radius increase") {
    Snapshot initial{{{0, 0}, {1, 0}, {0.5, 0.4}}};
    RunResult res;
    res.initial = initial;
    res.scheduler = "ssync";
    res.protocol = ProtocolKind::gather_k;
    res.eps = eps_for(1.0);
    res.s_min = 0.05;
    res.outcome = RunOutcome::budget_exhausted;
    res.end_time = 1.0;
    Trace& t = res.trace;
    for (int i = 0; i < 3; ++i) t.push_back(ev(0, i, EventKind::init, initial.positions[i]));
    t.push_back(ev(0, -1, EventKind::round_start, {}));
    t.push_back(ev(0, 0, EventKind::look, {0, 0}));
    TraceEvent ms = ev(0, 0, EventKind::move_start, {0, 0});
    ms.dest = Point{-1.5, 0};
    ms.style = PathStyle::straight;
    ms.extent = MoveExtent::full;
    t.push_back(ms);
    TraceEvent me = ev(0, 0, EventKind::move_end, {-1.5, 0});
    me.traveled = 1.5;
    t.push_back(me);
    t.push_back(ev(0, -1, EventKind::round_end, {}));
    CheckResult c = check_radius_monotone(res);
    CHECK_FALSE(c.pass);
    CHECK(c.witness.has_value());
}

TEST_CASE("radius_monotone is vacuous when the center never moves") {
    // all robots already gathered: no rounds at all
    Snapshot s{{{1, 1}, {1, 1}, {1, 1}}};
    RunResult res = ssync_run(s, "benign", 0);
    CHECK(res.outcome == RunOutcome::gathered);
    CheckResult c = check_radius_monotone(res);
    CHECK(c.pass);
    CHECK(c.samples == 0);
}

TEST_CASE("lemma2 bound holds on seeded runs") {
    for (uint64_t seed : {1, 2, 3, 4, 5}) {
        RunResult res = ssync_run(triangle_plus_interior(), "uniform_random", seed);
        REQUIRE(res.outcome == RunOutcome::gathered);
        std::vector<RadialMoveSample> samples;
        CheckResult c = check_lemma2_bound(res, &samples);
        CHECK(c.pass);
        CHECK(!samples.empty());
    }
}

TEST_CASE("lemma2 worst case construction achieves the bound") {
    double x = (std::sqrt(7.0) - 1.0) / 4.0;
    double y = std::sqrt(1.0 - x * x);
    Snapshot s{{{-1, 0}, {x, y}, {x, -y}}};
    EngineConfig cfg;
    cfg.crashes = {{1, 0.0}, {2, 0.0}};
    AdversaryConfig spec;
    spec.kind = "scripted";
    spec.activations = {{0}};
    spec.stops = {0.5};
    auto adv = make_adversary(spec, 0);
    RunResult res = run_ssync(s, ProtocolKind::gather_k, *adv, 2, cfg);
    std::vector<RadialMoveSample> samples;
    CheckResult c = check_lemma2_bound(res, &samples);
    CHECK(c.pass);
    REQUIRE(!samples.empty());
    const RadialMoveSample& m = samples.front();
    CHECK(m.delta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.radius == doctest::Approx(1.0).epsilon(1e-9));
    // the moved robot lands exactly on the next SEC at the bound distance
    CHECK(std::abs(m.next_dist - m.bound) <= 1e-6 * m.bound);
}

TEST_CASE("arc progress: semicircle worst case achieves equality") {
    Snapshot s{{{-2, 0}, {1, 0}, {2, 0}}};
    EngineConfig cfg;
    cfg.crashes = {{0, 0.0}, {1, 0.0}};
    cfg.s_min = 0.1;
    auto adv = make_adversary({.kind = "greedy_minimal"}, 0);
    RunResult res = run_ssync(s, ProtocolKind::gather_k, *adv, 10000, cfg);
    REQUIRE(res.outcome == RunOutcome::gathered);
    std::vector<ArcMoveSample> samples;
    CheckResult c = check_arc_progress(res, &samples);
    CHECK(c.pass);
    REQUIRE(!samples.empty());
    const ArcMoveSample& m = samples.front();
    CHECK(m.radius == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(m.floor == doctest::Approx(2.0 * (1.0 - std::cos(0.05))).epsilon(1e-9));
    CHECK(std::abs(m.progress - m.floor) <= 1e-6 * m.floor);
}

TEST_CASE("arc progress holds across a blocked-chain run") {
    // chain robots first: the round-robin adversary activates them while the
    // exact collinearity still holds
    Snapshot s;
    for (double x : {1.0, 1.6, 2.3, 3.0}) s.positions.push_back({x, 0.0});
    for (double deg : {90.0, 210.0, 330.0}) s.positions.push_back(on_circle(deg, 4.0));
    EngineConfig cfg;
    cfg.s_min = 0.2;
    RunResult res;
    {
        auto adv = make_adversary({.kind = "greedy_minimal"}, 0);
        res = run_ssync(s, ProtocolKind::gather_k, *adv, 10000, cfg);
    }
    REQUIRE(res.outcome == RunOutcome::gathered);
    std::vector<ArcMoveSample> samples;
    CheckResult c = check_arc_progress(res, &samples);
    CHECK(c.pass);
    CHECK(!samples.empty());
    for (const ArcMoveSample& m : samples)
        CHECK(m.progress >= m.floor - 1e-9);
}

TEST_CASE("single multiplicity passes on gathering runs") {
    RunResult res = ssync_run(triangle_plus_interior(), "greedy_minimal", 0);
    REQUIRE(res.outcome == RunOutcome::gathered);
    CheckResult c = check_single_multiplicity(res);
    CHECK(c.pass);
    CHECK(c.applicable);
}

TEST_CASE("single multiplicity flags the scripted stale-look failure") {
    Snapshot s{{{0, 0}, {4, 0}, {0, 3}, {4, 3}}};
    std::vector<ScriptStep> script{
        {0, 0.0, 0.0, 2.0, {2, 0}},
        {1, 0.1, 0.1, 2.0, {2, 0}},
        {2, 0.2, 0.2, 2.0, {2, 3}},
        {3, 0.3, 0.3, 2.0, {2, 3}},
    };
    RunResult res = run_scripted_async(s, script);
    CheckResult c = check_single_multiplicity(res);
    CHECK(c.applicable);
    CHECK_FALSE(c.pass);
    CHECK(c.witness.has_value());
}

TEST_CASE("single multiplicity is not applicable to illegal starts") {
    Snapshot s{{{-1, 0}, {-1, 0}, {1, 0}, {1, 0}}};
    auto adv = make_adversary({.kind = "benign"}, 0);
    RunResult res = run_ssync(s, ProtocolKind::mirror_demo, *adv, 50);
    CheckResult c = check_single_multiplicity(res);
    CHECK_FALSE(c.applicable);
    CHECK(c.pass);
}

TEST_CASE("single multiplicity is vacuous for a single robot") {
    Snapshot s{{{0.5, 0.5}}};
    RunResult res = ssync_run(s, "benign", 0, {}, 10);
    CHECK(res.outcome == RunOutcome::gathered);
    CheckResult c = check_single_multiplicity(res);
    CHECK(c.pass);
}

TEST_CASE("sec invariant passes on async runs and fails under fault injection") {
    Snapshot s = triangle_plus_interior();
    auto adv = make_adversary({.kind = "uniform_random"}, 301);
    RunResult res = run_async_ic(s, ProtocolKind::async_gather, *adv, 10000.0);
    REQUIRE(res.outcome == RunOutcome::gathered);
    CheckResult good = check_sec_invariant(res);
    CHECK(good.pass);
    CHECK(good.samples > 0);

    // forcibly teleport a boundary robot right after the init prefix
    RunResult bad = res;
    TraceEvent teleport = ev(0.0, 0, EventKind::move_end, {2.0, 2.0});
    teleport.traveled = 0.0;
    bad.trace.insert(bad.trace.begin() + 7, teleport);
    CheckResult c = check_sec_invariant(bad);
    CHECK_FALSE(c.pass);
}

TEST_CASE("sec invariant is vacuous for a run starting at a multiplicity") {
    Snapshot s = triangle_plus_interior();
    s.positions.push_back({0.2, 0.1});  // duplicate an interior robot
    auto adv = make_adversary({.kind = "uniform_random"}, 9);
    RunResult res = run_async_ic(s, ProtocolKind::async_gather, *adv, 10000.0);
    REQUIRE(res.outcome == RunOutcome::gathered);
    CheckResult c = check_sec_invariant(res);
    CHECK(c.pass);
    CHECK(c.samples == 0);
}

TEST_CASE("transition graph: equal-occupancy class appears only initially") {
    Snapshot s;
    for (double deg : {0.0, 55.0, 123.0, 178.0, 240.0, 297.0})
        s.positions.push_back(on_circle(deg));
    s.positions.push_back(on_circle(27.5, 0.4));
    s.positions.push_back(on_circle(150.5, 0.5));
    s.positions.push_back(on_circle(268.5, 0.6));
    double eps = eps_for(1.0);
    REQUIRE(classify(s, 9, eps).tag == ConfigTag::C12);
    REQUIRE_FALSE(detect_symmetry(s, eps));
    auto adv = make_adversary({.kind = "uniform_random"}, 77);
    RunResult res = run_async_ic(s, ProtocolKind::async_gather, *adv, 10000.0);
    REQUIRE(res.outcome == RunOutcome::gathered);
    CheckResult c = check_transition_graph(res);
    CHECK(c.pass);
    CheckResult sec = check_sec_invariant(res);
    CHECK(sec.pass);
}

TEST_CASE("transition graph: starting at a multiplicity stays in Mult") {
    Snapshot s = triangle_plus_interior();
    s.positions.push_back({0.2, 0.1});
    auto adv = make_adversary({.kind = "uniform_random"}, 5);
    RunResult res = run_async_ic(s, ProtocolKind::async_gather, *adv, 10000.0);
    REQUIRE(res.outcome == RunOutcome::gathered);
    CHECK(check_transition_graph(res).pass);
}

TEST_CASE("transition graph fails when the budget cuts the run short") {
    Snapshot s = triangle_plus_interior();
    auto adv = make_adversary({.kind = "uniform_random"}, 301);
    RunResult res = run_async_ic(s, ProtocolKind::async_gather, *adv, 0.4);
    REQUIRE(res.outcome == RunOutcome::budget_exhausted);
    CHECK_FALSE(check_transition_graph(res).pass);
}

TEST_CASE("fairness audit passes engine runs and flags a starved robot") {
    RunResult res = ssync_run(triangle_plus_interior(), "greedy_minimal", 0);
    CHECK(check_fairness(res, 0.0).pass);

    RunResult starved;
    starved.initial = Snapshot{{{0, 0}, {1, 0}}};
    starved.scheduler = "ssync";
    starved.protocol = ProtocolKind::gather_k;
    starved.eps = 1e-9;
    starved.fairness_bound = 10.0;
    starved.end_time = 30.0;
    starved.trace.push_back(ev(0, 0, EventKind::init, {0, 0}));
    starved.trace.push_back(ev(0, 1, EventKind::init, {1, 0}));
    starved.trace.push_back(ev(0, 0, EventKind::look, {0, 0}));
    CheckResult c = check_fairness(starved, 0.0);
    CHECK_FALSE(c.pass);
}

TEST_CASE("wait freedom audit flags an activated robot that never moved") {
    RunResult res = ssync_run(triangle_plus_interior(), "uniform_random", 12);
    CHECK(check_wait_freedom(res).pass);

    RunResult lazy;
    lazy.initial = Snapshot{{{0, 0}, {2, 0}, {1, 1.5}}};
    lazy.scheduler = "ssync";
    lazy.protocol = ProtocolKind::gather_k;
    lazy.eps = 1e-9;
    lazy.end_time = 1.0;
    for (int i = 0; i < 3; ++i)
        lazy.trace.push_back(ev(0, i, EventKind::init, lazy.initial.positions[i]));
    lazy.trace.push_back(ev(0, -1, EventKind::round_start, {}));
    lazy.trace.push_back(ev(0, 0, EventKind::look, {0, 0}));
    lazy.trace.push_back(ev(0, -1, EventKind::round_end, {}));
    CheckResult c = check_wait_freedom(lazy);
    CHECK_FALSE(c.pass);
}

TEST_CASE("standard report is idempotent and serializes") {
    RunResult res = ssync_run(triangle_plus_interior(), "uniform_random", 31);
    InvariantReport r1 = standard_report(res);
    InvariantReport r2 = standard_report(res);
    REQUIRE(r1.checks.size() == r2.checks.size());
    for (size_t i = 0; i < r1.checks.size(); ++i) {
        CHECK(r1.checks[i].pass == r2.checks[i].pass);
        CHECK(r1.checks[i].samples == r2.checks[i].samples);
        CHECK(r1.checks[i].measured == r2.checks[i].measured);
    }
    std::string json = report_to_json(r1);
    CHECK(json.find("\"checks\"") != std::string::npos);
    CHECK(report_to_json(r2) == json);
}
