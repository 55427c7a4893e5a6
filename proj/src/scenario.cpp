#include "gathersim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gathersim {

using nlohmann::json;

bool Scenario::operator==(const Scenario& o) const {
    auto script_eq = [&] {
        if (script.size() != o.script.size()) return false;
        for (size_t i = 0; i < script.size(); ++i) {
            const ScriptStep &a = script[i], &b = o.script[i];
            if (a.robot != b.robot || a.t_look != b.t_look ||
                a.t_move_start != b.t_move_start || a.t_move_end != b.t_move_end ||
                !(a.dest == b.dest))
                return false;
        }
        return true;
    };
    auto crashes_eq = [&] {
        if (crashes.size() != o.crashes.size()) return false;
        for (size_t i = 0; i < crashes.size(); ++i)
            if (crashes[i].robot != o.crashes[i].robot ||
                crashes[i].time != o.crashes[i].time)
                return false;
        return true;
    };
    return name == o.name && initial.positions == o.initial.positions &&
           scheduler == o.scheduler && protocol == o.protocol &&
           adversary.kind == o.adversary.kind &&
           adversary.fairness_bound == o.adversary.fairness_bound &&
           adversary.activations == o.adversary.activations &&
           adversary.stops == o.adversary.stops &&
           adversary.stop_full == o.adversary.stop_full && s_min == o.s_min &&
           seed == o.seed && budget == o.budget && fault_budget == o.fault_budget &&
           expect == o.expect && crashes_eq() && script_eq();
}

ProtocolKind protocol_kind(const std::string& name) {
    if (name == "gather_k") return ProtocolKind::gather_k;
    if (name == "async_gather") return ProtocolKind::async_gather;
    if (name == "mirror_demo") return ProtocolKind::mirror_demo;
    throw ScenarioError("unknown protocol: " + name);
}

namespace {

const std::set<std::string> kTopKeys = {
    "name",   "robots", "scheduler", "protocol", "adversary", "s_min",
    "seed",   "budget", "f",         "crashes",  "expect",    "script"};

const std::set<std::string> kAdvKeys = {"kind", "fairness_bound", "activations",
                                        "stops", "stop_full"};

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

double number_at(const json& j, const char* key) {
    if (!j.at(key).is_number()) fail(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("scenario must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!kTopKeys.count(it.key())) fail("unknown scenario field: " + it.key());
    }
    Scenario sc;
    if (j.contains("name")) sc.name = j["name"].get<std::string>();
    if (!j.contains("robots")) fail("missing field 'robots'");
    try {
        sc.initial = snapshot_from_json(j["robots"].dump());
    } catch (const std::exception& e) {
        fail(std::string("bad 'robots': ") + e.what());
    }
    if (j.contains("scheduler")) sc.scheduler = j["scheduler"].get<std::string>();
    if (j.contains("protocol")) sc.protocol = j["protocol"].get<std::string>();
    if (j.contains("adversary")) {
        const json& a = j["adversary"];
        if (!a.is_object()) fail("'adversary' must be an object");
        for (auto it = a.begin(); it != a.end(); ++it)
            if (!kAdvKeys.count(it.key())) fail("unknown adversary field: " + it.key());
        if (a.contains("kind")) sc.adversary.kind = a["kind"].get<std::string>();
        if (a.contains("fairness_bound"))
            sc.adversary.fairness_bound = number_at(a, "fairness_bound");
        if (a.contains("activations"))
            sc.adversary.activations =
                a["activations"].get<std::vector<std::vector<int>>>();
        if (a.contains("stops")) sc.adversary.stops = a["stops"].get<std::vector<double>>();
        if (a.contains("stop_full")) sc.adversary.stop_full = a["stop_full"].get<bool>();
    }
    if (j.contains("s_min")) sc.s_min = number_at(j, "s_min");
    if (j.contains("seed")) sc.seed = j["seed"].get<uint64_t>();
    if (j.contains("budget")) sc.budget = number_at(j, "budget");
    if (j.contains("f")) sc.fault_budget = j["f"].get<int>();
    if (j.contains("crashes")) {
        for (const auto& c : j["crashes"]) {
            if (!c.is_array() || c.size() != 2) fail("crash entries are [robot, time]");
            sc.crashes.push_back({c[0].get<int>(), c[1].get<double>()});
        }
    }
    if (j.contains("expect")) sc.expect = j["expect"].get<std::string>();
    if (j.contains("script")) {
        for (const auto& st : j["script"]) {
            ScriptStep step;
            step.robot = st.at("robot").get<int>();
            step.t_look = st.at("look").get<double>();
            step.t_move_start = st.at("move_start").get<double>();
            step.t_move_end = st.at("move_end").get<double>();
            auto d = st.at("dest");
            step.dest = {d.at(0).get<double>(), d.at(1).get<double>()};
            sc.script.push_back(step);
        }
    }
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    json robots = json::array();
    for (Point p : sc.initial.positions) robots.push_back({p.x, p.y});
    j["robots"] = robots;
    j["scheduler"] = sc.scheduler;
    j["protocol"] = sc.protocol;
    json a;
    a["kind"] = sc.adversary.kind;
    if (sc.adversary.fairness_bound > 0.0)
        a["fairness_bound"] = sc.adversary.fairness_bound;
    if (!sc.adversary.activations.empty()) a["activations"] = sc.adversary.activations;
    if (!sc.adversary.stops.empty()) a["stops"] = sc.adversary.stops;
    if (!sc.adversary.stop_full) a["stop_full"] = sc.adversary.stop_full;
    j["adversary"] = a;
    if (sc.s_min > 0.0) j["s_min"] = sc.s_min;
    j["seed"] = sc.seed;
    j["budget"] = sc.budget;
    if (sc.fault_budget >= 0) j["f"] = sc.fault_budget;
    json crashes = json::array();
    for (const CrashEntry& c : sc.crashes) crashes.push_back({json(c.robot), json(c.time)});
    j["crashes"] = crashes;
    j["expect"] = sc.expect;
    if (!sc.script.empty()) {
        json script = json::array();
        for (const ScriptStep& st : sc.script) {
            script.push_back({{"robot", st.robot},
                              {"look", st.t_look},
                              {"move_start", st.t_move_start},
                              {"move_end", st.t_move_end},
                              {"dest", {st.dest.x, st.dest.y}}});
        }
        j["script"] = script;
    }
    return j.dump(2);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

void validate_scenario(const Scenario& sc) {
    int n = static_cast<int>(sc.initial.size());
    if (n < 1) fail("scenario needs at least one robot");
    if (sc.scheduler != "ssync" && sc.scheduler != "async_ic" &&
        sc.scheduler != "scripted_async")
        fail("unknown scheduler: " + sc.scheduler);
    if (sc.scheduler == "scripted_async") {
        if (sc.script.empty()) fail("scripted_async scenario needs a script");
        for (const ScriptStep& st : sc.script) {
            if (st.robot < 0 || st.robot >= n) fail("script robot index out of range");
            if (st.t_move_end < st.t_move_start || st.t_move_start < st.t_look)
                fail("script step times must satisfy look <= move_start <= move_end");
        }
        return;
    }
    ProtocolKind proto = protocol_kind(sc.protocol);
    if (sc.budget <= 0.0) fail("budget must be positive");
    if (sc.adversary.kind != "benign" && sc.adversary.kind != "uniform_random" &&
        sc.adversary.kind != "greedy_minimal" && sc.adversary.kind != "scripted")
        fail("unknown adversary kind: " + sc.adversary.kind);
    int f = sc.fault_budget >= 0 ? sc.fault_budget : static_cast<int>(sc.crashes.size());
    if (static_cast<int>(sc.crashes.size()) > f)
        fail("more crash entries than the fault budget f");
    for (const CrashEntry& c : sc.crashes) {
        if (c.robot < 0 || c.robot >= n) fail("crash robot index out of range");
        if (c.time < 0.0) fail("crash time must be nonnegative");
    }
    double eps = eps_for(smallest_enclosing_circle(sc.initial.positions).radius);
    switch (proto) {
        case ProtocolKind::gather_k: {
            if (sc.scheduler != "ssync") fail("gather_k runs under the ssync scheduler");
            if (n < 3) fail("gather_k requires n >= 3");
            if (f > n - 1) fail("gather_k tolerates at most n-1 faults");
            if (!is_legal(sc.initial, eps))
                fail("initial configuration is not legal (more than one multiplicity)");
            break;
        }
        case ProtocolKind::async_gather: {
            if (sc.scheduler != "async_ic")
                fail("async_gather runs under the async_ic scheduler");
            if (n < 7) fail("async_gather requires n >= 7");
            if (f > n / 2 - 2) fail("async_gather tolerates at most floor(n/2)-2 faults");
            if (!is_legal(sc.initial, eps))
                fail("initial configuration is not legal (more than one multiplicity)");
            ConfigClass cc = classify(sc.initial, n, eps);
            if (is_starred(cc.tag) && cc.symmetric)
                fail("inadmissible initial configuration: symmetric " +
                     to_string(cc.tag));
            break;
        }
        case ProtocolKind::mirror_demo: {
            if (sc.scheduler != "ssync") fail("mirror_demo runs under the ssync scheduler");
            if (f != 0) fail("mirror_demo scenarios are crash-free");
            break;
        }
    }
    if (sc.expect != "gathered" && sc.expect != "nonconvergence" &&
        sc.expect != "single_multiplicity_violation")
        fail("unknown expect value: " + sc.expect);
}

RunResult run_scenario(const Scenario& sc) {
    EngineConfig cfg;
    cfg.s_min = sc.s_min;
    cfg.fairness_bound = sc.adversary.fairness_bound;
    cfg.crashes = sc.crashes;
    if (sc.scheduler == "scripted_async")
        return run_scripted_async(sc.initial, sc.script, cfg);
    auto adv = make_adversary(sc.adversary, sc.seed);
    ProtocolKind proto = protocol_kind(sc.protocol);
    if (sc.scheduler == "ssync")
        return run_ssync(sc.initial, proto, *adv, static_cast<long>(sc.budget), cfg);
    return run_async_ic(sc.initial, proto, *adv, sc.budget, cfg);
}

}  // namespace gathersim
