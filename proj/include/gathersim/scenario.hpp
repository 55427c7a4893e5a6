#pragma once

// Scenario files: the JSON document driving one run, its validation rules
// and the dispatch into the engine.

#include <string>

#include "gathersim/engine.hpp"

namespace gathersim {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::string name;
    Snapshot initial;
    std::string scheduler = "ssync";  // ssync | async_ic | scripted_async
    std::string protocol = "gather_k";
    AdversaryConfig adversary;
    double s_min = 0.0;  // 0: engine default (0.05 x initial SEC radius)
    uint64_t seed = 0;
    double budget = 10000.0;
    int fault_budget = -1;  // -1: number of crash entries
    std::vector<CrashEntry> crashes;
    std::string expect = "gathered";  // gathered | nonconvergence |
                                      // single_multiplicity_violation
    std::vector<ScriptStep> script;   // scripted_async only

    bool operator==(const Scenario&) const;
};

ProtocolKind protocol_kind(const std::string& name);

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);

Scenario load_scenario(const std::string& path);

// Schema and admissibility validation; throws ScenarioError.
void validate_scenario(const Scenario& sc);

RunResult run_scenario(const Scenario& sc);

}  // namespace gathersim
