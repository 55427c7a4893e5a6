// Operator entry point: run scenarios, batch experiments, render traces and
// validate scenario files.
//
// Exit codes: 0 success / expected outcome, 1 check or expectation failure,
// 2 usage or schema error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gathersim/batch.hpp"
#include "gathersim/monitor.hpp"
#include "gathersim/render.hpp"
#include "gathersim/scenario.hpp"

namespace fs = std::filesystem;
using namespace gathersim;

namespace {

int write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return 2;
    }
    out << content;
    return 0;
}

std::string trace_as_json_array(const Trace& trace) {
    // Same objects as the JSONL lines, wrapped in an array.
    std::string jsonl = trace_to_jsonl(trace);
    std::string out = "[\n";
    std::istringstream ss(jsonl);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (!first) out += ",\n";
        out += "  " + line;
        first = false;
    }
    out += "\n]\n";
    return out;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<uint64_t> seed, std::optional<double> budget,
            const std::string& format) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
        if (seed) sc.seed = *seed;
        if (budget) sc.budget = *budget;
        validate_scenario(sc);
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    }

    RunResult res;
    try {
        res = run_scenario(sc);
    } catch (const std::exception& e) {
        std::cerr << "run rejected: " << e.what() << "\n";
        return 2;
    }
    InvariantReport report = standard_report(res);

    std::string base = sc.name.empty() ? "run" : sc.name;
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    fs::path trace_path =
        dir / (base + (format == "json" ? "_trace.json" : "_trace.jsonl"));
    std::string trace_text =
        format == "json" ? trace_as_json_array(res.trace) : trace_to_jsonl(res.trace);
    if (int rc = write_file(trace_path, trace_text)) return rc;
    fs::path report_path = dir / (base + "_report.json");
    if (int rc = write_file(report_path, report_to_json(report))) return rc;

    std::cout << "outcome: " << to_string(res.outcome) << " at t=" << res.end_time
              << "\n";
    for (const CheckResult& c : report.checks) {
        std::cout << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
        if (!c.applicable) std::cout << " (not applicable)";
        std::cout << "\n";
    }
    std::cout << "trace: " << trace_path.string() << "\nreport: " << report_path.string()
              << "\n";

    if (sc.expect == "nonconvergence")
        return res.outcome == RunOutcome::budget_exhausted ? 0 : 1;
    if (sc.expect == "single_multiplicity_violation") {
        for (const CheckResult& c : report.checks)
            if (c.name == "single_multiplicity") return c.pass ? 1 : 0;
        return 1;
    }
    return res.outcome == RunOutcome::gathered && report.all_pass() ? 0 : 1;
}

int cmd_validate(const std::string& scenario_path) {
    try {
        Scenario sc = load_scenario(scenario_path);
        validate_scenario(sc);
    } catch (const std::exception& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return 2;
    }
    std::cout << "ok\n";
    return 0;
}

int cmd_batch(const BatchSpec& spec, const std::string& out_dir) {
    BatchSummary summary = run_batch(spec);
    std::cout << summary_table(summary);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        if (int rc = write_file(fs::path(out_dir) / "batch_summary.json",
                                summary_to_json(summary)))
            return rc;
    }
    return 0;
}

int cmd_render(const std::string& trace_path, const std::string& out_dir, int every,
               bool cells) {
    std::ifstream in(trace_path);
    if (!in) {
        std::cerr << "cannot open trace: " << trace_path << "\n";
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    Trace trace;
    try {
        trace = trace_from_jsonl(ss.str());
    } catch (const std::exception& e) {
        std::cerr << "trace parse error: " << e.what() << "\n";
        return 2;
    }
    RenderOptions opts;
    opts.every = every;
    opts.cells = cells;
    int frames = render_trace_to_dir(trace, out_dir, opts);
    std::cout << frames << " frame(s) written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crash-fault-tolerant robot gathering simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, format = "jsonl", trace_path;
    std::optional<uint64_t> seed;
    std::optional<double> budget;

    CLI::App* run = app.add_subcommand("run", "execute one scenario");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--budget", budget, "override the scenario budget");
    run->add_option("--format", format, "trace format: jsonl|json")
        ->check(CLI::IsMember({"jsonl", "json"}));

    CLI::App* validate = app.add_subcommand("validate", "validate a scenario file");
    validate->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    BatchSpec spec;
    std::string faults = "all", adversaries = "benign,uniform_random,greedy_minimal";
    bool serial = false;
    CLI::App* batch = app.add_subcommand("batch", "run a grid of seeded experiments");
    batch->add_option("--mode", spec.mode, "ssync|async_ic")
        ->check(CLI::IsMember({"ssync", "async_ic"}));
    batch->add_option("--n-min", spec.n_min, "smallest n");
    batch->add_option("--n-max", spec.n_max, "largest n");
    batch->add_option("--faults", faults, "all | max | a number");
    batch->add_option("--runs", spec.runs, "runs per cell");
    batch->add_option("--seed", spec.base_seed, "base seed");
    batch->add_option("--budget", spec.budget, "per-run budget");
    batch->add_option("--adversaries", adversaries, "comma-separated list");
    batch->add_flag("--serial", serial, "disable the OpenMP worker pool");
    batch->add_option("--out", out_dir, "write batch_summary.json here");

    int every = 1;
    bool cells = false;
    CLI::App* render = app.add_subcommand("render", "emit SVG frames for a trace");
    render->add_option("--trace", trace_path, "trace JSONL file")->required();
    render->add_option("--out", out_dir, "output directory")->required();
    render->add_option("--every", every, "sample every Nth event");
    render->add_flag("--cells", cells, "draw cell rays");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (run->parsed()) return cmd_run(scenario_path, out_dir, seed, budget, format);
    if (validate->parsed()) return cmd_validate(scenario_path);
    if (batch->parsed()) {
        spec.faults = faults;
        spec.parallel = !serial;
        spec.adversaries.clear();
        std::stringstream ss(adversaries);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) spec.adversaries.push_back(item);
        return cmd_batch(spec, out_dir);
    }
    if (render->parsed()) return cmd_render(trace_path, out_dir, every, cells);
    return 2;
}
