#include "gathersim/batch.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gathersim {

uint64_t mix_seed(uint64_t a, uint64_t b) {
    // splitmix64 over the combined words
    uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Snapshot random_configuration(int n, bool async_mode, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double eps = eps_for(1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Snapshot s;
        for (int i = 0; i < n; ++i) {
            double r = std::sqrt(u01(rng));
            double a = 2.0 * kPi * u01(rng);
            s.positions.push_back({r * std::cos(a), r * std::sin(a)});
        }
        if (!is_legal(s, eps)) continue;
        if (async_mode) {
            ConfigClass cc = classify(s, n, eps);
            if (is_starred(cc.tag) && cc.symmetric) continue;
        }
        return s;
    }
    throw std::runtime_error("random_configuration: rejection sampling failed");
}

std::vector<CrashEntry> random_crashes(int n, int f, double horizon,
                                       std::mt19937_64& rng) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_real_distribution<double> ut(0.0, horizon);
    std::vector<CrashEntry> out;
    for (int i = 0; i < f && i < n; ++i) out.push_back({ids[i], ut(rng)});
    std::sort(out.begin(), out.end(),
              [](const CrashEntry& a, const CrashEntry& b) { return a.robot < b.robot; });
    return out;
}

RunResult execute_task(const RunTask& task) {
    bool async_mode = task.mode == "async_ic";
    std::mt19937_64 rng(task.seed);
    Snapshot initial = random_configuration(task.n, async_mode, rng);
    EngineConfig cfg;
    cfg.crashes = random_crashes(task.n, task.f, async_mode ? 5.0 : 20.0, rng);
    AdversaryConfig adv_cfg;
    adv_cfg.kind = task.adversary;
    auto adv = make_adversary(adv_cfg, mix_seed(task.seed, 0x41));
    if (async_mode)
        return run_async_ic(initial, ProtocolKind::async_gather, *adv, task.budget, cfg);
    return run_ssync(initial, ProtocolKind::gather_k, *adv,
                     static_cast<long>(task.budget), cfg);
}

int max_faults(const std::string& mode, int n) {
    return mode == "async_ic" ? std::max(0, n / 2 - 2) : n - 1;
}

BatchSummary run_batch(const BatchSpec& spec) {
    struct Cell {
        int n;
        int f;
        std::string adversary;
    };
    std::vector<Cell> cells;
    for (int n = spec.n_min; n <= spec.n_max; ++n) {
        std::vector<int> fs;
        int cap = max_faults(spec.mode, n);
        if (spec.faults == "all") {
            for (int f = 0; f <= cap; ++f) fs.push_back(f);
        } else if (spec.faults == "max") {
            fs.push_back(cap);
        } else {
            fs.push_back(std::min(cap, std::stoi(spec.faults)));
        }
        for (int f : fs)
            for (const std::string& adv : spec.adversaries) cells.push_back({n, f, adv});
    }

    struct RunOut {
        bool gathered = false;
        bool checks_ok = true;
        double duration = 0.0;
    };
    long total = static_cast<long>(cells.size()) * spec.runs;
    std::vector<RunOut> outs(total);

    auto started = std::chrono::steady_clock::now();
    auto work = [&](long idx) {
        long cell_idx = idx / spec.runs;
        long run_idx = idx % spec.runs;
        const Cell& cell = cells[cell_idx];
        RunTask task;
        task.mode = spec.mode;
        task.adversary = cell.adversary;
        task.n = cell.n;
        task.f = cell.f;
        task.budget = spec.budget;
        task.seed = mix_seed(spec.base_seed, mix_seed(cell_idx, run_idx));
        RunResult res = execute_task(task);
        RunOut out;
        out.gathered = res.outcome == RunOutcome::gathered;
        out.duration = res.end_time;
        if (spec.with_checks) out.checks_ok = standard_report(res).all_pass();
        outs[idx] = out;
    };

    if (spec.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (long idx = 0; idx < total; ++idx) work(idx);
    } else {
        for (long idx = 0; idx < total; ++idx) work(idx);
    }
    auto finished = std::chrono::steady_clock::now();

    BatchSummary summary;
    summary.wall_seconds =
        std::chrono::duration<double>(finished - started).count();
    for (size_t c = 0; c < cells.size(); ++c) {
        BatchCellResult r;
        r.mode = spec.mode;
        r.adversary = cells[c].adversary;
        r.n = cells[c].n;
        r.f = cells[c].f;
        double dur = 0.0;
        for (int j = 0; j < spec.runs; ++j) {
            const RunOut& o = outs[c * spec.runs + j];
            ++r.total;
            if (o.gathered) ++r.gathered;
            if (!o.checks_ok) ++r.check_failures;
            dur += o.duration;
        }
        r.mean_duration = r.total > 0 ? dur / r.total : 0.0;
        summary.total_runs += r.total;
        summary.total_gathered += r.gathered;
        summary.total_check_failures += r.check_failures;
        summary.cells.push_back(r);
    }
    return summary;
}

std::string summary_table(const BatchSummary& summary) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-9s %3s %3s %-15s %6s %9s %10s %7s\n", "mode",
                  "n", "f", "adversary", "runs", "gathered", "mean_time", "chk_fail");
    out += line;
    for (const BatchCellResult& c : summary.cells) {
        std::snprintf(line, sizeof(line), "%-9s %3d %3d %-15s %6d %8.1f%% %10.2f %7d\n",
                      c.mode.c_str(), c.n, c.f, c.adversary.c_str(), c.total,
                      c.total > 0 ? 100.0 * c.gathered / c.total : 0.0, c.mean_duration,
                      c.check_failures);
        out += line;
    }
    std::snprintf(line, sizeof(line),
                  "total: %d runs, %d gathered, %d check failures, %.2fs wall\n",
                  summary.total_runs, summary.total_gathered,
                  summary.total_check_failures, summary.wall_seconds);
    out += line;
    return out;
}

std::string summary_to_json(const BatchSummary& summary) {
    nlohmann::json j;
    j["total_runs"] = summary.total_runs;
    j["total_gathered"] = summary.total_gathered;
    j["total_check_failures"] = summary.total_check_failures;
    j["wall_seconds"] = summary.wall_seconds;
    nlohmann::json cells = nlohmann::json::array();
    for (const BatchCellResult& c : summary.cells) {
        cells.push_back({{"mode", c.mode},
                         {"n", c.n},
                         {"f", c.f},
                         {"adversary", c.adversary},
                         {"total", c.total},
                         {"gathered", c.gathered},
                         {"check_failures", c.check_failures},
                         {"mean_duration", c.mean_duration}});
    }
    j["cells"] = cells;
    return j.dump(2);
}

}  // namespace gathersim
