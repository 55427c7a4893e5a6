#pragma once

// Batch experiments: grids of seeded runs over n, fault count and adversary.
// Runs are independent; the parallel path fans them out with OpenMP while the
// serial path is the reference the tests compare against. Aggregation is
// order-independent, so both produce identical summaries.

#include <random>
#include <string>
#include <vector>

#include "gathersim/monitor.hpp"

namespace gathersim {

uint64_t mix_seed(uint64_t a, uint64_t b);

// Rejection-sampled initial configuration: uniform in the unit disc, legal,
// and (for async_ic) admissible.
Snapshot random_configuration(int n, bool async_mode, std::mt19937_64& rng);

std::vector<CrashEntry> random_crashes(int n, int f, double horizon,
                                       std::mt19937_64& rng);

struct RunTask {
    std::string mode = "ssync";  // ssync | async_ic
    std::string adversary = "uniform_random";
    int n = 3;
    int f = 0;
    uint64_t seed = 0;
    double budget = 10000.0;
};

// Deterministic execution of one task: the seed fixes the configuration, the
// crash schedule and the adversary.
RunResult execute_task(const RunTask& task);

struct BatchSpec {
    std::string mode = "ssync";
    int n_min = 3;
    int n_max = 8;
    std::string faults = "all";  // all | max | a number
    std::vector<std::string> adversaries = {"benign", "uniform_random",
                                            "greedy_minimal"};
    int runs = 200;
    uint64_t base_seed = 1;
    double budget = 10000.0;
    bool parallel = true;
    bool with_checks = true;
};

struct BatchCellResult {
    std::string mode;
    std::string adversary;
    int n = 0;
    int f = 0;
    int total = 0;
    int gathered = 0;
    int check_failures = 0;
    double mean_duration = 0.0;
};

struct BatchSummary {
    std::vector<BatchCellResult> cells;
    int total_runs = 0;
    int total_gathered = 0;
    int total_check_failures = 0;
    double wall_seconds = 0.0;

    bool all_gathered() const { return total_gathered == total_runs; }
};

int max_faults(const std::string& mode, int n);

BatchSummary run_batch(const BatchSpec& spec);

std::string summary_table(const BatchSummary& summary);
std::string summary_to_json(const BatchSummary& summary);

}  // namespace gathersim
