// Benchmark: identical batch grid through the serial reference path and the
// OpenMP worker pool, verifying both aggregate to the same summary.

#include <cstdio>
#include <cstring>

#include "gathersim/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gathersim;

namespace {

bool summaries_equal(const BatchSummary& a, const BatchSummary& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (size_t i = 0; i < a.cells.size(); ++i) {
        const BatchCellResult &x = a.cells[i], &y = b.cells[i];
        if (x.n != y.n || x.f != y.f || x.adversary != y.adversary ||
            x.gathered != y.gathered || x.check_failures != y.check_failures ||
            x.mean_duration != y.mean_duration)
            return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;

    BatchSpec spec;
    spec.mode = "ssync";
    spec.n_min = 4;
    spec.n_max = quick ? 5 : 8;
    spec.faults = "max";
    spec.adversaries = {"uniform_random", "greedy_minimal"};
    spec.runs = quick ? 10 : 100;
    spec.base_seed = 42;
    spec.with_checks = true;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not available, both paths run serially\n");
#endif

    spec.parallel = false;
    BatchSummary serial = run_batch(spec);
    std::printf("serial:   %6.2fs  (%d runs, %d gathered)\n", serial.wall_seconds,
                serial.total_runs, serial.total_gathered);

    spec.parallel = true;
    BatchSummary parallel = run_batch(spec);
    std::printf("parallel: %6.2fs  (%d runs, %d gathered)\n", parallel.wall_seconds,
                parallel.total_runs, parallel.total_gathered);

    if (!summaries_equal(serial, parallel)) {
        std::printf("FAIL: serial and parallel summaries differ\n");
        return 1;
    }
    std::printf("summaries identical; speedup %.2fx\n",
                parallel.wall_seconds > 0.0 ? serial.wall_seconds / parallel.wall_seconds
                                            : 0.0);
    return 0;
}
