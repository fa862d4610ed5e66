#ifndef TTAGG_BENCH_HPP_
#define TTAGG_BENCH_HPP_

#include "ttagg/config.hpp"

#include "json.hpp"

#include <span>
#include <vector>

namespace ttagg {

struct BenchReport {
    int N = 0;
    int D = 0;
    int steps = 0;
    std::vector<int> worker_counts;
    std::vector<double> times_sec;  // median of the timed repeats
    std::vector<double> speedups;   // relative to one worker

    nlohmann::json to_json() const;
};

// Pure ternary generalized Brownian kernel (mu = 1/3, -1/3, 0), monodisperse
// start, `steps` RK2 steps.
SimulationConfig ternary_brownian_bench_config(int N, int steps = 100);

// For each worker count: one discarded warm-up run, then `repeats` timed
// integrations of the full configuration; the median is reported.
BenchReport run_scaling_benchmark(const SimulationConfig& config, std::span<const int> worker_counts, int repeats = 3);

} // namespace ttagg

#endif // TTAGG_BENCH_HPP_
