#include "ttagg/bench.hpp"

#include "ttagg/errors.hpp"

#include <algorithm>
#include <chrono>

namespace ttagg {

nlohmann::json BenchReport::to_json() const {
    return {{"N", N}, {"D", D}, {"steps", steps}, {"worker_counts", worker_counts},
            {"times_sec", times_sec}, {"speedups", speedups}};
}

SimulationConfig ternary_brownian_bench_config(int N, int steps) {
    SimulationConfig c;
    c.N = N;
    c.D = 3;
    KernelSpec k;
    k.type = KernelType::Brownian;
    k.dim = 3;
    k.mu = {1.0 / 3.0, -1.0 / 3.0, 0.0};
    k.format = KernelFormat::TT;
    c.kernels.push_back(k);
    c.time.dt = 1e-3;
    c.time.steps = steps;
    c.record_every = steps;
    return c;
}

BenchReport run_scaling_benchmark(const SimulationConfig& config, std::span<const int> worker_counts, int repeats) {
    if (worker_counts.empty()) throw ValidationError("benchmark: no worker counts given");
    if (repeats < 1) throw ValidationError("benchmark: repeats must be >= 1");

    const auto kernels = config.build_kernels();
    const auto initial = config.initial.make(config.N, config.time.t0);

    auto time_with = [&](int workers) {
        const ExecutionPlan plan = config.plan(workers);
        auto once = [&] {
            const auto start = std::chrono::steady_clock::now();
            integrate(kernels, initial, config.time, config.record_every, plan);
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        };
        once();  // warm-up: plan creation, page faults
        std::vector<double> samples;
        for (int r = 0; r < repeats; ++r) samples.push_back(once());
        std::sort(samples.begin(), samples.end());
        return samples[samples.size() / 2];
    };

    BenchReport report;
    report.N = config.N;
    report.D = config.D;
    report.steps = config.time.steps;
    for (int w : worker_counts) {
        if (w < 1) throw ValidationError("benchmark: worker counts must be >= 1");
        report.worker_counts.push_back(w);
        report.times_sec.push_back(time_with(w));
    }
    const auto one = std::find(report.worker_counts.begin(), report.worker_counts.end(), 1);
    const double baseline = one != report.worker_counts.end()
                                ? report.times_sec[static_cast<std::size_t>(one - report.worker_counts.begin())]
                                : time_with(1);
    for (double t : report.times_sec) report.speedups.push_back(baseline / t);
    return report;
}

} // namespace ttagg
