#ifndef TTAGG_CONFIG_HPP_
#define TTAGG_CONFIG_HPP_

// Run configuration, read from a JSON document:
//
// {
//   "N": 1024,
//   "D": 3,
//   "kernels": [{"type": "constant", "D": 3, "c": 1.0, "format": "tt"}],
//   "initial": {"kind": "monodisperse", "c0": 1.0},
//   "time": {"t0": 0.0, "dt": 0.001, "steps": 1000},
//   "record_every": 100,
//   "output": "out",
//   "execution": {"workers": 1, "fft_length": "pow2"},
//   "verify": false,
//   "seed": 0,
//   "dense_budget": 67108864,
//   "bench": {"workers": [1, 2, 4], "repeats": 3}
// }
//
// A run manifest written by `simulate` ({"config": {...}, ...}) is accepted
// wherever a configuration is.

#include "ttagg/integrator.hpp"
#include "ttagg/kernel_spec.hpp"
#include "ttagg/parallel.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ttagg {

struct SimulationConfig {
    int N = 0;
    int D = 2;
    std::vector<KernelSpec> kernels;
    InitialCondition initial;
    TimeGrid time;
    int record_every = 1;
    std::filesystem::path output_dir = "output";
    int workers = 1;
    FftLengthPolicy fft_length = FftLengthPolicy::PowerOfTwo;
    bool verify = false;
    std::uint64_t seed = 0;
    std::size_t dense_budget = kDefaultDenseBudget;
    std::vector<int> bench_workers{1};
    int bench_repeats = 3;

    // Non-fatal remarks produced while parsing (e.g. N not a power of two).
    std::vector<std::string> warnings;

    static SimulationConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    static SimulationConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    KernelSet build_kernels() const;
    ExecutionPlan plan() const;
    ExecutionPlan plan(int workers) const;
};

IntegrationResult integrate(const SimulationConfig& config, const RecordObserver& observer = {});

} // namespace ttagg

#endif // TTAGG_CONFIG_HPP_
