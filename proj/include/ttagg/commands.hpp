#ifndef TTAGG_COMMANDS_HPP_
#define TTAGG_COMMANDS_HPP_

// Batch subcommands behind the `ttagg` executable. Each returns a process
// exit code: 0 success, 1 validation error, 2 numerical failure, 3 IO error.

#include "ttagg/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ttagg {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitIo = 3 };

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> output;
    std::vector<int> workers;  // simulate/verify use the first entry
    std::optional<std::uint64_t> seed;
};

std::string version();

// Writes moments.csv, n_<step>.csv snapshots and manifest.json.
int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);

// Test hook applied to each TT kernel after construction.
using TTTamper = std::function<void(int order, TTKernel&)>;

// Compares TT and CP right-hand sides with the dense oracle on random states.
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err, const TTTamper& tamper = {});

// Scaling benchmark; writes bench.json.
int cmd_bench(const CommandOptions& options, std::ostream& out, std::ostream& err);

} // namespace ttagg

#endif // TTAGG_COMMANDS_HPP_
