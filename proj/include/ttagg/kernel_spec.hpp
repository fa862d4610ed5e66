#ifndef TTAGG_KERNEL_SPEC_HPP_
#define TTAGG_KERNEL_SPEC_HPP_

// Serializable kernel descriptions:
//
//   {"type": "brownian", "D": 3, "mu": [0.333, -0.333, 0.0], "format": "tt"}
//   {"type": "constant", "D": 3, "c": 1.0, "format": "cp"}
//   {"type": "table",    "D": 2, "table_path": "kernel.bin"}
//
// "format" picks the representation used for time stepping (tt, cp or
// dense). Table kernels are dense only. Table files hold N^D values in
// row-major order (last index fastest), either as raw little-endian float64
// (any extension other than .txt/.csv) or as whitespace/comma separated text.

#include "ttagg/kinetics.hpp"
#include "ttagg/tensor.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ttagg {

enum class KernelType { Brownian, Constant, Table };
enum class KernelFormat { TT, CP, Dense };

struct KernelSpec {
    KernelType type = KernelType::Constant;
    int dim = 2;
    std::vector<double> mu;
    double c = 1.0;
    std::filesystem::path table_path;
    KernelFormat format = KernelFormat::TT;

    static KernelSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    nlohmann::json to_json() const;
};

std::vector<double> read_table(const std::filesystem::path& path, int dim, int N,
                               std::size_t budget = kDefaultDenseBudget);
void write_table_binary(const std::filesystem::path& path, std::span<const double> values);

// Per-element evaluation of the described kernel (table kernels load the file).
DenseKernel dense_from_spec(const KernelSpec& spec, int N, std::size_t budget = kDefaultDenseBudget);

TTKernel tt_from_spec(const KernelSpec& spec, int N);
CPKernel cp_from_spec(const KernelSpec& spec, int N);

// Adds the representation named by spec.format for order spec.dim.
void add_kernel(KernelSet& set, const KernelSpec& spec, std::size_t budget = kDefaultDenseBudget);

} // namespace ttagg

#endif // TTAGG_KERNEL_SPEC_HPP_
