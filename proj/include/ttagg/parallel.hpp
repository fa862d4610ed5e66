#ifndef TTAGG_PARALLEL_HPP_
#define TTAGG_PARALLEL_HPP_

// Shared-memory execution layer: block decomposition of the size
// coordinate, a fixed-size worker pool and the plan that carries both
// through the right-hand-side evaluators.

#include "ttagg/tensor.hpp"

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace ttagg {

// Sizes 1..N split into P equal contiguous blocks; requires P | N.
class PartitionPlan {
public:
    PartitionPlan(int N, int P);

    int mode_size() const noexcept { return N_; }
    int blocks() const noexcept { return P_; }
    int block_size() const noexcept { return N_ / P_; }

    struct Range {
        int first;  // 1-based, inclusive
        int last;   // inclusive
    };
    // p runs 1..blocks(): sizes (p-1)N/P + 1 .. pN/P
    Range block(int p) const;

private:
    int N_;
    int P_;
};

PartitionPlan make_partition(int N, int P);

// Slab of core `level` restricted to the sizes of block p, shape
// R_{level-1} x N/P x R_level. Size j of the slab is global size first + j - 1.
TTCore block_core(const TTKernel& kernel, int level, int p, const PartitionPlan& partition);

// Block p of a length-N vector (entry 0 holds size 1).
std::span<const double> block_of(std::span<const double> values, const PartitionPlan& partition, int p);
std::vector<std::vector<double>> split_blocks(std::span<const double> values, const PartitionPlan& partition);
std::vector<double> gather_blocks(const std::vector<std::vector<double>>& blocks);

// Fixed set of threads. The calling thread takes part in every run, so a
// pool of size 1 spawns nothing and runs tasks inline.
class WorkerPool {
public:
    explicit WorkerPool(int workers);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const noexcept { return workers_; }

    // Runs task(0) ... task(count - 1) and returns once all have finished.
    // The first exception thrown by a task is rethrown here.
    void run(std::size_t count, const std::function<void(std::size_t)>& task);

private:
    void worker_loop();
    void drain();

    int workers_;
    std::vector<std::thread> threads_;
    std::mutex run_mutex_;  // one run at a time

    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t count_ = 0;
    std::size_t next_ = 0;
    std::size_t finished_ = 0;
    std::size_t generation_ = 0;
    int active_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

enum class FftLengthPolicy {
    PowerOfTwo,  // smallest 2^a >= dN + 1
    Smooth,      // smallest 2^a 3^b 5^c >= dN + 1
};

class ExecutionPlan {
public:
    explicit ExecutionPlan(int workers = 1, FftLengthPolicy fft_length = FftLengthPolicy::PowerOfTwo);

    int workers() const noexcept { return workers_; }
    FftLengthPolicy fft_length_policy() const noexcept { return fft_length_; }

    // Parallel axes. Disabling one runs that phase on the calling thread.
    bool parallel_fibers = true;  // independent fiber transforms, per-frequency chains
    bool parallel_blocks = true;  // block-local weighting and output scatter

    // Reductions over sizes use fixed-length chunks summed in chunk order,
    // making results bitwise independent of the worker count. When false,
    // one chunk per block is used instead.
    bool deterministic_reduction = true;

    // Transform length for d-fold sums of indices up to N (>= dN + 1).
    std::size_t fft_size(int d, int N) const;

    // Block decomposition used for size-local phases: gcd(N, workers) blocks.
    PartitionPlan partition(int N) const;

    void for_each(std::size_t count, bool parallel, const std::function<void(std::size_t)>& task) const;

private:
    int workers_;
    FftLengthPolicy fft_length_;
    std::shared_ptr<WorkerPool> pool_;
};

} // namespace ttagg

#endif // TTAGG_PARALLEL_HPP_
