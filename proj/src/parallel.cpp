#include "ttagg/parallel.hpp"

#include "ttagg/errors.hpp"

#include <bit>
#include <numeric>
#include <string>

namespace ttagg {

PartitionPlan::PartitionPlan(int N, int P) : N_(N), P_(P) {
    if (N < 1 || P < 1) throw ValidationError("partition: N and P must be positive");
    if (N % P != 0) {
        throw ValidationError("partition: P=" + std::to_string(P) + " does not divide N=" + std::to_string(N)
                              + "; pad N up to a multiple of P");
    }
}

PartitionPlan::Range PartitionPlan::block(int p) const {
    if (p < 1 || p > P_) throw ValidationError("partition: block " + std::to_string(p) + " out of range");
    const int size = N_ / P_;
    return {(p - 1) * size + 1, p * size};
}

PartitionPlan make_partition(int N, int P) { return PartitionPlan(N, P); }

TTCore block_core(const TTKernel& kernel, int level, int p, const PartitionPlan& partition) {
    if (level < 1 || level > kernel.dim()) throw ValidationError("block_core: level out of range");
    if (partition.mode_size() != kernel.mode_size()) throw ValidationError("block_core: partition N differs from kernel N");
    const auto range = partition.block(p);
    const auto& core = kernel.core(level);
    TTCore slab(core.rank_left(), partition.block_size(), core.rank_right());
    for (std::size_t a = 0; a < core.rank_left(); ++a) {
        for (std::size_t b = 0; b < core.rank_right(); ++b) {
            auto src = core.fiber(a, b).subspan(static_cast<std::size_t>(range.first - 1),
                                                static_cast<std::size_t>(partition.block_size()));
            std::copy(src.begin(), src.end(), slab.fiber(a, b).begin());
        }
    }
    return slab;
}

std::span<const double> block_of(std::span<const double> values, const PartitionPlan& partition, int p) {
    if (values.size() != static_cast<std::size_t>(partition.mode_size())) {
        throw ValidationError("block_of: vector length differs from partition N");
    }
    const auto range = partition.block(p);
    return values.subspan(static_cast<std::size_t>(range.first - 1), static_cast<std::size_t>(partition.block_size()));
}

std::vector<std::vector<double>> split_blocks(std::span<const double> values, const PartitionPlan& partition) {
    std::vector<std::vector<double>> blocks;
    for (int p = 1; p <= partition.blocks(); ++p) {
        auto b = block_of(values, partition, p);
        blocks.emplace_back(b.begin(), b.end());
    }
    return blocks;
}

std::vector<double> gather_blocks(const std::vector<std::vector<double>>& blocks) {
    std::vector<double> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
}

WorkerPool::WorkerPool(int workers) : workers_(workers) {
    if (workers < 1) throw ValidationError("worker count must be >= 1");
    for (int w = 1; w < workers; ++w) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::drain() {
    std::unique_lock lock(mutex_);
    while (next_ < count_) {
        const std::size_t index = next_++;
        const auto* task = task_;
        lock.unlock();
        try {
            (*task)(index);
        } catch (...) {
            lock.lock();
            if (!error_) error_ = std::current_exception();
            next_ = count_;  // abandon remaining tasks
            ++finished_;
            continue;
        }
        lock.lock();
        ++finished_;
    }
}

void WorkerPool::worker_loop() {
    std::size_t seen = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            ++active_;
        }
        drain();
        {
            std::lock_guard lock(mutex_);
            --active_;
        }
        done_.notify_all();
    }
}

void WorkerPool::run(std::size_t count, const std::function<void(std::size_t)>& task) {
    if (count == 0) return;
    if (threads_.empty() || count == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::lock_guard run_lock(run_mutex_);
    {
        std::lock_guard lock(mutex_);
        task_ = &task;
        count_ = count;
        next_ = 0;
        finished_ = 0;
        error_ = nullptr;
        ++generation_;
    }
    wake_.notify_all();
    drain();
    std::exception_ptr error;
    {
        std::unique_lock lock(mutex_);
        // Tasks abandoned after an exception never report; wait for claimed ones.
        done_.wait(lock, [&] { return active_ == 0 && (finished_ == count_ || error_); });
        error = error_;
        task_ = nullptr;
        count_ = 0;
    }
    if (error) std::rethrow_exception(error);
}

ExecutionPlan::ExecutionPlan(int workers, FftLengthPolicy fft_length)
    : workers_(workers), fft_length_(fft_length) {
    if (workers < 1) throw ValidationError("ExecutionPlan: worker count must be >= 1");
    if (workers > 1) pool_ = std::make_shared<WorkerPool>(workers);
}

std::size_t ExecutionPlan::fft_size(int d, int N) const {
    const auto minimum = static_cast<std::size_t>(d) * static_cast<std::size_t>(N) + 1;
    if (fft_length_ == FftLengthPolicy::PowerOfTwo) return std::bit_ceil(minimum);
    std::size_t best = std::bit_ceil(minimum);
    for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
        for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
            std::size_t v = p35;
            while (v < minimum) v *= 2;
            best = std::min(best, v);
        }
    }
    return best;
}

PartitionPlan ExecutionPlan::partition(int N) const { return PartitionPlan(N, std::gcd(N, workers_)); }

void ExecutionPlan::for_each(std::size_t count, bool parallel, const std::function<void(std::size_t)>& task) const {
    if (parallel && pool_) {
        pool_->run(count, task);
        return;
    }
    for (std::size_t i = 0; i < count; ++i) task(i);
}

} // namespace ttagg
