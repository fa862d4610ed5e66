#include "ttagg/kinetics.hpp"

#include "fft.hpp"
#include "ttagg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ttagg {

namespace {

constexpr std::size_t kBinChunk = 1024;
constexpr std::size_t kReductionChunk = 4096;

double factorial(int d) {
    double f = 1.0;
    for (int j = 2; j <= d; ++j) f *= j;
    return f;
}

void check_sizes(const char* op, int kernel_dim, int kernel_N, const ConcentrationState& state) {
    if (kernel_dim < 2) throw ValidationError(std::string(op) + ": collision order must be >= 2");
    if (kernel_N != state.size()) {
        throw ValidationError(std::string(op) + ": kernel mode size " + std::to_string(kernel_N)
                              + " differs from state length " + std::to_string(state.size()));
    }
}

// (x += y * z) on interleaved complex arrays of m entries
inline void multiply_accumulate(double* x, const double* y, const double* z, std::size_t m) {
    for (std::size_t j = 0; j < m; ++j) {
        const double yr = y[2 * j], yi = y[2 * j + 1];
        const double zr = z[2 * j], zi = z[2 * j + 1];
        x[2 * j] += yr * zr - yi * zi;
        x[2 * j + 1] += yr * zi + yi * zr;
    }
}

inline void multiply_in_place(double* x, const double* y, std::size_t m) {
    for (std::size_t j = 0; j < m; ++j) {
        const double xr = x[2 * j], xi = x[2 * j + 1];
        const double yr = y[2 * j], yi = y[2 * j + 1];
        x[2 * j] = xr * yr - xi * yi;
        x[2 * j + 1] = xr * yi + xi * yr;
    }
}

// Shared skeleton of the FFT gain operators.
//
// Every kernel fiber is weighted by n and placed at offsets 1..N of a
// zero-padded transform of length L >= dN + 1, so the d-fold product of
// spectra carries index sums up to dN without wrap-around. `combine`
// reduces the spectra of bins [k0, k1) to one spectrum written to `out`.
template <class FiberSource, class Combine>
std::vector<double> gain_by_fft(int d, const ConcentrationState& state, std::size_t fiber_count,
                                const ExecutionPlan& plan, FiberSource&& fiber_source, Combine&& combine) {
    const int N = state.size();
    const auto n = state.values();
    const std::size_t L = plan.fft_size(d, N);
    const auto partition = plan.partition(N);

    detail::SpectrumBuffer spectra(fiber_count, L);

    plan.for_each(static_cast<std::size_t>(partition.blocks()), plan.parallel_blocks, [&](std::size_t block) {
        const auto range = partition.block(static_cast<int>(block) + 1);
        for (std::size_t f = 0; f < fiber_count; ++f) {
            const std::span<const double> h = fiber_source(f);
            double* x = spectra.fiber(f);
            for (int k = range.first; k <= range.last; ++k) {
                x[k] = h[static_cast<std::size_t>(k - 1)] * n[static_cast<std::size_t>(k - 1)];
            }
        }
    });

    plan.for_each(fiber_count, plan.parallel_fibers, [&](std::size_t f) {
        double* x = spectra.fiber(f);
        x[0] = 0.0;
        std::fill(x + N + 1, x + L, 0.0);
        detail::forward_in_place(spectra, f);
    });

    detail::SpectrumBuffer result(1, L);
    const std::size_t bins = spectra.bins();
    const std::size_t chunks = (bins + kBinChunk - 1) / kBinChunk;
    plan.for_each(chunks, plan.parallel_fibers, [&](std::size_t c) {
        const std::size_t k0 = c * kBinChunk;
        const std::size_t k1 = std::min(bins, k0 + kBinChunk);
        combine(spectra, k0, k1, result.fiber(0) + 2 * k0);
    });

    detail::inverse_in_place(result, 0);

    const double scale = 1.0 / (static_cast<double>(L) * factorial(d));
    const double* sums = result.fiber(0);
    std::vector<double> p(static_cast<std::size_t>(N), 0.0);
    plan.for_each(static_cast<std::size_t>(partition.blocks()), plan.parallel_blocks, [&](std::size_t block) {
        const auto range = partition.block(static_cast<int>(block) + 1);
        // sizes below d cannot be formed from d particles
        for (int k = std::max(range.first, d); k <= range.last; ++k) {
            p[static_cast<std::size_t>(k - 1)] = sums[k] * scale;
        }
    });
    return p;
}

// Sums_i fiber_f[i] * n_i for every fiber f. Deterministic mode fixes the
// chunk length so partial sums never depend on the worker count.
template <class FiberSource>
std::vector<double> contract_fibers(const ConcentrationState& state, std::size_t fiber_count,
                                    const ExecutionPlan& plan, FiberSource&& fiber_source) {
    const auto n = state.values();
    const std::size_t N = n.size();
    std::size_t chunk = kReductionChunk;
    if (!plan.deterministic_reduction) {
        chunk = static_cast<std::size_t>(plan.partition(static_cast<int>(N)).block_size());
    }
    const std::size_t chunks = (N + chunk - 1) / chunk;
    std::vector<double> partial(chunks * fiber_count, 0.0);
    plan.for_each(chunks, plan.parallel_blocks, [&](std::size_t c) {
        const std::size_t i0 = c * chunk;
        const std::size_t i1 = std::min(N, i0 + chunk);
        for (std::size_t f = 0; f < fiber_count; ++f) {
            const std::span<const double> h = fiber_source(f);
            double acc = 0.0;
            for (std::size_t i = i0; i < i1; ++i) acc += h[i] * n[i];
            partial[c * fiber_count + f] = acc;
        }
    });
    std::vector<double> sums(fiber_count, 0.0);
    for (std::size_t c = 0; c < chunks; ++c)
        for (std::size_t f = 0; f < fiber_count; ++f) sums[f] += partial[c * fiber_count + f];
    return sums;
}

// q_k = -n_k / (d-1)! * sum_r weights_r * last_r[k]
template <class LastFiber>
std::vector<double> scatter_loss(int d, const ConcentrationState& state, const std::vector<double>& weights,
                                 const ExecutionPlan& plan, LastFiber&& last_fiber) {
    const int N = state.size();
    const auto n = state.values();
    const auto partition = plan.partition(N);
    const double scale = -1.0 / factorial(d - 1);
    std::vector<double> q(static_cast<std::size_t>(N), 0.0);
    plan.for_each(static_cast<std::size_t>(partition.blocks()), plan.parallel_blocks, [&](std::size_t block) {
        const auto range = partition.block(static_cast<int>(block) + 1);
        for (int k = range.first; k <= range.last; ++k) {
            const auto i = static_cast<std::size_t>(k - 1);
            double acc = 0.0;
            for (std::size_t r = 0; r < weights.size(); ++r) acc += weights[r] * last_fiber(r)[i];
            q[i] = scale * n[i] * acc;
        }
    });
    return q;
}

} // namespace

ConcentrationState::ConcentrationState(std::vector<double> n, double t) : n_(std::move(n)), t_(t) {
    if (n_.size() < 2) throw ValidationError("ConcentrationState: need N >= 2 size classes");
    for (std::size_t k = 0; k < n_.size(); ++k) {
        if (!std::isfinite(n_[k])) {
            throw NumericalError("ConcentrationState: non-finite concentration at size " + std::to_string(k + 1));
        }
    }
    if (!std::isfinite(t)) throw NumericalError("ConcentrationState: non-finite time");
}

KernelSet::KernelSet(int N) : N_(N) {
    if (N < 2) throw ValidationError("KernelSet: N must be >= 2");
}

void KernelSet::check(int order, int dim, int mode_size) const {
    if (order < 2) throw ValidationError("KernelSet: collision order must be >= 2, got " + std::to_string(order));
    if (dim != order) {
        throw ValidationError("KernelSet: kernel for order " + std::to_string(order) + " has dimension "
                              + std::to_string(dim));
    }
    if (mode_size != N_) {
        throw ValidationError("KernelSet: kernel mode size " + std::to_string(mode_size) + " differs from N="
                              + std::to_string(N_));
    }
}

void KernelSet::add(int order, TTKernel kernel) {
    check(order, kernel.dim(), kernel.mode_size());
    orders_[order].tt = std::move(kernel);
}

void KernelSet::add(int order, CPKernel kernel) {
    check(order, kernel.dim(), kernel.mode_size());
    orders_[order].cp = std::move(kernel);
}

void KernelSet::add(int order, DenseKernel kernel) {
    check(order, kernel.dim(), kernel.mode_size());
    orders_[order].dense = std::move(kernel);
}

int KernelSet::max_order() const {
    if (orders_.empty()) throw ValidationError("no collision orders configured");
    return orders_.rbegin()->first;
}

std::vector<double> rhs_dense_P(const DenseKernel& kernel, const ConcentrationState& state) {
    check_sizes("rhs_dense_P", kernel.dim(), kernel.mode_size(), state);
    const int d = kernel.dim();
    const int N = kernel.mode_size();
    const auto n = state.values();
    const auto values = kernel.values();
    std::vector<double> p(static_cast<std::size_t>(N), 0.0);

    std::vector<int> idx(static_cast<std::size_t>(d), 1);
    std::size_t offset = 0;
    for (;;) {
        long long sum = 0;
        double weight = 1.0;
        for (int e : idx) {
            sum += e;
            weight *= n[static_cast<std::size_t>(e - 1)];
        }
        if (sum <= N) p[static_cast<std::size_t>(sum - 1)] += values[offset] * weight;
        ++offset;
        int j = d - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] > N) idx[static_cast<std::size_t>(j--)] = 1;
        if (j < 0) break;
    }
    const double scale = 1.0 / factorial(d);
    for (auto& v : p) v *= scale;
    return p;
}

std::vector<double> rhs_dense_Q(const DenseKernel& kernel, const ConcentrationState& state) {
    check_sizes("rhs_dense_Q", kernel.dim(), kernel.mode_size(), state);
    const int d = kernel.dim();
    const int N = kernel.mode_size();
    const auto n = state.values();
    const auto values = kernel.values();
    std::vector<double> acc(static_cast<std::size_t>(N), 0.0);

    // prefix (i_1..i_{d-1}) walks rows of length N; the last index is k
    std::vector<int> prefix(static_cast<std::size_t>(d - 1), 1);
    std::size_t row = 0;
    for (;;) {
        double weight = 1.0;
        for (int e : prefix) weight *= n[static_cast<std::size_t>(e - 1)];
        const double* c = values.data() + row * static_cast<std::size_t>(N);
        for (int k = 0; k < N; ++k) acc[static_cast<std::size_t>(k)] += c[k] * weight;
        ++row;
        int j = d - 2;
        while (j >= 0 && ++prefix[static_cast<std::size_t>(j)] > N) prefix[static_cast<std::size_t>(j--)] = 1;
        if (j < 0) break;
    }
    const double scale = -1.0 / factorial(d - 1);
    std::vector<double> q(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) q[static_cast<std::size_t>(k)] = scale * n[static_cast<std::size_t>(k)] * acc[static_cast<std::size_t>(k)];
    return q;
}

std::vector<double> rhs_tt_P(const TTKernel& kernel, const ConcentrationState& state, const ExecutionPlan& plan) {
    check_sizes("rhs_tt_P", kernel.dim(), kernel.mode_size(), state);
    const int d = kernel.dim();
    const auto ranks = kernel.ranks();

    // fiber (level, a, b) lives at level_offset[level - 1] + a * R_level + b
    std::vector<std::size_t> level_offset(static_cast<std::size_t>(d) + 1, 0);
    for (int l = 1; l <= d; ++l) {
        level_offset[static_cast<std::size_t>(l)] =
            level_offset[static_cast<std::size_t>(l - 1)] + ranks[static_cast<std::size_t>(l - 1)] * ranks[static_cast<std::size_t>(l)];
    }
    std::vector<std::span<const double>> fibers;
    fibers.reserve(level_offset.back());
    for (int l = 1; l <= d; ++l) {
        const auto& core = kernel.core(l);
        for (std::size_t a = 0; a < core.rank_left(); ++a)
            for (std::size_t b = 0; b < core.rank_right(); ++b) fibers.push_back(core.fiber(a, b));
    }

    auto combine = [&](const detail::SpectrumBuffer& spectra, std::size_t k0, std::size_t k1, double* out) {
        const std::size_t m = k1 - k0;
        const std::size_t max_rank = kernel.max_rank();
        std::vector<double> row(max_rank * 2 * m), next(max_rank * 2 * m);
        // level 1: row vector of length R_1
        for (std::size_t b = 0; b < ranks[1]; ++b) {
            const double* s = spectra.fiber(b) + 2 * k0;
            std::copy(s, s + 2 * m, row.begin() + static_cast<std::ptrdiff_t>(b * 2 * m));
        }
        for (int l = 2; l <= d; ++l) {
            const std::size_t left = ranks[static_cast<std::size_t>(l - 1)];
            const std::size_t right = ranks[static_cast<std::size_t>(l)];
            std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(right * 2 * m), 0.0);
            for (std::size_t a = 0; a < left; ++a) {
                for (std::size_t b = 0; b < right; ++b) {
                    const double* s = spectra.fiber(level_offset[static_cast<std::size_t>(l - 1)] + a * right + b) + 2 * k0;
                    multiply_accumulate(next.data() + b * 2 * m, row.data() + a * 2 * m, s, m);
                }
            }
            row.swap(next);
        }
        std::copy(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(2 * m), out);
    };

    return gain_by_fft(d, state, fibers.size(), plan, [&](std::size_t f) { return fibers[f]; }, combine);
}

std::vector<double> rhs_tt_Q(const TTKernel& kernel, const ConcentrationState& state, const ExecutionPlan& plan) {
    check_sizes("rhs_tt_Q", kernel.dim(), kernel.mode_size(), state);
    const int d = kernel.dim();

    std::vector<std::span<const double>> fibers;
    for (int l = 1; l < d; ++l) {
        const auto& core = kernel.core(l);
        for (std::size_t a = 0; a < core.rank_left(); ++a)
            for (std::size_t b = 0; b < core.rank_right(); ++b) fibers.push_back(core.fiber(a, b));
    }
    const auto sums = contract_fibers(state, fibers.size(), plan, [&](std::size_t f) { return fibers[f]; });

    // w = V^(1) V^(2) ... V^(d-1), a row vector over r_{d-1}
    std::vector<double> w{1.0};
    std::size_t offset = 0;
    for (int l = 1; l < d; ++l) {
        const auto& core = kernel.core(l);
        std::vector<double> next(core.rank_right(), 0.0);
        for (std::size_t a = 0; a < core.rank_left(); ++a)
            for (std::size_t b = 0; b < core.rank_right(); ++b) next[b] += w[a] * sums[offset + a * core.rank_right() + b];
        offset += core.rank_left() * core.rank_right();
        w.swap(next);
    }
    const auto& last = kernel.core(d);
    return scatter_loss(d, state, w, plan, [&](std::size_t r) { return last.fiber(r, 0); });
}

std::vector<double> rhs_cp_P(const CPKernel& kernel, const ConcentrationState& state, const ExecutionPlan& plan) {
    check_sizes("rhs_cp_P", kernel.dim(), kernel.mode_size(), state);
    const int d = kernel.dim();
    const std::size_t R = kernel.rank();

    // fiber (mode, r) lives at (mode - 1) * R + r
    auto source = [&](std::size_t f) { return kernel.factor(static_cast<int>(f / R) + 1).column(f % R); };

    auto combine = [&](const detail::SpectrumBuffer& spectra, std::size_t k0, std::size_t k1, double* out) {
        const std::size_t m = k1 - k0;
        std::vector<double> term(2 * m);
        std::fill(out, out + 2 * m, 0.0);
        for (std::size_t r = 0; r < R; ++r) {
            const double* s = spectra.fiber(r) + 2 * k0;
            std::copy(s, s + 2 * m, term.begin());
            for (int mode = 2; mode <= d; ++mode) {
                multiply_in_place(term.data(), spectra.fiber(static_cast<std::size_t>(mode - 1) * R + r) + 2 * k0, m);
            }
            for (std::size_t j = 0; j < 2 * m; ++j) out[j] += term[j];
        }
    };

    return gain_by_fft(d, state, static_cast<std::size_t>(d) * R, plan, source, combine);
}

std::vector<double> rhs_cp_Q(const CPKernel& kernel, const ConcentrationState& state, const ExecutionPlan& plan) {
    check_sizes("rhs_cp_Q", kernel.dim(), kernel.mode_size(), state);
    const int d = kernel.dim();
    const std::size_t R = kernel.rank();

    auto source = [&](std::size_t f) { return kernel.factor(static_cast<int>(f / R) + 1).column(f % R); };
    const auto sums = contract_fibers(state, static_cast<std::size_t>(d - 1) * R, plan, source);

    std::vector<double> weights(R, 1.0);
    for (int mode = 1; mode < d; ++mode)
        for (std::size_t r = 0; r < R; ++r) weights[r] *= sums[static_cast<std::size_t>(mode - 1) * R + r];

    const auto& last = kernel.factor(d);
    return scatter_loss(d, state, weights, plan, [&](std::size_t r) { return last.column(r); });
}

RhsResult rhs_total(const KernelSet& kernels, const ConcentrationState& state, const ExecutionPlan& plan,
                    bool keep_per_order) {
    if (kernels.empty()) throw ValidationError("no collision orders configured");
    if (kernels.mode_size() != state.size()) {
        throw ValidationError("rhs_total: kernel set N=" + std::to_string(kernels.mode_size())
                              + " differs from state length " + std::to_string(state.size()));
    }
    const auto N = static_cast<std::size_t>(state.size());
    RhsResult result;
    result.p.assign(N, 0.0);
    result.q.assign(N, 0.0);

    for (const auto& [order, reps] : kernels.orders()) {
        OrderTerms terms{order, {}, {}};
        if (reps.cp) {
            terms.p = rhs_cp_P(*reps.cp, state, plan);
            terms.q = rhs_cp_Q(*reps.cp, state, plan);
        } else if (reps.tt) {
            terms.p = rhs_tt_P(*reps.tt, state, plan);
            terms.q = rhs_tt_Q(*reps.tt, state, plan);
        } else if (reps.dense) {
            terms.p = rhs_dense_P(*reps.dense, state);
            terms.q = rhs_dense_Q(*reps.dense, state);
        } else {
            throw ValidationError("order " + std::to_string(order) + " has no kernel representation");
        }
        for (std::size_t k = 0; k < N; ++k) {
            result.p[k] += terms.p[k];
            result.q[k] += terms.q[k];
        }
        if (keep_per_order) result.per_order.push_back(std::move(terms));
    }
    result.s.resize(N);
    for (std::size_t k = 0; k < N; ++k) result.s[k] = result.p[k] + result.q[k];
    return result;
}

} // namespace ttagg
