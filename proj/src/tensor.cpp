#include "ttagg/tensor.hpp"

#include "ttagg/errors.hpp"
#include "ttagg/subset_codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace ttagg {

namespace {

std::string str(long long v) { return std::to_string(v); }

// Advances a 1-based odometer over [1, N]^d, last entry fastest.
bool next_index(std::vector<int>& idx, int N) {
    for (auto j = idx.size(); j-- > 0;) {
        if (++idx[j] <= N) return true;
        idx[j] = 1;
    }
    return false;
}

} // namespace

double size_power(int size, double exponent) {
    if (size == 1 || exponent == 0.0) return 1.0;
    return std::exp(exponent * std::log(static_cast<double>(size)));
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("MultiIndex: empty index");
    for (int e : entries_) {
        if (e < 1) throw ValidationError("MultiIndex: sizes are 1-based, got " + str(e));
    }
}

long long MultiIndex::total() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), 0LL);
}

void MultiIndex::check_bounds(int d, int N) const {
    if (dim() != d) {
        throw ValidationError("index has " + str(dim()) + " entries, kernel dimension is " + str(d));
    }
    for (int e : entries_) {
        if (e > N) throw ValidationError("index entry " + str(e) + " exceeds mode size " + str(N));
    }
}

BrownianSpec::BrownianSpec(std::vector<double> exponents) : exponents_(std::move(exponents)) {
    if (exponents_.size() < 2) {
        throw ValidationError("BrownianSpec: need at least 2 exponents, got " + str(static_cast<long long>(exponents_.size())));
    }
    for (double mu : exponents_) {
        if (!std::isfinite(mu)) throw ValidationError("BrownianSpec: exponents must be finite");
    }
}

TTCore::TTCore(std::size_t rank_left, int mode_size, std::size_t rank_right)
    : rank_left_(rank_left), mode_size_(mode_size), rank_right_(rank_right) {
    if (rank_left == 0 || rank_right == 0 || mode_size < 1) {
        throw ValidationError("TTCore: ranks and mode size must be positive");
    }
    data_.assign(rank_left * rank_right * static_cast<std::size_t>(mode_size), 0.0);
}

TTKernel::TTKernel(std::vector<TTCore> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) throw ValidationError("TTKernel: no cores");
    const int N = cores_.front().mode_size();
    if (cores_.front().rank_left() != 1 || cores_.back().rank_right() != 1) {
        throw ValidationError("TTKernel: boundary ranks must be 1");
    }
    for (std::size_t l = 0; l < cores_.size(); ++l) {
        if (cores_[l].mode_size() != N) throw ValidationError("TTKernel: cores disagree on mode size");
        if (l > 0 && cores_[l].rank_left() != cores_[l - 1].rank_right()) {
            throw ValidationError("TTKernel: rank mismatch between cores " + str(static_cast<long long>(l))
                                  + " and " + str(static_cast<long long>(l + 1)));
        }
    }
}

std::vector<std::size_t> TTKernel::ranks() const {
    std::vector<std::size_t> r{1};
    for (const auto& c : cores_) r.push_back(c.rank_right());
    return r;
}

std::size_t TTKernel::max_rank() const {
    auto r = ranks();
    return *std::max_element(r.begin(), r.end());
}

CPFactor::CPFactor(int mode_size, std::size_t rank) : mode_size_(mode_size), rank_(rank) {
    if (mode_size < 1 || rank == 0) throw ValidationError("CPFactor: mode size and rank must be positive");
    data_.assign(rank * static_cast<std::size_t>(mode_size), 0.0);
}

CPKernel::CPKernel(std::vector<CPFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ValidationError("CPKernel: no factors");
    for (const auto& f : factors_) {
        if (f.mode_size() != factors_.front().mode_size() || f.rank() != factors_.front().rank()) {
            throw ValidationError("CPKernel: factors must share mode size and rank");
        }
    }
}

std::size_t DenseKernel::checked_size(int dim, int mode_size, std::size_t budget) {
    if (dim < 1 || mode_size < 1) throw ValidationError("DenseKernel: dimension and mode size must be positive");
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) {
        if (total > budget / static_cast<std::size_t>(mode_size)) {
            throw BudgetExceeded("dense kernel with N=" + str(mode_size) + ", d=" + str(dim)
                                 + " exceeds the element budget of " + str(static_cast<long long>(budget))
                                 + "; reduce N");
        }
        total *= static_cast<std::size_t>(mode_size);
    }
    return total;
}

DenseKernel::DenseKernel(int dim, int mode_size, std::vector<double> values, std::size_t budget)
    : dim_(dim), mode_size_(mode_size), values_(std::move(values)) {
    if (values_.size() != checked_size(dim, mode_size, budget)) {
        throw ValidationError("DenseKernel: expected N^d = " + str(static_cast<long long>(checked_size(dim, mode_size, budget)))
                              + " values, got " + str(static_cast<long long>(values_.size())));
    }
}

double DenseKernel::operator()(const MultiIndex& idx) const {
    idx.check_bounds(dim_, mode_size_);
    std::size_t offset = 0;
    for (int e : idx.entries()) offset = offset * static_cast<std::size_t>(mode_size_) + static_cast<std::size_t>(e - 1);
    return values_[offset];
}

double brownian_element(const BrownianSpec& spec, const MultiIndex& idx) {
    const int d = spec.dim();
    if (idx.dim() != d) {
        throw ValidationError("brownian_element: index has " + str(idx.dim()) + " entries, spec has " + str(d));
    }
    if (d > kMaxPermutationDim) {
        throw ValidationError("brownian_element: permutation enumeration limited to D <= "
                              + str(kMaxPermutationDim) + ", got " + str(d));
    }
    // powers[s][j] = i_j^{mu_s}
    std::vector<double> powers(static_cast<std::size_t>(d * d));
    for (int s = 0; s < d; ++s)
        for (int j = 0; j < d; ++j) powers[static_cast<std::size_t>(s * d + j)] = size_power(idx[j], spec[s]);

    std::vector<int> sigma(static_cast<std::size_t>(d));
    std::iota(sigma.begin(), sigma.end(), 0);
    double sum = 0.0;
    do {
        double term = 1.0;
        for (int s = 0; s < d; ++s) term *= powers[static_cast<std::size_t>(s * d + sigma[static_cast<std::size_t>(s)])];
        sum += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return sum;
}

TTKernel build_brownian_tt(const BrownianSpec& spec, int N) {
    const int D = spec.dim();
    if (N < 1) throw ValidationError("build_brownian_tt: N must be positive");

    // powers[s][i-1] = i^{mu_{s+1}}
    std::vector<std::vector<double>> powers(static_cast<std::size_t>(D), std::vector<double>(static_cast<std::size_t>(N)));
    for (int s = 0; s < D; ++s)
        for (int i = 1; i <= N; ++i) powers[static_cast<std::size_t>(s)][static_cast<std::size_t>(i - 1)] = size_power(i, spec[s]);

    std::vector<TTCore> cores;
    cores.reserve(static_cast<std::size_t>(D));
    for (int level = 1; level <= D; ++level) {
        const SubsetCodec left(D, level - 1);
        const SubsetCodec right(D, level);
        TTCore core(left.size(), N, right.size());
        for (std::size_t b = 0; b < right.size(); ++b) {
            const auto target = right.decode(b);
            // Removing one element of the target gives the unique left subset
            // whose union with that element is the target.
            std::vector<int> rest;
            for (std::size_t drop = 0; drop < target.size(); ++drop) {
                rest.clear();
                for (std::size_t j = 0; j < target.size(); ++j)
                    if (j != drop) rest.push_back(target[j]);
                const std::size_t a = left.encode(rest);
                const auto& p = powers[static_cast<std::size_t>(target[drop] - 1)];
                std::copy(p.begin(), p.end(), core.fiber(a, b).begin());
            }
        }
        cores.push_back(std::move(core));
    }
    return TTKernel(std::move(cores));
}

CPKernel build_brownian_cp(const BrownianSpec& spec, int N) {
    const int D = spec.dim();
    if (D > kMaxPermutationDim) {
        throw ValidationError("build_brownian_cp: permutation enumeration limited to D <= " + str(kMaxPermutationDim));
    }
    if (N < 1) throw ValidationError("build_brownian_cp: N must be positive");
    std::size_t rank = 1;
    for (int j = 2; j <= D; ++j) rank *= static_cast<std::size_t>(j);

    std::vector<CPFactor> factors(static_cast<std::size_t>(D), CPFactor(N, rank));
    std::vector<int> sigma(static_cast<std::size_t>(D));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::size_t r = 0;
    do {
        // term prod_s i_{sigma(s)}^{mu_s}: mode sigma(s) carries exponent mu_s
        for (int s = 0; s < D; ++s) {
            auto column = factors[static_cast<std::size_t>(sigma[static_cast<std::size_t>(s)])].column(r);
            for (int i = 1; i <= N; ++i) column[static_cast<std::size_t>(i - 1)] = size_power(i, spec[s]);
        }
        ++r;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return CPKernel(std::move(factors));
}

TTKernel constant_tt(int dim, int N, double c) {
    if (dim < 1) throw ValidationError("constant_tt: dimension must be positive");
    std::vector<TTCore> cores;
    for (int level = 1; level <= dim; ++level) {
        TTCore core(1, N, 1);
        auto f = core.fiber(0, 0);
        std::fill(f.begin(), f.end(), level == 1 ? c : 1.0);
        cores.push_back(std::move(core));
    }
    return TTKernel(std::move(cores));
}

CPKernel constant_cp(int dim, int N, double c) {
    if (dim < 1) throw ValidationError("constant_cp: dimension must be positive");
    std::vector<CPFactor> factors;
    for (int mode = 1; mode <= dim; ++mode) {
        CPFactor f(N, 1);
        auto col = f.column(0);
        std::fill(col.begin(), col.end(), mode == 1 ? c : 1.0);
        factors.push_back(std::move(f));
    }
    return CPKernel(std::move(factors));
}

std::size_t tt_max_rank_bound(int D) {
    if (D < 2) throw ValidationError("tt_max_rank_bound: D must be >= 2");
    return binomial(D, (D + 1) / 2);
}

double tt_element(const TTKernel& kernel, const MultiIndex& idx) {
    idx.check_bounds(kernel.dim(), kernel.mode_size());
    std::vector<double> row{1.0};
    std::vector<double> next;
    for (int level = 1; level <= kernel.dim(); ++level) {
        const auto& core = kernel.core(level);
        const int i = idx[level - 1];
        next.assign(core.rank_right(), 0.0);
        for (std::size_t a = 0; a < core.rank_left(); ++a) {
            if (row[a] == 0.0) continue;
            for (std::size_t b = 0; b < core.rank_right(); ++b) next[b] += row[a] * core(a, i, b);
        }
        row.swap(next);
    }
    return row[0];
}

double cp_element(const CPKernel& kernel, const MultiIndex& idx) {
    idx.check_bounds(kernel.dim(), kernel.mode_size());
    double sum = 0.0;
    for (std::size_t r = 0; r < kernel.rank(); ++r) {
        double term = 1.0;
        for (int mode = 1; mode <= kernel.dim(); ++mode) term *= kernel.factor(mode)(idx[mode - 1], r);
        sum += term;
    }
    return sum;
}

DenseKernel dense_from_function(int dim, int N, const ElementFunction& element, std::size_t budget) {
    const std::size_t total = DenseKernel::checked_size(dim, N, budget);
    std::vector<double> values;
    values.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(dim), 1);
    do {
        values.push_back(element(MultiIndex(idx)));
    } while (next_index(idx, N));
    return DenseKernel(dim, N, std::move(values), budget);
}

DenseKernel dense_from_brownian(const BrownianSpec& spec, int N, std::size_t budget) {
    return dense_from_function(spec.dim(), N, [&](const MultiIndex& i) { return brownian_element(spec, i); }, budget);
}

DenseKernel dense_from_tt(const TTKernel& kernel, std::size_t budget) {
    return dense_from_function(kernel.dim(), kernel.mode_size(),
                               [&](const MultiIndex& i) { return tt_element(kernel, i); }, budget);
}

DenseKernel dense_from_cp(const CPKernel& kernel, std::size_t budget) {
    return dense_from_function(kernel.dim(), kernel.mode_size(),
                               [&](const MultiIndex& i) { return cp_element(kernel, i); }, budget);
}

double symmetry_violation(const ElementFunction& element, int dim, int N, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size_dist(1, N);
    double worst = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int s = 0; s < samples; ++s) {
        for (auto& e : idx) e = size_dist(rng);
        auto permuted = idx;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        const double a = element(MultiIndex(idx));
        const double b = element(MultiIndex(permuted));
        const double scale = std::max(std::abs(a), std::numeric_limits<double>::min());
        worst = std::max(worst, std::abs(a - b) / scale);
    }
    return worst;
}

} // namespace ttagg
