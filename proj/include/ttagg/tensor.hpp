#ifndef TTAGG_TENSOR_HPP_
#define TTAGG_TENSOR_HPP_

// Kernel containers for d-particle kinetic coefficients: tensor train (TT),
// canonical polyadic (CP) and dense, together with the element evaluators
// used as ground truth.
//
// Particle sizes are 1-based everywhere in this interface: size k addresses
// the k-th entry of a mode. Rank indices are plain 0-based positions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace ttagg {

inline constexpr std::size_t kDefaultDenseBudget = std::size_t{1} << 26;
inline constexpr int kMaxPermutationDim = 8;

// i^mu evaluated as exp(mu * ln i); exact 1 for i == 1 or mu == 0.
double size_power(int size, double exponent);

// Multi-index (i_1, ..., i_d) of particle sizes, every entry >= 1.
class MultiIndex {
public:
    explicit MultiIndex(std::vector<int> entries);
    MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

    int dim() const noexcept { return static_cast<int>(entries_.size()); }
    int operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
    std::span<const int> entries() const noexcept { return entries_; }
    // |i| = i_1 + ... + i_d
    long long total() const noexcept;

    // Throws ValidationError unless dim() == d and every entry is <= N.
    void check_bounds(int d, int N) const;

private:
    std::vector<int> entries_;
};

// Exponents (mu_1, ..., mu_D) of a generalized Brownian kernel.
class BrownianSpec {
public:
    explicit BrownianSpec(std::vector<double> exponents);
    BrownianSpec(std::initializer_list<double> exponents) : BrownianSpec(std::vector<double>(exponents)) {}

    int dim() const noexcept { return static_cast<int>(exponents_.size()); }
    double operator[](int j) const { return exponents_[static_cast<std::size_t>(j)]; }
    std::span<const double> exponents() const noexcept { return exponents_; }

private:
    std::vector<double> exponents_;
};

// Three-way core of shape rank_left x mode_size x rank_right.
// Fibers over the size mode are contiguous.
class TTCore {
public:
    TTCore(std::size_t rank_left, int mode_size, std::size_t rank_right);

    std::size_t rank_left() const noexcept { return rank_left_; }
    int mode_size() const noexcept { return mode_size_; }
    std::size_t rank_right() const noexcept { return rank_right_; }

    double operator()(std::size_t a, int size, std::size_t b) const {
        return data_[offset(a, b) + static_cast<std::size_t>(size - 1)];
    }
    double& operator()(std::size_t a, int size, std::size_t b) {
        return data_[offset(a, b) + static_cast<std::size_t>(size - 1)];
    }

    // Entry j of a fiber holds size j + 1.
    std::span<const double> fiber(std::size_t a, std::size_t b) const {
        return std::span<const double>(data_).subspan(offset(a, b), static_cast<std::size_t>(mode_size_));
    }
    std::span<double> fiber(std::size_t a, std::size_t b) {
        return std::span<double>(data_).subspan(offset(a, b), static_cast<std::size_t>(mode_size_));
    }

    friend bool operator==(const TTCore&, const TTCore&) = default;

private:
    std::size_t offset(std::size_t a, std::size_t b) const noexcept {
        return (a * rank_right_ + b) * static_cast<std::size_t>(mode_size_);
    }

    std::size_t rank_left_;
    int mode_size_;
    std::size_t rank_right_;
    std::vector<double> data_;
};

// d-dimensional tensor in TT format. Ranks (R_0, ..., R_d) with R_0 = R_d = 1.
class TTKernel {
public:
    explicit TTKernel(std::vector<TTCore> cores);

    int dim() const noexcept { return static_cast<int>(cores_.size()); }
    int mode_size() const noexcept { return cores_.front().mode_size(); }
    std::vector<std::size_t> ranks() const;
    std::size_t max_rank() const;

    // level runs 1..dim()
    const TTCore& core(int level) const { return cores_.at(static_cast<std::size_t>(level - 1)); }
    TTCore& core(int level) { return cores_.at(static_cast<std::size_t>(level - 1)); }
    std::span<const TTCore> cores() const noexcept { return cores_; }

private:
    std::vector<TTCore> cores_;
};

// N x R factor matrix; column r is contiguous.
class CPFactor {
public:
    CPFactor(int mode_size, std::size_t rank);

    int mode_size() const noexcept { return mode_size_; }
    std::size_t rank() const noexcept { return rank_; }

    double operator()(int size, std::size_t r) const {
        return data_[r * static_cast<std::size_t>(mode_size_) + static_cast<std::size_t>(size - 1)];
    }
    double& operator()(int size, std::size_t r) {
        return data_[r * static_cast<std::size_t>(mode_size_) + static_cast<std::size_t>(size - 1)];
    }
    std::span<const double> column(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * static_cast<std::size_t>(mode_size_),
                                                      static_cast<std::size_t>(mode_size_));
    }
    std::span<double> column(std::size_t r) {
        return std::span<double>(data_).subspan(r * static_cast<std::size_t>(mode_size_),
                                                static_cast<std::size_t>(mode_size_));
    }

private:
    int mode_size_;
    std::size_t rank_;
    std::vector<double> data_;
};

// Sum of R rank-one terms, one factor matrix per mode.
class CPKernel {
public:
    explicit CPKernel(std::vector<CPFactor> factors);

    int dim() const noexcept { return static_cast<int>(factors_.size()); }
    int mode_size() const noexcept { return factors_.front().mode_size(); }
    std::size_t rank() const noexcept { return factors_.front().rank(); }

    // mode runs 1..dim()
    const CPFactor& factor(int mode) const { return factors_.at(static_cast<std::size_t>(mode - 1)); }
    std::span<const CPFactor> factors() const noexcept { return factors_; }

private:
    std::vector<CPFactor> factors_;
};

// Full N^d array, row-major (last index fastest). Verification only.
class DenseKernel {
public:
    DenseKernel(int dim, int mode_size, std::vector<double> values,
                std::size_t budget = kDefaultDenseBudget);

    // Throws BudgetExceeded when N^d exceeds budget.
    static std::size_t checked_size(int dim, int mode_size, std::size_t budget = kDefaultDenseBudget);

    int dim() const noexcept { return dim_; }
    int mode_size() const noexcept { return mode_size_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator()(const MultiIndex& idx) const;

private:
    int dim_;
    int mode_size_;
    std::vector<double> values_;
};

// Sum over all d! permutations sigma of prod_l i_{sigma(l)}^{mu_l}.
double brownian_element(const BrownianSpec& spec, const MultiIndex& idx);

// Exact TT representation of the generalized Brownian kernel with ranks
// binomial(D, l). Rank positions at level l enumerate l-subsets of the
// exponents (see SubsetCodec); core l+1 adds exactly one exponent.
TTKernel build_brownian_tt(const BrownianSpec& spec, int N);

// The same kernel in CP format: one rank-one term per permutation, rank D!.
CPKernel build_brownian_cp(const BrownianSpec& spec, int N);

// C == c as rank-1 TT / CP (c carried by the first mode).
TTKernel constant_tt(int dim, int N, double c);
CPKernel constant_cp(int dim, int N, double c);

// binomial(D, ceil(D/2)), the largest rank build_brownian_tt produces.
std::size_t tt_max_rank_bound(int D);

double tt_element(const TTKernel& kernel, const MultiIndex& idx);
double cp_element(const CPKernel& kernel, const MultiIndex& idx);

using ElementFunction = std::function<double(const MultiIndex&)>;

DenseKernel dense_from_function(int dim, int N, const ElementFunction& element,
                                std::size_t budget = kDefaultDenseBudget);
DenseKernel dense_from_brownian(const BrownianSpec& spec, int N, std::size_t budget = kDefaultDenseBudget);
DenseKernel dense_from_tt(const TTKernel& kernel, std::size_t budget = kDefaultDenseBudget);
DenseKernel dense_from_cp(const CPKernel& kernel, std::size_t budget = kDefaultDenseBudget);

// Largest relative deviation |C(i) - C(pi(i))| / max(|C(i)|, tiny) over
// `samples` random indices and random permutations pi.
double symmetry_violation(const ElementFunction& element, int dim, int N, int samples,
                          std::uint64_t seed);

} // namespace ttagg

#endif // TTAGG_TENSOR_HPP_
