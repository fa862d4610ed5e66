#ifndef TTAGG_KINETICS_HPP_
#define TTAGG_KINETICS_HPP_

// Right-hand side of the multi-particle aggregation system
//
//   dn_k/dt = sum_{d=2}^{D} ( p_k^(d)[n] + q_k^(d)[n] ),
//
//   p_k^(d) =  1/d!       * sum_{|i| = k}        C^(d)_{i}     n_{i_1} ... n_{i_d}
//   q_k^(d) = -n_k/(d-1)! * sum_{i in [1,N]^{d-1}} C^(d)_{i, k} n_{i_1} ... n_{i_{d-1}}
//
// truncated to sizes 1..N. Each operator comes in three flavours: a dense
// O(N^d) oracle, a TT path and a CP path; the latter two reduce the gain sums
// to padded FFT convolutions.

#include "ttagg/parallel.hpp"
#include "ttagg/tensor.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ttagg {

// Concentrations n_1..n_N at time t. values()[k - 1] holds size k.
class ConcentrationState {
public:
    explicit ConcentrationState(std::vector<double> n, double t = 0.0);

    int size() const noexcept { return static_cast<int>(n_.size()); }
    double t() const noexcept { return t_; }
    double at(int size) const { return n_.at(static_cast<std::size_t>(size - 1)); }
    std::span<const double> values() const noexcept { return n_; }

private:
    std::vector<double> n_;
    double t_;
};

// Representations available for one collision order.
struct OrderKernels {
    std::optional<CPKernel> cp;
    std::optional<TTKernel> tt;
    std::optional<DenseKernel> dense;
};

// Kernels per collision order d >= 2, all with the same mode size.
class KernelSet {
public:
    explicit KernelSet(int N);

    void add(int order, TTKernel kernel);
    void add(int order, CPKernel kernel);
    void add(int order, DenseKernel kernel);

    int mode_size() const noexcept { return N_; }
    bool empty() const noexcept { return orders_.empty(); }
    int max_order() const;
    const std::map<int, OrderKernels>& orders() const noexcept { return orders_; }

private:
    void check(int order, int dim, int mode_size) const;

    int N_;
    std::map<int, OrderKernels> orders_;
};

struct OrderTerms {
    int order;
    std::vector<double> p;
    std::vector<double> q;
};

struct RhsResult {
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> s;  // s[k] == p[k] + q[k]
    std::vector<OrderTerms> per_order;  // filled on request
};

std::vector<double> rhs_dense_P(const DenseKernel& kernel, const ConcentrationState& state);
std::vector<double> rhs_dense_Q(const DenseKernel& kernel, const ConcentrationState& state);

std::vector<double> rhs_tt_P(const TTKernel& kernel, const ConcentrationState& state,
                             const ExecutionPlan& plan = ExecutionPlan());
std::vector<double> rhs_tt_Q(const TTKernel& kernel, const ConcentrationState& state,
                             const ExecutionPlan& plan = ExecutionPlan());

std::vector<double> rhs_cp_P(const CPKernel& kernel, const ConcentrationState& state,
                             const ExecutionPlan& plan = ExecutionPlan());
std::vector<double> rhs_cp_Q(const CPKernel& kernel, const ConcentrationState& state,
                             const ExecutionPlan& plan = ExecutionPlan());

// Sum over all configured orders. Each order uses CP if present, else TT,
// else the dense oracle.
RhsResult rhs_total(const KernelSet& kernels, const ConcentrationState& state,
                    const ExecutionPlan& plan = ExecutionPlan(), bool keep_per_order = false);

} // namespace ttagg

#endif // TTAGG_KINETICS_HPP_
