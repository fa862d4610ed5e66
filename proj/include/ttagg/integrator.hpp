#ifndef TTAGG_INTEGRATOR_HPP_
#define TTAGG_INTEGRATOR_HPP_

#include "ttagg/errors.hpp"
#include "ttagg/kinetics.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ttagg {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    int steps = 1;

    void validate() const;
};

struct InitialCondition {
    enum class Kind { Monodisperse, Vector };

    Kind kind = Kind::Monodisperse;
    double c0 = 1.0;             // monodisperse: n_1 = c0
    std::vector<double> values;  // vector: n_1..n_N, nonnegative

    ConcentrationState make(int N, double t0 = 0.0) const;
};

// M_m = sum_k k^m n_k for each requested m >= 0.
std::vector<double> moments(const ConcentrationState& state, std::span<const double> orders);

struct MomentRecord {
    int step = 0;
    double t = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double min_n = 0.0;
    double mass_drift = 0.0;  // M1 / M1(t0) - 1
    bool negative = false;    // min(n) < -1e-9 max(n)
};

struct MomentSeries {
    std::vector<MomentRecord> records;

    int negativity_warnings() const;
};

MomentRecord measure(const ConcentrationState& state, int step, double initial_mass);

// Raised when a step produces non-finite values; carries what was recorded so far.
class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, int step, MomentSeries partial)
        : NumericalError(what), step_(step), partial_(std::move(partial)) {}

    int step() const noexcept { return step_; }
    const MomentSeries& partial() const noexcept { return partial_; }

private:
    int step_;
    MomentSeries partial_;
};

using RhsFunction = std::function<std::vector<double>(const ConcentrationState&)>;

// Explicit midpoint rule: k1 = S[n], k2 = S[n + dt/2 k1], n' = n + dt k2.
// Exactly two right-hand-side evaluations. Throws NumericalError naming
// `step_index` when a stage is non-finite.
ConcentrationState rk2_step(const ConcentrationState& state, double dt, const RhsFunction& rhs, int step_index = 0);
ConcentrationState rk2_step(const ConcentrationState& state, double dt, const KernelSet& kernels,
                            const ExecutionPlan& plan = ExecutionPlan(), int step_index = 0);

struct IntegrationResult {
    ConcentrationState final_state;
    MomentSeries series;
};

// Called for every recorded state (step 0 and every record_every steps).
using RecordObserver = std::function<void(int step, const ConcentrationState&)>;

IntegrationResult integrate(const KernelSet& kernels, const ConcentrationState& initial, const TimeGrid& grid,
                            int record_every, const ExecutionPlan& plan = ExecutionPlan(),
                            const RecordObserver& observer = {});

IntegrationResult integrate(const RhsFunction& rhs, const ConcentrationState& initial, const TimeGrid& grid,
                            int record_every, const RecordObserver& observer = {});

} // namespace ttagg

#endif // TTAGG_INTEGRATOR_HPP_
