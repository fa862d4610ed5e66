#include "ttagg/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ttagg {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

void TimeGrid::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time grid: dt must be positive");
    if (steps < 1) throw ValidationError("time grid: steps must be >= 1");
    if (!std::isfinite(t0)) throw ValidationError("time grid: t0 must be finite");
}

ConcentrationState InitialCondition::make(int N, double t0) const {
    if (kind == Kind::Monodisperse) {
        if (!(c0 >= 0.0)) throw ValidationError("initial condition: c0 must be nonnegative");
        std::vector<double> n(static_cast<std::size_t>(N), 0.0);
        n.at(0) = c0;
        return ConcentrationState(std::move(n), t0);
    }
    if (static_cast<int>(values.size()) != N) {
        throw ValidationError("initial condition: vector has " + std::to_string(values.size())
                              + " entries, expected N=" + std::to_string(N));
    }
    for (double v : values) {
        if (!(v >= 0.0)) throw ValidationError("initial condition: concentrations must be nonnegative");
    }
    return ConcentrationState(values, t0);
}

std::vector<double> moments(const ConcentrationState& state, std::span<const double> orders) {
    std::vector<double> out;
    out.reserve(orders.size());
    const auto n = state.values();
    for (double m : orders) {
        if (!(m >= 0.0)) throw ValidationError("moments: orders must be >= 0");
        double sum = 0.0;
        for (std::size_t k = 0; k < n.size(); ++k) {
            const double size = static_cast<double>(k + 1);
            const double weight = m == 0.0 ? 1.0 : m == 1.0 ? size : m == 2.0 ? size * size : std::pow(size, m);
            sum += weight * n[k];
        }
        out.push_back(sum);
    }
    return out;
}

MomentRecord measure(const ConcentrationState& state, int step, double initial_mass) {
    static constexpr double kOrders[] = {0.0, 1.0, 2.0};
    const auto m = moments(state, kOrders);
    const auto n = state.values();
    const auto [lo, hi] = std::minmax_element(n.begin(), n.end());
    MomentRecord r;
    r.step = step;
    r.t = state.t();
    r.m0 = m[0];
    r.m1 = m[1];
    r.m2 = m[2];
    r.min_n = *lo;
    r.mass_drift = initial_mass != 0.0 ? m[1] / initial_mass - 1.0 : 0.0;
    r.negative = *lo < -1e-9 * *hi;
    return r;
}

int MomentSeries::negativity_warnings() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.negative; }));
}

ConcentrationState rk2_step(const ConcentrationState& state, double dt, const RhsFunction& rhs, int step_index) {
    if (!(dt > 0.0)) throw ValidationError("rk2_step: dt must be positive");
    const auto n = state.values();
    const std::size_t N = n.size();

    const auto k1 = rhs(state);
    if (k1.size() != N || !all_finite(k1)) {
        throw NumericalError("non-finite right-hand side in first stage of step " + std::to_string(step_index));
    }
    std::vector<double> mid(N);
    for (std::size_t k = 0; k < N; ++k) mid[k] = n[k] + 0.5 * dt * k1[k];
    if (!all_finite(mid)) throw NumericalError("non-finite midpoint state in step " + std::to_string(step_index));

    const auto k2 = rhs(ConcentrationState(std::move(mid), state.t() + 0.5 * dt));
    if (k2.size() != N || !all_finite(k2)) {
        throw NumericalError("non-finite right-hand side in second stage of step " + std::to_string(step_index));
    }
    std::vector<double> next(N);
    for (std::size_t k = 0; k < N; ++k) next[k] = n[k] + dt * k2[k];
    if (!all_finite(next)) throw NumericalError("non-finite state after step " + std::to_string(step_index));
    return ConcentrationState(std::move(next), state.t() + dt);
}

ConcentrationState rk2_step(const ConcentrationState& state, double dt, const KernelSet& kernels,
                            const ExecutionPlan& plan, int step_index) {
    return rk2_step(state, dt, [&](const ConcentrationState& s) { return rhs_total(kernels, s, plan).s; }, step_index);
}

IntegrationResult integrate(const RhsFunction& rhs, const ConcentrationState& initial, const TimeGrid& grid,
                            int record_every, const RecordObserver& observer) {
    grid.validate();
    if (record_every < 1) throw ValidationError("integrate: record_every must be >= 1");

    ConcentrationState state(std::vector<double>(initial.values().begin(), initial.values().end()), grid.t0);
    const double initial_mass = moments(state, std::vector<double>{1.0})[0];
    MomentSeries series;
    series.records.push_back(measure(state, 0, initial_mass));
    if (observer) observer(0, state);

    for (int step = 1; step <= grid.steps; ++step) {
        try {
            state = rk2_step(state, grid.dt, rhs, step);
        } catch (const NumericalError& e) {
            throw IntegrationFailure(e.what(), step, std::move(series));
        }
        // t accumulated as t0 + step * dt rather than by repeated addition
        state = ConcentrationState(std::vector<double>(state.values().begin(), state.values().end()),
                                   grid.t0 + step * grid.dt);
        if (step % record_every == 0) {
            series.records.push_back(measure(state, step, initial_mass));
            if (observer) observer(step, state);
        }
    }
    return {std::move(state), std::move(series)};
}

IntegrationResult integrate(const KernelSet& kernels, const ConcentrationState& initial, const TimeGrid& grid,
                            int record_every, const ExecutionPlan& plan, const RecordObserver& observer) {
    if (kernels.mode_size() != initial.size()) {
        throw ValidationError("integrate: initial state length differs from kernel N");
    }
    return integrate([&](const ConcentrationState& s) { return rhs_total(kernels, s, plan).s; }, initial, grid,
                     record_every, observer);
}

} // namespace ttagg
