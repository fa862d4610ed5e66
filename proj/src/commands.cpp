#include "ttagg/commands.hpp"

#include "ttagg/bench.hpp"
#include "ttagg/config.hpp"
#include "ttagg/errors.hpp"

#include <fftw3.h>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#ifndef TTAGG_VERSION
#define TTAGG_VERSION "dev"
#endif

namespace ttagg {

namespace {

constexpr double kVerifyTolerance = 1e-10;
constexpr int kVerifyStates = 5;

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitIo;
    } catch (const ValidationError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitValidation;
    } catch (const NumericalError& e) {
        fmt::print(err, "numerical failure: {}\n", e.what());
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitIo;
    }
}

SimulationConfig load_with_overrides(const CommandOptions& options, std::ostream& err) {
    auto config = SimulationConfig::load(options.config);
    if (options.output) config.output_dir = *options.output;
    if (!options.workers.empty()) {
        for (int w : options.workers)
            if (w < 1) throw ValidationError("--workers entries must be >= 1");
        config.workers = options.workers.front();
        config.bench_workers = options.workers;
    }
    if (options.seed) config.seed = *options.seed;
    for (const auto& w : config.warnings) fmt::print(err, "warning: {}\n", w);
    return config;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    return f;
}

double relative_error(const std::vector<double>& fast, const std::vector<double>& oracle) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < oracle.size(); ++k) {
        diff = std::max(diff, std::abs(fast[k] - oracle[k]));
        scale = std::max(scale, std::abs(oracle[k]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace

std::string version() { return TTAGG_VERSION; }

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto config = load_with_overrides(options, err);
        std::filesystem::create_directories(config.output_dir);

        nlohmann::json manifest;
        manifest["config"] = config.to_json();
        manifest["version"] = version();
        manifest["fftw"] = std::string(fftw_version);
        manifest["workers"] = config.workers;
        {
            auto f = open_output(config.output_dir / "manifest.json");
            f << manifest.dump(2) << '\n';
        }

        auto observer = [&](int step, const ConcentrationState& state) {
            auto f = open_output(config.output_dir / fmt::format("n_{}.csv", step));
            fmt::print(f, "k,n\n");
            const auto n = state.values();
            for (std::size_t k = 0; k < n.size(); ++k) fmt::print(f, "{},{:.17g}\n", k + 1, n[k]);
        };

        auto write_moments = [&](const MomentSeries& series) {
            auto f = open_output(config.output_dir / "moments.csv");
            fmt::print(f, "t,M0,M1,M2,min_n\n");
            for (const auto& r : series.records) {
                fmt::print(f, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.m0, r.m1, r.m2, r.min_n);
            }
        };

        try {
            const auto result = integrate(config, observer);
            write_moments(result.series);
            const auto& last = result.series.records.back();
            fmt::print(out, "simulate: {} steps, t={:.6g}, M0={:.10g}, M1={:.10g}, mass drift {:.3e}\n",
                       config.time.steps, last.t, last.m0, last.m1, last.mass_drift);
            if (int w = result.series.negativity_warnings(); w > 0) {
                fmt::print(err, "warning: {} recorded states have min(n) < -1e-9 max(n); consider a smaller dt\n", w);
            }
        } catch (const IntegrationFailure& e) {
            write_moments(e.partial());
            throw;
        }
        fmt::print(out, "outputs written to {}\n", config.output_dir.string());
        return static_cast<int>(kExitOk);
    });
}

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err, const TTTamper& tamper) {
    return guarded(err, [&] {
        const auto config = load_with_overrides(options, err);
        const ExecutionPlan plan = config.plan();
        std::mt19937_64 rng(config.seed);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);

        std::vector<ConcentrationState> states;
        for (int s = 0; s < kVerifyStates; ++s) {
            std::vector<double> n(static_cast<std::size_t>(config.N));
            for (auto& v : n) v = uniform(rng);
            states.emplace_back(std::move(n));
        }

        double worst = 0.0;
        fmt::print(out, "{:>5} {:>8} {:>6} {:>14} {:>14}\n", "order", "kernel", "path", "max rel err P", "max rel err Q");
        for (const auto& spec : config.kernels) {
            const auto oracle = dense_from_spec(spec, config.N, config.dense_budget);
            const char* type = spec.type == KernelType::Brownian ? "brownian"
                               : spec.type == KernelType::Constant ? "constant" : "table";
            if (spec.type == KernelType::Table) {
                const double asym = symmetry_violation([&](const MultiIndex& i) { return oracle(i); }, spec.dim,
                                                       config.N, 1000, config.seed);
                fmt::print(out, "{:>5} {:>8} {:>6}   symmetry violation {:.3e}\n", spec.dim, type, "dense", asym);
                worst = std::max(worst, asym);
                continue;
            }
            auto tt = tt_from_spec(spec, config.N);
            if (tamper) tamper(spec.dim, tt);
            const auto cp = cp_from_spec(spec, config.N);

            double tt_p = 0, tt_q = 0, cp_p = 0, cp_q = 0;
            for (const auto& state : states) {
                const auto p = rhs_dense_P(oracle, state);
                const auto q = rhs_dense_Q(oracle, state);
                tt_p = std::max(tt_p, relative_error(rhs_tt_P(tt, state, plan), p));
                tt_q = std::max(tt_q, relative_error(rhs_tt_Q(tt, state, plan), q));
                cp_p = std::max(cp_p, relative_error(rhs_cp_P(cp, state, plan), p));
                cp_q = std::max(cp_q, relative_error(rhs_cp_Q(cp, state, plan), q));
            }
            fmt::print(out, "{:>5} {:>8} {:>6} {:>14.3e} {:>14.3e}\n", spec.dim, type, "tt", tt_p, tt_q);
            fmt::print(out, "{:>5} {:>8} {:>6} {:>14.3e} {:>14.3e}\n", spec.dim, type, "cp", cp_p, cp_q);
            worst = std::max({worst, tt_p, tt_q, cp_p, cp_q});
        }
        const bool pass = worst <= kVerifyTolerance;
        fmt::print(out, "verify: max relative error {:.3e} (tolerance {:.0e}) -> {}\n", worst, kVerifyTolerance,
                   pass ? "PASS" : "FAIL");
        return static_cast<int>(pass ? kExitOk : kExitNumerical);
    });
}

int cmd_bench(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto config = load_with_overrides(options, err);
        const auto report = run_scaling_benchmark(config, config.bench_workers, config.bench_repeats);

        std::filesystem::create_directories(config.output_dir);
        {
            auto f = open_output(config.output_dir / "bench.json");
            f << report.to_json().dump(2) << '\n';
        }
        fmt::print(out, "N = {}, D = {}, {} RK2 steps\n", report.N, report.D, report.steps);
        fmt::print(out, "{:>8} {:>12} {:>8}\n", "workers", "time, sec", "speedup");
        for (std::size_t r = 0; r < report.worker_counts.size(); ++r) {
            fmt::print(out, "{:>8} {:>12.4f} {:>8.2f}\n", report.worker_counts[r], report.times_sec[r], report.speedups[r]);
        }
        fmt::print(out, "report written to {}\n", (config.output_dir / "bench.json").string());
        return static_cast<int>(kExitOk);
    });
}

} // namespace ttagg
