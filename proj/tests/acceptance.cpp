// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "oracles.hpp"

#include "ttagg/bench.hpp"
#include "ttagg/integrator.hpp"
#include "ttagg/kinetics.hpp"
#include "ttagg/subset_codec.hpp"
#include "ttagg/tensor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace ttagg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
}

std::vector<double> random_mu(int D, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> mu(static_cast<std::size_t>(D));
    for (auto& m : mu) m = u(rng);
    return mu;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// M0(1) error of the pure ternary constant kernel from e_1, N = 2^10
double ternary_m0_error(double dt) {
    const int N = 1 << 10;
    KernelSet set(N);
    set.add(3, constant_tt(3, N, 1.0));
    const TimeGrid grid{0.0, dt, static_cast<int>(std::lround(1.0 / dt))};
    const auto result = integrate(set, InitialCondition{}.make(N), grid, grid.steps);
    const double exact = std::pow(1.0 + 2.0 / 3.0, -0.5);
    return std::abs(result.series.records.back().m0 - exact) / exact;
}

} // namespace

int main() {
    std::printf("hardware threads: %u\n", std::thread::hardware_concurrency());

    run(1, "TT construction for generalized Brownian kernels", [] {
        const auto start = Clock::now();
        std::mt19937_64 rng(101);
        double worst = 0.0;
        bool ranks_ok = true;
        for (int D = 2; D <= 5; ++D) {
            for (int N : {4, 8}) {
                for (int draw = 0; draw < 5; ++draw) {
                    const BrownianSpec spec(random_mu(D, rng));
                    const auto tt = build_brownian_tt(spec, N);
                    const auto ranks = tt.ranks();
                    for (int l = 0; l <= D; ++l) ranks_ok &= ranks[static_cast<std::size_t>(l)] == binomial(D, l);
                    ranks_ok &= tt.max_rank() == binomial(D, (D + 1) / 2);
                    std::vector<int> idx(static_cast<std::size_t>(D), 1);
                    for (;;) {
                        const MultiIndex mi(idx);
                        worst = std::max(worst, oracle::rel(tt_element(tt, mi), brownian_element(spec, mi)));
                        int j = D - 1;
                        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] > N) idx[static_cast<std::size_t>(j--)] = 1;
                        if (j < 0) break;
                    }
                }
            }
        }
        const double elapsed = seconds_since(start);
        return Outcome{worst <= 1e-11 && ranks_ok && elapsed < 60.0,
                       fmt("max rel err %.2e (tol 1e-11), runtime %.1f s (limit 60)", worst, elapsed) +
                           (ranks_ok ? ", ranks match binomials" : ", rank mismatch")};
    });

    run(2, "fast paths match the dense oracle", [] {
        const auto start = Clock::now();
        std::mt19937_64 rng(202);
        double worst = 0.0;
        for (int d = 2; d <= 4; ++d) {
            for (int N : {8, 16, 32}) {
                const BrownianSpec spec(random_mu(d, rng));
                const auto dense = dense_from_brownian(spec, N);
                const auto tt = build_brownian_tt(spec, N);
                const auto cp = build_brownian_cp(spec, N);
                const auto rcp = oracle::random_symmetric_cp(d, N, 4, rng);
                const DenseKernel rcp_dense(d, N, oracle::expand_cp(rcp));
                for (int s = 0; s < 20; ++s) {
                    const ConcentrationState state(oracle::random_state(N, rng));
                    const auto p = rhs_dense_P(dense, state);
                    const auto q = rhs_dense_Q(dense, state);
                    worst = std::max({worst, oracle::rel_inf(rhs_tt_P(tt, state), p),
                                      oracle::rel_inf(rhs_tt_Q(tt, state), q),
                                      oracle::rel_inf(rhs_cp_P(cp, state), p),
                                      oracle::rel_inf(rhs_cp_Q(cp, state), q),
                                      oracle::rel_inf(rhs_cp_P(rcp, state), rhs_dense_P(rcp_dense, state)),
                                      oracle::rel_inf(rhs_cp_Q(rcp, state), rhs_dense_Q(rcp_dense, state))});
                }
            }
        }
        const double elapsed = seconds_since(start);
        return Outcome{worst <= 1e-10 && elapsed < 120.0,
                       fmt("max rel inf-norm err %.2e (tol 1e-10), runtime %.1f s (limit 120)", worst, elapsed)};
    });

    run(3, "mass conservation, ternary constant kernel", [] {
        const auto start = Clock::now();
        const int N = 256;
        std::mt19937_64 rng(303);
        KernelSet set(N);
        set.add(3, constant_tt(3, N, 1.0));
        const ConcentrationState state(oracle::random_state(N, rng, N / 4));
        const auto r = rhs_total(set, state);
        double flux = 0.0, scale = 0.0;
        for (int k = 1; k <= N; ++k) {
            flux += k * r.s[static_cast<std::size_t>(k - 1)];
            scale += k * r.p[static_cast<std::size_t>(k - 1)];
        }
        const double elapsed = seconds_since(start);
        return Outcome{std::abs(flux) <= 1e-12 * scale && elapsed < 1.0,
                       fmt("|sum k s_k| / sum k p_k = %.2e (tol 1e-12)", std::abs(flux) / scale)};
    });

    double error_fine = 0.0;
    run(4, "M0 law for the ternary constant kernel", [&] {
        const auto start = Clock::now();
        error_fine = ternary_m0_error(1e-3);
        const double elapsed = seconds_since(start);
        return Outcome{error_fine <= 1e-3 && elapsed < 60.0,
                       fmt("rel err of M0(1) vs (1 + 2t/3)^(-1/2): %.2e (tol 1e-3)", error_fine)};
    });

    run(5, "RK2 order under dt halving", [&] {
        const double coarse = error_fine > 0.0 ? error_fine : ternary_m0_error(1e-3);
        const double fine = ternary_m0_error(5e-4);
        const double ratio = coarse / fine;
        return Outcome{ratio >= 3.2 && ratio <= 4.8,
                       fmt("error ratio %.3f (dt 1e-3: %.2e, dt 5e-4: %.2e), required [3.2, 4.8]", ratio, coarse, fine)};
    });

    run(6, "gain evaluation scales as N log N", [] {
        const BrownianSpec spec{1.0 / 3.0, -1.0 / 3.0, 0.0};
        auto median_time = [&](int N) {
            const auto tt = build_brownian_tt(spec, N);
            std::mt19937_64 rng(606);
            const ConcentrationState state(oracle::random_state(N, rng));
            rhs_tt_P(tt, state);  // warm-up
            std::vector<double> t;
            for (int r = 0; r < 5; ++r) {
                const auto start = Clock::now();
                rhs_tt_P(tt, state);
                t.push_back(seconds_since(start));
            }
            std::sort(t.begin(), t.end());
            return t[2];
        };
        const double small = median_time(1 << 15);
        const double large = median_time(1 << 16);
        const double growth = large / small;
        return Outcome{growth <= 2.5, fmt("t(2^16)/t(2^15) = %.3f (limit 2.5); %.4f s -> %.4f s", growth, small, large)};
    });

    run(7, "parallel scaling, ternary Brownian N=2^17", [] {
        const int N = 1 << 17;
        const auto config = ternary_brownian_bench_config(N, 10);
        const int workers[] = {1, 4};
        const auto report = run_scaling_benchmark(config, workers, 3);
        const double speedup = report.speedups[1];

        const auto kernels = config.build_kernels();
        std::mt19937_64 rng(707);
        const ConcentrationState state(oracle::random_state(N, rng));
        const auto reference = rhs_total(kernels, state, ExecutionPlan(1));
        double spread = 0.0;
        for (int w : {2, 4, 8}) spread = std::max(spread, oracle::rel_inf(rhs_total(kernels, state, ExecutionPlan(w)).s, reference.s));

        return Outcome{speedup >= 2.0 && spread <= 1e-12,
                       fmt("speedup at 4 workers %.2fx (required >= 2.0), 1 worker %.2f s; worker-count spread %.1e (tol 1e-12)",
                           speedup, report.times_sec[0], spread)};
    });

    run(8, "recursion identity between kernel orders", [] {
        std::mt19937_64 rng(808);
        std::uniform_int_distribution<int> size(1, 1000);
        double worst = 0.0;
        for (int lambda = 1; lambda <= 3; ++lambda) {
            for (int draw = 0; draw < 100; ++draw) {
                const auto mu = random_mu(lambda + 1, rng);
                std::vector<int> idx(static_cast<std::size_t>(lambda + 1));
                for (auto& e : idx) e = size(rng);
                const double lhs = brownian_element(BrownianSpec(mu), MultiIndex(idx));
                const std::vector<int> head(idx.begin(), idx.end() - 1);
                double rhs = 0.0;
                for (int xi = 0; xi <= lambda; ++xi) {
                    std::vector<double> rest;
                    for (int j = 0; j <= lambda; ++j)
                        if (j != xi) rest.push_back(mu[static_cast<std::size_t>(j)]);
                    const double lower = lambda == 1 ? size_power(head[0], rest[0])
                                                     : brownian_element(BrownianSpec(rest), MultiIndex(head));
                    rhs += lower * size_power(idx.back(), mu[static_cast<std::size_t>(xi)]);
                }
                worst = std::max(worst, oracle::rel(rhs, lhs));
            }
        }
        return Outcome{worst <= 1e-11, fmt("max rel err %.2e over 300 draws (tol 1e-11)", worst)};
    });

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "NOT ACCEPTED", failures);
    return failures == 0 ? 0 : 1;
}
