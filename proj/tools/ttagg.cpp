// ttagg: simulate, verify and benchmark multi-particle aggregation kinetics.

#include "ttagg/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Tensor-train accelerated multi-particle aggregation kinetics"};
    app.set_version_flag("--version", ttagg::version());
    app.require_subcommand(1);

    ttagg::CommandOptions options;
    std::string output;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config, "Run configuration (JSON) or a run manifest")->required();
        sub->add_option("--output", output, "Output directory (overrides the config)");
        sub->add_option("--workers", options.workers, "Worker counts, e.g. --workers 1 2 4 or 1,2,4")
            ->delimiter(',');
        sub->add_option("--seed", seed, "Seed for random verification states");
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate the configured system with RK2");
    auto* verify = app.add_subcommand("verify", "Check the TT and CP right-hand sides against the dense oracle");
    auto* bench = app.add_subcommand("bench", "Time the configured run for several worker counts");
    for (auto* sub : {simulate, verify, bench}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ttagg::kExitValidation;
    }

    if (!output.empty()) options.output = output;
    for (auto* sub : {simulate, verify, bench}) {
        if (sub->get_option("--seed")->count() > 0) options.seed = seed;
    }

    if (*simulate) return ttagg::cmd_simulate(options, std::cout, std::cerr);
    if (*verify) return ttagg::cmd_verify(options, std::cout, std::cerr);
    return ttagg::cmd_bench(options, std::cout, std::cerr);
}
