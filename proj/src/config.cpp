#include "ttagg/config.hpp"

#include "ttagg/errors.hpp"

#include <bit>
#include <fstream>
#include <set>

namespace ttagg {

namespace {

template <class T>
T field(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config field '") + key + "': " + e.what());
    }
}

} // namespace

SimulationConfig SimulationConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    const nlohmann::json& j = doc.contains("config") ? doc.at("config") : doc;
    if (!j.is_object()) throw ValidationError("config must be a JSON object");

    SimulationConfig c;
    if (!j.contains("N")) throw ValidationError("config: field N is required");
    c.N = field<int>(j, "N", 0);
    if (c.N < 2) throw ValidationError("config: N must be >= 2");
    if (!std::has_single_bit(static_cast<unsigned>(c.N))) {
        c.warnings.push_back("N=" + std::to_string(c.N) + " is not a power of two");
    }

    if (!j.contains("kernels") || !j.at("kernels").is_array()) {
        throw ValidationError("config: 'kernels' must be an array of kernel specs");
    }
    for (const auto& k : j.at("kernels")) c.kernels.push_back(KernelSpec::from_json(k, base_dir));
    int largest = 2;
    std::set<int> seen;
    for (const auto& k : c.kernels) {
        if (!seen.insert(k.dim).second) {
            throw ValidationError("config: more than one kernel for collision order " + std::to_string(k.dim));
        }
        largest = std::max(largest, k.dim);
    }
    c.D = field<int>(j, "D", largest);
    if (c.D < 2) throw ValidationError("config: D must be >= 2");
    for (const auto& k : c.kernels) {
        if (k.dim > c.D) {
            throw ValidationError("config: kernel of order " + std::to_string(k.dim) + " exceeds D=" + std::to_string(c.D));
        }
    }

    if (j.contains("initial")) {
        const auto& init = j.at("initial");
        const auto kind = field<std::string>(init, "kind", "monodisperse");
        if (kind == "monodisperse") {
            c.initial.kind = InitialCondition::Kind::Monodisperse;
            c.initial.c0 = field<double>(init, "c0", 1.0);
        } else if (kind == "vector") {
            c.initial.kind = InitialCondition::Kind::Vector;
            c.initial.values = field<std::vector<double>>(init, "values", {});
        } else {
            throw ValidationError("config: initial.kind must be 'monodisperse' or 'vector'");
        }
    }
    c.initial.make(c.N);  // validates

    if (j.contains("time")) {
        const auto& t = j.at("time");
        c.time.t0 = field<double>(t, "t0", 0.0);
        c.time.dt = field<double>(t, "dt", c.time.dt);
        c.time.steps = field<int>(t, "steps", c.time.steps);
    }
    c.time.validate();
    c.record_every = field<int>(j, "record_every", 1);
    if (c.record_every < 1) throw ValidationError("config: record_every must be >= 1");

    std::filesystem::path out = field<std::string>(j, "output", "output");
    c.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;

    if (j.contains("execution")) {
        const auto& e = j.at("execution");
        c.workers = field<int>(e, "workers", 1);
        const auto policy = field<std::string>(e, "fft_length", "pow2");
        if (policy == "pow2") {
            c.fft_length = FftLengthPolicy::PowerOfTwo;
        } else if (policy == "smooth") {
            c.fft_length = FftLengthPolicy::Smooth;
        } else {
            throw ValidationError("config: execution.fft_length must be 'pow2' or 'smooth'");
        }
    }
    if (c.workers < 1) throw ValidationError("config: execution.workers must be >= 1");

    c.verify = field<bool>(j, "verify", false);
    c.seed = field<std::uint64_t>(j, "seed", 0);
    c.dense_budget = field<std::size_t>(j, "dense_budget", kDefaultDenseBudget);
    if (j.contains("bench")) {
        const auto& b = j.at("bench");
        c.bench_workers = field<std::vector<int>>(b, "workers", c.bench_workers);
        c.bench_repeats = field<int>(b, "repeats", c.bench_repeats);
    }
    for (int w : c.bench_workers)
        if (w < 1) throw ValidationError("config: bench.workers entries must be >= 1");
    if (c.bench_repeats < 1) throw ValidationError("config: bench.repeats must be >= 1");
    return c;
}

SimulationConfig SimulationConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(doc, path.parent_path());
}

nlohmann::json SimulationConfig::to_json() const {
    nlohmann::json j;
    j["N"] = N;
    j["D"] = D;
    j["kernels"] = nlohmann::json::array();
    for (const auto& k : kernels) j["kernels"].push_back(k.to_json());
    if (initial.kind == InitialCondition::Kind::Monodisperse) {
        j["initial"] = {{"kind", "monodisperse"}, {"c0", initial.c0}};
    } else {
        j["initial"] = {{"kind", "vector"}, {"values", initial.values}};
    }
    j["time"] = {{"t0", time.t0}, {"dt", time.dt}, {"steps", time.steps}};
    j["record_every"] = record_every;
    j["output"] = output_dir.string();
    j["execution"] = {{"workers", workers}, {"fft_length", fft_length == FftLengthPolicy::PowerOfTwo ? "pow2" : "smooth"}};
    j["verify"] = verify;
    j["seed"] = seed;
    j["dense_budget"] = dense_budget;
    j["bench"] = {{"workers", bench_workers}, {"repeats", bench_repeats}};
    return j;
}

KernelSet SimulationConfig::build_kernels() const {
    KernelSet set(N);
    for (const auto& k : kernels) add_kernel(set, k, dense_budget);
    return set;
}

ExecutionPlan SimulationConfig::plan() const { return plan(workers); }

ExecutionPlan SimulationConfig::plan(int worker_count) const { return ExecutionPlan(worker_count, fft_length); }

IntegrationResult integrate(const SimulationConfig& config, const RecordObserver& observer) {
    const auto kernels = config.build_kernels();
    return integrate(kernels, config.initial.make(config.N, config.time.t0), config.time, config.record_every,
                     config.plan(), observer);
}

} // namespace ttagg
