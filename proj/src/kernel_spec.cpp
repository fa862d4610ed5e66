#include "ttagg/kernel_spec.hpp"

#include "ttagg/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ttagg {

namespace {

std::string lower_extension(const std::filesystem::path& p) {
    auto ext = p.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext;
}

} // namespace

KernelSpec KernelSpec::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ValidationError("kernel spec must be an object");
    KernelSpec spec;
    const auto type = j.value("type", std::string{});
    if (type == "brownian") {
        spec.type = KernelType::Brownian;
    } else if (type == "constant") {
        spec.type = KernelType::Constant;
    } else if (type == "table") {
        spec.type = KernelType::Table;
    } else {
        throw ValidationError("kernel spec: unknown type '" + type + "' (brownian, constant, table)");
    }
    try {
        if (j.contains("mu")) spec.mu = j.at("mu").get<std::vector<double>>();
        if (j.contains("D")) {
            spec.dim = j.at("D").get<int>();
        } else if (spec.type == KernelType::Brownian) {
            spec.dim = static_cast<int>(spec.mu.size());
        } else {
            throw ValidationError("kernel spec: field D is required");
        }
        spec.c = j.value("c", 1.0);
        if (j.contains("table_path")) {
            std::filesystem::path p = j.at("table_path").get<std::string>();
            spec.table_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        }
        const auto format = j.value("format", std::string(spec.type == KernelType::Table ? "dense" : "tt"));
        if (format == "tt") {
            spec.format = KernelFormat::TT;
        } else if (format == "cp") {
            spec.format = KernelFormat::CP;
        } else if (format == "dense") {
            spec.format = KernelFormat::Dense;
        } else {
            throw ValidationError("kernel spec: unknown format '" + format + "' (tt, cp, dense)");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("kernel spec: ") + e.what());
    }

    if (spec.dim < 2) throw ValidationError("kernel spec: D must be >= 2");
    if (spec.type == KernelType::Brownian && static_cast<int>(spec.mu.size()) != spec.dim) {
        throw ValidationError("kernel spec: brownian kernel needs D exponents in mu");
    }
    if (spec.type == KernelType::Table) {
        if (spec.table_path.empty()) throw ValidationError("kernel spec: table kernel needs table_path");
        if (spec.format != KernelFormat::Dense) {
            throw ValidationError("kernel spec: table kernels only support format 'dense'");
        }
    }
    return spec;
}

nlohmann::json KernelSpec::to_json() const {
    nlohmann::json j;
    switch (type) {
    case KernelType::Brownian: j["type"] = "brownian"; j["mu"] = mu; break;
    case KernelType::Constant: j["type"] = "constant"; j["c"] = c; break;
    case KernelType::Table: j["type"] = "table"; j["table_path"] = table_path.string(); break;
    }
    j["D"] = dim;
    j["format"] = format == KernelFormat::TT ? "tt" : format == KernelFormat::CP ? "cp" : "dense";
    return j;
}

std::vector<double> read_table(const std::filesystem::path& path, int dim, int N, std::size_t budget) {
    const std::size_t expected = DenseKernel::checked_size(dim, N, budget);
    const auto ext = lower_extension(path);
    std::vector<double> values;

    if (ext == ".txt" || ext == ".csv") {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open kernel table " + path.string());
        std::string token;
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        for (auto& ch : text)
            if (ch == ',') ch = ' ';
        std::istringstream stream(text);
        double v;
        while (stream >> v) values.push_back(v);
        if (!stream.eof()) throw ValidationError("kernel table " + path.string() + ": unparsable entry");
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open kernel table " + path.string());
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (bytes.size() % sizeof(double) != 0) {
            throw ValidationError("kernel table " + path.string() + ": size is not a multiple of 8 bytes");
        }
        values.resize(bytes.size() / sizeof(double));
        for (std::size_t k = 0; k < values.size(); ++k) {
            std::uint64_t raw;
            std::memcpy(&raw, bytes.data() + k * sizeof(double), sizeof(raw));
            if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap64(raw);
            values[k] = std::bit_cast<double>(raw);
        }
    }
    if (values.size() != expected) {
        throw ValidationError("kernel table " + path.string() + ": expected " + std::to_string(expected)
                              + " values (N^D), found " + std::to_string(values.size()));
    }
    return values;
}

void write_table_binary(const std::filesystem::path& path, std::span<const double> values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write kernel table " + path.string());
    for (double v : values) {
        auto raw = std::bit_cast<std::uint64_t>(v);
        if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap64(raw);
        out.write(reinterpret_cast<const char*>(&raw), sizeof(raw));
    }
    if (!out) throw IoError("failed writing kernel table " + path.string());
}

DenseKernel dense_from_spec(const KernelSpec& spec, int N, std::size_t budget) {
    switch (spec.type) {
    case KernelType::Brownian:
        return dense_from_brownian(BrownianSpec(spec.mu), N, budget);
    case KernelType::Constant:
        return DenseKernel(spec.dim, N, std::vector<double>(DenseKernel::checked_size(spec.dim, N, budget), spec.c), budget);
    case KernelType::Table:
        return DenseKernel(spec.dim, N, read_table(spec.table_path, spec.dim, N, budget), budget);
    }
    throw ValidationError("dense_from_spec: unknown kernel type");
}

TTKernel tt_from_spec(const KernelSpec& spec, int N) {
    switch (spec.type) {
    case KernelType::Brownian: return build_brownian_tt(BrownianSpec(spec.mu), N);
    case KernelType::Constant: return constant_tt(spec.dim, N, spec.c);
    case KernelType::Table: break;
    }
    throw ValidationError("table kernels have no TT construction; use format 'dense'");
}

CPKernel cp_from_spec(const KernelSpec& spec, int N) {
    switch (spec.type) {
    case KernelType::Brownian: return build_brownian_cp(BrownianSpec(spec.mu), N);
    case KernelType::Constant: return constant_cp(spec.dim, N, spec.c);
    case KernelType::Table: break;
    }
    throw ValidationError("table kernels have no CP construction; use format 'dense'");
}

void add_kernel(KernelSet& set, const KernelSpec& spec, std::size_t budget) {
    const int N = set.mode_size();
    switch (spec.format) {
    case KernelFormat::TT: set.add(spec.dim, tt_from_spec(spec, N)); break;
    case KernelFormat::CP: set.add(spec.dim, cp_from_spec(spec, N)); break;
    case KernelFormat::Dense: set.add(spec.dim, dense_from_spec(spec, N, budget)); break;
    }
}

} // namespace ttagg
