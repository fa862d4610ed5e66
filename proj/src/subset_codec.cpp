#include "ttagg/subset_codec.hpp"

#include "ttagg/errors.hpp"

#include <string>

namespace ttagg {

std::size_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::size_t result = 1;
    for (int j = 1; j <= k; ++j) {
        // exact at every step: result * (n - k + j) is divisible by j
        result = result * static_cast<std::size_t>(n - k + j) / static_cast<std::size_t>(j);
    }
    return result;
}

SubsetCodec::SubsetCodec(int dim, int level)
    : dim_(dim), level_(level), count_(binomial(dim, level)) {
    if (dim < 1 || level < 0 || level > dim) {
        throw ValidationError("SubsetCodec: need 0 <= level <= dim and dim >= 1, got dim="
                              + std::to_string(dim) + " level=" + std::to_string(level));
    }
    elements_.reserve(count_ * static_cast<std::size_t>(level));
    if (level == 0) return;

    // Colex successor: bump the lowest element that can move up, reset the ones below it.
    std::vector<int> current(static_cast<std::size_t>(level));
    for (int j = 0; j < level; ++j) current[static_cast<std::size_t>(j)] = j + 1;
    for (std::size_t r = 0; r < count_; ++r) {
        elements_.insert(elements_.end(), current.begin(), current.end());
        int j = 0;
        while (j + 1 < level && current[static_cast<std::size_t>(j)] + 1 == current[static_cast<std::size_t>(j + 1)]) ++j;
        ++current[static_cast<std::size_t>(j)];
        for (int t = 0; t < j; ++t) current[static_cast<std::size_t>(t)] = t + 1;
    }
}

std::span<const int> SubsetCodec::decode(std::size_t rank) const {
    if (rank >= count_) {
        throw ValidationError("SubsetCodec::decode: rank " + std::to_string(rank)
                              + " out of range [0, " + std::to_string(count_) + ")");
    }
    const auto width = static_cast<std::size_t>(level_);
    return std::span<const int>(elements_).subspan(rank * width, width);
}

std::size_t SubsetCodec::encode(std::span<const int> subset) const {
    if (subset.size() != static_cast<std::size_t>(level_)) {
        throw ValidationError("SubsetCodec::encode: expected " + std::to_string(level_) + " elements");
    }
    std::size_t rank = 0;
    int previous = 0;
    for (std::size_t j = 0; j < subset.size(); ++j) {
        const int s = subset[j];
        if (s <= previous || s > dim_) {
            throw ValidationError("SubsetCodec::encode: subset must be increasing within [1, dim]");
        }
        rank += binomial(s - 1, static_cast<int>(j) + 1);
        previous = s;
    }
    return rank;
}

} // namespace ttagg
