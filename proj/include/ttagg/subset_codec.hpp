#ifndef TTAGG_SUBSET_CODEC_HPP_
#define TTAGG_SUBSET_CODEC_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace ttagg {

// Binomial coefficient C(n, k); zero when k < 0 or k > n.
std::size_t binomial(int n, int k);

// Ordered enumeration of the `level`-element subsets of {1, ..., dim}.
//
// Subsets are listed in colexicographic order and every subset is stored
// with strictly increasing elements. Rank positions run over
// [0, binomial(dim, level)); the empty subset (level 0) has a single rank.
class SubsetCodec {
public:
    SubsetCodec(int dim, int level);

    int dim() const noexcept { return dim_; }
    int level() const noexcept { return level_; }
    std::size_t size() const noexcept { return count_; }

    // Elements of the subset at rank position `rank`, increasing.
    std::span<const int> decode(std::size_t rank) const;

    // Rank position of an increasing subset of {1, ..., dim}.
    std::size_t encode(std::span<const int> subset) const;

private:
    int dim_;
    int level_;
    std::size_t count_;
    std::vector<int> elements_;  // count_ rows of level_ entries
};

} // namespace ttagg

#endif // TTAGG_SUBSET_CODEC_HPP_
