#include "ttagg/errors.hpp"
#include "ttagg/subset_codec.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

using namespace ttagg;

TEST_CASE("binomial coefficients") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(6, 3) == 20);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 5) == 1);
    CHECK(binomial(3, 4) == 0);
    CHECK(binomial(30, 15) == 155117520);
}

TEST_CASE("colex enumeration of 2-subsets of {1,2,3,4}") {
    SubsetCodec codec(4, 2);
    REQUIRE(codec.size() == 6);
    const std::vector<std::vector<int>> expected{{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}};
    for (std::size_t r = 0; r < codec.size(); ++r) {
        auto s = codec.decode(r);
        CHECK(std::vector<int>(s.begin(), s.end()) == expected[r]);
    }
}

TEST_CASE("codec is a bijection onto increasing subsets") {
    for (int D = 1; D <= 8; ++D) {
        for (int level = 0; level <= D; ++level) {
            SubsetCodec codec(D, level);
            CHECK(codec.size() == binomial(D, level));
            std::set<std::vector<int>> seen;
            for (std::size_t r = 0; r < codec.size(); ++r) {
                auto s = codec.decode(r);
                CHECK(std::is_sorted(s.begin(), s.end()));
                CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
                for (int e : s) CHECK((e >= 1 && e <= D));
                CHECK(codec.encode(s) == r);
                seen.emplace(s.begin(), s.end());
            }
            CHECK(seen.size() == codec.size());
        }
    }
}

TEST_CASE("codec rejects bad input") {
    CHECK_THROWS_AS(SubsetCodec(3, 4), ValidationError);
    CHECK_THROWS_AS(SubsetCodec(0, 0), ValidationError);
    SubsetCodec codec(4, 2);
    CHECK_THROWS_AS(codec.decode(6), ValidationError);
    const std::vector<int> unsorted{3, 1};
    CHECK_THROWS_AS(codec.encode(unsorted), ValidationError);
    const std::vector<int> too_big{1, 5};
    CHECK_THROWS_AS(codec.encode(too_big), ValidationError);
}
