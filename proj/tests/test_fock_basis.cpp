#include <algorithm>
#include <set>

#include "doctest.h"
#include "ringsim/errors.hpp"
#include "ringsim/fock_basis.hpp"

using namespace ringsim;

namespace {

// Direct recursive count of occupation arrays, independent of the ranking.
std::uint64_t count_states(int atoms, int modes) {
    if (modes == 1) return 1;
    std::uint64_t c = 0;
    for (int n = 0; n <= atoms; ++n) c += count_states(atoms - n, modes - 1);
    return c;
}

}  // namespace

TEST_SUITE("fock-basis") {

TEST_CASE("basis sizes") {
    CHECK(build_basis(1, 6).size() == 6);
    CHECK(build_basis(2, 4).size() == 10);
    CHECK(build_basis(5, 20).size() == 42504);
    CHECK(fock_dimension(5, 20) == 42504);
}

TEST_CASE("dimension formula agrees with direct enumeration") {
    for (int n = 1; n <= 6; ++n) {
        for (int r = 2; r <= 12; r += 2) CHECK(fock_dimension(n, r) == count_states(n, r));
    }
    CHECK(fock_dimension(6, 20) == 177100);
}

TEST_CASE("dimension cap guards oversized bases") {
    CHECK_THROWS_AS(FockBasis(5, 20, 1000), DimensionCapExceeded);
    CHECK_THROWS_AS(FockBasis(20, 40), DimensionCapExceeded);
    try {
        FockBasis(5, 20, 1000);
    } catch (const DimensionCapExceeded& e) {
        CHECK(e.requested() == 42504);
        CHECK(e.cap() == 1000);
    }
}

TEST_CASE("rank and unrank are inverse bijections") {
    const FockBasis basis(3, 8);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(basis.rank(basis.unrank(i)) == i);
        CHECK(basis.rank(basis.occupations(i)) == i);
    }
}

TEST_CASE("ordering is lexicographic from the most negative momentum") {
    const FockBasis basis(2, 4);
    for (std::size_t i = 1; i < basis.size(); ++i) {
        const auto a = basis.unrank(i - 1).occupations();
        const auto b = basis.unrank(i).occupations();
        CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    }
}

TEST_CASE("every state holds N atoms and states are distinct") {
    const FockBasis basis(4, 6);
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto s = basis.unrank(i);
        CHECK(s.n_atoms() == 4);
        seen.insert(s.occupations());
    }
    CHECK(seen.size() == basis.size());
}

TEST_CASE("total angular momentum") {
    // window for r=4 is k = -1, 0, 1, 2
    CHECK(total_K(FockState({0, 3, 0, 0})) == 0);
    CHECK(total_K(FockState({0, 0, 3, 0})) == 3);
    CHECK(total_K(FockState({1, 1, 0, 1})) == 1);
    const FockBasis basis(3, 4);
    CHECK(basis.total_K(basis.rank(FockState({1, 1, 0, 1}))) == 1);
    CHECK(FockState({1, 1, 0, 1}).occupation_at(2) == 1);
}

TEST_CASE("K range spans N k_min .. N k_max") {
    const FockBasis basis(3, 6);
    int lo = 1000;
    int hi = -1000;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        lo = std::min(lo, basis.total_K(i));
        hi = std::max(hi, basis.total_K(i));
    }
    CHECK(lo == basis.min_K());
    CHECK(hi == basis.max_K());
    CHECK(lo == -6);
    CHECK(hi == 9);
}

TEST_CASE("sectors partition the basis") {
    const FockBasis one(1, 2);
    CHECK(one.sector_indices(0).size() == 1);
    CHECK(one.sector_indices(1).size() == 1);

    const FockBasis two(2, 2);
    const auto s1 = two.sector_indices(1);
    REQUIRE(s1.size() == 1);
    CHECK(two.unrank(s1[0]).occupations() == std::vector<int>{1, 1});
    CHECK(two.sector_indices(7).empty());

    const FockBasis basis(3, 6);
    std::vector<int> hits(basis.size(), 0);
    for (int K = basis.min_K(); K <= basis.max_K(); ++K) {
        for (auto i : basis.sector_indices(K)) ++hits[i];
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("reflection k -> 1-k permutes the basis and maps K to N-K") {
    const FockBasis basis(3, 6);
    const auto perm = basis.reflection_permutation();
    std::vector<std::size_t> sorted(perm);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(basis.total_K(perm[i]) == 3 - basis.total_K(i));
        CHECK(perm[perm[i]] == i);
    }
}

TEST_CASE("invalid basis arguments") {
    CHECK_THROWS_AS(FockBasis(0, 4), InvalidArgument);
    CHECK_THROWS_AS(FockBasis(2, 3), InvalidArgument);
    CHECK_THROWS_AS(FockState({1, -1}), InvalidArgument);
}

}
