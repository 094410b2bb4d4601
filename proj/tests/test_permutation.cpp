#include <doctest.h>

#include <algorithm>

#include "acrank/errors.hpp"
#include "acrank/permutation.hpp"

using namespace acrank;

TEST_CASE("cyclic scheme: shifted cycles") {
    const auto fam = build_permutations(4, 2, PermScheme::Cyclic, SeedSpec{});
    // pi_1 is the identity, pi_2 the shift by one.
    for (int i = 0; i < 4; ++i) {
        CHECK(fam.perms(i, 0) == i);
        CHECK(fam.perms(i, 1) == (i + 1) % 4);
    }
    CHECK(fam.is_valid());
}

TEST_CASE("single permutation: disjointness vacuous") {
    const auto fam = build_permutations(3, 1, PermScheme::Cyclic, SeedSpec{});
    for (int i = 0; i < 3; ++i) CHECK(fam.perms(i, 0) == i);
    CHECK(fam.is_valid());
}

TEST_CASE("random scheme satisfies all invariants") {
    const auto fam = build_permutations(5, 3, PermScheme::Random, SeedSpec{42, 0});
    REQUIRE(fam.is_valid());

    // Exhaustive bijectivity + pairwise disjointness, spelled out.
    for (int k = 0; k < 3; ++k) {
        std::vector<int> values;
        for (int i = 0; i < 5; ++i) values.push_back(fam.perms(i, k));
        std::sort(values.begin(), values.end());
        for (int i = 0; i < 5; ++i) CHECK(values[static_cast<std::size_t>(i)] == i);
    }
    for (int i = 0; i < 5; ++i) {
        for (int k1 = 0; k1 < 3; ++k1) {
            for (int k2 = k1 + 1; k2 < 3; ++k2) {
                CHECK(fam.perms(i, k1) != fam.perms(i, k2));
            }
        }
    }
}

TEST_CASE("random scheme across sizes") {
    for (int n : {2, 3, 8, 37}) {
        for (int d_y = 1; d_y <= std::min(n, 5); ++d_y) {
            const auto fam = build_permutations(n, d_y, PermScheme::Random, SeedSpec{7, 1});
            REQUIRE(fam.is_valid());
        }
    }
}

TEST_CASE("deterministic given the seed") {
    const auto a = build_permutations(64, 4, PermScheme::Random, SeedSpec{9, 3});
    const auto b = build_permutations(64, 4, PermScheme::Random, SeedSpec{9, 3});
    const auto c = build_permutations(64, 4, PermScheme::Random, SeedSpec{10, 3});
    CHECK(a.perms == b.perms);
    CHECK(a.perms != c.perms);
}

TEST_CASE("disjointness impossible when n < d_y") {
    CHECK_THROWS_AS(build_permutations(3, 4, PermScheme::Cyclic, SeedSpec{}), InputError);
    CHECK_THROWS_AS(build_permutations(3, 4, PermScheme::Random, SeedSpec{}), InputError);
}

TEST_CASE("applying a family permutes columns independently") {
    Eigen::MatrixXd y(4, 2);
    y << 1, 10, 2, 20, 3, 30, 4, 40;
    const auto fam = build_permutations(4, 2, PermScheme::Cyclic, SeedSpec{});
    const Eigen::MatrixXd yt = apply_permutations(y, fam);
    for (int i = 0; i < 4; ++i) {
        CHECK(yt(i, 0) == y(i, 0));
        CHECK(yt(i, 1) == y((i + 1) % 4, 1));
    }

    // For d_Y = 1 any valid family leaves the multiset unchanged.
    Eigen::MatrixXd col(5, 1);
    col << 5, 3, 9, 1, 7;
    const auto fam1 = build_permutations(5, 1, PermScheme::Random, SeedSpec{3, 0});
    Eigen::MatrixXd permuted = apply_permutations(col, fam1);
    std::vector<double> a(col.data(), col.data() + 5), b(permuted.data(), permuted.data() + 5);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}
