#pragma once

#include <vector>

#include <Eigen/Dense>

#include "acrank/random.hpp"

namespace acrank {

enum class PermScheme { Cyclic, Random };

// d_Y permutations of {0, ..., n-1} that are pairwise index-disjoint:
// perm(i, k1) != perm(i, k2) for every i and k1 != k2. Used to build the
// entrywise-permuted sample whose empirical law is the product of marginals.
struct PermutationFamily {
    int n = 0;
    int d_y = 0;
    // perms(i, k) = pi_k(i), 0-based.
    Eigen::MatrixXi perms;

    [[nodiscard]] bool is_valid() const;
};

// Cyclic scheme: pi_k(i) = (i + k) mod n, deterministic. Random scheme:
// independent uniform permutations repaired by transpositions until
// pairwise index-disjoint. Requires n >= d_y when d_y >= 2.
PermutationFamily build_permutations(int n, int d_y, PermScheme scheme, SeedSpec seed);

// Entrywise-permuted sample: out(i, k) = y(perm(i, k), k).
Eigen::MatrixXd apply_permutations(const Eigen::MatrixXd& y, const PermutationFamily& family);

} // namespace acrank
