#include "acrank/permutation.hpp"

#include <numeric>
#include <string>

#include "acrank/errors.hpp"

namespace acrank {

bool PermutationFamily::is_valid() const {
    if (perms.rows() != n || perms.cols() != d_y) return false;
    std::vector<char> seen(static_cast<std::size_t>(n));
    for (int k = 0; k < d_y; ++k) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int v = perms(i, k);
            if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int k1 = 0; k1 < d_y; ++k1) {
            for (int k2 = k1 + 1; k2 < d_y; ++k2) {
                if (perms(i, k1) == perms(i, k2)) return false;
            }
        }
    }
    return true;
}

PermutationFamily build_permutations(int n, int d_y, PermScheme scheme, SeedSpec seed) {
    if (n < 1 || d_y < 1) {
        throw InputError("build_permutations: n and d_y must be >= 1");
    }
    if (d_y >= 2 && n < d_y) {
        throw InputError("build_permutations: pairwise index-disjointness requires n >= d_y (got n=" +
                         std::to_string(n) + ", d_y=" + std::to_string(d_y) + ")");
    }

    PermutationFamily family;
    family.n = n;
    family.d_y = d_y;
    family.perms.resize(n, d_y);

    if (scheme == PermScheme::Cyclic) {
        for (int k = 0; k < d_y; ++k) {
            for (int i = 0; i < n; ++i) {
                family.perms(i, k) = (i + k) % n;
            }
        }
        return family;
    }

    RngStream rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < d_y; ++k) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm.data(), n);

        // Repair collisions with earlier permutations by random
        // transpositions; each successful swap reduces the conflict count.
        auto conflicts = [&](int i, int v) {
            for (int k2 = 0; k2 < k; ++k2) {
                if (family.perms(i, k2) == v) return true;
            }
            return false;
        };
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = 0; i < n; ++i) {
                if (!conflicts(i, perm[static_cast<std::size_t>(i)])) continue;
                clean = false;
                int guard = 0;
                for (;;) {
                    const int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
                    if (j != i && !conflicts(i, perm[static_cast<std::size_t>(j)]) &&
                        !conflicts(j, perm[static_cast<std::size_t>(i)])) {
                        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
                        break;
                    }
                    if (++guard > 64 * n) {
                        // Pathological layout; restart from a fresh shuffle.
                        std::iota(perm.begin(), perm.end(), 0);
                        rng.shuffle(perm.data(), n);
                        break;
                    }
                }
            }
        }
        for (int i = 0; i < n; ++i) family.perms(i, k) = perm[static_cast<std::size_t>(i)];
    }
    return family;
}

Eigen::MatrixXd apply_permutations(const Eigen::MatrixXd& y, const PermutationFamily& family) {
    if (y.rows() != family.n || y.cols() != family.d_y) {
        throw InputError("apply_permutations: sample shape does not match permutation family");
    }
    Eigen::MatrixXd out(y.rows(), y.cols());
    for (int k = 0; k < family.d_y; ++k) {
        for (int i = 0; i < family.n; ++i) {
            out(i, k) = y(family.perms(i, k), k);
        }
    }
    return out;
}

} // namespace acrank
