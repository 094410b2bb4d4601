#pragma once

#include <vector>

#include <Eigen/Dense>

#include "acrank/random.hpp"

namespace acrank {

// m[i] is the index of the nearest other point in Euclidean distance, with
// uniform random tie-breaking; m[i] != i.
struct NeighborMap {
    int n = 0;
    std::vector<int> m;
};

// Degree statistics of the nearest-neighbor digraph consumed by the
// variance estimator.
struct NeighborStats {
    double mutual_fraction = 0.0;    // (1/n) sum_i 1{ M(M(i)) = i }
    double indegree_pair_sum = 0.0;  // (1/n) sum_i |M^-1(i)| (|M^-1(i)| - 1)
    int max_indegree = 0;
};

enum class NnMethod { Auto, BruteForce, KdTree };

// Exact nearest neighbors with exact tie detection (floating-point equality
// of squared distances; coincident points are representable exactly, so no
// tolerance is applied). The full tie set is materialized in ascending index
// order and one element is drawn from a per-index sub-stream, which makes
// the map reproducible and independent of traversal order. Auto uses brute
// force up to 4096 points and a k-d tree above; both return identical maps.
NeighborMap nearest_neighbors(const Eigen::MatrixXd& points, SeedSpec seed,
                              NnMethod method = NnMethod::Auto);

NeighborStats neighbor_stats(const NeighborMap& map);

} // namespace acrank
