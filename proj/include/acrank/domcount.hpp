#pragma once

#include <Eigen/Dense>

namespace acrank {

// One point per row; all points share the column count.
using PointSet = Eigen::MatrixXd;

// counts[j] = #{ i : a_i <= b_j entrywise }, 0 <= counts[j] <= a.rows().
using DominanceCounts = Eigen::VectorXi;

enum class CountMode { Auto, Oracle, Fast };

// O(n_a * n_b * d) pairwise-comparison baseline. Reference implementation:
// every fast path below must reproduce it exactly.
DominanceCounts count_dominated_oracle(const PointSet& a, const PointSet& b);

// d = 1: sort + binary search, O((n_a + n_b) log n_a).
DominanceCounts count_dominated_1d(const PointSet& a, const PointSet& b);

// d = 2: merge-sort rounds over the second coordinate with per-round rank
// lookups, O(n (log n)^2). Non-strict <= throughout; ties count as dominated.
DominanceCounts count_dominated_2d(const PointSet& a, const PointSet& b);

// d >= 3: divide and conquer on the first coordinate, batching queries into
// per-block sub-problems of dimension d-1 and bottoming out in the 2-d
// routine. O(n (log n)^d).
DominanceCounts count_dominated_nd(const PointSet& a, const PointSet& b);

// Dispatch by dimension (Auto/Fast) or route to the baseline (Oracle).
DominanceCounts count_dominated(const PointSet& a, const PointSet& b,
                                CountMode mode = CountMode::Auto);

// counts[j] = #{ i : a_i >= b_j entrywise }; implemented by negating both
// sets and counting dominated points.
DominanceCounts count_dominating(const PointSet& a, const PointSet& b,
                                 CountMode mode = CountMode::Auto);

} // namespace acrank
