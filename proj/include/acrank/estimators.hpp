#pragma once

#include <Eigen/Dense>

#include "acrank/domcount.hpp"
#include "acrank/nn.hpp"
#include "acrank/permutation.hpp"
#include "acrank/random.hpp"

namespace acrank {

// Numerator, denominator and per-sample intermediates of a coefficient
// estimate. The value is reported raw: finite-sample estimates may fall
// outside [0, 1].
struct CoefficientReport {
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    int n = 0;
    // Rank of each meet point Y_i ^ Y_{M(i)} within the permuted sample (for
    // the conditional coefficient: within the (X,Z)-neighbor meet queries).
    Eigen::VectorXi rank_terms;
    // Conditional coefficient only: ranks of Y_i ^ Y_{M_X(i)} and of Y_i.
    Eigen::VectorXi rank_terms_x;
    Eigen::VectorXi rank_terms_y;
    // Dominating counts L-check_i of the permuted sample (unused for the
    // conditional coefficient).
    Eigen::VectorXi l_check;
};

// Multivariate rank coefficient of dependence of y on z. Builds the
// entrywise-permuted sample from `perms`, the nearest-neighbor map on z from
// `seed`, and batches all rank queries through the dominance counters.
// Throws DegenerateDataError when the denominator vanishes (y constant in
// sample). Deterministic given seed.
CoefficientReport t_ac(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                       const PermutationFamily& perms, SeedSpec seed,
                       CountMode mode = CountMode::Auto, bool standardize_z = false);

// Same computation with a caller-supplied neighbor map (no randomness).
CoefficientReport t_ac_with_map(const Eigen::MatrixXd& y, const NeighborMap& map,
                                const PermutationFamily& perms,
                                CountMode mode = CountMode::Auto);

// Conditional coefficient of dependence of y on z given x. Neighbor maps on
// the concatenated (x, z) columns and on x alone use independent tie-break
// streams. Throws DegenerateDataError when y is empirically a function of x.
CoefficientReport t_ac_cond(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                            const Eigen::MatrixXd& x, const PermutationFamily& perms,
                            SeedSpec seed, CountMode mode = CountMode::Auto,
                            bool standardize = false);

CoefficientReport t_ac_cond_with_maps(const Eigen::MatrixXd& y, const NeighborMap& map_xz,
                                      const NeighborMap& map_x, const PermutationFamily& perms,
                                      CountMode mode = CountMode::Auto);

// Naive variant: ranks taken over the un-permuted sample. Converges to a
// coefficient that can be zero for dependent vectors; kept for comparison.
CoefficientReport t_ac_naive(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                             SeedSpec seed, CountMode mode = CountMode::Auto,
                             bool standardize_z = false);

CoefficientReport t_ac_naive_with_map(const Eigen::MatrixXd& y, const NeighborMap& map,
                                      CountMode mode = CountMode::Auto);

// Column-wise standardization (mean 0, unit variance; constant columns left
// unchanged). Opt-in preprocessing for the conditioning variables.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m);

// Meet points: row i is the entrywise minimum of y.row(i) and y.row(m[i]).
Eigen::MatrixXd meet_with_neighbors(const Eigen::MatrixXd& y, const NeighborMap& map);

} // namespace acrank
