#include "acrank/variance.hpp"

#include <cmath>
#include <limits>

#include "acrank/errors.hpp"
#include "acrank/nn.hpp"

namespace acrank {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

double tail_p(double statistic, TestSide side) {
    if (side == TestSide::Right) {
        return 0.5 * std::erfc(statistic * 0.7071067811865475244);
    }
    return std::erfc(std::abs(statistic) * 0.7071067811865475244);
}

} // namespace

GammaEstimates gamma_hats(const Eigen::MatrixXd& y, const PermutationFamily& perms,
                          CountMode mode) {
    const int n = static_cast<int>(y.rows());
    if (n < 3) {
        throw InputError("gamma_hats: need n >= 3");
    }
    const Eigen::MatrixXd y_tilde = apply_permutations(y, perms);

    Eigen::MatrixXd meets1(n - 1, y.cols());
    Eigen::MatrixXd meets2(n - 2, y.cols());
    for (int i = 0; i + 1 < n; ++i) {
        meets1.row(i) = y.row(i).cwiseMin(y.row(i + 1));
    }
    for (int i = 0; i + 2 < n; ++i) {
        meets2.row(i) = y.row(i).cwiseMin(y.row(i + 2));
    }
    const DominanceCounts r1 = count_dominated(y_tilde, meets1, mode);
    const DominanceCounts r2 = count_dominated(y_tilde, meets2, mode);

    GammaEstimates g;
    for (int i = 0; i < n - 1; ++i) {
        const double r = r1[i];
        g.sum_r1 += r;
        g.sum_r1_sq += r * r;
    }
    for (int i = 0; i < n - 2; ++i) {
        g.sum_r1_r2 += static_cast<double>(r1[i]) * r2[i];
    }

    const double nd = n;
    const double mean_sq = (g.sum_r1 / (nd * (nd - 1.0))) * (g.sum_r1 / (nd * (nd - 1.0)));
    g.gamma2_hat = g.sum_r1_r2 / (nd * nd * (nd - 2.0)) - mean_sq;
    g.gamma1_hat = g.sum_r1_sq / (nd * nd * (nd - 1.0)) - mean_sq - 2.0 * g.gamma2_hat;
    return g;
}

double sigma_hat_sq(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                    const PermutationFamily& perms, SeedSpec seed, CountMode mode) {
    const int n = static_cast<int>(y.rows());
    if (n < 3) {
        throw InputError("sigma_hat_sq: need n >= 3");
    }
    const NeighborMap map = nearest_neighbors(z, seed);
    const NeighborStats stats = neighbor_stats(map);
    const GammaEstimates g = gamma_hats(y, perms, mode);

    const Eigen::MatrixXd y_tilde = apply_permutations(y, perms);
    const DominanceCounts l = count_dominating(y, y_tilde, mode);
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        den += (static_cast<double>(n) - l[i]) * l[i];
    }
    const double den_hat = den / (static_cast<double>(n) * n * n);
    if (den_hat == 0.0) {
        throw DegenerateDataError("variance denominator is zero (Y constant in sample)");
    }
    return (g.gamma1_hat * (1.0 + stats.mutual_fraction) +
            g.gamma2_hat * stats.indegree_pair_sum) /
           (den_hat * den_hat);
}

TestReport wald_report_from_sigma(double t_hat, int n, double sigma_sq, TestSide side) {
    if (!(sigma_sq > 0.0)) {
        throw DegenerateDataError("non-positive variance estimate; test statistic undefined");
    }
    TestReport rep;
    rep.t_hat = t_hat;
    rep.sigma_hat_sq = sigma_sq;
    rep.side = side;
    rep.statistic = std::sqrt(static_cast<double>(n)) * t_hat / std::sqrt(sigma_sq);
    rep.p_value = tail_p(rep.statistic, side);
    return rep;
}

namespace {

// At small n the plug-in variance estimate can come out non-positive (its
// gamma components are differences of noisy moments). The test then follows
// the sigma -> 0+ limit: the statistic runs off the normal scale in the
// direction of t_hat.
TestReport degenerate_variance_report(double t_hat, double sigma_sq, TestSide side) {
    TestReport rep;
    rep.t_hat = t_hat;
    rep.sigma_hat_sq = sigma_sq;
    rep.side = side;
    if (t_hat > 0.0) {
        rep.statistic = std::numeric_limits<double>::infinity();
        rep.p_value = 0.0;
    } else if (t_hat < 0.0) {
        rep.statistic = -std::numeric_limits<double>::infinity();
        rep.p_value = side == TestSide::Right ? 1.0 : 0.0;
    } else {
        rep.statistic = 0.0;
        rep.p_value = side == TestSide::Right ? 0.5 : 1.0;
    }
    return rep;
}

} // namespace

TestReport wald_test(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                     const PermutationFamily& perms, SeedSpec seed, TestSide side,
                     CountMode mode, bool standardize_z) {
    const int n = static_cast<int>(y.rows());
    if (n < 3) {
        throw InputError("wald_test: need n >= 3");
    }
    const Eigen::MatrixXd zz = standardize_z ? standardize_columns(z) : z;
    const NeighborMap map = nearest_neighbors(zz, seed);
    const CoefficientReport coeff = t_ac_with_map(y, map, perms, mode);
    const NeighborStats stats = neighbor_stats(map);
    const GammaEstimates g = gamma_hats(y, perms, mode);

    // coeff.denominator == sum_i (n - L_i) L_i, so the normalized
    // denominator estimate is denominator / n^3.
    const double den_hat = coeff.denominator / (static_cast<double>(n) * n * n);
    const double sigma_sq = (g.gamma1_hat * (1.0 + stats.mutual_fraction) +
                             g.gamma2_hat * stats.indegree_pair_sum) /
                            (den_hat * den_hat);

    TestReport rep = sigma_sq > 0.0 ? wald_report_from_sigma(coeff.value, n, sigma_sq, side)
                                    : degenerate_variance_report(coeff.value, sigma_sq, side);
    rep.gamma1_hat = g.gamma1_hat;
    rep.gamma2_hat = g.gamma2_hat;
    return rep;
}

} // namespace acrank
