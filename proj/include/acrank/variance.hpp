#pragma once

#include <Eigen/Dense>

#include "acrank/domcount.hpp"
#include "acrank/estimators.hpp"
#include "acrank/permutation.hpp"
#include "acrank/random.hpp"

namespace acrank {

// Empirical variance components from ranks of consecutive meets.
struct GammaEstimates {
    double gamma1_hat = 0.0;
    double gamma2_hat = 0.0;
    // Intermediate sums, kept for diagnostics: sum of rank(Y_i ^ Y_{i+1}),
    // of its square, and of rank(Y_i ^ Y_{i+1}) * rank(Y_i ^ Y_{i+2}).
    double sum_r1 = 0.0;
    double sum_r1_sq = 0.0;
    double sum_r1_r2 = 0.0;
};

enum class TestSide { Right, Two };

struct TestReport {
    double t_hat = 0.0;
    double sigma_hat_sq = 0.0;
    double gamma1_hat = 0.0;
    double gamma2_hat = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
    TestSide side = TestSide::Right;
};

// Standard normal CDF via the complementary error function (accurate to
// full double precision).
double normal_cdf(double x);

// Gamma-hat estimates; needs n >= 3.
GammaEstimates gamma_hats(const Eigen::MatrixXd& y, const PermutationFamily& perms,
                          CountMode mode = CountMode::Auto);

// Plug-in variance estimate assembling the gamma hats, the mutual/in-degree
// neighbor statistics of the map on z, and the normalized denominator.
double sigma_hat_sq(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                    const PermutationFamily& perms, SeedSpec seed,
                    CountMode mode = CountMode::Auto);

// Wald-type independence test: statistic = sqrt(n) T-hat / sigma-hat,
// compared against the standard normal. The coefficient and the variance
// estimate share one nearest-neighbor map. At small n the variance estimate
// can come out non-positive; the report then takes the sigma -> 0+ limit
// (statistic = +-inf, p-value 0 or 1 by the sign of the coefficient).
TestReport wald_test(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                     const PermutationFamily& perms, SeedSpec seed,
                     TestSide side = TestSide::Right, CountMode mode = CountMode::Auto,
                     bool standardize_z = false);

// Test report from a precomputed coefficient and an externally supplied
// variance (e.g. the continuous-limit oracle value).
TestReport wald_report_from_sigma(double t_hat, int n, double sigma_sq, TestSide side);

} // namespace acrank
