#pragma once

#include <functional>

#include <Eigen/Dense>

#include "acrank/random.hpp"

namespace acrank {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Monte-Carlo estimates of the population variance components and of the
// coefficient denominator, with per-field standard errors.
struct PopulationOracle {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double denom = 0.0;
    int mc_samples = 0;
    double gamma1_se = 0.0;
    double gamma2_se = 0.0;
    double denom_se = 0.0;
};

// Draws n rows of Y for a given seed; rows are i.i.d.
using YSampler = std::function<Eigen::MatrixXd(int n, SeedSpec seed)>;

// Dimension constant of the continuous-Z variance limit: an incomplete-beta
// ratio evaluated by adaptive quadrature to ~1e-12. A_d in (1/2, 1),
// decreasing in d; A_1 = 2/3 exactly.
double a_const(int d);

// Geometric pair-of-balls integral of the continuous-Z variance limit,
// estimated by importance-sampled Monte Carlo. The union volume is closed
// form for d <= 2 and inner-Monte-Carlo estimated for d >= 3 (10^4 points
// per outer draw). B_1 = 1/2 exactly.
McEstimate b_const(int d, long mc_samples, SeedSpec seed);

// Limit of the scaled variance for Z with a (1-eta) absolutely continuous +
// eta discrete mixture law:
//   [gamma1 (1 + (1-eta) A_d) + gamma2 (eta + (1-eta) B_d)] / denom^2.
double sigma_sq_limit(double gamma1, double gamma2, double denom, int d_z, double eta,
                      long mc_samples, SeedSpec seed);

// Sample-splitting Monte Carlo for the population quantities: the product-
// measure CDF and the survival function are estimated on a reference sample,
// outer expectations on an independent sample of triples. Standard errors
// come from batch means over the outer draws.
PopulationOracle population_oracle(const YSampler& sampler, int mc_samples, SeedSpec seed);

} // namespace acrank
