#include "acrank/estimators.hpp"

#include <cmath>

#include "acrank/errors.hpp"

namespace acrank {

namespace {

void check_rows(const Eigen::MatrixXd& y, const Eigen::MatrixXd& other, const char* what) {
    if (y.rows() != other.rows()) {
        throw InputError(std::string("row count mismatch between y and ") + what);
    }
    if (y.rows() < 2) {
        throw InputError("need at least 2 samples");
    }
}

} // namespace

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = m;
    const auto n = static_cast<double>(m.rows());
    for (int c = 0; c < m.cols(); ++c) {
        const double mean = m.col(c).mean();
        const double var = (m.col(c).array() - mean).square().sum() / n;
        if (var > 0.0) {
            out.col(c) = (m.col(c).array() - mean) / std::sqrt(var);
        }
    }
    return out;
}

Eigen::MatrixXd meet_with_neighbors(const Eigen::MatrixXd& y, const NeighborMap& map) {
    Eigen::MatrixXd meets(y.rows(), y.cols());
    for (int i = 0; i < y.rows(); ++i) {
        meets.row(i) = y.row(i).cwiseMin(y.row(map.m[static_cast<std::size_t>(i)]));
    }
    return meets;
}

CoefficientReport t_ac_with_map(const Eigen::MatrixXd& y, const NeighborMap& map,
                                const PermutationFamily& perms, CountMode mode) {
    const int n = static_cast<int>(y.rows());
    const Eigen::MatrixXd y_tilde = apply_permutations(y, perms);
    const Eigen::MatrixXd meets = meet_with_neighbors(y, map);

    CoefficientReport rep;
    rep.n = n;
    rep.rank_terms = count_dominated(y_tilde, meets, mode);
    rep.l_check = count_dominating(y, y_tilde, mode);

    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = rep.rank_terms[i];
        const double l = rep.l_check[i];
        num += static_cast<double>(n) * r - l * l;
        den += (static_cast<double>(n) - l) * l;
    }
    rep.numerator = num;
    rep.denominator = den;
    if (den == 0.0) {
        throw DegenerateDataError("denominator is zero (Y constant in sample); coefficient undefined");
    }
    rep.value = num / den;
    return rep;
}

CoefficientReport t_ac(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                       const PermutationFamily& perms, SeedSpec seed, CountMode mode,
                       bool standardize_z) {
    check_rows(y, z, "z");
    const NeighborMap map =
        nearest_neighbors(standardize_z ? standardize_columns(z) : z, seed);
    return t_ac_with_map(y, map, perms, mode);
}

CoefficientReport t_ac_cond_with_maps(const Eigen::MatrixXd& y, const NeighborMap& map_xz,
                                      const NeighborMap& map_x, const PermutationFamily& perms,
                                      CountMode mode) {
    const int n = static_cast<int>(y.rows());
    const Eigen::MatrixXd y_tilde = apply_permutations(y, perms);

    CoefficientReport rep;
    rep.n = n;
    rep.rank_terms = count_dominated(y_tilde, meet_with_neighbors(y, map_xz), mode);
    rep.rank_terms_x = count_dominated(y_tilde, meet_with_neighbors(y, map_x), mode);
    rep.rank_terms_y = count_dominated(y_tilde, y, mode);

    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += static_cast<double>(rep.rank_terms[i]) - rep.rank_terms_x[i];
        den += static_cast<double>(rep.rank_terms_y[i]) - rep.rank_terms_x[i];
    }
    rep.numerator = num;
    rep.denominator = den;
    if (den == 0.0) {
        throw DegenerateDataError(
            "denominator is zero (Y is empirically a function of X); conditional coefficient undefined");
    }
    rep.value = num / den;
    return rep;
}

CoefficientReport t_ac_cond(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                            const Eigen::MatrixXd& x, const PermutationFamily& perms,
                            SeedSpec seed, CountMode mode, bool standardize) {
    check_rows(y, z, "z");
    check_rows(y, x, "x");
    Eigen::MatrixXd xs = standardize ? standardize_columns(x) : x;
    Eigen::MatrixXd zs = standardize ? standardize_columns(z) : z;

    Eigen::MatrixXd xz(x.rows(), x.cols() + z.cols());
    xz << xs, zs;

    const NeighborMap map_xz = nearest_neighbors(xz, seed.sub(0));
    const NeighborMap map_x = nearest_neighbors(xs, seed.sub(1));
    return t_ac_cond_with_maps(y, map_xz, map_x, perms, mode);
}

CoefficientReport t_ac_naive_with_map(const Eigen::MatrixXd& y, const NeighborMap& map,
                                      CountMode mode) {
    const int n = static_cast<int>(y.rows());
    const Eigen::MatrixXd meets = meet_with_neighbors(y, map);

    CoefficientReport rep;
    rep.n = n;
    rep.rank_terms = count_dominated(y, meets, mode);
    rep.l_check = count_dominating(y, y, mode);

    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = rep.rank_terms[i];
        const double l = rep.l_check[i];
        num += static_cast<double>(n) * r - l * l;
        den += (static_cast<double>(n) - l) * l;
    }
    rep.numerator = num;
    rep.denominator = den;
    if (den == 0.0) {
        throw DegenerateDataError("denominator is zero (Y constant in sample); coefficient undefined");
    }
    rep.value = num / den;
    return rep;
}

CoefficientReport t_ac_naive(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z, SeedSpec seed,
                             CountMode mode, bool standardize_z) {
    check_rows(y, z, "z");
    const NeighborMap map =
        nearest_neighbors(standardize_z ? standardize_columns(z) : z, seed);
    return t_ac_naive_with_map(y, map, mode);
}

} // namespace acrank
