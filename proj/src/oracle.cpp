#include "acrank/oracle.hpp"

#include <cmath>
#include <vector>

#include "acrank/domcount.hpp"
#include "acrank/errors.hpp"
#include "acrank/permutation.hpp"

namespace acrank {

namespace {

constexpr double kPi = 3.14159265358979323846;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

double unit_ball_volume(int d) {
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Lebesgue measure of the union of B(w1, r1) and B(w2, r2) at center
// distance t, for d = 1 and d = 2 in closed form.
double union_volume_1d(double w1, double r1, double w2, double r2) {
    const double lo1 = w1 - r1, hi1 = w1 + r1;
    const double lo2 = w2 - r2, hi2 = w2 + r2;
    const double overlap = std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
    return (hi1 - lo1) + (hi2 - lo2) - overlap;
}

double lens_area(double r1, double r2, double t) {
    if (t >= r1 + r2) return 0.0;
    if (t <= std::abs(r1 - r2)) {
        const double r = std::min(r1, r2);
        return kPi * r * r;
    }
    auto clamp1 = [](double v) { return std::max(-1.0, std::min(1.0, v)); };
    const double a1 = std::acos(clamp1((t * t + r1 * r1 - r2 * r2) / (2.0 * t * r1)));
    const double a2 = std::acos(clamp1((t * t + r2 * r2 - r1 * r1) / (2.0 * t * r2)));
    const double s = (-t + r1 + r2) * (t + r1 - r2) * (t - r1 + r2) * (t + r1 + r2);
    return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, s));
}

} // namespace

double a_const(int d) {
    if (d < 1) {
        throw InputError("a_const: d must be >= 1");
    }
    // After t = sin^2(phi) the incomplete-beta integrands become
    // 2 sin(phi)^d; the upper limit 3/4 maps to phi = pi/3.
    auto f = [d](double phi) { return std::pow(std::sin(phi), d); };
    const double num = integrate(f, 0.0, kPi / 3.0, 1e-13);
    const double den = integrate(f, 0.0, kPi / 2.0, 1e-13);
    return 1.0 / (2.0 - num / den);
}

McEstimate b_const(int d, long mc_samples, SeedSpec seed) {
    if (d < 1) {
        throw InputError("b_const: d must be >= 1");
    }
    if (mc_samples < 1) {
        throw InputError("b_const: mc_samples must be >= 1");
    }
    const double cd = unit_ball_volume(d);
    const double rho = 0.5; // proposal rate; keeps importance weights <= 1/rho^2
    const int inner_points = 10000;

    const long chunk = 1 << 14;
    const long n_chunks = (mc_samples + chunk - 1) / chunk;

    double total = 0.0;
    double total_sq = 0.0;
    std::vector<double> w1(static_cast<std::size_t>(d)), w2(static_cast<std::size_t>(d));
    std::vector<double> p(static_cast<std::size_t>(d));
    for (long c = 0; c < n_chunks; ++c) {
        RngStream rng(seed.sub(static_cast<std::uint64_t>(c)));
        const long lo = c * chunk;
        const long hi = std::min(mc_samples, lo + chunk);
        double sum = 0.0;
        double sum_sq = 0.0;

        auto sample_point = [&](std::vector<double>& w, double& r, double& log_q) {
            double norm_sq = 0.0;
            do {
                norm_sq = 0.0;
                for (int k = 0; k < d; ++k) {
                    w[static_cast<std::size_t>(k)] = rng.gaussian();
                    norm_sq += w[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
                }
            } while (norm_sq == 0.0);
            const double s = -std::log(rng.uniform_pos()) / rho;
            r = std::pow(s / cd, 1.0 / d);
            const double scale = r / std::sqrt(norm_sq);
            for (int k = 0; k < d; ++k) w[static_cast<std::size_t>(k)] *= scale;
            log_q = std::log(rho) - rho * s;
        };

        for (long it = lo; it < hi; ++it) {
            double r1 = 0.0, r2 = 0.0, lq1 = 0.0, lq2 = 0.0;
            sample_point(w1, r1, lq1);
            sample_point(w2, r2, lq2);

            double t_sq = 0.0;
            for (int k = 0; k < d; ++k) {
                const double diff = w1[static_cast<std::size_t>(k)] - w2[static_cast<std::size_t>(k)];
                t_sq += diff * diff;
            }
            const double rmax = std::max(r1, r2);
            double g = 0.0;
            if (t_sq >= rmax * rmax) {
                const double t = std::sqrt(t_sq);
                double vol_union = 0.0;
                if (d == 1) {
                    vol_union = union_volume_1d(w1[0], r1, w2[0], r2);
                } else if (d == 2) {
                    vol_union = kPi * (r1 * r1 + r2 * r2) - lens_area(r1, r2, t);
                } else {
                    const double v1 = cd * std::pow(r1, d);
                    const double v2 = cd * std::pow(r2, d);
                    double v_int = 0.0;
                    if (t < r1 + r2) {
                        // Inner Monte Carlo: fraction of the smaller ball
                        // inside the larger one.
                        const bool one_small = r1 <= r2;
                        const double rs = one_small ? r1 : r2;
                        const double ro = one_small ? r2 : r1;
                        const std::vector<double>& cs = one_small ? w1 : w2;
                        const std::vector<double>& co = one_small ? w2 : w1;
                        int hits = 0;
                        for (int ip = 0; ip < inner_points; ++ip) {
                            double nn = 0.0;
                            for (int k = 0; k < d; ++k) {
                                p[static_cast<std::size_t>(k)] = rng.gaussian();
                                nn += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
                            }
                            if (nn == 0.0) continue;
                            const double rad = rs * std::pow(rng.uniform_pos(), 1.0 / d);
                            const double sc = rad / std::sqrt(nn);
                            double dist_sq = 0.0;
                            for (int k = 0; k < d; ++k) {
                                const double q = cs[static_cast<std::size_t>(k)] +
                                                 sc * p[static_cast<std::size_t>(k)] -
                                                 co[static_cast<std::size_t>(k)];
                                dist_sq += q * q;
                            }
                            if (dist_sq <= ro * ro) ++hits;
                        }
                        v_int = (one_small ? v1 : v2) * hits / inner_points;
                    }
                    vol_union = v1 + v2 - v_int;
                }
                g = std::exp(-vol_union - lq1 - lq2);
            }
            sum += g;
            sum_sq += g * g;
        }
        total += sum;
        total_sq += sum_sq;
    }

    McEstimate est;
    est.value = total / static_cast<double>(mc_samples);
    const double var = std::max(0.0, total_sq / static_cast<double>(mc_samples) - est.value * est.value);
    est.std_error = std::sqrt(var / static_cast<double>(mc_samples));
    return est;
}

double sigma_sq_limit(double gamma1, double gamma2, double denom, int d_z, double eta,
                      long mc_samples, SeedSpec seed) {
    if (!(denom > 0.0)) {
        throw InputError("sigma_sq_limit: denom must be positive");
    }
    if (eta < 0.0 || eta > 1.0) {
        throw InputError("sigma_sq_limit: eta must lie in [0, 1]");
    }
    const double a = (eta < 1.0) ? a_const(d_z) : 0.0;
    const double b = (eta < 1.0) ? b_const(d_z, mc_samples, seed).value : 0.0;
    return (gamma1 * (1.0 + (1.0 - eta) * a) + gamma2 * (eta + (1.0 - eta) * b)) /
           (denom * denom);
}

PopulationOracle population_oracle(const YSampler& sampler, int mc_samples, SeedSpec seed) {
    if (mc_samples < 1000) {
        throw InputError("population_oracle: mc_samples must be >= 1000");
    }
    const int m = mc_samples;

    // Reference sample carries the estimated CDF-like functionals; outer
    // samples carry the expectations. This sample splitting avoids the
    // O(1/n) plug-in bias of evaluating both on the same draws.
    const Eigen::MatrixXd ref = sampler(m, seed.sub(1));
    const int d_y = static_cast<int>(ref.cols());
    const PermutationFamily ref_perms =
        build_permutations(m, d_y, PermScheme::Cyclic, SeedSpec{});
    const Eigen::MatrixXd ref_tilde = apply_permutations(ref, ref_perms);

    const Eigen::MatrixXd outer = sampler(3 * m, seed.sub(2));
    Eigen::MatrixXd meets12(m, d_y), meets13(m, d_y);
    for (int t = 0; t < m; ++t) {
        meets12.row(t) = outer.row(3 * t).cwiseMin(outer.row(3 * t + 1));
        meets13.row(t) = outer.row(3 * t).cwiseMin(outer.row(3 * t + 2));
    }
    const DominanceCounts c12 = count_dominated(ref_tilde, meets12);
    const DominanceCounts c13 = count_dominated(ref_tilde, meets13);

    // Product-measure draws: rows of a disjointly permuted i.i.d. sample have
    // independent coordinates with the right marginals.
    const Eigen::MatrixXd prod_base = sampler(m, seed.sub(3));
    const Eigen::MatrixXd prod_draws = apply_permutations(prod_base, ref_perms);
    const DominanceCounts cg = count_dominating(ref, prod_draws);

    auto gamma_from_range = [&](int lo, int hi, double& g1, double& g2) {
        double sv = 0.0, svv = 0.0, sw = 0.0;
        for (int t = lo; t < hi; ++t) {
            const double v = static_cast<double>(c12[t]) / m;
            const double f13 = static_cast<double>(c13[t]) / m;
            sv += v;
            svv += v * v;
            sw += v * f13;
        }
        const double cnt = hi - lo;
        const double mean_v = sv / cnt;
        g2 = sw / cnt - mean_v * mean_v;
        g1 = (svv / cnt - mean_v * mean_v) - 2.0 * g2;
    };
    auto denom_from_range = [&](int lo, int hi) {
        double s = 0.0;
        for (int t = lo; t < hi; ++t) {
            const double g = static_cast<double>(cg[t]) / m;
            s += g * (1.0 - g);
        }
        return s / (hi - lo);
    };

    PopulationOracle oracle;
    oracle.mc_samples = m;
    gamma_from_range(0, m, oracle.gamma1, oracle.gamma2);
    oracle.denom = denom_from_range(0, m);

    // Batch-means standard errors.
    const int n_batches = 20;
    std::vector<double> b1, b2, bd;
    for (int b = 0; b < n_batches; ++b) {
        const int lo = static_cast<int>(static_cast<long>(m) * b / n_batches);
        const int hi = static_cast<int>(static_cast<long>(m) * (b + 1) / n_batches);
        if (hi <= lo) continue;
        double g1 = 0.0, g2 = 0.0;
        gamma_from_range(lo, hi, g1, g2);
        b1.push_back(g1);
        b2.push_back(g2);
        bd.push_back(denom_from_range(lo, hi));
    }
    auto batch_se = [](const std::vector<double>& v) {
        const double k = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= k;
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= (k - 1.0);
        return std::sqrt(var / k);
    };
    oracle.gamma1_se = batch_se(b1);
    oracle.gamma2_se = batch_se(b2);
    oracle.denom_se = batch_se(bd);
    return oracle;
}

} // namespace acrank
