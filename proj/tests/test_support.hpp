#pragma once

// Test-only helpers and independent oracles. Everything here is written
// against the definitions, not against the library's fast paths, so it can
// arbitrate their correctness.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acrank/random.hpp"

namespace testsupport {

// Integer-valued random point set: deliberate coordinate ties.
inline Eigen::MatrixXd random_grid_points(int n, int d, int levels, acrank::RngStream& rng) {
    Eigen::MatrixXd m(n, d);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            m(i, k) = static_cast<double>(rng.bounded(static_cast<std::uint64_t>(levels)));
        }
    }
    return m;
}

inline Eigen::MatrixXd random_real_points(int n, int d, acrank::RngStream& rng) {
    Eigen::MatrixXd m(n, d);
    rng.fill_gaussian(m);
    return m;
}

// All-pairs nearest-neighbor tie set with exact squared-distance equality,
// ascending indices.
inline std::vector<int> nn_tie_set_oracle(const Eigen::MatrixXd& pts, int query) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> ties;
    for (int j = 0; j < pts.rows(); ++j) {
        if (j == query) continue;
        double d2 = 0.0;
        for (int k = 0; k < pts.cols(); ++k) {
            const double diff = pts(query, k) - pts(j, k);
            d2 += diff * diff;
        }
        if (d2 < best) {
            best = d2;
            ties.clear();
            ties.push_back(j);
        } else if (d2 == best) {
            ties.push_back(j);
        }
    }
    return ties;
}

inline double ks_uniform(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto m = static_cast<double>(v.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        ks = std::max(ks, std::abs((static_cast<double>(i) + 1.0) / m - v[i]));
        ks = std::max(ks, std::abs(v[i] - static_cast<double>(i) / m));
    }
    return ks;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        ks = std::max(ks, std::abs(fa - fb));
    }
    return ks;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / std::max<std::size_t>(1, v.size() - 1));
}

// ---------------------------------------------------------------------------
// Closed-form conditional survival functions of the triangle law, plus a
// Monte-Carlo evaluation of the population coefficient. The law: with
// probability 1/2, Y uniform on the triangle {0 <= y1, y2 <= 1, y1 + y2 >= 1}
// (shared across Z); with probability 1/2, Y on the boundary segment
// y1 + y2 = 1, uniform on the left half (y1 < 1/2) when Z = 1 and on the
// right half when Z = 0.
// ---------------------------------------------------------------------------

inline double triangle_interior_survival(double a, double b) {
    if (a > 1.0 || b > 1.0) return 0.0;
    const double aa = std::max(a, 0.0);
    const double bb = std::max(b, 0.0);
    const double rect = (1.0 - aa) * (1.0 - bb);
    const double cut = std::max(0.0, 1.0 - aa - bb);
    return (rect - 0.5 * cut * cut) / 0.5;
}

inline double triangle_segment_survival(double a, double b, bool left_half) {
    const double lo = left_half ? 0.0 : 0.5;
    const double hi = left_half ? 0.5 : 1.0;
    const double t_lo = std::max(lo, std::max(a, 0.0));
    const double t_hi = std::min(hi, std::min(1.0 - b, 1.0));
    return 2.0 * std::max(0.0, t_hi - t_lo);
}

// P(Y >= (a, b) | Z = z) exactly.
inline double triangle_conditional_survival(double a, double b, int z) {
    return 0.5 * triangle_interior_survival(a, b) +
           0.5 * triangle_segment_survival(a, b, z == 1);
}

struct TrianglePopulation {
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;
};

// Direct Monte Carlo over the product measure of the Y-marginals, with the
// conditional survival functions in closed form. Each coordinate has density
// t + 1/2 on [0, 1]: an even mixture of Uniform(0,1) and density 2t.
inline TrianglePopulation triangle_population_tac(long mc_samples, acrank::SeedSpec seed) {
    acrank::RngStream rng(seed.sub(0));
    double num = 0.0;
    double den = 0.0;
    auto marginal = [&rng]() {
        const double u = rng.uniform();
        return rng.uniform() < 0.5 ? u : std::sqrt(std::max(u, 0.0));
    };
    for (long t = 0; t < mc_samples; ++t) {
        const double a = marginal();
        const double b = marginal();
        const double g1 = triangle_conditional_survival(a, b, 1);
        const double g0 = triangle_conditional_survival(a, b, 0);
        const double g = 0.5 * (g1 + g0);
        num += 0.25 * (g1 - g0) * (g1 - g0);
        den += g * (1.0 - g);
    }
    TrianglePopulation pop;
    pop.numerator = num / static_cast<double>(mc_samples);
    pop.denominator = den / static_cast<double>(mc_samples);
    pop.value = pop.numerator / pop.denominator;
    return pop;
}

// Minimal scoped temp file helper for CSV round trips.
class TempFile {
public:
    explicit TempFile(const std::string& name, const std::string& contents)
        : path_("/tmp/acrank_test_" + name) {
        std::ofstream out(path_);
        out << contents;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace testsupport
