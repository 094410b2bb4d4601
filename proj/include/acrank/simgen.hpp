#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "acrank/dataset.hpp"
#include "acrank/random.hpp"

namespace acrank {

enum class BaseDist { Gaussian, T2, T4 };

BaseDist base_dist_from_string(const std::string& name);
std::string to_string(BaseDist base);

// Declarative description of a data-generating process; serializes to/from
// JSON for the experiment harness and the CLI.
struct SamplerSpec {
    std::string family = "linear"; // linear | mixture | additive | triangle | cantor | custom-matrix
    int d_y = 1;
    int d_z = 1;
    int d_x = 0;
    BaseDist base = BaseDist::Gaussian;
    double eta = 0.0;
    // Mixing matrices. Absent matrices are drawn from the seed with i.i.d.
    // standard normal entries and unit-norm rows. For the additive family
    // b_y mixes the noise term and b_z mixes Z.
    std::optional<Eigen::MatrixXd> b_y;
    std::optional<Eigen::MatrixXd> b_z;
    // Additive family: true scales the noise by (1 - eta), false leaves it
    // unscaled.
    bool scale_noise = true;
    int cantor_digits = 40;
    SeedSpec seed;
};

void to_json(nlohmann::json& j, const SamplerSpec& spec);
void from_json(const nlohmann::json& j, SamplerSpec& spec);

// i.i.d. base draws (standard normal or Student t), row by row.
Eigen::MatrixXd draw_base(int n, int d, BaseDist base, RngStream& rng);

// d x d matrix with i.i.d. N(0,1) entries and rows normalized to unit
// l2-norm.
Eigen::MatrixXd random_mixing_matrix(int d, RngStream& rng);

// Independent Y = Y' B_Y^T and Z = Z' B_Z^T with i.i.d. base entries.
Dataset gen_linear(const SamplerSpec& spec, int n);

// Mixture of a functional and an independent component: per row, with
// probability eta set Y equal to Z, otherwise to an independent copy with
// the same marginal. Z has i.i.d. standard normal entries of dimension d.
Dataset gen_mixture(double eta, int n, SeedSpec seed, int d = 1);

// Additive model Y = eta Z + noise with Z = Z' B_Z^T, noise = eps' B_eps^T;
// the noise is scaled by (1 - eta) when spec.scale_noise is set.
Dataset gen_additive(double eta, int n, const SamplerSpec& spec, SeedSpec seed);

// Two-dimensional law on the triangle {y1 + y2 >= 1, 0 <= y1, y2 <= 1} with a
// binary Z: the interior component is shared between the two Z values; the
// boundary-segment component lives on the left half for Z = 1 and the right
// half for Z = 0.
Dataset gen_triangle(int n, SeedSpec seed);

// Cantor-distributed scalars: truncated ternary expansions with digits
// uniform on {0, 2}.
Eigen::MatrixXd gen_cantor(int n, int digits, SeedSpec seed);

// Dispatch on spec.family.
Dataset generate(const SamplerSpec& spec, int n);

} // namespace acrank
