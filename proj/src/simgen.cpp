#include "acrank/simgen.hpp"

#include <cmath>

#include "acrank/errors.hpp"

namespace acrank {

BaseDist base_dist_from_string(const std::string& name) {
    if (name == "gaussian") return BaseDist::Gaussian;
    if (name == "t2") return BaseDist::T2;
    if (name == "t4") return BaseDist::T4;
    throw InputError("unknown base distribution '" + name + "' (expected gaussian, t2 or t4)");
}

std::string to_string(BaseDist base) {
    switch (base) {
        case BaseDist::Gaussian: return "gaussian";
        case BaseDist::T2: return "t2";
        default: return "t4";
    }
}

void to_json(nlohmann::json& j, const SamplerSpec& spec) {
    j = nlohmann::json{{"family", spec.family},
                       {"d_y", spec.d_y},
                       {"d_z", spec.d_z},
                       {"d_x", spec.d_x},
                       {"base", to_string(spec.base)},
                       {"eta", spec.eta},
                       {"scale_noise", spec.scale_noise},
                       {"cantor_digits", spec.cantor_digits},
                       {"seed", {{"master_seed", spec.seed.master_seed}, {"stream_id", spec.seed.stream_id}}}};
    auto matrix_to_json = [](const Eigen::MatrixXd& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(row);
        }
        return rows;
    };
    if (spec.b_y) j["b_y"] = matrix_to_json(*spec.b_y);
    if (spec.b_z) j["b_z"] = matrix_to_json(*spec.b_z);
}

void from_json(const nlohmann::json& j, SamplerSpec& spec) {
    spec = SamplerSpec{};
    spec.family = j.value("family", spec.family);
    spec.d_y = j.value("d_y", spec.d_y);
    spec.d_z = j.value("d_z", spec.d_z);
    spec.d_x = j.value("d_x", spec.d_x);
    if (j.contains("base")) spec.base = base_dist_from_string(j.at("base").get<std::string>());
    spec.eta = j.value("eta", spec.eta);
    spec.scale_noise = j.value("scale_noise", spec.scale_noise);
    spec.cantor_digits = j.value("cantor_digits", spec.cantor_digits);
    if (j.contains("seed")) {
        spec.seed.master_seed = j.at("seed").value("master_seed", std::uint64_t{0});
        spec.seed.stream_id = j.at("seed").value("stream_id", std::uint64_t{0});
    }
    auto matrix_from_json = [](const nlohmann::json& rows) {
        const int nr = static_cast<int>(rows.size());
        const int nc = nr > 0 ? static_cast<int>(rows.at(0).size()) : 0;
        Eigen::MatrixXd m(nr, nc);
        for (int r = 0; r < nr; ++r) {
            for (int c = 0; c < nc; ++c) m(r, c) = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
        }
        return m;
    };
    if (j.contains("b_y")) spec.b_y = matrix_from_json(j.at("b_y"));
    if (j.contains("b_z")) spec.b_z = matrix_from_json(j.at("b_z"));
}

Eigen::MatrixXd draw_base(int n, int d, BaseDist base, RngStream& rng) {
    Eigen::MatrixXd m(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            switch (base) {
                case BaseDist::Gaussian: m(i, j) = rng.gaussian(); break;
                case BaseDist::T2: m(i, j) = rng.student_t(2); break;
                case BaseDist::T4: m(i, j) = rng.student_t(4); break;
            }
        }
    }
    return m;
}

Eigen::MatrixXd random_mixing_matrix(int d, RngStream& rng) {
    Eigen::MatrixXd b(d, d);
    rng.fill_gaussian(b);
    for (int r = 0; r < d; ++r) {
        const double norm = b.row(r).norm();
        if (norm > 0.0) b.row(r) /= norm;
    }
    return b;
}

Dataset gen_linear(const SamplerSpec& spec, int n) {
    if (spec.d_y < 1 || spec.d_z < 1 || n < 1) {
        throw InputError("gen_linear: need d_y, d_z, n >= 1");
    }
    RngStream design_rng(spec.seed.sub(0));
    const Eigen::MatrixXd b_y = spec.b_y ? *spec.b_y : random_mixing_matrix(spec.d_y, design_rng);
    const Eigen::MatrixXd b_z = spec.b_z ? *spec.b_z : random_mixing_matrix(spec.d_z, design_rng);
    if (b_y.rows() != spec.d_y || b_y.cols() != spec.d_y || b_z.rows() != spec.d_z ||
        b_z.cols() != spec.d_z) {
        throw InputError("gen_linear: mixing matrix shapes do not match dims");
    }

    RngStream rng(spec.seed.sub(1));
    Dataset ds;
    ds.y = draw_base(n, spec.d_y, spec.base, rng) * b_y.transpose();
    ds.z = draw_base(n, spec.d_z, spec.base, rng) * b_z.transpose();
    return ds;
}

Dataset gen_mixture(double eta, int n, SeedSpec seed, int d) {
    if (eta < 0.0 || eta > 1.0) {
        throw InputError("gen_mixture: eta must lie in [0, 1]");
    }
    RngStream rng(seed.sub(0));
    Dataset ds;
    ds.y.resize(n, d);
    ds.z.resize(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) ds.z(i, j) = rng.gaussian();
        const bool functional = rng.uniform() < eta;
        for (int j = 0; j < d; ++j) {
            const double indep = rng.gaussian(); // drawn either way: keeps the
                                                 // draw sequence aligned
            ds.y(i, j) = functional ? ds.z(i, j) : indep;
        }
    }
    return ds;
}

Dataset gen_additive(double eta, int n, const SamplerSpec& spec, SeedSpec seed) {
    if (eta < 0.0) {
        throw InputError("gen_additive: eta must be >= 0");
    }
    if (spec.scale_noise && eta > 1.0) {
        throw InputError("gen_additive: eta must lie in [0, 1] when the noise is scaled by (1 - eta)");
    }
    const int d = spec.d_z;
    if (spec.d_y != d) {
        throw InputError("gen_additive: additive model requires d_y == d_z");
    }
    RngStream design_rng(seed.sub(0));
    const Eigen::MatrixXd b_z = spec.b_z ? *spec.b_z : random_mixing_matrix(d, design_rng);
    const Eigen::MatrixXd b_eps = spec.b_y ? *spec.b_y : random_mixing_matrix(d, design_rng);

    RngStream rng(seed.sub(1));
    const Eigen::MatrixXd z = draw_base(n, d, spec.base, rng) * b_z.transpose();
    const Eigen::MatrixXd eps = draw_base(n, d, spec.base, rng) * b_eps.transpose();

    Dataset ds;
    ds.z = z;
    ds.y = spec.scale_noise ? (eta * z + (1.0 - eta) * eps).eval() : (eta * z + eps).eval();
    return ds;
}

Dataset gen_triangle(int n, SeedSpec seed) {
    RngStream rng(seed.sub(0));
    Dataset ds;
    ds.y.resize(n, 2);
    ds.z.resize(n, 1);
    for (int i = 0; i < n; ++i) {
        const double z = static_cast<double>(rng.bounded(2));
        ds.z(i, 0) = z;
        if (rng.uniform() < 0.5) {
            // Interior component, shared between the two Z values.
            double u = rng.uniform();
            double v = rng.uniform();
            while (u + v == 1.0) {
                u = rng.uniform();
                v = rng.uniform();
            }
            if (u + v < 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            ds.y(i, 0) = u;
            ds.y(i, 1) = v;
        } else {
            // Boundary segment y1 + y2 = 1: left half for Z = 1, right half
            // for Z = 0.
            const double u = rng.uniform();
            const double y1 = (z == 1.0) ? 0.5 * u : 0.5 + 0.5 * u;
            ds.y(i, 0) = y1;
            ds.y(i, 1) = 1.0 - y1;
        }
    }
    return ds;
}

Eigen::MatrixXd gen_cantor(int n, int digits, SeedSpec seed) {
    if (digits < 1) {
        throw InputError("gen_cantor: digits must be >= 1");
    }
    RngStream rng(seed.sub(0));
    Eigen::MatrixXd z(n, 1);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        double scale = 1.0;
        for (int j = 0; j < digits; ++j) {
            scale /= 3.0;
            v += scale * (2.0 * static_cast<double>(rng.bounded(2)));
        }
        z(i, 0) = v;
    }
    return z;
}

Dataset generate(const SamplerSpec& spec, int n) {
    if (spec.family == "linear" || spec.family == "custom-matrix") {
        return gen_linear(spec, n);
    }
    if (spec.family == "mixture") {
        return gen_mixture(spec.eta, n, spec.seed, spec.d_y);
    }
    if (spec.family == "additive") {
        return gen_additive(spec.eta, n, spec, spec.seed);
    }
    if (spec.family == "triangle") {
        return gen_triangle(n, spec.seed);
    }
    if (spec.family == "cantor") {
        Dataset ds;
        ds.z = gen_cantor(n, spec.cantor_digits, spec.seed);
        RngStream rng(spec.seed.sub(9));
        ds.y.resize(n, 1);
        for (int i = 0; i < n; ++i) ds.y(i, 0) = rng.uniform();
        return ds;
    }
    throw InputError("unknown sampler family '" + spec.family + "'");
}

} // namespace acrank
