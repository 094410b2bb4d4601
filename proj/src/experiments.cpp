#include "acrank/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "acrank/errors.hpp"
#include "acrank/estimators.hpp"
#include "acrank/nn.hpp"
#include "acrank/oracle.hpp"
#include "acrank/permutation.hpp"

namespace acrank {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Splits [0, total) into contiguous chunks, one worker thread per chunk.
// Workers only write to disjoint result slots, so any thread count yields
// identical output.
void parallel_chunks(int total, int threads, const std::function<void(int, int)>& body) {
    threads = std::max(1, std::min(threads, total));
    if (threads == 1) {
        body(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const int lo = static_cast<int>(static_cast<long>(total) * t / threads);
        const int hi = static_cast<int>(static_cast<long>(total) * (t + 1) / threads);
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

TestSide side_from_string(const std::string& s) {
    if (s == "right") return TestSide::Right;
    if (s == "two") return TestSide::Two;
    throw InputError("unknown test side '" + s + "' (expected right or two)");
}

std::string side_to_string(TestSide side) {
    return side == TestSide::Right ? "right" : "two";
}

double ks_against_uniform(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto m = static_cast<double>(values.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double u = values[i];
        ks = std::max(ks, std::abs((static_cast<double>(i) + 1.0) / m - u));
        ks = std::max(ks, std::abs(u - static_cast<double>(i) / m));
    }
    return ks;
}

std::vector<double> midranks(const std::vector<double>& v) {
    const std::size_t m = v.size();
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double> ra = midranks(a);
    const std::vector<double> rb = midranks(b);
    const auto m = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= m;
    mb /= m;
    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return num / std::sqrt(va * vb);
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.kind = j.value("kind", c.kind);
    if (j.contains("dims")) {
        c.dims.clear();
        for (const auto& d : j.at("dims")) {
            c.dims.push_back({d.at(0).get<int>(), d.at(1).get<int>()});
        }
    }
    if (j.contains("bases")) {
        c.bases.clear();
        for (const auto& b : j.at("bases")) c.bases.push_back(base_dist_from_string(b.get<std::string>()));
    }
    if (j.contains("sample_sizes")) c.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
    c.reps = j.value("reps", c.reps);
    if (c.reps < 1) throw InputError("experiment config: reps must be >= 1");
    if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
    for (double a : c.alphas) {
        if (a <= 0.0 || a >= 1.0) throw InputError("experiment config: alphas must lie in (0, 1)");
    }
    c.sigma_mode = j.value("sigma_mode", c.sigma_mode);
    if (c.sigma_mode != "estimated" && c.sigma_mode != "oracle") {
        throw InputError("experiment config: sigma_mode must be 'estimated' or 'oracle'");
    }
    if (j.contains("side")) c.side = side_from_string(j.at("side").get<std::string>());
    c.n_designs = j.value("n_designs", c.n_designs);
    if (j.contains("seed")) {
        c.seed.master_seed = j.at("seed").value("master_seed", c.seed.master_seed);
        c.seed.stream_id = j.at("seed").value("stream_id", c.seed.stream_id);
    }
    c.threads = std::max(1, j.value("threads", c.threads));
    if (j.contains("etas")) c.etas = j.at("etas").get<std::vector<double>>();
    c.approx_n = j.value("approx_n", c.approx_n);
    if (j.contains("convergence_ns")) c.convergence_ns = j.at("convergence_ns").get<std::vector<int>>();
    if (j.contains("convergence_dzs")) c.convergence_dzs = j.at("convergence_dzs").get<std::vector<int>>();
    if (j.contains("x_values")) c.x_values = j.at("x_values").get<std::vector<double>>();
    c.k_min = j.value("k_min", c.k_min);
    c.k_max = j.value("k_max", c.k_max);
    c.cantor_control = j.value("cantor_control", c.cantor_control);
    c.cell_n = j.value("cell_n", c.cell_n);
    c.n_permutations = j.value("n_permutations", c.n_permutations);
    c.oracle_mc_samples = j.value("oracle_mc_samples", c.oracle_mc_samples);
    c.b_const_mc_samples = j.value("b_const_mc_samples", c.b_const_mc_samples);
    return c;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["kind"] = c.kind;
    j["dims"] = nlohmann::json::array();
    for (const auto& d : c.dims) j["dims"].push_back({d[0], d[1]});
    j["bases"] = nlohmann::json::array();
    for (auto b : c.bases) j["bases"].push_back(to_string(b));
    j["sample_sizes"] = c.sample_sizes;
    j["reps"] = c.reps;
    j["alphas"] = c.alphas;
    j["sigma_mode"] = c.sigma_mode;
    j["side"] = side_to_string(c.side);
    j["n_designs"] = c.n_designs;
    j["seed"] = {{"master_seed", c.seed.master_seed}, {"stream_id", c.seed.stream_id}};
    j["threads"] = c.threads;
    j["etas"] = c.etas;
    j["approx_n"] = c.approx_n;
    j["convergence_ns"] = c.convergence_ns;
    j["convergence_dzs"] = c.convergence_dzs;
    j["x_values"] = c.x_values;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["cantor_control"] = c.cantor_control;
    j["cell_n"] = c.cell_n;
    j["n_permutations"] = c.n_permutations;
    j["oracle_mc_samples"] = c.oracle_mc_samples;
    j["b_const_mc_samples"] = c.b_const_mc_samples;
    return j;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string dump = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

Eigen::MatrixXd linear_sample(int n, int d, BaseDist base, const Eigen::MatrixXd& mix,
                              RngStream& rng) {
    return draw_base(n, d, base, rng) * mix.transpose();
}

struct DesignMatrices {
    Eigen::MatrixXd b_y;
    Eigen::MatrixXd b_z;
    SeedSpec stream;
};

// Design matrices belong to a (d_y, d_z) configuration and are shared across
// base distributions and sample sizes.
DesignMatrices make_design(const ExperimentConfig& config, int d_y, int d_z, int design) {
    DesignMatrices dm;
    dm.stream = config.seed.sub(static_cast<std::uint64_t>(d_y) * 1000 + static_cast<std::uint64_t>(d_z),
                                static_cast<std::uint64_t>(design));
    RngStream rng(dm.stream);
    dm.b_y = random_mixing_matrix(d_y, rng);
    dm.b_z = random_mixing_matrix(d_z, rng);
    return dm;
}

} // namespace

ExperimentResult run_rejection_grid(const ExperimentConfig& config) {
    ExperimentResult result;
    result.kind = "rejection-grid";
    result.hash = config_hash(config);

    const bool oracle_mode = config.sigma_mode == "oracle";

    // Dimension constants are shared across designs and cells.
    std::vector<std::pair<int, std::pair<double, double>>> const_cache; // d_z -> (A, B)
    auto dim_consts = [&](int d_z) {
        for (const auto& [d, ab] : const_cache) {
            if (d == d_z) return ab;
        }
        const double a = a_const(d_z);
        const double b = b_const(d_z, config.b_const_mc_samples, config.seed.sub(424242, static_cast<std::uint64_t>(d_z))).value;
        const_cache.push_back({d_z, {a, b}});
        return const_cache.back().second;
    };

    result.timing_csv.push_back("d_y,d_z,base,n,seconds");
    // Table-shaped summary: one row per (d_y, d_z, base), one column per
    // (n, alpha) pair, rates in percent.
    std::ostringstream header;
    header << "d_y,d_z,base";
    for (int n : config.sample_sizes) {
        for (double alpha : config.alphas) {
            header << ",n" << n << "_alpha" << format_double(alpha);
        }
    }
    result.summary_csv.push_back(header.str());

    for (const auto& dpair : config.dims) {
        const int d_y = dpair[0];
        const int d_z = dpair[1];
        for (BaseDist base : config.bases) {
            // Per-design oracle variances (independent of n).
            std::vector<double> oracle_sigma_sq(static_cast<std::size_t>(config.n_designs), 0.0);
            std::vector<DesignMatrices> designs;
            for (int design = 0; design < config.n_designs; ++design) {
                designs.push_back(make_design(config, d_y, d_z, design));
            }
            if (oracle_mode) {
                const auto [a_d, b_d] = dim_consts(d_z);
                for (int design = 0; design < config.n_designs; ++design) {
                    const Eigen::MatrixXd b_y = designs[static_cast<std::size_t>(design)].b_y;
                    const YSampler sampler = [&, b_y](int m, SeedSpec s) {
                        RngStream rng(s);
                        return linear_sample(m, d_y, base, b_y, rng);
                    };
                    const PopulationOracle po = population_oracle(
                        sampler, config.oracle_mc_samples,
                        designs[static_cast<std::size_t>(design)].stream.sub(101));
                    oracle_sigma_sq[static_cast<std::size_t>(design)] =
                        (po.gamma1 * (1.0 + a_d) + po.gamma2 * b_d) / (po.denom * po.denom);
                }
            }

            std::ostringstream summary_line;
            summary_line << d_y << "," << d_z << "," << to_string(base);

            for (int n : config.sample_sizes) {
                const auto cell_start = Clock::now();
                const PermutationFamily perms =
                    build_permutations(n, d_y, PermScheme::Cyclic, SeedSpec{});

                std::vector<double> rates(config.alphas.size(), 0.0);
                for (int design = 0; design < config.n_designs; ++design) {
                    const DesignMatrices& dm = designs[static_cast<std::size_t>(design)];
                    const SeedSpec cell_stream =
                        dm.stream.sub(static_cast<std::uint64_t>(base) * 1000003 + static_cast<std::uint64_t>(n));

                    std::vector<double> pvals(static_cast<std::size_t>(config.reps), 1.0);
                    parallel_chunks(config.reps, config.threads, [&](int lo, int hi) {
                        for (int rep = lo; rep < hi; ++rep) {
                            const SeedSpec rep_seed = cell_stream.sub(static_cast<std::uint64_t>(rep));
                            RngStream rng(rep_seed);
                            const Eigen::MatrixXd y = linear_sample(n, d_y, base, dm.b_y, rng);
                            const Eigen::MatrixXd z = linear_sample(n, d_z, base, dm.b_z, rng);
                            if (oracle_mode) {
                                const NeighborMap map = nearest_neighbors(z, rep_seed.sub(1));
                                const CoefficientReport coeff = t_ac_with_map(y, map, perms);
                                pvals[static_cast<std::size_t>(rep)] =
                                    wald_report_from_sigma(coeff.value, n,
                                                           oracle_sigma_sq[static_cast<std::size_t>(design)],
                                                           config.side)
                                        .p_value;
                            } else {
                                pvals[static_cast<std::size_t>(rep)] =
                                    wald_test(y, z, perms, rep_seed.sub(1), config.side).p_value;
                            }
                        }
                    });
                    for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
                        int rejections = 0;
                        for (double p : pvals) {
                            if (p < config.alphas[ai]) ++rejections;
                        }
                        rates[ai] += static_cast<double>(rejections) / config.reps;
                    }
                }
                for (double& r : rates) r /= config.n_designs;

                const double cell_seconds = seconds_since(cell_start);
                nlohmann::ordered_json row;
                row["kind"] = result.kind;
                row["config_hash"] = result.hash;
                row["master_seed"] = config.seed.master_seed;
                row["d_y"] = d_y;
                row["d_z"] = d_z;
                row["base"] = to_string(base);
                row["n"] = n;
                row["sigma_mode"] = config.sigma_mode;
                row["n_designs"] = config.n_designs;
                row["reps"] = config.reps;
                row["cell_seed"] = designs[0].stream.master_seed;
                nlohmann::ordered_json rates_json, se_json;
                for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
                    const std::string key = format_double(config.alphas[ai]);
                    rates_json[key] = rates[ai];
                    se_json[key] = std::sqrt(rates[ai] * (1.0 - rates[ai]) / config.reps);
                }
                row["rejection_rate"] = rates_json;
                row["std_error"] = se_json;
                row["seconds"] = cell_seconds;
                result.rows.push_back(row);

                result.timing_csv.push_back(std::to_string(d_y) + "," + std::to_string(d_z) + "," +
                                            to_string(base) + "," + std::to_string(n) + "," +
                                            format_double(cell_seconds));
                for (double r : rates) summary_line << "," << format_double(100.0 * r);
            }
            result.summary_csv.push_back(summary_line.str());
        }
    }

    result.summary["cells"] = result.rows.size();
    return result;
}

ExperimentResult run_monotonicity(const ExperimentConfig& config) {
    ExperimentResult result;
    result.kind = "monotonicity";
    result.hash = config_hash(config);
    result.summary_csv.push_back("d,base,design,eta,t_ac");
    result.timing_csv.push_back("d,base,design,seconds");

    bool all_monotone = true;
    for (const auto& dpair : config.dims) {
        const int d = dpair[0];
        if (dpair[1] != d) {
            throw InputError("monotonicity experiment requires d_y == d_z");
        }
        for (BaseDist base : config.bases) {
            for (int design = 0; design < config.n_designs; ++design) {
                const auto start = Clock::now();
                const DesignMatrices dm = make_design(config, d, d, design);
                const SeedSpec data_seed =
                    dm.stream.sub(static_cast<std::uint64_t>(base) * 1000003 + 17);
                RngStream rng(data_seed);
                const Eigen::MatrixXd z = linear_sample(config.approx_n, d, base, dm.b_z, rng);
                const Eigen::MatrixXd noise = linear_sample(config.approx_n, d, base, dm.b_y, rng);
                const PermutationFamily perms =
                    build_permutations(config.approx_n, d, PermScheme::Cyclic, SeedSpec{});
                // Common random numbers across the eta sweep: Z (and hence
                // the neighbor map) is shared, only Y moves with eta.
                const NeighborMap map = nearest_neighbors(z, data_seed.sub(5));

                std::vector<double> values(config.etas.size(), 0.0);
                parallel_chunks(static_cast<int>(config.etas.size()), config.threads, [&](int lo, int hi) {
                    for (int e = lo; e < hi; ++e) {
                        const double eta = config.etas[static_cast<std::size_t>(e)];
                        const Eigen::MatrixXd y = eta * z + (1.0 - eta) * noise;
                        values[static_cast<std::size_t>(e)] = t_ac_with_map(y, map, perms).value;
                    }
                });

                bool monotone = true;
                for (std::size_t e = 1; e < values.size(); ++e) {
                    if (values[e] <= values[e - 1]) monotone = false;
                }
                all_monotone = all_monotone && monotone;

                nlohmann::ordered_json row;
                row["kind"] = result.kind;
                row["config_hash"] = result.hash;
                row["master_seed"] = config.seed.master_seed;
                row["d"] = d;
                row["base"] = to_string(base);
                row["design"] = design;
                row["cell_seed"] = dm.stream.master_seed;
                row["approx_n"] = config.approx_n;
                row["etas"] = config.etas;
                row["t_ac"] = values;
                row["strictly_increasing"] = monotone;
                const double cell_seconds = seconds_since(start);
                row["seconds"] = cell_seconds;
                result.rows.push_back(row);

                for (std::size_t e = 0; e < values.size(); ++e) {
                    result.summary_csv.push_back(std::to_string(d) + "," + to_string(base) + "," +
                                                 std::to_string(design) + "," +
                                                 format_double(config.etas[e]) + "," +
                                                 format_double(values[e]));
                }
                result.timing_csv.push_back(std::to_string(d) + "," + to_string(base) + "," +
                                            std::to_string(design) + "," + format_double(cell_seconds));
            }
        }
    }
    result.summary["all_strictly_increasing"] = all_monotone;
    return result;
}

ExperimentResult run_convergence(const ExperimentConfig& config) {
    ExperimentResult result;
    result.kind = "convergence";
    result.hash = config_hash(config);
    result.summary_csv.push_back("d_z,n,median_abs_error,mean_abs_error,se");
    result.timing_csv.push_back("d_z,n,seconds");

    for (int d_z : config.convergence_dzs) {
        std::vector<double> log_n, log_err;
        for (int n : config.convergence_ns) {
            const auto start = Clock::now();
            const PermutationFamily perms = build_permutations(n, 1, PermScheme::Cyclic, SeedSpec{});
            std::vector<double> errs(static_cast<std::size_t>(config.reps), 0.0);
            parallel_chunks(config.reps, config.threads, [&](int lo, int hi) {
                for (int rep = lo; rep < hi; ++rep) {
                    const SeedSpec rep_seed =
                        config.seed.sub(static_cast<std::uint64_t>(d_z) * 100000 + static_cast<std::uint64_t>(n),
                                        static_cast<std::uint64_t>(rep));
                    RngStream rng(rep_seed);
                    Eigen::MatrixXd z(n, d_z);
                    rng.fill_gaussian(z);
                    // Functional model: Y is a deterministic continuous
                    // function of Z, so the population coefficient is 1.
                    Eigen::MatrixXd y(n, 1);
                    y.col(0) = z.array().square().rowwise().sum();
                    const double t = t_ac(y, z, perms, rep_seed.sub(1)).value;
                    errs[static_cast<std::size_t>(rep)] = std::abs(t - 1.0);
                }
            });
            std::vector<double> sorted = errs;
            std::sort(sorted.begin(), sorted.end());
            const double median = sorted[sorted.size() / 2];
            double mean = 0.0;
            for (double e : errs) mean += e;
            mean /= static_cast<double>(errs.size());
            double var = 0.0;
            for (double e : errs) var += (e - mean) * (e - mean);
            var /= std::max<std::size_t>(1, errs.size() - 1);
            const double se = std::sqrt(var / static_cast<double>(errs.size()));

            log_n.push_back(std::log(static_cast<double>(n)));
            log_err.push_back(std::log(std::max(median, 1e-300)));

            nlohmann::ordered_json row;
            row["kind"] = result.kind;
            row["config_hash"] = result.hash;
            row["master_seed"] = config.seed.master_seed;
            row["d_z"] = d_z;
            row["n"] = n;
            row["reps"] = config.reps;
            row["median_abs_error"] = median;
            row["mean_abs_error"] = mean;
            row["se"] = se;
            const double cell_seconds = seconds_since(start);
            row["seconds"] = cell_seconds;
            result.rows.push_back(row);
            result.summary_csv.push_back(std::to_string(d_z) + "," + std::to_string(n) + "," +
                                         format_double(median) + "," + format_double(mean) + "," +
                                         format_double(se));
            result.timing_csv.push_back(std::to_string(d_z) + "," + std::to_string(n) + "," +
                                        format_double(cell_seconds));
        }

        // Least-squares slope of log(median error) on log(n).
        const auto m = static_cast<double>(log_n.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            mx += log_n[i];
            my += log_err[i];
        }
        mx /= m;
        my /= m;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            sxy += (log_n[i] - mx) * (log_err[i] - my);
            sxx += (log_n[i] - mx) * (log_n[i] - mx);
        }
        result.summary["slope_dz" + std::to_string(d_z)] = sxx > 0.0 ? sxy / sxx : 0.0;
    }
    return result;
}

ExperimentResult run_cantor_trajectory(const ExperimentConfig& config) {
    ExperimentResult result;
    result.kind = "cantor-trajectory";
    result.hash = config_hash(config);
    result.summary_csv.push_back("x,k,n,mean_mutual_nn,se,reps");
    result.timing_csv.push_back("x,k,n,seconds");

    for (double x : config.x_values) {
        for (int k = config.k_min; k <= config.k_max; ++k) {
            const auto start = Clock::now();
            const int n = static_cast<int>(std::floor(std::ldexp(x, k)));
            std::vector<double> stats(static_cast<std::size_t>(config.reps), 0.0);
            parallel_chunks(config.reps, config.threads, [&](int lo, int hi) {
                for (int rep = lo; rep < hi; ++rep) {
                    const SeedSpec rep_seed =
                        config.seed.sub(static_cast<std::uint64_t>(k) * 1000 +
                                            static_cast<std::uint64_t>(x * 256.0),
                                        static_cast<std::uint64_t>(rep));
                    Eigen::MatrixXd z;
                    if (config.cantor_control) {
                        RngStream rng(rep_seed);
                        z.resize(n, 1);
                        rng.fill_uniform(z);
                    } else {
                        z = gen_cantor(n, 40, rep_seed);
                    }
                    const NeighborMap map = nearest_neighbors(z, rep_seed.sub(1));
                    stats[static_cast<std::size_t>(rep)] = neighbor_stats(map).mutual_fraction;
                }
            });
            double mean = 0.0;
            for (double s : stats) mean += s;
            mean /= static_cast<double>(stats.size());
            double var = 0.0;
            for (double s : stats) var += (s - mean) * (s - mean);
            var /= std::max<std::size_t>(1, stats.size() - 1);
            const double se = std::sqrt(var / static_cast<double>(stats.size()));

            nlohmann::ordered_json row;
            row["kind"] = result.kind;
            row["config_hash"] = result.hash;
            row["master_seed"] = config.seed.master_seed;
            row["control"] = config.cantor_control;
            row["x"] = x;
            row["k"] = k;
            row["n"] = n;
            row["reps"] = config.reps;
            row["mean_mutual_nn"] = mean;
            row["se"] = se;
            const double cell_seconds = seconds_since(start);
            row["seconds"] = cell_seconds;
            result.rows.push_back(row);
            result.summary_csv.push_back(format_double(x) + "," + std::to_string(k) + "," +
                                         std::to_string(n) + "," + format_double(mean) + "," +
                                         format_double(se) + "," + std::to_string(config.reps));
            result.timing_csv.push_back(format_double(x) + "," + std::to_string(k) + "," +
                                        std::to_string(n) + "," + format_double(cell_seconds));
        }
    }
    return result;
}

ExperimentResult run_calibration_cross_check(const ExperimentConfig& config) {
    ExperimentResult result;
    result.kind = "calibration-cross-check";
    result.hash = config_hash(config);
    result.summary_csv.push_back("rep,p_wald,p_permutation");
    result.timing_csv.push_back("stage,seconds");

    const int n = config.cell_n;
    const int n_perm = config.n_permutations;
    const PermutationFamily perms = build_permutations(n, 1, PermScheme::Cyclic, SeedSpec{});

    std::vector<double> p_wald(static_cast<std::size_t>(config.reps), 1.0);
    std::vector<double> p_perm(static_cast<std::size_t>(config.reps), 1.0);
    double wald_seconds = 0.0;
    double perm_seconds = 0.0;

    const auto start_all = Clock::now();
    parallel_chunks(config.reps, config.threads, [&](int lo, int hi) {
        std::vector<int> shuffle_idx(static_cast<std::size_t>(n));
        for (int rep = lo; rep < hi; ++rep) {
            const SeedSpec rep_seed = config.seed.sub(31337, static_cast<std::uint64_t>(rep));
            RngStream rng(rep_seed);
            Eigen::MatrixXd y(n, 1), z(n, 1);
            rng.fill_gaussian(y);
            rng.fill_gaussian(z);

            const TestReport wald = wald_test(y, z, perms, rep_seed.sub(1), config.side);
            p_wald[static_cast<std::size_t>(rep)] = wald.p_value;

            RngStream shuffle_rng(rep_seed.sub(2));
            int exceed = 0;
            Eigen::MatrixXd z_shuffled(n, 1);
            for (int b = 0; b < n_perm; ++b) {
                std::iota(shuffle_idx.begin(), shuffle_idx.end(), 0);
                shuffle_rng.shuffle(shuffle_idx.data(), n);
                for (int i = 0; i < n; ++i) z_shuffled(i, 0) = z(shuffle_idx[static_cast<std::size_t>(i)], 0);
                const double t_b =
                    t_ac(y, z_shuffled, perms, rep_seed.sub(3, static_cast<std::uint64_t>(b))).value;
                if (t_b >= wald.t_hat) ++exceed;
            }
            p_perm[static_cast<std::size_t>(rep)] = (1.0 + exceed) / (1.0 + n_perm);
        }
    });
    perm_seconds = seconds_since(start_all);
    // The Wald side of each replication is a single test; the permutation
    // side redoes the estimate n_perm times, so per-rep cost is ~n_perm x.
    wald_seconds = perm_seconds / (1.0 + n_perm);

    for (int rep = 0; rep < config.reps; ++rep) {
        nlohmann::ordered_json row;
        row["kind"] = result.kind;
        row["config_hash"] = result.hash;
        row["master_seed"] = config.seed.master_seed;
        row["rep"] = rep;
        row["p_wald"] = p_wald[static_cast<std::size_t>(rep)];
        row["p_permutation"] = p_perm[static_cast<std::size_t>(rep)];
        result.rows.push_back(row);
        result.summary_csv.push_back(std::to_string(rep) + "," +
                                     format_double(p_wald[static_cast<std::size_t>(rep)]) + "," +
                                     format_double(p_perm[static_cast<std::size_t>(rep)]));
    }

    result.summary["ks_wald_uniform"] = ks_against_uniform(p_wald);
    result.summary["ks_permutation_uniform"] = ks_against_uniform(p_perm);
    result.summary["rank_correlation"] = spearman(p_wald, p_perm);
    result.summary["n"] = n;
    result.summary["n_permutations"] = n_perm;
    result.summary["total_seconds"] = perm_seconds;
    result.summary["approx_wald_only_seconds"] = wald_seconds;
    result.timing_csv.push_back("total," + format_double(perm_seconds));
    result.timing_csv.push_back("approx_wald_only," + format_double(wald_seconds));
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.kind == "rejection-grid") return run_rejection_grid(config);
    if (config.kind == "monotonicity") return run_monotonicity(config);
    if (config.kind == "convergence") return run_convergence(config);
    if (config.kind == "cantor-trajectory") return run_cantor_trajectory(config);
    if (config.kind == "calibration-cross-check") return run_calibration_cross_check(config);
    throw InputError("unknown experiment kind '" + config.kind + "'");
}

void write_experiment_outputs(const ExperimentResult& result, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream jsonl(out_dir + "/results.jsonl", std::ios::app);
        for (const auto& row : result.rows) jsonl << row.dump() << "\n";
        nlohmann::ordered_json tail;
        tail["kind"] = result.kind;
        tail["config_hash"] = result.hash;
        tail["summary"] = result.summary;
        jsonl << tail.dump() << "\n";
    }
    {
        std::ofstream csv(out_dir + "/summary.csv");
        for (const auto& line : result.summary_csv) csv << line << "\n";
    }
    {
        std::ofstream csv(out_dir + "/timing.csv");
        for (const auto& line : result.timing_csv) csv << line << "\n";
    }
}

} // namespace acrank
