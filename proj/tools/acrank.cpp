#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "acrank/dataset.hpp"
#include "acrank/domcount.hpp"
#include "acrank/errors.hpp"
#include "acrank/estimators.hpp"
#include "acrank/experiments.hpp"
#include "acrank/nn.hpp"
#include "acrank/oracle.hpp"
#include "acrank/permutation.hpp"
#include "acrank/simgen.hpp"
#include "acrank/variance.hpp"

namespace {

using acrank::CountMode;
using acrank::SeedSpec;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerateData = 3;

struct CommonFlags {
    std::uint64_t seed = 0;
    std::string mode = "fast";
    std::string perm_scheme = "cyclic";
    bool standardize_z = false;

    [[nodiscard]] CountMode count_mode() const {
        return mode == "oracle" ? CountMode::Oracle : CountMode::Auto;
    }
    [[nodiscard]] acrank::PermScheme scheme() const {
        return perm_scheme == "random" ? acrank::PermScheme::Random : acrank::PermScheme::Cyclic;
    }
    [[nodiscard]] SeedSpec seed_spec() const { return SeedSpec{seed, 0}; }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed (all randomness derives from it)");
    cmd->add_option("--mode", flags.mode, "Rank-counting path: fast or oracle")
        ->check(CLI::IsMember({"fast", "oracle"}));
}

json coefficient_json(const acrank::CoefficientReport& rep) {
    json out;
    out["value"] = rep.value;
    out["numerator"] = rep.numerator;
    out["denominator"] = rep.denominator;
    out["n"] = rep.n;
    return out;
}

int run_selfcheck(std::uint64_t seed) {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        all_ok = all_ok && ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
    };
    const SeedSpec root{seed, 0};

    // Fast dominance counting equals the pairwise oracle.
    {
        bool ok = true;
        acrank::RngStream rng(root.sub(1));
        for (int d = 1; d <= 5 && ok; ++d) {
            for (int rep = 0; rep < 12 && ok; ++rep) {
                const int na = 1 + static_cast<int>(rng.bounded(160));
                const int nb = 1 + static_cast<int>(rng.bounded(160));
                Eigen::MatrixXd a(na, d), b(nb, d);
                for (int i = 0; i < na; ++i) {
                    for (int k = 0; k < d; ++k) a(i, k) = static_cast<double>(rng.bounded(8));
                }
                for (int i = 0; i < nb; ++i) {
                    for (int k = 0; k < d; ++k) b(i, k) = static_cast<double>(rng.bounded(8));
                }
                ok = acrank::count_dominated(a, b) == acrank::count_dominated_oracle(a, b);
            }
        }
        report("dominance counting: fast == oracle", ok);
    }

    // Closed forms of the dimension constants.
    {
        const double a1 = acrank::a_const(1);
        report("a_const(1) == 2/3", std::abs(a1 - 2.0 / 3.0) < 1e-9, "got " + std::to_string(a1));
        const acrank::McEstimate b1 = acrank::b_const(1, 200000, root.sub(2));
        report("b_const(1) == 1/2 within 4 SE",
               std::abs(b1.value - 0.5) < 4.0 * b1.std_error,
               "got " + std::to_string(b1.value) + " +- " + std::to_string(b1.std_error));
    }

    // Both nearest-neighbor paths agree, ties included.
    {
        acrank::RngStream rng(root.sub(3));
        Eigen::MatrixXd pts(600, 2);
        for (int i = 0; i < pts.rows(); ++i) {
            for (int k = 0; k < 2; ++k) pts(i, k) = static_cast<double>(rng.bounded(12));
        }
        const auto brute = acrank::nearest_neighbors(pts, root.sub(4), acrank::NnMethod::BruteForce);
        const auto tree = acrank::nearest_neighbors(pts, root.sub(4), acrank::NnMethod::KdTree);
        report("nearest neighbors: brute force == k-d tree", brute.m == tree.m);
    }

    // Hand-checkable coefficient value.
    {
        Eigen::MatrixXd y(3, 1), z(3, 1);
        y << 1, 2, 3;
        z << 1, 2, 3;
        acrank::NeighborMap map;
        map.n = 3;
        map.m = {1, 0, 1};
        const auto perms = acrank::build_permutations(3, 1, acrank::PermScheme::Cyclic, root);
        const auto rep = acrank::t_ac_with_map(y, map, perms);
        report("three-point hand example == -0.5", rep.value == -0.5,
               "got " + std::to_string(rep.value));
    }

    // Uniform closed forms for the variance pieces (loose Monte Carlo check).
    {
        const int n = 5000;
        acrank::RngStream rng(root.sub(5));
        Eigen::MatrixXd y(n, 1);
        rng.fill_uniform(y);
        const auto perms = acrank::build_permutations(n, 1, acrank::PermScheme::Cyclic, root);
        const auto g = acrank::gamma_hats(y, perms);
        report("uniform gamma1 near 1/90", std::abs(g.gamma1_hat - 1.0 / 90.0) < 0.004,
               "got " + std::to_string(g.gamma1_hat));
        report("uniform gamma2 near 1/45", std::abs(g.gamma2_hat - 1.0 / 45.0) < 0.004,
               "got " + std::to_string(g.gamma2_hat));
    }

    std::cout << (all_ok ? "selfcheck: all checks passed" : "selfcheck: FAILURES above") << "\n";
    return all_ok ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate rank coefficient of dependence: estimation, testing, simulation"};
    app.require_subcommand(1);

    CommonFlags coeff_flags, cond_flags, test_flags, rank_flags, oracle_flags, sim_flags, self_flags;

    // coeff
    auto* coeff_cmd = app.add_subcommand("coeff", "Dependence coefficient of Y on Z from a CSV");
    std::string coeff_input;
    int coeff_dy = 1, coeff_dz = 1;
    coeff_cmd->add_option("--input", coeff_input, "CSV with columns y1..y{dy}, z1..z{dz}")->required();
    coeff_cmd->add_option("--dy", coeff_dy, "Number of Y columns")->required();
    coeff_cmd->add_option("--dz", coeff_dz, "Number of Z columns")->required();
    coeff_cmd->add_option("--perm-scheme", coeff_flags.perm_scheme, "cyclic or random")
        ->check(CLI::IsMember({"cyclic", "random"}));
    coeff_cmd->add_flag("--standardize-z", coeff_flags.standardize_z,
                        "Column-standardize Z before the neighbor search");
    add_common(coeff_cmd, coeff_flags);

    // condcoeff
    auto* cond_cmd = app.add_subcommand("condcoeff", "Conditional dependence coefficient of Y on Z given X");
    std::string cond_input;
    int cond_dy = 1, cond_dz = 1, cond_dx = 1;
    cond_cmd->add_option("--input", cond_input, "CSV with y*, z* and x* columns")->required();
    cond_cmd->add_option("--dy", cond_dy)->required();
    cond_cmd->add_option("--dz", cond_dz)->required();
    cond_cmd->add_option("--dx", cond_dx)->required();
    cond_cmd->add_option("--perm-scheme", cond_flags.perm_scheme)
        ->check(CLI::IsMember({"cyclic", "random"}));
    cond_cmd->add_flag("--standardize-z", cond_flags.standardize_z,
                       "Column-standardize X and Z before the neighbor searches");
    add_common(cond_cmd, cond_flags);

    // test
    auto* test_cmd = app.add_subcommand("test", "Wald-type independence test");
    std::string test_input, test_side = "right";
    int test_dy = 1, test_dz = 1;
    test_cmd->add_option("--input", test_input)->required();
    test_cmd->add_option("--dy", test_dy)->required();
    test_cmd->add_option("--dz", test_dz)->required();
    test_cmd->add_option("--side", test_side, "right (default) or two")
        ->check(CLI::IsMember({"right", "two"}));
    test_cmd->add_option("--perm-scheme", test_flags.perm_scheme)
        ->check(CLI::IsMember({"cyclic", "random"}));
    test_cmd->add_flag("--standardize-z", test_flags.standardize_z);
    add_common(test_cmd, test_flags);

    // rankcount
    auto* rank_cmd = app.add_subcommand("rankcount", "Dominance counts of points in A below each point of B");
    std::string rank_a, rank_b, rank_out;
    rank_cmd->add_option("--a", rank_a, "CSV of points (dominated set)")->required();
    rank_cmd->add_option("--b", rank_b, "CSV of query points")->required();
    rank_cmd->add_option("--out", rank_out, "Output CSV (default: stdout)");
    add_common(rank_cmd, rank_flags);

    // oracle-sigma
    auto* oracle_cmd = app.add_subcommand("oracle-sigma", "Population variance components for a sampler spec");
    std::string oracle_spec_path;
    int oracle_mc = 10000;
    long oracle_b_mc = 1000000;
    double oracle_eta = 0.0;
    oracle_cmd->add_option("--spec", oracle_spec_path, "Sampler spec JSON")->required();
    oracle_cmd->add_option("--mc-samples", oracle_mc, "Monte Carlo sample size (>= 1000)");
    oracle_cmd->add_option("--b-mc-samples", oracle_b_mc, "Monte Carlo size for the pair-of-balls constant");
    oracle_cmd->add_option("--eta-discrete", oracle_eta, "Discrete mass of the Z law in [0, 1]");
    add_common(oracle_cmd, oracle_flags);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run a batch experiment from a JSON config");
    std::string sim_config_path, sim_out_dir = "results";
    int sim_threads = 0;
    sim_cmd->add_option("--config", sim_config_path, "Experiment config JSON")->required();
    sim_cmd->add_option("--out", sim_out_dir, "Output directory");
    sim_cmd->add_option("--threads", sim_threads, "Worker threads (overrides config)");
    add_common(sim_cmd, sim_flags);

    // selfcheck
    auto* self_cmd = app.add_subcommand("selfcheck", "Oracle-equivalence and closed-form checks");
    add_common(self_cmd, self_flags);

    try {
        app.parse(argc, argv);

        if (coeff_cmd->parsed()) {
            const acrank::Dataset ds = acrank::load_csv(coeff_input, coeff_dy, coeff_dz, 0);
            const auto perms = acrank::build_permutations(ds.n(), coeff_dy, coeff_flags.scheme(),
                                                          coeff_flags.seed_spec().sub(100));
            const auto rep = acrank::t_ac(ds.y, ds.z, perms, coeff_flags.seed_spec(),
                                          coeff_flags.count_mode(), coeff_flags.standardize_z);
            std::cout << coefficient_json(rep).dump(2) << "\n";
            return kExitOk;
        }
        if (cond_cmd->parsed()) {
            const acrank::Dataset ds = acrank::load_csv(cond_input, cond_dy, cond_dz, cond_dx);
            const auto perms = acrank::build_permutations(ds.n(), cond_dy, cond_flags.scheme(),
                                                          cond_flags.seed_spec().sub(100));
            const auto rep = acrank::t_ac_cond(ds.y, ds.z, *ds.x, perms, cond_flags.seed_spec(),
                                               cond_flags.count_mode(), cond_flags.standardize_z);
            std::cout << coefficient_json(rep).dump(2) << "\n";
            return kExitOk;
        }
        if (test_cmd->parsed()) {
            const acrank::Dataset ds = acrank::load_csv(test_input, test_dy, test_dz, 0);
            const auto perms = acrank::build_permutations(ds.n(), test_dy, test_flags.scheme(),
                                                          test_flags.seed_spec().sub(100));
            const auto side = test_side == "two" ? acrank::TestSide::Two : acrank::TestSide::Right;
            const auto rep = acrank::wald_test(ds.y, ds.z, perms, test_flags.seed_spec(), side,
                                               test_flags.count_mode(), test_flags.standardize_z);
            json out;
            out["t_hat"] = rep.t_hat;
            out["sigma_hat_sq"] = rep.sigma_hat_sq;
            out["gamma1_hat"] = rep.gamma1_hat;
            out["gamma2_hat"] = rep.gamma2_hat;
            out["statistic"] = rep.statistic;
            out["p_value"] = rep.p_value;
            out["side"] = test_side;
            out["n"] = ds.n();
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
        if (rank_cmd->parsed()) {
            const Eigen::MatrixXd a = acrank::load_points_csv(rank_a);
            const Eigen::MatrixXd b = acrank::load_points_csv(rank_b);
            const auto counts = acrank::count_dominated(a, b, rank_flags.count_mode());
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!rank_out.empty()) {
                file.open(rank_out);
                if (!file) throw acrank::InputError("cannot open output file: " + rank_out);
                out = &file;
            }
            (*out) << "count\n";
            for (int i = 0; i < counts.size(); ++i) (*out) << counts[i] << "\n";
            return kExitOk;
        }
        if (oracle_cmd->parsed()) {
            std::ifstream in(oracle_spec_path);
            if (!in) throw acrank::InputError("cannot open spec file: " + oracle_spec_path);
            nlohmann::json spec_json = nlohmann::json::parse(in);
            acrank::SamplerSpec spec = spec_json.get<acrank::SamplerSpec>();
            if (oracle_flags.seed != 0) spec.seed = oracle_flags.seed_spec();
            const acrank::YSampler sampler = [&spec](int m, SeedSpec s) {
                acrank::SamplerSpec local = spec;
                local.seed = s;
                return acrank::generate(local, m).y;
            };
            const auto po = acrank::population_oracle(sampler, oracle_mc, spec.seed.sub(11));
            const double a_d = acrank::a_const(spec.d_z);
            const auto b_d = acrank::b_const(spec.d_z, oracle_b_mc, spec.seed.sub(12));
            const double sigma_sq =
                (po.gamma1 * (1.0 + (1.0 - oracle_eta) * a_d) +
                 po.gamma2 * (oracle_eta + (1.0 - oracle_eta) * b_d.value)) /
                (po.denom * po.denom);
            json out;
            out["gamma1"] = po.gamma1;
            out["gamma1_se"] = po.gamma1_se;
            out["gamma2"] = po.gamma2;
            out["gamma2_se"] = po.gamma2_se;
            out["denom"] = po.denom;
            out["denom_se"] = po.denom_se;
            out["mc_samples"] = po.mc_samples;
            out["a_d"] = a_d;
            out["b_d"] = b_d.value;
            out["b_d_se"] = b_d.std_error;
            out["eta_discrete"] = oracle_eta;
            out["sigma_sq"] = sigma_sq;
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
        if (sim_cmd->parsed()) {
            std::ifstream in(sim_config_path);
            if (!in) throw acrank::InputError("cannot open config file: " + sim_config_path);
            acrank::ExperimentConfig config = acrank::config_from_json(nlohmann::json::parse(in));
            if (sim_flags.seed != 0) config.seed = sim_flags.seed_spec();
            if (sim_threads > 0) config.threads = sim_threads;
            const auto result = acrank::run_experiment(config);
            acrank::write_experiment_outputs(result, sim_out_dir);
            json out;
            out["kind"] = result.kind;
            out["config_hash"] = result.hash;
            out["rows"] = result.rows.size();
            out["out_dir"] = sim_out_dir;
            out["summary"] = result.summary;
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
        if (self_cmd->parsed()) {
            return run_selfcheck(self_flags.seed);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    } catch (const acrank::DegenerateDataError& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitDegenerateData;
    } catch (const acrank::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
