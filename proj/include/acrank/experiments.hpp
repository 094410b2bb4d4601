#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acrank/random.hpp"
#include "acrank/simgen.hpp"
#include "acrank/variance.hpp"

namespace acrank {

// Batch harness configuration; deserialized from the JSON file passed to the
// `simulate` subcommand. Defaults are desk-scale (5 designs, reps = 1000,
// n <= 1000); full-scale settings are reachable through the same knobs.
struct ExperimentConfig {
    std::string kind = "rejection-grid";

    std::vector<std::array<int, 2>> dims = {{2, 2}};
    std::vector<BaseDist> bases = {BaseDist::Gaussian};
    std::vector<int> sample_sizes = {50, 200, 1000};
    int reps = 1000;
    std::vector<double> alphas = {0.05, 0.10};
    std::string sigma_mode = "estimated"; // estimated | oracle
    TestSide side = TestSide::Right;
    int n_designs = 5;
    SeedSpec seed{20240101, 0};
    int threads = 1;

    // monotonicity
    std::vector<double> etas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int approx_n = 100000;

    // convergence
    std::vector<int> convergence_ns = {500, 1000, 2000, 4000, 8000, 16000, 32000};
    std::vector<int> convergence_dzs = {2};

    // cantor-trajectory
    std::vector<double> x_values = {1.0, 1.3, 1.7};
    int k_min = 8;
    int k_max = 14;
    bool cantor_control = false; // true: uniform Z control instead of Cantor

    // calibration-cross-check
    int cell_n = 500;
    int n_permutations = 999;

    // oracle-variance machinery
    int oracle_mc_samples = 10000;
    long b_const_mc_samples = 1000000;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

// Stable 64-bit FNV-1a hash of the canonical config serialization; attached
// to every emitted row so results are reproducible bit-exactly.
std::string config_hash(const ExperimentConfig& config);

struct ExperimentResult {
    std::string kind;
    std::string hash;
    std::vector<nlohmann::ordered_json> rows; // results.jsonl payload
    std::vector<std::string> summary_csv;     // summary.csv lines (with header)
    std::vector<std::string> timing_csv;      // timing.csv lines (with header)
    nlohmann::ordered_json summary;           // aggregate diagnostics
};

ExperimentResult run_rejection_grid(const ExperimentConfig& config);
ExperimentResult run_monotonicity(const ExperimentConfig& config);
ExperimentResult run_convergence(const ExperimentConfig& config);
ExperimentResult run_cantor_trajectory(const ExperimentConfig& config);
ExperimentResult run_calibration_cross_check(const ExperimentConfig& config);

// Dispatch on config.kind.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes results.jsonl, summary.csv and timing.csv into out_dir (created if
// missing). results.jsonl is appended to, the CSVs are rewritten.
void write_experiment_outputs(const ExperimentResult& result, const std::string& out_dir);

} // namespace acrank
