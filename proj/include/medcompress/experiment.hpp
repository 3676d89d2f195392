#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medcompress/compress.hpp"

namespace medcompress {

// Resolved knobs for a seeded experiment; every field lands in the output
// file header for provenance.
struct ExperimentConfig {
    std::string task = "bv";  // bv | lipschitz | threshold

    double v = 1.0;  // bv variation budget
    double lipschitz_l = 1.0;
    double diam = 1.0;
    int ddim = 1;

    std::size_t m = 200;
    double eta = 0.2;
    double gamma = 0.125;
    double delta = 0.1;
    std::uint64_t seed = 1;
    int trials = 1;

    double c1 = 2.0;
    double c2 = 0.125;
    double c3 = 8.0;
    double c_t = 2.0;
    std::optional<int> rounds;
    int max_retries = 64;
    double consistency_slack = 0.0;

    std::string sparsify_policy = "adaptive";  // adaptive | theorem | explicit
    int sparsify_n = 0;
    int sparsify_start_n = 9;
    double sparsify_delta = 0.01;

    int k_max = 7;  // duality search depth
    std::vector<double> ratios = {8.0, 16.0};
    std::vector<int> gray_sizes = {2, 3, 4};

    void validate() const;
    Erm make_erm() const;
    // Binary tasks run the classification pipeline: eta is pinned to 1.
    double effective_eta() const;
    BoostConfig boost_config() const;
    WeakLearnConfig weak_config() const;
    SparsifyConfig sparsify_config() const;
    std::vector<std::pair<std::string, std::string>> resolved_entries() const;
};

// Synthetic targets, realizable by construction.
std::function<double(const Point&)> random_bv_target(double budget, Rng& rng);
std::function<double(const Point&)> random_lipschitz_target(double lipschitz_l, int ddim,
                                                            Rng& rng);
std::function<double(const Point&)> random_threshold_target(Rng& rng);

std::function<double(const Point&)> make_target(const ExperimentConfig& cfg, Rng& rng);

// m points uniform on [0,1]^d labeled by the target.
LabeledSample draw_labeled_sample(const std::function<double(const Point&)>& target,
                                  std::size_t m, int ddim, Rng& rng);

LabeledSample make_dataset(const ExperimentConfig& cfg, Rng& rng);

// Tabular command output: config header (for provenance) plus rows.
struct Metrics {
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string metrics_to_csv(const Metrics& m);
std::string metrics_to_json(const Metrics& m);

std::string format_double(double v);

// Sample files: one line per example, ';'-joined coordinates, comma, label.
std::string sample_to_csv(const LabeledSample& sample);
LabeledSample sample_from_csv(const std::string& csv);

// compress: generate data, run the pipeline, serialize. Outputs the bytes
// and one metrics row (k', side bits, n, T).
Metrics run_compress_command(const ExperimentConfig& cfg, std::vector<std::uint8_t>& bytes_out,
                             LabeledSample* sample_out = nullptr);

// verify: decode and reconstruct, report max_i |h(x_i) - y_i| against eta.
struct VerifyReport {
    double max_error = 0.0;
    double eta = 0.0;
    bool within_eta = false;
};
VerifyReport run_verify(const std::vector<std::uint8_t>& bytes, const LabeledSample& sample);
Metrics verify_metrics(const ExperimentConfig& cfg, const VerifyReport& report);

// weakstudy: per-trial first-draw success of the generic weak learner on a
// fresh target under the uniform distribution, plus a summary row.
Metrics run_weakstudy_command(const ExperimentConfig& cfg);

// duality: dual-dimension sandwich rows for the bv and lipschitz
// constructions and gray-code balance rows. Budget overruns annotate the row
// instead of failing the run.
Metrics run_duality_command(const ExperimentConfig& cfg);

// sweep: the compress pipeline across sample sizes; the size columns expose
// the m-independence of the scheme.
Metrics run_sweep_command(const ExperimentConfig& cfg, const std::vector<std::size_t>& sizes);

}  // namespace medcompress
