// Seeded experiment driver: compress/reconstruct round trips, weak-learner
// success-rate studies, size-vs-m sweeps and dual-dimension probes.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "medcompress/experiment.hpp"

namespace {

using medcompress::ExperimentConfig;
using medcompress::Metrics;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDecode = 3;
constexpr int kExitWeakLearning = 4;
constexpr int kExitSparsify = 5;
constexpr int kExitBudget = 6;

struct OutputOptions {
    std::string path;  // empty = stdout
    std::string format = "csv";
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw medcompress::Error("cannot open output file: " + path);
    out << text;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw medcompress::Error("cannot open output file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw medcompress::DecodeError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw medcompress::DecodeError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Metrics& metrics, const OutputOptions& out) {
    write_text(out.path, out.format == "json" ? medcompress::metrics_to_json(metrics)
                                              : medcompress::metrics_to_csv(metrics));
}

void add_common_flags(CLI::App* cmd, ExperimentConfig& cfg, OutputOptions& out) {
    cmd->add_option("--task", cfg.task, "bv | lipschitz | threshold");
    cmd->add_option("--v", cfg.v, "variation budget of the bv class");
    cmd->add_option("--lipschitz-l", cfg.lipschitz_l, "Lipschitz constant");
    cmd->add_option("--diam", cfg.diam, "metric space diameter");
    cmd->add_option("--ddim", cfg.ddim, "doubling dimension");
    cmd->add_option("-m,--sample-size", cfg.m, "training sample size");
    cmd->add_option("--eta", cfg.eta, "uniform approximation target (pinned to 1 for threshold)");
    cmd->add_option("--gamma", cfg.gamma, "boosting margin, in (0,1/4)");
    cmd->add_option("--delta", cfg.delta, "weak learner confidence");
    cmd->add_option("--seed", cfg.seed, "root seed");
    cmd->add_option("--trials", cfg.trials, "independent trials");
    cmd->add_option("--c1", cfg.c1, "weak sample size leading constant");
    cmd->add_option("--c2", cfg.c2, "weak sample size margin scale");
    cmd->add_option("--c3", cfg.c3, "weak sample size log numerator");
    cmd->add_option("--c-t", cfg.c_t, "round count constant in T = ceil(c_t ln(m)/gamma^2)");
    cmd->add_option("--rounds", [&cfg](const CLI::results_t& res) {
        cfg.rounds = std::stoi(res.front());
        return true;
    }, "explicit boosting round count (default: auto rule)");
    cmd->add_option("--max-retries", cfg.max_retries, "weak learner retry budget");
    cmd->add_option("--consistency-slack", cfg.consistency_slack,
                    "alpha: ERM may err up to alpha*eta on its own subsample");
    cmd->add_option("--sparsify-policy", cfg.sparsify_policy, "adaptive | theorem | explicit");
    cmd->add_option("--sparsify-n", cfg.sparsify_n, "n for the explicit policy");
    cmd->add_option("--sparsify-start-n", cfg.sparsify_start_n, "adaptive policy start");
    cmd->add_option("--sparsify-delta", cfg.sparsify_delta,
                    "per-n failure budget; trials per n = ceil(log2(1/delta))");
    cmd->add_option("-o,--out", out.path, "output path (default: stdout)");
    cmd->add_option("--format", out.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->set_config("--config", "", "read defaults from an INI file");
}

int dispatch(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const CLI::ParseError&) {
        throw;  // handled by CLI11 in main
    } catch (const medcompress::InvalidArgument& e) {
        std::cerr << "error (invalid argument): " << e.what() << "\n";
        return kExitUsage;
    } catch (const medcompress::Unsupported& e) {
        std::cerr << "error (unsupported): " << e.what() << "\n";
        return kExitUsage;
    } catch (const medcompress::DecodeError& e) {
        std::cerr << "error (decode): " << e.what() << "\n";
        return kExitDecode;
    } catch (const medcompress::WeakLearningFailure& e) {
        std::cerr << "error (weak-learning-failure): " << e.what() << "\n";
        return kExitWeakLearning;
    } catch (const medcompress::SparsifyFailure& e) {
        std::cerr << "error (sparsify-failure): " << e.what() << "\n";
        return kExitSparsify;
    } catch (const medcompress::BudgetError& e) {
        std::cerr << "error (budget): " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded-size sample compression via real-valued boosting"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    OutputOptions out;

    std::string compressed_path = "compressed.mcsc";
    std::string sample_out_path;
    auto* compress_cmd =
        app.add_subcommand("compress", "run the pipeline on a synthetic sample and serialize");
    add_common_flags(compress_cmd, cfg, out);
    compress_cmd->add_option("--compressed-out", compressed_path,
                             "where to write the serialized compression set");
    compress_cmd->add_option("--sample-out", sample_out_path,
                             "also write the generated sample as csv");

    std::string verify_compression_path, verify_sample_path;
    auto* verify_cmd =
        app.add_subcommand("verify", "reconstruct from a file and check the uniform error");
    add_common_flags(verify_cmd, cfg, out);
    verify_cmd->add_option("--compression", verify_compression_path, "serialized compression set")
        ->required();
    verify_cmd->add_option("--sample", verify_sample_path, "sample csv to check against")
        ->required();

    auto* weakstudy_cmd =
        app.add_subcommand("weakstudy", "first-draw success rate of the generic weak learner");
    add_common_flags(weakstudy_cmd, cfg, out);

    std::vector<double> ratios;
    std::vector<int> gray_sizes;
    auto* duality_cmd =
        app.add_subcommand("duality", "dual-dimension sandwiches and gray-code balance");
    add_common_flags(duality_cmd, cfg, out);
    duality_cmd->add_option("--ratio", ratios, "v/t (and L*diam/t) ratios to probe");
    duality_cmd->add_option("--gray-n", gray_sizes, "gray code sizes to report");
    duality_cmd->add_option("--k-max", cfg.k_max, "shattering search depth");

    std::vector<std::size_t> sweep_sizes;
    auto* sweep_cmd = app.add_subcommand("sweep", "compression size across sample sizes");
    add_common_flags(sweep_cmd, cfg, out);
    sweep_cmd->add_option("--sizes", sweep_sizes, "sample sizes to sweep")->required();

    CLI11_PARSE(app, argc, argv);

    auto timed = [](const char* name, const std::function<void()>& body) {
        auto start = std::chrono::steady_clock::now();
        body();
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cerr << name << " finished in " << ms << " ms\n";
    };

    if (compress_cmd->parsed()) {
        return dispatch([&] {
            timed("compress", [&] {
                std::vector<std::uint8_t> bytes;
                medcompress::LabeledSample sample;
                Metrics metrics = medcompress::run_compress_command(cfg, bytes, &sample);
                write_bytes(compressed_path, bytes);
                if (!sample_out_path.empty())
                    write_text(sample_out_path, medcompress::sample_to_csv(sample));
                emit(metrics, out);
            });
        });
    }
    if (verify_cmd->parsed()) {
        return dispatch([&] {
            auto bytes = read_bytes(verify_compression_path);
            auto sample = medcompress::sample_from_csv(read_text(verify_sample_path));
            auto report = medcompress::run_verify(bytes, sample);
            emit(medcompress::verify_metrics(cfg, report), out);
        });
    }
    if (weakstudy_cmd->parsed()) {
        return dispatch([&] {
            timed("weakstudy", [&] { emit(medcompress::run_weakstudy_command(cfg), out); });
        });
    }
    if (duality_cmd->parsed()) {
        return dispatch([&] {
            if (!ratios.empty()) cfg.ratios = ratios;
            if (!gray_sizes.empty()) cfg.gray_sizes = gray_sizes;
            timed("duality", [&] { emit(medcompress::run_duality_command(cfg), out); });
        });
    }
    if (sweep_cmd->parsed()) {
        return dispatch([&] {
            timed("sweep", [&] { emit(medcompress::run_sweep_command(cfg, sweep_sizes), out); });
        });
    }
    return kExitUsage;
}
