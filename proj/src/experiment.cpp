#include "medcompress/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "medcompress/duality.hpp"

namespace medcompress {

void ExperimentConfig::validate() const {
    if (task != "bv" && task != "lipschitz" && task != "threshold")
        throw InvalidArgument("task must be bv, lipschitz or threshold");
    if (!(v > 0.0)) throw InvalidArgument("variation budget must be positive");
    if (!(lipschitz_l > 0.0) || !(diam > 0.0) || ddim < 0)
        throw InvalidArgument("lipschitz class parameters must be positive");
    if (m == 0) throw InvalidArgument("sample size must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in (0,1]");
    if (!(gamma > 0.0 && gamma < 0.25)) throw InvalidArgument("gamma must lie in (0,1/4)");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (sparsify_policy != "adaptive" && sparsify_policy != "theorem" &&
        sparsify_policy != "explicit")
        throw InvalidArgument("sparsify policy must be adaptive, theorem or explicit");
    if (sparsify_policy == "explicit" && sparsify_n < 1)
        throw InvalidArgument("explicit sparsify policy needs --sparsify-n >= 1");
    if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
}

Erm ExperimentConfig::make_erm() const {
    if (task == "bv") return make_bv_erm(v);
    if (task == "lipschitz") return make_lipschitz_erm(lipschitz_l, diam, ddim);
    return make_threshold_erm();
}

double ExperimentConfig::effective_eta() const { return task == "threshold" ? 1.0 : eta; }

BoostConfig ExperimentConfig::boost_config() const {
    BoostConfig b;
    b.eta = effective_eta();
    b.gamma = gamma;
    b.rounds = rounds;
    b.c_t = c_t;
    return b;
}

WeakLearnConfig ExperimentConfig::weak_config() const {
    WeakLearnConfig w;
    w.eta = effective_eta() / 2.0;
    w.gamma = gamma;
    w.delta = delta;
    w.c1 = c1;
    w.c2 = c2;
    w.c3 = c3;
    w.fat_dim = make_erm().fat_dim;
    w.max_retries = max_retries;
    w.consistency_slack = consistency_slack;
    return w;
}

SparsifyConfig ExperimentConfig::sparsify_config() const {
    SparsifyConfig s;
    if (sparsify_policy == "explicit") {
        s.policy = SparsifyConfig::Policy::explicit_n;
        s.explicit_n = sparsify_n;
    } else if (sparsify_policy == "theorem") {
        s.policy = SparsifyConfig::Policy::theorem;
        s.dual_fat_dim = [budget = v](double t) {
            // closed form for the bv dual class; other classes supply their own
            return static_cast<long long>(std::ceil(2.0 * std::log2(budget / t)));
        };
    } else {
        s.policy = SparsifyConfig::Policy::adaptive;
        s.start_n = sparsify_start_n;
    }
    s.eta = effective_eta();
    s.gamma = gamma;
    s.delta_s = sparsify_delta;
    return s;
}

std::string format_double(double v) {
    // shortest representation that parses back to the same double
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved_entries() const {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("task", task);
    if (task == "bv") e.emplace_back("v", format_double(v));
    if (task == "lipschitz") {
        e.emplace_back("L", format_double(lipschitz_l));
        e.emplace_back("diam", format_double(diam));
        e.emplace_back("ddim", std::to_string(ddim));
    }
    e.emplace_back("m", std::to_string(m));
    e.emplace_back("eta", format_double(effective_eta()));
    e.emplace_back("gamma", format_double(gamma));
    e.emplace_back("delta", format_double(delta));
    e.emplace_back("seed", std::to_string(seed));
    e.emplace_back("trials", std::to_string(trials));
    e.emplace_back("c1", format_double(c1));
    e.emplace_back("c2", format_double(c2));
    e.emplace_back("c3", format_double(c3));
    e.emplace_back("c_t", format_double(c_t));
    e.emplace_back("rounds", rounds ? std::to_string(*rounds) : "auto");
    e.emplace_back("max_retries", std::to_string(max_retries));
    e.emplace_back("consistency_slack", format_double(consistency_slack));
    e.emplace_back("sparsify_policy", sparsify_policy);
    if (sparsify_policy == "explicit") e.emplace_back("sparsify_n", std::to_string(sparsify_n));
    if (sparsify_policy == "adaptive") {
        e.emplace_back("sparsify_start_n", std::to_string(sparsify_start_n));
        e.emplace_back("sparsify_delta", format_double(sparsify_delta));
    }
    return e;
}

std::function<double(const Point&)> random_bv_target(double budget, Rng& rng) {
    // random step function: jump magnitudes stick-broken from the budget
    auto positions = std::make_shared<std::vector<double>>();
    auto levels = std::make_shared<std::vector<double>>();
    int jumps = 3 + static_cast<int>(rng.next_below(6));
    std::vector<double> at;
    for (int j = 0; j < jumps; ++j) at.push_back(rng.next_double());
    std::sort(at.begin(), at.end());

    double level = rng.uniform(0.25, 0.75);
    levels->push_back(level);
    double remaining = budget;
    for (double pos : at) {
        double step = remaining * rng.uniform(0.2, 0.8);
        if (rng.next_below(2) == 0) step = -step;
        remaining -= std::abs(step);
        level = std::min(1.0, std::max(0.0, level + step));
        positions->push_back(pos);
        levels->push_back(level);
    }
    return [positions, levels](const Point& p) {
        auto it = std::upper_bound(positions->begin(), positions->end(), p.x());
        return (*levels)[static_cast<std::size_t>(it - positions->begin())];
    };
}

std::function<double(const Point&)> random_lipschitz_target(double lipschitz_l, int ddim,
                                                            Rng& rng) {
    // random labeling of a random packing, filled in by midpoint extension
    std::vector<Point> raw;
    for (int i = 0; i < 32; ++i) {
        Point p;
        for (int d = 0; d < std::max(1, ddim); ++d) p.coords.push_back(rng.next_double());
        raw.push_back(std::move(p));
    }
    Packing packing = packing_number_greedy(raw, 0.15);

    std::vector<LabeledPoint> anchors;
    for (const Point& p : packing.points) {
        double lo = 0.0, hi = 1.0;
        for (const auto& a : anchors) {
            double d = euclidean_distance(p, a.point);
            lo = std::max(lo, a.label - lipschitz_l * d);
            hi = std::min(hi, a.label + lipschitz_l * d);
        }
        lo = std::max(0.0, lo);
        hi = std::min(1.0, hi);
        anchors.push_back(LabeledPoint{p, lo + (hi - lo) * rng.next_double()});
    }
    Hypothesis h = lipschitz_erm(LabeledSample{std::move(anchors)}, lipschitz_l);
    return [h](const Point& p) { return h(p); };
}

std::function<double(const Point&)> random_threshold_target(Rng& rng) {
    double theta = rng.uniform(0.05, 0.95);
    bool up = rng.next_below(2) == 0;
    return [theta, up](const Point& p) {
        bool right = p.x() >= theta;
        return (up ? right : !right) ? 1.0 : 0.0;
    };
}

std::function<double(const Point&)> make_target(const ExperimentConfig& cfg, Rng& rng) {
    if (cfg.task == "bv") return random_bv_target(cfg.v, rng);
    if (cfg.task == "lipschitz") return random_lipschitz_target(cfg.lipschitz_l, cfg.ddim, rng);
    return random_threshold_target(rng);
}

LabeledSample draw_labeled_sample(const std::function<double(const Point&)>& target,
                                  std::size_t m, int ddim, Rng& rng) {
    std::vector<LabeledPoint> items;
    items.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Point p;
        for (int d = 0; d < std::max(1, ddim); ++d) p.coords.push_back(rng.next_double());
        double y = target(p);
        items.push_back(LabeledPoint{std::move(p), y});
    }
    return LabeledSample{std::move(items)};
}

LabeledSample make_dataset(const ExperimentConfig& cfg, Rng& rng) {
    auto target = make_target(cfg, rng);
    return draw_labeled_sample(target, cfg.m, cfg.task == "lipschitz" ? cfg.ddim : 1, rng);
}

std::string metrics_to_csv(const Metrics& m) {
    std::string out;
    for (const auto& [key, value] : m.config) out += "# " + key + "=" + value + "\n";
    for (std::size_t i = 0; i < m.header.size(); ++i) {
        if (i) out += ',';
        out += m.header[i];
    }
    out += '\n';
    for (const auto& row : m.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto& [key, value] : m.config) config[key] = value;
    j["config"] = std::move(config);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : m.rows) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < m.header.size() && i < row.size(); ++i)
            entry[m.header[i]] = row[i];
        rows.push_back(std::move(entry));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string sample_to_csv(const LabeledSample& sample) {
    std::string out = "point,label\n";
    for (const auto& it : sample.items) {
        for (std::size_t d = 0; d < it.point.coords.size(); ++d) {
            if (d) out += ';';
            out += format_double(it.point.coords[d]);
        }
        out += ',';
        out += format_double(it.label);
        out += '\n';
    }
    return out;
}

LabeledSample sample_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::vector<LabeledPoint> items;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw DecodeError("sample line missing label: " + line);
        LabeledPoint item;
        std::istringstream coords(line.substr(0, comma));
        std::string c;
        while (std::getline(coords, c, ';'))
            item.point.coords.push_back(std::strtod(c.c_str(), nullptr));
        item.label = std::strtod(line.c_str() + comma + 1, nullptr);
        items.push_back(std::move(item));
    }
    if (items.empty()) throw DecodeError("sample file has no rows");
    return LabeledSample{std::move(items)};
}

namespace {

std::vector<std::string> compress_row(std::uint64_t seed, const CompressionSet& cs,
                                      const PipelineInfo& info, double max_err) {
    return {std::to_string(seed),
            std::to_string(cs.total_examples()),
            std::to_string(cs.side_info.bit_count),
            std::to_string(cs.group_count()),
            std::to_string(info.boosting_rounds),
            std::to_string(info.weak_subsample_size),
            info.early_exit ? "1" : "0",
            format_double(max_err)};
}

const std::vector<std::string> kCompressHeader = {
    "seed", "stored_examples", "side_info_bits", "n_hypotheses",
    "rounds", "weak_subsample_size", "early_exit", "train_max_error"};

}  // namespace

Metrics run_compress_command(const ExperimentConfig& cfg, std::vector<std::uint8_t>& bytes_out,
                             LabeledSample* sample_out) {
    cfg.validate();
    Rng root(cfg.seed);
    Rng data_rng = root.spawn(0);
    LabeledSample sample = make_dataset(cfg, data_rng);

    PipelineInfo info;
    Rng pipeline_rng = root.spawn(1);
    CompressionSet cs = compress(sample, cfg.make_erm(), cfg.boost_config(), cfg.weak_config(),
                                 cfg.sparsify_config(), pipeline_rng, &info);
    bytes_out = serialize(cs);

    ReconstructedHypothesis rebuilt = reconstruct(deserialize(bytes_out), cfg.make_erm());
    double err = max_error(rebuilt, sample);

    Metrics metrics;
    metrics.config = cfg.resolved_entries();
    metrics.header = kCompressHeader;
    metrics.rows.push_back(compress_row(cfg.seed, cs, info, err));
    if (sample_out) *sample_out = std::move(sample);
    return metrics;
}

VerifyReport run_verify(const std::vector<std::uint8_t>& bytes, const LabeledSample& sample) {
    CompressionSet cs = deserialize(bytes);
    ReconstructedHypothesis rebuilt = reconstruct(cs);
    VerifyReport report;
    report.eta = cs.meta.eta;
    report.max_error = max_error(rebuilt, sample);
    report.within_eta = report.max_error <= cs.meta.eta;
    return report;
}

Metrics verify_metrics(const ExperimentConfig& cfg, const VerifyReport& report) {
    Metrics metrics;
    metrics.config = cfg.resolved_entries();
    metrics.header = {"max_error", "eta", "within_eta"};
    metrics.rows.push_back({format_double(report.max_error), format_double(report.eta),
                            report.within_eta ? "1" : "0"});
    return metrics;
}

Metrics run_weakstudy_command(const ExperimentConfig& cfg) {
    cfg.validate();
    Erm erm = cfg.make_erm();
    WeakLearnConfig weak = cfg.weak_config();
    weak.eta = cfg.effective_eta();  // the study probes the learner directly, no halving
    std::size_t subsample = weak_sample_size(weak);

    Metrics metrics;
    metrics.config = cfg.resolved_entries();
    metrics.config.emplace_back("weak_subsample_size", std::to_string(subsample));
    metrics.header = {"trial", "subsample_size", "first_draw_success", "retries", "fail_mass"};

    Rng root(cfg.seed);
    int failures = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        Rng trial_rng = root.spawn(static_cast<std::uint64_t>(trial));
        LabeledSample sample = make_dataset(cfg, trial_rng);
        EmpiricalDistribution p = uniform_distribution(sample.size());
        WeakResult result = train_weak_hypothesis(sample, p, erm, weak, trial_rng);
        bool first_draw = result.certificate.retries == 0;
        if (!first_draw) ++failures;
        metrics.rows.push_back({std::to_string(trial), std::to_string(subsample),
                                first_draw ? "1" : "0",
                                std::to_string(result.certificate.retries),
                                format_double(result.certificate.empirical_fail_mass)});
    }
    double rate = static_cast<double>(failures) / static_cast<double>(cfg.trials);
    metrics.rows.push_back({"summary", std::to_string(subsample), "-", std::to_string(failures),
                            format_double(rate)});
    return metrics;
}

Metrics run_duality_command(const ExperimentConfig& cfg) {
    cfg.validate();
    Metrics metrics;
    metrics.config = cfg.resolved_entries();
    metrics.header = {"kind", "parameter", "lower_bound", "dimension", "upper_bound", "note"};

    for (double ratio : cfg.ratios) {
        double t = 1.0 / ratio;  // v = 1 scale
        std::vector<std::string> row{"bv", format_double(ratio)};
        try {
            ShatteredFamily fam = bv_shattered_family(1.0, t);
            FunctionTable dual = transpose(fam.table);
            int dim = fat_shattering_dim(dual, t, cfg.k_max);
            row.push_back(std::to_string(static_cast<int>(std::floor(std::log2(ratio)))));
            row.push_back(std::to_string(dim));
            row.push_back(format_double(2.0 * std::log2(ratio)));
            row.push_back("");
        } catch (const BudgetError& e) {
            row = {"bv", format_double(ratio), "-", std::to_string(e.best_found), "-",
                   "budget_exhausted"};
        } catch (const Error& e) {
            row = {"bv", format_double(ratio), "-", "-", "-", e.what()};
        }
        metrics.rows.push_back(std::move(row));
    }

    for (double ratio : cfg.ratios) {
        double t = cfg.lipschitz_l * cfg.diam / ratio;  // grid pitch 2t/L on [0,diam]
        std::vector<std::string> row{"lipschitz", format_double(ratio)};
        try {
            double pitch = 2.0 * t / cfg.lipschitz_l;
            std::vector<Point> grid;
            for (double x = 0.0; x <= cfg.diam + 1e-12; x += pitch) grid.push_back(make_point(x));
            Packing packing = packing_number_greedy(grid, pitch);
            ShatteredFamily fam =
                lipschitz_shattered_family(packing.points, cfg.lipschitz_l, t);
            FunctionTable dual = transpose(fam.table);
            int dim = fat_shattering_dim(dual, t, cfg.k_max);
            double logm = std::log2(static_cast<double>(packing.count()));
            row.push_back(std::to_string(static_cast<int>(std::floor(logm))));
            row.push_back(std::to_string(dim));
            row.push_back(std::to_string(static_cast<int>(std::ceil(logm))));
            row.push_back("");
        } catch (const BudgetError& e) {
            row = {"lipschitz", format_double(ratio), "-", std::to_string(e.best_found), "-",
                   "budget_exhausted"};
        } catch (const Error& e) {
            row = {"lipschitz", format_double(ratio), "-", "-", "-", e.what()};
        }
        metrics.rows.push_back(std::move(row));
    }

    for (int n : cfg.gray_sizes) {
        std::vector<std::string> row{"graycode", std::to_string(n)};
        try {
            BinaryMatrix code = balanced_gray_code(n);
            MatrixVariation var = matrix_variation(code);
            double cells = std::ldexp(1.0, n);
            row.push_back(format_double((cells - 1.0) / n));
            row.push_back(std::to_string(var.max));
            row.push_back(format_double(std::ceil(cells / n)));
            row.push_back("");
        } catch (const Error& e) {
            row = {"graycode", std::to_string(n), "-", "-", "-", e.what()};
        }
        metrics.rows.push_back(std::move(row));
    }
    return metrics;
}

Metrics run_sweep_command(const ExperimentConfig& cfg, const std::vector<std::size_t>& sizes) {
    cfg.validate();
    if (sizes.empty()) throw InvalidArgument("sweep needs at least one sample size");

    Metrics metrics;
    metrics.config = cfg.resolved_entries();
    metrics.header = {"m", "trial", "stored_examples", "side_info_bits", "n_hypotheses",
                      "rounds", "weak_subsample_size", "early_exit", "train_max_error"};

    Rng root(cfg.seed);
    std::uint64_t stream = 0;
    for (std::size_t size : sizes) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.m = size;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            Rng run_rng = root.spawn(stream++);
            LabeledSample sample = make_dataset(point_cfg, run_rng);
            PipelineInfo info;
            CompressionSet cs =
                compress(sample, cfg.make_erm(), point_cfg.boost_config(),
                         point_cfg.weak_config(), point_cfg.sparsify_config(), run_rng, &info);
            ReconstructedHypothesis rebuilt = reconstruct(cs, cfg.make_erm());
            double err = max_error(rebuilt, sample);
            metrics.rows.push_back({std::to_string(size), std::to_string(trial),
                                    std::to_string(cs.total_examples()),
                                    std::to_string(cs.side_info.bit_count),
                                    std::to_string(cs.group_count()),
                                    std::to_string(info.boosting_rounds),
                                    std::to_string(info.weak_subsample_size),
                                    info.early_exit ? "1" : "0", format_double(err)});
        }
    }
    return metrics;
}

}  // namespace medcompress
