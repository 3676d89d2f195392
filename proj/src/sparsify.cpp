#include "medcompress/sparsify.hpp"

#include <cmath>
#include <string>

namespace medcompress {

void SparsifyConfig::validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("sparsify eta must lie in (0,1]");
    if (!(gamma > 0.0 && gamma < 0.25))
        throw InvalidArgument("sparsify gamma must lie in (0,1/4)");
    if (policy == Policy::explicit_n && explicit_n < 1)
        throw InvalidArgument("explicit n must be >= 1");
    if (policy == Policy::theorem && !dual_fat_dim)
        throw InvalidArgument("theorem policy needs a dual_fat_dim callable");
    if (policy == Policy::adaptive && start_n < 1)
        throw InvalidArgument("adaptive start n must be >= 1");
    if (max_trials_per_n && *max_trials_per_n < 1)
        throw InvalidArgument("trials per n must be >= 1");
    if (!max_trials_per_n && !(delta_s > 0.0 && delta_s < 1.0))
        throw InvalidArgument("delta_s must lie in (0,1)");
}

int SparsifyConfig::resolve_trials() const {
    if (max_trials_per_n) return *max_trials_per_n;
    return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / delta_s))));
}

double SparseEnsemble::predict(const Point& x) const {
    std::vector<double> values;
    values.reserve(hypotheses.size());
    for (const auto& h : hypotheses) values.push_back(h(x));
    return weighted_median(values, std::vector<double>(values.size(), 1.0));
}

std::vector<std::uint32_t> categorical_sample(const std::vector<double>& weights,
                                              std::size_t n, Rng& rng) {
    CategoricalTable table(weights);  // rejects all-zero and negative weights
    std::vector<std::uint32_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(static_cast<std::uint32_t>(table.draw(rng)));
    return out;
}

bool majority_within_eta(const std::vector<Hypothesis>& members, const LabeledSample& sample,
                         double eta) {
    const double half = static_cast<double>(members.size()) / 2.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        std::size_t failures = 0;
        for (const auto& h : members)
            if (std::abs(h(sample.point(i)) - sample.label(i)) > eta) ++failures;
        if (!(static_cast<double>(failures) < half)) return false;
    }
    return true;
}

namespace {

int force_odd(long long n) {
    if (n < 1) n = 1;
    if (n % 2 == 0) ++n;
    if (n > (1 << 30)) throw InvalidArgument("sparsify n overflows sane bounds");
    return static_cast<int>(n);
}

}  // namespace

SparseEnsemble sparsify(const WeightedEnsemble& ensemble, const LabeledSample& sample,
                        const SparsifyConfig& cfg, Rng& rng) {
    cfg.validate();
    validate_ensemble(ensemble);

    const int trials = cfg.resolve_trials();
    const double cap_raw = 4.0 * static_cast<double>(ensemble.size()) *
                           std::ceil(1.0 / (cfg.gamma * cfg.gamma));
    const long long hard_cap = static_cast<long long>(cap_raw);

    int n = 0;
    bool adaptive = false;
    switch (cfg.policy) {
        case SparsifyConfig::Policy::explicit_n:
            n = force_odd(cfg.explicit_n);
            break;
        case SparsifyConfig::Policy::theorem: {
            long long d = cfg.dual_fat_dim(cfg.c_eta * cfg.eta);
            if (d < 0) throw Unsupported("dual dimension callable signalled infinity");
            double dd = std::max<double>(1.0, static_cast<double>(d));
            double lg = std::log2(dd / cfg.eta);
            n = force_odd(static_cast<long long>(
                std::ceil(cfg.c_n / (cfg.gamma * cfg.gamma) * dd * lg * lg)));
            break;
        }
        case SparsifyConfig::Policy::adaptive:
            n = force_odd(cfg.start_n);
            adaptive = true;
            break;
    }

    std::uint64_t trial_counter = 0;
    while (true) {
        for (int trial = 0; trial < trials; ++trial) {
            // Pre-derived sub-seed per trial: the outcome is a function of
            // (seed, trial index) alone, whatever order trials run in.
            Rng trial_rng = rng.spawn(trial_counter++);
            std::vector<std::uint32_t> picks =
                categorical_sample(ensemble.weights, static_cast<std::size_t>(n), trial_rng);
            std::vector<Hypothesis> members;
            members.reserve(picks.size());
            for (std::uint32_t j : picks) members.push_back(ensemble.hypotheses[j]);
            if (majority_within_eta(members, sample, cfg.eta))
                return SparseEnsemble{std::move(members), std::move(picks)};
        }
        if (!adaptive)
            throw SparsifyFailure("no accepted subset of size " + std::to_string(n) + " after " +
                                  std::to_string(trials) + " trials");
        long long doubled = 2LL * n;
        if (doubled > hard_cap)
            throw SparsifyFailure(
                "adaptive sparsification passed the hard cap n <= " + std::to_string(hard_cap) +
                "; ensemble margins were insufficient");
        n = force_odd(doubled);
    }
}

}  // namespace medcompress
