#include "medcompress/weaklearn.hpp"

#include <cmath>
#include <limits>

namespace medcompress {

void WeakLearnConfig::validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("weak eta must lie in (0,1]");
    if (!(gamma > 0.0 && gamma < 0.25)) throw InvalidArgument("weak gamma must lie in (0,1/4)");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("weak delta must lie in (0,1)");
    if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0)) throw InvalidArgument("weak constants must be positive");
    if (!fat_dim) throw InvalidArgument("weak config needs a fat_dim callable");
    if (max_retries < 0) throw InvalidArgument("max_retries must be nonnegative");
    if (!(consistency_slack >= 0.0 && consistency_slack < 1.0))
        throw InvalidArgument("consistency slack must lie in [0,1)");
}

namespace {

std::size_t sample_size_from(double c1, double dim_term, double log_term, double delta) {
    double raw = c1 * (dim_term * log_term + std::log(1.0 / delta));
    double ceiled = std::ceil(raw);
    if (!(ceiled >= 1.0)) ceiled = 1.0;
    if (ceiled > 1e9) throw InvalidArgument("weak subsample size overflows sane bounds");
    return static_cast<std::size_t>(ceiled);
}

long long dim_at(const WeakLearnConfig& cfg, double t) {
    long long d = cfg.fat_dim(t);
    if (d < 0) throw Unsupported("class has infinite fat-shattering dimension at t = " +
                                 std::to_string(t));
    return d;
}

}  // namespace

std::size_t weak_sample_size(const WeakLearnConfig& cfg) {
    cfg.validate();
    long long d = dim_at(cfg, cfg.c2 * cfg.eta);
    return sample_size_from(cfg.c1, static_cast<double>(d), std::log(cfg.c3 / cfg.eta),
                            cfg.delta);
}

std::size_t weak_sample_size_general(const WeakLearnConfig& cfg, double beta) {
    cfg.validate();
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0,1)");
    double scale = cfg.eta * beta * (1.0 - cfg.consistency_slack);
    long long d = dim_at(cfg, cfg.c2 * scale);
    return sample_size_from(cfg.c1 / beta, static_cast<double>(d), std::log(cfg.c3 / scale),
                            cfg.delta);
}

std::vector<std::uint32_t> draw_weighted_subsample(const LabeledSample& sample,
                                                   const EmpiricalDistribution& p,
                                                   std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgument("subsample size must be at least 1");
    if (p.size() != sample.size())
        throw InvalidArgument("distribution size does not match sample size");
    CategoricalTable table(p.masses);
    std::vector<std::uint32_t> indices;
    indices.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        indices.push_back(static_cast<std::uint32_t>(table.draw(rng)));
    return indices;
}

WeakCheck verify_weak(const Hypothesis& h, const LabeledSample& sample,
                      const EmpiricalDistribution& p, double eta, double gamma) {
    if (p.size() != sample.size())
        throw InvalidArgument("distribution size does not match sample size");
    double fail_mass = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        if (std::abs(h(sample.point(i)) - sample.label(i)) > eta) fail_mass += p[i];
    return WeakCheck{fail_mass <= 0.5 - gamma, fail_mass};
}

WeakResult train_weak_hypothesis(const LabeledSample& sample, const EmpiricalDistribution& p,
                                 const Erm& erm, const WeakLearnConfig& cfg, Rng& rng) {
    cfg.validate();
    validate_distribution(p);
    const std::size_t n = weak_sample_size(cfg);
    // alpha = 0 asks for exact consistency; 1e-12 absorbs evaluation rounding.
    const double consistency_tol = cfg.consistency_slack * cfg.eta + 1e-12;

    double best_fail_mass = std::numeric_limits<double>::infinity();
    const int attempts = cfg.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<std::uint32_t> indices = draw_weighted_subsample(sample, p, n, rng);
        std::vector<LabeledPoint> items;
        items.reserve(indices.size());
        for (std::uint32_t idx : indices) items.push_back(sample.items[idx]);
        LabeledSample subsample{std::move(items)};

        Hypothesis h = erm.train(subsample);
        for (std::size_t i = 0; i < subsample.size(); ++i) {
            double err = std::abs(h(subsample.point(i)) - subsample.label(i));
            if (err > consistency_tol)
                throw ContractViolation("ERM violated its consistency contract: error " +
                                        std::to_string(err) + " on its own subsample");
        }

        WeakCheck check = verify_weak(h, sample, p, cfg.eta, cfg.gamma);
        best_fail_mass = std::min(best_fail_mass, check.fail_mass);
        if (check.ok) {
            h.provenance = indices;
            return WeakResult{std::move(h),
                              WeakCertificate{std::move(indices), check.fail_mass, attempt}};
        }
    }
    throw WeakLearningFailure("weak learner exhausted " + std::to_string(attempts) +
                                  " draws; best fail mass " + std::to_string(best_fail_mass),
                              best_fail_mass);
}

}  // namespace medcompress
