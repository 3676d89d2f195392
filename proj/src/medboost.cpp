#include "medcompress/medboost.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace medcompress {

void BoostConfig::validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("boost eta must lie in (0,1]");
    if (!(gamma > 0.0 && gamma < 0.25)) throw InvalidArgument("boost gamma must lie in (0,1/4)");
    if (rounds && *rounds < 1) throw InvalidArgument("explicit round count must be >= 1");
    if (!(c_t > 0.0)) throw InvalidArgument("c_t must be positive");
}

int BoostConfig::resolve_rounds(std::size_t sample_size) const {
    validate();
    if (rounds) return *rounds;
    double t = std::ceil(c_t * std::log(static_cast<double>(sample_size)) / (gamma * gamma));
    return std::max(1, static_cast<int>(t));
}

std::vector<int> compute_theta(const Hypothesis& h, const LabeledSample& sample, double eta) {
    if (sample.size() == 0) throw InvalidArgument("empty sample");
    std::vector<int> theta(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        theta[i] = std::abs(h(sample.point(i)) - sample.label(i)) > eta / 2.0 ? -1 : 1;
    return theta;
}

double compute_alpha(const EmpiricalDistribution& p, const std::vector<int>& theta,
                     double gamma) {
    if (p.size() != theta.size()) throw InvalidArgument("theta/distribution size mismatch");
    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        (theta[i] == 1 ? w_plus : w_minus) += p[i];
    if (w_plus == 0.0)
        throw ContractViolation("hypothesis accurate on zero mass; weak condition violated");
    if (w_minus == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * std::log((1.0 - gamma) * w_plus / ((1.0 + gamma) * w_minus));
}

EmpiricalDistribution update_distribution(const EmpiricalDistribution& p,
                                          const std::vector<int>& theta, double alpha) {
    if (!(std::isfinite(alpha) && alpha >= 0.0))
        throw InvalidArgument("update needs a finite nonnegative alpha");
    if (p.size() != theta.size()) throw InvalidArgument("theta/distribution size mismatch");
    std::vector<double> next(p.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        next[i] = p[i] * std::exp(-alpha * static_cast<double>(theta[i]));
        total += next[i];
    }
    if (!(total > 0.0)) throw Error("distribution update underflowed to zero total mass");
    for (double& m : next) m /= total;
    return EmpiricalDistribution{std::move(next)};
}

BoostResult run_medboost(const LabeledSample& sample, const WeakLearner& weak_learner,
                         const BoostConfig& cfg, Rng& rng) {
    cfg.validate();
    if (sample.size() == 0) throw InvalidArgument("empty sample");
    const int rounds = cfg.resolve_rounds(sample.size());

    BoostResult result;
    result.ensemble.hypotheses.reserve(rounds);
    result.ensemble.weights.reserve(rounds);
    EmpiricalDistribution p = uniform_distribution(sample.size());

    for (int t = 0; t < rounds; ++t) {
        Hypothesis h;
        try {
            h = weak_learner(sample, p, cfg.eta / 2.0, cfg.gamma, rng);
        } catch (WeakLearningFailure& e) {
            throw WeakLearningFailure(std::string(e.what()) + " (boosting round " +
                                          std::to_string(t + 1) + ")",
                                      e.best_fail_mass, t + 1);
        }

        std::vector<int> theta = compute_theta(h, sample, cfg.eta);
        double correct_mass = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i)
            if (theta[i] == 1) correct_mass += p[i];
        // The margin the analysis rests on; a weak learner honoring its
        // contract can never trip this.
        if (correct_mass < 0.5 + cfg.gamma)
            throw ContractViolation("weak hypothesis has correct mass " +
                                    std::to_string(correct_mass) + " < 1/2 + gamma");

        double alpha = compute_alpha(p, theta, cfg.gamma);
        result.trace.rounds.push_back(BoostRound{alpha, correct_mass, distribution_entropy(p)});

        if (std::isinf(alpha)) {
            // exact fit: the whole ensemble collapses to this round
            result.ensemble.hypotheses.assign(static_cast<std::size_t>(rounds), h);
            result.ensemble.weights.assign(static_cast<std::size_t>(rounds), 1.0);
            result.trace.early_exit = true;
            return result;
        }

        result.ensemble.hypotheses.push_back(std::move(h));
        result.ensemble.weights.push_back(alpha);
        p = update_distribution(p, theta, alpha);
    }
    return result;
}

}  // namespace medcompress
