#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "medcompress/core.hpp"
#include "medcompress/rng.hpp"

namespace medcompress {

// Boosting configuration. The number of rounds is either explicit or derived
// from the sample size as T = ceil(c_T * ln(m) / gamma^2), the scale at which
// the gamma/2-quantile margin provably covers every training point.
struct BoostConfig {
    double eta = 0.2;    // target accuracy; weak hypotheses are held to eta/2
    double gamma = 0.125;
    std::optional<int> rounds;  // explicit T; empty means the auto rule
    double c_t = 2.0;

    int resolve_rounds(std::size_t sample_size) const;
    void validate() const;
};

struct BoostRound {
    double alpha = 0.0;          // ensemble weight assigned this round
    double correct_mass = 0.0;   // P_t-mass with |h_t(x_i) - y_i| <= eta/2
    double distribution_entropy = 0.0;  // entropy of P_t before the update
};

struct BoostTrace {
    std::vector<BoostRound> rounds;
    bool early_exit = false;  // a round fit every point; T copies returned
};

// theta_i = +1 when |h(x_i) - y_i| <= eta/2, else -1. Boundary inclusive.
std::vector<int> compute_theta(const Hypothesis& h, const LabeledSample& sample, double eta);

// alpha = 0.5 * ln((1-gamma) W+ / ((1+gamma) W-)) with W± the P-masses of
// theta = ±1. Returns +infinity when W- is zero; throws ContractViolation
// when W+ is zero (no weak hypothesis can be that bad).
double compute_alpha(const EmpiricalDistribution& p, const std::vector<int>& theta,
                     double gamma);

// P'(i) proportional to P(i) * exp(-alpha * theta_i), renormalized.
EmpiricalDistribution update_distribution(const EmpiricalDistribution& p,
                                          const std::vector<int>& theta, double alpha);

// The weak learner is handed the sample, the current distribution, the error
// threshold eta/2, gamma, and an rng; it must return a hypothesis whose
// failure mass at that threshold is at most 1/2 - gamma under the given
// distribution (the weaklearn module provides this, retries included).
using WeakLearner = std::function<Hypothesis(const LabeledSample&, const EmpiricalDistribution&,
                                             double eta, double gamma, Rng&)>;

struct BoostResult {
    WeightedEnsemble ensemble;
    BoostTrace trace;
};

// Boosts the weak learner into a weighted ensemble whose gamma/2-quantiles
// straddle every label within eta/2 (for T at the auto-rule scale). If some
// round returns an exact fit, the run ends early with T unit-weight copies of
// that hypothesis.
BoostResult run_medboost(const LabeledSample& sample, const WeakLearner& weak_learner,
                         const BoostConfig& cfg, Rng& rng);

}  // namespace medcompress
