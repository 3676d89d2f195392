#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "medcompress/core.hpp"
#include "medcompress/learners.hpp"
#include "medcompress/rng.hpp"

namespace medcompress {

// Configuration of the generic weak learner: draw a subsample of the size the
// fat-shattering dimension dictates, fit the consistent ERM, verify the weak
// condition against the current distribution, retry on failure.
struct WeakLearnConfig {
    double eta = 0.1;                   // error threshold of the weak condition
    double gamma = 0.125;               // margin below 1/2 in the weak condition
    double delta = 0.1;                 // per-draw failure probability target
    double c1 = 2.0;                    // leading sample-size constant
    double c2 = 0.125;                  // margin scale inside the dimension call
    double c3 = 8.0;                    // log numerator
    std::function<long long(double)> fat_dim;  // d(t); negative means infinite
    int max_retries = 64;
    double consistency_slack = 0.0;     // alpha: ERM may err up to alpha*eta on its subsample

    void validate() const;
};

// Witness that a hypothesis passed the weak condition: the subsample it was
// trained on (original-sample indices, with multiplicity) and the verified
// failure mass.
struct WeakCertificate {
    std::vector<std::uint32_t> subsample_indices;
    double empirical_fail_mass = 0.0;
    int retries = 0;  // draws before the successful one
};

// ceil(c1 * (d(c2*eta) * ln(c3/eta) + ln(1/delta)))
std::size_t weak_sample_size(const WeakLearnConfig& cfg);

// General form with explicit beta (the allowed failure mass) and the
// configured consistency slack alpha:
// ceil((c1/beta) * (d(c2*eta*beta*(1-alpha)) * ln(c3/(eta*beta*(1-alpha))) + ln(1/delta)))
std::size_t weak_sample_size_general(const WeakLearnConfig& cfg, double beta);

// n indices drawn iid with replacement from Categorical(P).
std::vector<std::uint32_t> draw_weighted_subsample(const LabeledSample& sample,
                                                   const EmpiricalDistribution& p,
                                                   std::size_t n, Rng& rng);

struct WeakCheck {
    bool ok = false;
    double fail_mass = 0.0;
};

// fail_mass = sum_i P(i) * I[|h(x_i) - y_i| > eta]; ok iff fail_mass <= 1/2 - gamma.
WeakCheck verify_weak(const Hypothesis& h, const LabeledSample& sample,
                      const EmpiricalDistribution& p, double eta, double gamma);

struct WeakResult {
    Hypothesis hypothesis;
    WeakCertificate certificate;
};

// Runs the draw/train/verify loop. The returned hypothesis carries the
// subsample indices as provenance. Throws WeakLearningFailure when the retry
// budget runs out (carrying the best failure mass seen) and ContractViolation
// when the ERM comes back inconsistent with its own subsample.
WeakResult train_weak_hypothesis(const LabeledSample& sample, const EmpiricalDistribution& p,
                                 const Erm& erm, const WeakLearnConfig& cfg, Rng& rng);

}  // namespace medcompress
