#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "medcompress/core.hpp"
#include "medcompress/rng.hpp"

namespace medcompress {

// How many hypotheses to subsample from the boosted ensemble.
//
//   explicit_n : a caller-chosen count
//   theorem    : n = ceil(c_n / gamma^2 * d*(c_eta * eta) * log2^2(d* / eta))
//                with a caller-supplied dual dimension d*(.); documented
//                scale, rarely practical since d* has unknown constants
//   adaptive   : start at n0 = 9 and double after each run of failed trials
//
// n is always rounded up to odd so the unweighted median never ties.
struct SparsifyConfig {
    enum class Policy { explicit_n, theorem, adaptive };
    Policy policy = Policy::adaptive;

    double eta = 0.2;
    double gamma = 0.125;

    int explicit_n = 0;

    double c_n = 1.0;
    double c_eta = 1.0;
    std::function<long long(double)> dual_fat_dim;  // used by the theorem policy

    int start_n = 9;  // adaptive start
    // Trials per candidate n before doubling; default ceil(log2(1/delta_s)).
    double delta_s = 0.01;
    std::optional<int> max_trials_per_n;

    int resolve_trials() const;
    void validate() const;
};

// Unweighted subsample of the boosted ensemble whose pointwise strict
// majority stays within eta of every label.
struct SparseEnsemble {
    std::vector<Hypothesis> hypotheses;
    std::vector<std::uint32_t> source_rounds;  // indices into the boosted ensemble

    std::size_t size() const { return hypotheses.size(); }
    // Unweighted median of member predictions (majority vote on {0,1} values).
    double predict(const Point& x) const;
};

// n iid draws from the normalized weight vector.
std::vector<std::uint32_t> categorical_sample(const std::vector<double>& weights,
                                              std::size_t n, Rng& rng);

// True when fewer than half the members err by more than eta at every point:
// max_i |{f in F : |f(x_i) - y_i| > eta}| < n/2.
bool majority_within_eta(const std::vector<Hypothesis>& members, const LabeledSample& sample,
                         double eta);

// Draws candidate subsets from Cat(weights) until one passes the majority
// predicate. Under the adaptive policy n doubles after each exhausted trial
// block; past the hard cap n <= 4 T ceil(1/gamma^2) a SparsifyFailure is
// thrown (the ensemble's margins were too weak to sparsify).
SparseEnsemble sparsify(const WeightedEnsemble& ensemble, const LabeledSample& sample,
                        const SparsifyConfig& cfg, Rng& rng);

}  // namespace medcompress
