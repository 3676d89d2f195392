#pragma once

#include "medcompress/core.hpp"
#include "medcompress/learners.hpp"
#include "medcompress/medboost.hpp"
#include "medcompress/serialize.hpp"
#include "medcompress/sparsify.hpp"
#include "medcompress/weaklearn.hpp"

namespace medcompress {

// Pipeline measurements the caller may want for reporting.
struct PipelineInfo {
    int boosting_rounds = 0;
    bool early_exit = false;
    int sparsified_n = 0;
    std::size_t weak_subsample_size = 0;
};

// Runs boost -> sparsify and encodes each surviving hypothesis as the
// subsample that trained it. The etas are wired from boost_cfg: weak
// hypotheses are verified at eta/2, and the sparsification threshold is eta
// (eta/2 for binary tasks, where "err by more than eta/2" means
// misclassified, making the reconstructed majority exact). weak_cfg supplies
// the constants, delta, retry budget and slack; its eta/gamma/fat_dim fields
// are overwritten here so the stages cannot drift apart.
//
// The result size depends on the class, eta, gamma and delta, never on the
// sample size.
CompressionSet compress(const LabeledSample& sample, const Erm& erm, const BoostConfig& boost_cfg,
                        WeakLearnConfig weak_cfg, SparsifyConfig sparsify_cfg, Rng& rng,
                        PipelineInfo* info = nullptr);

// The hypothesis a compression set decodes to: every group retrained through
// the ERM, aggregated by unweighted median (majority vote on binary tasks).
struct ReconstructedHypothesis {
    std::vector<Hypothesis> members;

    double predict(const Point& x) const;
    double operator()(const Point& x) const { return predict(x); }
};

// Self-contained: uses nothing but the compression set's own fields. The erm
// must match the identifier recorded in the set.
ReconstructedHypothesis reconstruct(const CompressionSet& cs, const Erm& erm);

// Convenience overload resolving the ERM from the recorded identifier.
ReconstructedHypothesis reconstruct(const CompressionSet& cs);

// max_i |h(x_i) - y_i| over the sample.
double max_error(const ReconstructedHypothesis& h, const LabeledSample& sample);

}  // namespace medcompress
