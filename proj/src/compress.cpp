#include "medcompress/compress.hpp"

#include <cmath>

namespace medcompress {

CompressionSet compress(const LabeledSample& sample, const Erm& erm, const BoostConfig& boost_cfg,
                        WeakLearnConfig weak_cfg, SparsifyConfig sparsify_cfg, Rng& rng,
                        PipelineInfo* info) {
    boost_cfg.validate();
    if (!erm.train || !erm.fat_dim) throw InvalidArgument("erm is missing train or fat_dim");

    weak_cfg.eta = boost_cfg.eta / 2.0;
    weak_cfg.gamma = boost_cfg.gamma;
    weak_cfg.fat_dim = erm.fat_dim;
    weak_cfg.validate();

    sparsify_cfg.eta = erm.task == TaskKind::binary ? boost_cfg.eta / 2.0 : boost_cfg.eta;
    sparsify_cfg.gamma = boost_cfg.gamma;

    WeakLearner learner = [&erm, &weak_cfg](const LabeledSample& s,
                                            const EmpiricalDistribution& p, double eta,
                                            double gamma, Rng& r) {
        WeakLearnConfig cfg = weak_cfg;
        cfg.eta = eta;
        cfg.gamma = gamma;
        return train_weak_hypothesis(s, p, erm, cfg, r).hypothesis;
    };

    Rng boost_rng = rng.spawn(1);
    BoostResult boosted = run_medboost(sample, learner, boost_cfg, boost_rng);

    Rng sparsify_rng = rng.spawn(2);
    SparseEnsemble sparse = sparsify(boosted.ensemble, sample, sparsify_cfg, sparsify_rng);

    std::vector<std::vector<LabeledPoint>> groups;
    std::vector<std::vector<std::uint32_t>> source_groups;
    groups.reserve(sparse.size());
    source_groups.reserve(sparse.size());
    for (const auto& h : sparse.hypotheses) {
        if (!h.provenance || h.provenance->empty())
            throw Error("sparsified hypothesis carries no training provenance");
        std::vector<LabeledPoint> group;
        group.reserve(h.provenance->size());
        for (std::uint32_t idx : *h.provenance) {
            if (idx >= sample.size()) throw Error("provenance index outside the sample");
            group.push_back(sample.items[idx]);
        }
        groups.push_back(std::move(group));
        source_groups.push_back(*h.provenance);
    }

    if (info) {
        info->boosting_rounds = static_cast<int>(boosted.trace.rounds.size());
        info->early_exit = boosted.trace.early_exit;
        info->sparsified_n = static_cast<int>(sparse.size());
        info->weak_subsample_size = weak_sample_size(weak_cfg);
    }

    SchemeMeta meta;
    meta.task = erm.task;
    meta.eta = sparsify_cfg.eta;  // the uniform tolerance the scheme certifies
    meta.gamma = boost_cfg.gamma;
    meta.erm_id = erm.id;
    return make_compression_set(std::move(meta), groups, std::move(source_groups));
}

double ReconstructedHypothesis::predict(const Point& x) const {
    std::vector<double> values;
    values.reserve(members.size());
    for (const auto& h : members) values.push_back(h(x));
    return weighted_median(values, std::vector<double>(values.size(), 1.0));
}

ReconstructedHypothesis reconstruct(const CompressionSet& cs, const Erm& erm) {
    if (cs.meta.version != 1)
        throw DecodeError("unsupported format version " + std::to_string(cs.meta.version));
    if (erm.id != cs.meta.erm_id)
        throw ContractViolation("compression set was built with erm '" + cs.meta.erm_id +
                                "' but '" + erm.id + "' was supplied");
    if (!erm.train) throw InvalidArgument("erm is missing its train function");

    ReconstructedHypothesis out;
    out.members.reserve(cs.group_count());
    std::size_t offset = 0;
    for (std::uint32_t size : cs.group_sizes) {
        std::vector<LabeledPoint> items(cs.points.begin() + offset,
                                        cs.points.begin() + offset + size);
        offset += size;
        out.members.push_back(erm.train(LabeledSample{std::move(items)}));
    }
    return out;
}

ReconstructedHypothesis reconstruct(const CompressionSet& cs) {
    return reconstruct(cs, erm_from_id(cs.meta.erm_id));
}

double max_error(const ReconstructedHypothesis& h, const LabeledSample& sample) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
        worst = std::max(worst, std::abs(h.predict(sample.point(i)) - sample.label(i)));
    return worst;
}

}  // namespace medcompress
