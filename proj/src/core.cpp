#include "medcompress/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace medcompress {

std::string to_string(TaskKind kind) {
    return kind == TaskKind::binary ? "binary" : "real";
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "binary") return TaskKind::binary;
    if (s == "real") return TaskKind::real;
    throw InvalidArgument("unknown task kind: " + s);
}

Point make_point(double x) { return Point{{x}}; }

double euclidean_distance(const Point& a, const Point& b) {
    if (a.coords.size() != b.coords.size())
        throw InvalidArgument("points have mismatched dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        double d = a.coords[i] - b.coords[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void validate_point(const Point& p) {
    if (p.coords.empty()) throw InvalidArgument("point has no coordinates");
    for (double c : p.coords)
        if (!std::isfinite(c)) throw InvalidArgument("point coordinate is not finite");
}

LabeledSample make_sample(std::vector<LabeledPoint> items, TaskKind kind) {
    if (items.empty()) throw InvalidArgument("sample must be nonempty");
    for (const auto& it : items) {
        validate_point(it.point);
        if (kind == TaskKind::binary) {
            if (it.label != 0.0 && it.label != 1.0)
                throw InvalidArgument("binary label must be 0 or 1");
        } else if (!(it.label >= 0.0 && it.label <= 1.0)) {
            throw InvalidArgument("label outside [0,1]");
        }
    }
    return LabeledSample{std::move(items)};
}

void validate_ensemble(const WeightedEnsemble& e) {
    if (e.hypotheses.empty()) throw InvalidArgument("ensemble is empty");
    if (e.hypotheses.size() != e.weights.size())
        throw InvalidArgument("ensemble hypothesis/weight lengths differ");
    bool any_positive = false;
    for (double w : e.weights) {
        if (!(w >= 0.0)) throw InvalidArgument("ensemble weight is negative or NaN");
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw InvalidArgument("ensemble weights are all zero");
}

EmpiricalDistribution uniform_distribution(std::size_t m) {
    if (m == 0) throw InvalidArgument("distribution over empty index set");
    return EmpiricalDistribution{std::vector<double>(m, 1.0 / static_cast<double>(m))};
}

void validate_distribution(const EmpiricalDistribution& p) {
    if (p.masses.empty()) throw InvalidArgument("empty distribution");
    double total = 0.0;
    for (double m : p.masses) {
        if (!(m >= 0.0)) throw InvalidArgument("distribution mass is negative or NaN");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidArgument("distribution masses must sum to 1 within 1e-12");
}

double distribution_entropy(const EmpiricalDistribution& p) {
    double h = 0.0;
    for (double m : p.masses)
        if (m > 0.0) h -= m * std::log(m);
    return h;
}

namespace {

struct SortedMasses {
    std::vector<double> values;   // ascending, one entry per distinct value
    std::vector<double> greater;  // weight mass strictly above values[i]
    std::vector<double> smaller;  // weight mass strictly below values[i]
    double total = 0.0;
};

SortedMasses sort_and_accumulate(const std::vector<double>& values,
                                 const std::vector<double>& weights) {
    if (values.empty()) throw InvalidArgument("weighted aggregation over empty input");
    if (values.size() != weights.size())
        throw InvalidArgument("value/weight lengths differ");

    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    SortedMasses out;
    std::vector<double> group_mass;
    std::size_t i = 0;
    while (i < order.size()) {
        double v = values[order[i]];
        double group = 0.0;
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == v) {
            double w = weights[order[j]];
            if (!(w >= 0.0)) throw InvalidArgument("weight is negative or NaN");
            group += w;
            ++j;
        }
        out.values.push_back(v);
        group_mass.push_back(group);
        i = j;
    }
    const std::size_t n = out.values.size();
    out.smaller.resize(n);
    out.greater.resize(n);
    double below = 0.0;
    for (std::size_t g = 0; g < n; ++g) {
        out.smaller[g] = below;
        below += group_mass[g];
    }
    out.total = below;
    if (!(out.total > 0.0)) throw InvalidArgument("total weight must be positive");
    double above = 0.0;
    for (std::size_t g = n; g-- > 0;) {
        out.greater[g] = above;
        above += group_mass[g];
    }
    return out;
}

}  // namespace

double weighted_quantile_upper(const std::vector<double>& values,
                               const std::vector<double>& weights, double gamma) {
    SortedMasses sm = sort_and_accumulate(values, weights);
    const double threshold = 0.5 - gamma;
    // Strictly-greater mass is non-increasing in the value, so the defining
    // set is an up-set and the first qualifying value in ascending order is
    // its minimum. The maximum value always qualifies (greater mass 0).
    for (std::size_t g = 0; g < sm.values.size(); ++g)
        if (sm.greater[g] / sm.total < threshold) return sm.values[g];
    throw InvalidArgument("empty quantile defining set");
}

double weighted_quantile_lower(const std::vector<double>& values,
                               const std::vector<double>& weights, double gamma) {
    SortedMasses sm = sort_and_accumulate(values, weights);
    const double threshold = 0.5 - gamma;
    for (std::size_t g = sm.values.size(); g-- > 0;)
        if (sm.smaller[g] / sm.total < threshold) return sm.values[g];
    throw InvalidArgument("empty quantile defining set");
}

double weighted_median(const std::vector<double>& values, const std::vector<double>& weights) {
    return weighted_quantile_upper(values, weights, 0.0);
}

namespace {

std::vector<double> member_values(const WeightedEnsemble& e, const Point& x) {
    std::vector<double> v;
    v.reserve(e.size());
    for (const auto& h : e.hypotheses) v.push_back(h(x));
    return v;
}

}  // namespace

double ensemble_predict(const WeightedEnsemble& e, const Point& x) {
    validate_ensemble(e);
    return weighted_median(member_values(e, x), e.weights);
}

double ensemble_quantile_upper(const WeightedEnsemble& e, const Point& x, double gamma) {
    validate_ensemble(e);
    return weighted_quantile_upper(member_values(e, x), e.weights, gamma);
}

double ensemble_quantile_lower(const WeightedEnsemble& e, const Point& x, double gamma) {
    validate_ensemble(e);
    return weighted_quantile_lower(member_values(e, x), e.weights, gamma);
}

}  // namespace medcompress
