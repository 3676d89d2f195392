#include "medcompress/learners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <vector>

namespace medcompress {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string format_param(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// 1e-9 absolute slack in the realizability checks absorbs the rounding of
// distance evaluation; labels generated from an actual class member satisfy
// the constraints exactly in real arithmetic.
constexpr double kRealizableSlack = 1e-9;

}  // namespace

Hypothesis lipschitz_erm(const LabeledSample& subsample, double lipschitz_constant) {
    if (!(lipschitz_constant > 0.0)) throw InvalidArgument("Lipschitz constant must be positive");
    const auto& items = subsample.items;
    if (items.empty()) throw InvalidArgument("empty subsample");

    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            double dy = std::abs(items[i].label - items[j].label);
            double dx = euclidean_distance(items[i].point, items[j].point);
            if (dy > lipschitz_constant * dx + kRealizableSlack) {
                throw ConsistencyImpossible(
                    "labels not realizable at Lipschitz constant " +
                    format_param(lipschitz_constant) + ": points " + std::to_string(i) +
                    " and " + std::to_string(j) + " need slope " +
                    format_param(dx > 0 ? dy / dx : std::numeric_limits<double>::infinity()));
            }
        }
    }

    auto data = std::make_shared<std::vector<LabeledPoint>>(items);
    double L = lipschitz_constant;
    Hypothesis h;
    h.evaluate = [data, L](const Point& x) {
        double upper = std::numeric_limits<double>::infinity();
        double lower = -std::numeric_limits<double>::infinity();
        for (const auto& it : *data) {
            double d = euclidean_distance(x, it.point);
            upper = std::min(upper, it.label + L * d);
            lower = std::max(lower, it.label - L * d);
        }
        return clamp01(0.5 * (upper + lower));
    };
    return h;
}

Hypothesis bv_erm(const LabeledSample& subsample, double variation_budget) {
    if (!(variation_budget > 0.0)) throw InvalidArgument("variation budget must be positive");
    const auto& items = subsample.items;
    if (items.empty()) throw InvalidArgument("empty subsample");

    std::vector<LabeledPoint> sorted(items);
    for (const auto& it : sorted)
        if (it.point.coords.size() != 1)
            throw InvalidArgument("bv_erm expects one-dimensional points");
    std::sort(sorted.begin(), sorted.end(),
              [](const LabeledPoint& a, const LabeledPoint& b) { return a.point.x() < b.point.x(); });

    auto xs = std::make_shared<std::vector<double>>();
    auto ys = std::make_shared<std::vector<double>>();
    for (const auto& it : sorted) {
        if (!xs->empty() && it.point.x() == xs->back()) {
            if (std::abs(it.label - ys->back()) > 1e-12)
                throw ConsistencyImpossible("conflicting labels at duplicate x = " +
                                            format_param(it.point.x()));
            continue;
        }
        xs->push_back(it.point.x());
        ys->push_back(it.label);
    }

    double variation = 0.0;
    for (std::size_t i = 1; i < ys->size(); ++i) variation += std::abs((*ys)[i] - (*ys)[i - 1]);
    if (variation > variation_budget + 1e-12)
        throw ConsistencyImpossible("subsample needs variation " + format_param(variation) +
                                    " but budget is " + format_param(variation_budget));

    Hypothesis h;
    h.evaluate = [xs, ys](const Point& p) {
        double x = p.x();
        // rightmost sample point at or left of x; leftmost label below all of them
        auto it = std::upper_bound(xs->begin(), xs->end(), x);
        if (it == xs->begin()) return ys->front();
        return (*ys)[static_cast<std::size_t>(it - xs->begin()) - 1];
    };
    return h;
}

Hypothesis threshold_erm(const LabeledSample& subsample) {
    const auto& items = subsample.items;
    if (items.empty()) throw InvalidArgument("empty subsample");

    double max0 = -std::numeric_limits<double>::infinity();
    double min0 = std::numeric_limits<double>::infinity();
    double max1 = -std::numeric_limits<double>::infinity();
    double min1 = std::numeric_limits<double>::infinity();
    bool any0 = false, any1 = false;
    for (const auto& it : items) {
        if (it.point.coords.size() != 1)
            throw InvalidArgument("threshold_erm expects one-dimensional points");
        if (it.label == 0.0) {
            any0 = true;
            max0 = std::max(max0, it.point.x());
            min0 = std::min(min0, it.point.x());
        } else if (it.label == 1.0) {
            any1 = true;
            max1 = std::max(max1, it.point.x());
            min1 = std::min(min1, it.point.x());
        } else {
            throw InvalidArgument("threshold_erm labels must be 0 or 1");
        }
    }

    double theta = 0.0;
    bool up = true;
    if (!any1) {
        up = true;
        theta = std::numeric_limits<double>::infinity();  // constant 0
    } else if (!any0) {
        up = true;
        theta = -std::numeric_limits<double>::infinity();  // constant 1
    } else if (max0 < min1) {
        up = true;
        theta = 0.5 * (max0 + min1);
    } else if (max1 < min0) {
        up = false;
        theta = 0.5 * (max1 + min0);
    } else {
        throw ConsistencyImpossible("labels admit no consistent threshold in either orientation");
    }

    Hypothesis h;
    h.evaluate = [theta, up](const Point& p) {
        bool right = p.x() >= theta;
        return (up ? right : !right) ? 1.0 : 0.0;
    };
    return h;
}

double total_variation(const std::vector<double>& values) {
    double v = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) v += std::abs(values[i] - values[i - 1]);
    return v;
}

long long fat_dim_bv(double variation_budget, double t) {
    if (!(t > 0.0)) throw InvalidArgument("fat-shattering margin must be positive");
    if (!(variation_budget > 0.0)) throw InvalidArgument("variation budget must be positive");
    return 1 + static_cast<long long>(std::floor(variation_budget / (2.0 * t)));
}

long long fat_dim_lipschitz(double lipschitz_constant, double diam, int doubling_dim,
                            double t, double c) {
    if (!(lipschitz_constant > 0.0) || !(diam > 0.0) || !(t > 0.0) || !(c > 0.0) ||
        doubling_dim < 0)
        throw InvalidArgument("fat_dim_lipschitz arguments must be positive");
    double cells = std::ceil(lipschitz_constant * diam / t);
    double d = c * std::pow(cells, static_cast<double>(doubling_dim));
    return static_cast<long long>(std::ceil(d));
}

Erm make_bv_erm(double variation_budget) {
    Erm erm;
    erm.id = "bv:v=" + format_param(variation_budget);
    erm.task = TaskKind::real;
    erm.train = [variation_budget](const LabeledSample& s) { return bv_erm(s, variation_budget); };
    erm.fat_dim = [variation_budget](double t) { return fat_dim_bv(variation_budget, t); };
    return erm;
}

Erm make_lipschitz_erm(double lipschitz_constant, double diam, int doubling_dim) {
    Erm erm;
    erm.id = "lipschitz:L=" + format_param(lipschitz_constant);
    erm.task = TaskKind::real;
    erm.train = [lipschitz_constant](const LabeledSample& s) {
        return lipschitz_erm(s, lipschitz_constant);
    };
    erm.fat_dim = [lipschitz_constant, diam, doubling_dim](double t) {
        return fat_dim_lipschitz(lipschitz_constant, diam, doubling_dim, t);
    };
    return erm;
}

Erm make_threshold_erm() {
    Erm erm;
    erm.id = "threshold";
    erm.task = TaskKind::binary;
    erm.train = [](const LabeledSample& s) { return threshold_erm(s); };
    // Thresholds plus their complements shatter at most two points, and the
    // {0,1} range cannot spread 2t once t exceeds 1/2.
    erm.fat_dim = [](double t) -> long long {
        if (!(t > 0.0)) throw InvalidArgument("fat-shattering margin must be positive");
        return t > 0.5 ? 0 : 2;
    };
    return erm;
}

Erm erm_from_id(const std::string& id) {
    if (id == "threshold") return make_threshold_erm();
    if (id.rfind("bv:v=", 0) == 0) {
        double v = std::strtod(id.c_str() + 5, nullptr);
        if (!(v > 0.0)) throw InvalidArgument("bad bv erm id: " + id);
        return make_bv_erm(v);
    }
    if (id.rfind("lipschitz:L=", 0) == 0) {
        double L = std::strtod(id.c_str() + 12, nullptr);
        if (!(L > 0.0)) throw InvalidArgument("bad lipschitz erm id: " + id);
        return make_lipschitz_erm(L);
    }
    throw InvalidArgument("unknown erm id: " + id);
}

}  // namespace medcompress
