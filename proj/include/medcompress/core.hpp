#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "medcompress/errors.hpp"

namespace medcompress {

enum class TaskKind : std::uint8_t { real = 0, binary = 1 };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& s);

// A point of the instance space: a finite-dimensional real vector. The
// desk-scale experiments live on [0,1]; general metric points just carry
// more coordinates.
struct Point {
    std::vector<double> coords;

    double x() const { return coords.at(0); }
};

Point make_point(double x);
double euclidean_distance(const Point& a, const Point& b);
// Throws InvalidArgument on NaN or infinite coordinates.
void validate_point(const Point& p);

struct LabeledPoint {
    Point point;
    double label;
};

// Ordered, nonempty list of labeled points. Order is significant: indices
// into `items` are the stable identifiers everything downstream (weak-learner
// provenance, compression sets) refers to.
struct LabeledSample {
    std::vector<LabeledPoint> items;

    std::size_t size() const { return items.size(); }
    const Point& point(std::size_t i) const { return items[i].point; }
    double label(std::size_t i) const { return items[i].label; }
};

// Validates nonemptiness and label range: [0,1] for real tasks, {0,1} for binary.
LabeledSample make_sample(std::vector<LabeledPoint> items, TaskKind kind = TaskKind::real);

// An evaluable hypothesis with provenance: the sample indices it was trained
// on, when it came out of a weak-learner draw. Evaluation must be a
// deterministic function of the point.
struct Hypothesis {
    std::function<double(const Point&)> evaluate;
    std::optional<std::vector<std::uint32_t>> provenance;

    double operator()(const Point& p) const { return evaluate(p); }
};

struct WeightedEnsemble {
    std::vector<Hypothesis> hypotheses;
    std::vector<double> weights;

    std::size_t size() const { return hypotheses.size(); }
};

// Enforces: lengths match, at least one hypothesis, weights nonnegative and
// not all zero.
void validate_ensemble(const WeightedEnsemble& e);

// Probability masses over sample indices 0..m-1.
struct EmpiricalDistribution {
    std::vector<double> masses;

    std::size_t size() const { return masses.size(); }
    double operator[](std::size_t i) const { return masses[i]; }
};

EmpiricalDistribution uniform_distribution(std::size_t m);
// Masses nonnegative, total within 1e-12 of one.
void validate_distribution(const EmpiricalDistribution& p);
double distribution_entropy(const EmpiricalDistribution& p);

// Weighted median and quantiles, set-comprehension definitions taken
// literally over the input multiset:
//
//   median  = min{ y_j : sum_t w_t * I[y_j < y_t] / sum_t w_t < 1/2 }
//   Q+(g)   = min{ y_j : sum_t w_t * I[y_j < y_t] / sum_t w_t < 1/2 - g }
//   Q-(g)   = max{ y_j : sum_t w_t * I[y_j > y_t] / sum_t w_t < 1/2 - g }
//
// Comparisons against 1/2 - g are exact floating comparisons. Weights need
// not be normalized. The result is always one of the input values.
double weighted_median(const std::vector<double>& values, const std::vector<double>& weights);
double weighted_quantile_upper(const std::vector<double>& values,
                               const std::vector<double>& weights, double gamma);
double weighted_quantile_lower(const std::vector<double>& values,
                               const std::vector<double>& weights, double gamma);

// Weighted median of the member predictions at x.
double ensemble_predict(const WeightedEnsemble& e, const Point& x);

// Q+ and Q- of the member predictions at x; the pair bracketing the median.
double ensemble_quantile_upper(const WeightedEnsemble& e, const Point& x, double gamma);
double ensemble_quantile_lower(const WeightedEnsemble& e, const Point& x, double gamma);

}  // namespace medcompress
