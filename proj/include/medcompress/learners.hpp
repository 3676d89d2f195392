#pragma once

#include <functional>
#include <string>

#include "medcompress/core.hpp"

namespace medcompress {

// A proper, consistent learner packaged with the metadata the compression
// pipeline needs: a stable identifier (stored in compression sets and matched
// at reconstruction), the task kind, and the fat-shattering dimension of its
// class as a function of the margin.
//
// Training must be a deterministic function of the *ordered* subsample;
// reconstruction is only well defined because retraining reproduces the
// original hypothesis bit for bit.
struct Erm {
    std::string id;
    TaskKind task = TaskKind::real;
    std::function<Hypothesis(const LabeledSample&)> train;
    // Fat-shattering dimension d(t); negative return means infinite.
    std::function<long long(double)> fat_dim;
};

// Exact McShane-Whitney midpoint extension, clamped to [0,1]:
//   f(x) = ((min_i y_i + L*d(x,x_i)) + (max_i y_i - L*d(x,x_i))) / 2.
// Interpolates the subsample. Throws ConsistencyImpossible (reporting the
// violating pair) when the labels are not L-realizable.
Hypothesis lipschitz_erm(const LabeledSample& subsample, double lipschitz_constant);

// Left-step interpolant for bounded-variation regression on [0,1]: predicts
// the label of the nearest subsample point to the left (leftmost label below
// all of them). Duplicate x values with agreeing labels (within 1e-12) are
// merged; conflicting duplicates and adjacent-difference sums above the
// variation budget throw ConsistencyImpossible.
Hypothesis bv_erm(const LabeledSample& subsample, double variation_budget);

// Midpoint-threshold classifier consistent with {0,1} labels on the line,
// trying the up orientation I[x >= theta] first, then the complement
// I[x < theta]. Throws ConsistencyImpossible when neither fits.
Hypothesis threshold_erm(const LabeledSample& subsample);

// Sum of adjacent absolute differences of an x-sorted value list.
double total_variation(const std::vector<double>& values);

// d(t) = 1 + floor(v / 2t) for the variation-v class.
long long fat_dim_bv(double variation_budget, double t);

// d(t) = ceil(c * ceil(L * diam / t)^ddim) for L-Lipschitz functions on a
// space of the given diameter and doubling dimension. The leading constant c
// is configurable; only the growth rate is pinned down by theory.
long long fat_dim_lipschitz(double lipschitz_constant, double diam, int doubling_dim,
                            double t, double c = 1.0);

// Factories bundling each learner with its identifier and dimension function.
Erm make_bv_erm(double variation_budget);
Erm make_lipschitz_erm(double lipschitz_constant, double diam = 1.0, int doubling_dim = 1);
Erm make_threshold_erm();

// Rebuilds the Erm named by an identifier string ("bv:v=1", "lipschitz:L=2",
// "threshold"); used when reconstructing from a serialized compression set.
Erm erm_from_id(const std::string& id);

}  // namespace medcompress
