#pragma once

#include <stdexcept>
#include <string>

namespace medcompress {

// Error taxonomy. Every failure mode a caller may want to branch on gets its
// own type; the CLI maps these to distinct exit codes.

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// A hypothesis handed to the booster (or produced by an ERM) does not satisfy
// the contract it was supposed to: ERM inconsistent with its own subsample,
// or correct mass below the 1/2 + gamma margin floor.
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error(what) {}
};

// Weak learner exhausted its retry budget.
class WeakLearningFailure : public Error {
public:
    WeakLearningFailure(const std::string& what, double best_fail_mass, int round = -1)
        : Error(what), best_fail_mass(best_fail_mass), round(round) {}

    double best_fail_mass;
    int round;  // boosting round, -1 when raised outside a boosting run
};

// Adaptive sparsification hit its hard cap on the ensemble size.
class SparsifyFailure : public Error {
public:
    explicit SparsifyFailure(const std::string& what) : Error(what) {}
};

// Subsample labels cannot be realized by the learner's class.
class ConsistencyImpossible : public Error {
public:
    explicit ConsistencyImpossible(const std::string& what) : Error(what) {}
};

// Malformed or corrupted serialized compression set.
class DecodeError : public Error {
public:
    explicit DecodeError(const std::string& what) : Error(what) {}
};

// Combinatorial search exceeded its node budget; carries the best result seen.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, int best_found)
        : Error(what), best_found(best_found) {}

    int best_found;
};

class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& what) : Error(what) {}
};

}  // namespace medcompress
