#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "medcompress/errors.hpp"

namespace medcompress {

// Seeded generator with hand-rolled draw helpers. std::uniform_*_distribution
// is implementation-defined, so all sampling goes through these to keep runs
// byte-reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n). Modulo bias is below 2^-32 for the desk-scale
    // counts used here, irrelevant next to Monte Carlo noise.
    std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

    // Independent child stream derived from the original seed, not from the
    // engine state, so sub-seeding is stable no matter how much the parent
    // has been consumed. splitmix64 scrambling decorrelates the children.
    Rng spawn(std::uint64_t stream) const {
        std::uint64_t z = seed_ + (stream + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Cumulative-mass table for repeated categorical draws from fixed weights.
class CategoricalTable {
public:
    explicit CategoricalTable(const std::vector<double>& weights) {
        double total = 0.0;
        cdf_.reserve(weights.size());
        for (double w : weights) {
            if (w < 0.0) throw InvalidArgument("categorical weight is negative");
            total += w;
            cdf_.push_back(total);
        }
        if (cdf_.empty() || total <= 0.0)
            throw InvalidArgument("categorical distribution needs positive total weight");
        total_ = total;
    }

    std::size_t draw(Rng& rng) const {
        double u = rng.next_double() * total_;
        std::size_t lo = 0, hi = cdf_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

private:
    std::vector<double> cdf_;
    double total_ = 0.0;
};

}  // namespace medcompress
