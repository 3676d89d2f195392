#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "medcompress/core.hpp"

namespace medcompress {

// MSB-first packed bit sequence.
struct BitString {
    std::vector<std::uint8_t> bytes;
    std::size_t bit_count = 0;

    void push_bit(bool b);
    bool bit(std::size_t i) const;

    bool operator==(const BitString& other) const {
        return bit_count == other.bit_count && bytes == other.bytes;
    }
};

struct SchemeMeta {
    std::uint16_t version = 1;
    TaskKind task = TaskKind::real;
    double eta = 0.0;
    double gamma = 0.0;
    std::string erm_id;

    bool operator==(const SchemeMeta&) const = default;
};

// The output of the compression function: the examples that trained the n
// surviving hypotheses, plus side information. The serialized form stores the
// examples as a canonically sorted multiset; `side_info` holds the unary
// group-size prefix followed by the permutation (as a factorial-number-system
// index) that restores training order, which keeps it within the
// ceil(k log2 k) + 2n bit budget. Reconstruction needs nothing else.
struct CompressionSet {
    SchemeMeta meta;
    std::vector<std::uint32_t> group_sizes;  // n entries, each >= 1
    std::vector<LabeledPoint> points;        // k' entries, group-concatenation order
    BitString side_info;
    // Original-sample indices per group (with multiplicity). Audit metadata:
    // populated by the compression pipeline, dropped by serialization.
    std::optional<std::vector<std::vector<std::uint32_t>>> source_groups;

    std::size_t group_count() const { return group_sizes.size(); }
    std::size_t total_examples() const { return points.size(); }
    bool operator==(const CompressionSet& other) const {
        return meta == other.meta && group_sizes == other.group_sizes &&
               equal_points(other) && side_info == other.side_info;
    }

private:
    bool equal_points(const CompressionSet& other) const;
};

// Builds a compression set from grouped examples, computing the canonical
// side information. Rejects empty groups.
CompressionSet make_compression_set(
    SchemeMeta meta, const std::vector<std::vector<LabeledPoint>>& groups,
    std::optional<std::vector<std::vector<std::uint32_t>>> source_groups = std::nullopt);

// ceil(log2 k!): exact bit width of a k-element permutation index.
std::size_t permutation_index_bits(std::size_t k);

// Versioned little-endian byte format (documented in docs/format.md) with a
// crc32 trailer. serialize-deserialize-serialize is the identity on bytes.
std::vector<std::uint8_t> serialize(const CompressionSet& cs);
CompressionSet deserialize(const std::vector<std::uint8_t>& bytes);

}  // namespace medcompress
