#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "medcompress/core.hpp"

namespace medcompress {

// Finite slice of a function class: rows are functions, columns are points,
// values[i][j] = f_i(x_j). Transposing swaps the primal and dual views.
struct FunctionTable {
    std::vector<std::string> row_names;
    std::vector<Point> columns;
    std::vector<std::vector<double>> values;

    std::size_t rows() const { return values.size(); }
    std::size_t cols() const { return values.empty() ? 0 : values.front().size(); }
    void validate() const;
};

FunctionTable transpose(const FunctionTable& t);

// CSV round-trip: header row of point coordinates (';'-joined when
// multidimensional), one row of values per function.
std::string table_to_csv(const FunctionTable& t);
FunctionTable table_from_csv(const std::string& csv);

// Witness that the candidate columns are t-shattered: an offset per candidate
// and, for every sign pattern over the candidates, a row achieving it
// (value >= r_i + t where the pattern bit is 1, <= r_i - t where it is 0).
struct ShatteringCertificate {
    std::vector<std::uint32_t> shattered_indices;  // column indices
    std::vector<double> offsets;
    std::vector<std::uint32_t> witnesses;  // row index per pattern, pattern-bit order

    std::size_t size() const { return shattered_indices.size(); }
};

struct BinaryMatrix {
    std::vector<std::vector<std::uint8_t>> entries;

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return entries.empty() ? 0 : entries.front().size(); }
    void validate() const;
};

struct MatrixVariation {
    std::vector<int> per_column;  // V(M, i): adjacent-row disagreements in column i
    int total = 0;                // G(M)
    int max = 0;                  // V(M)
};

// Adjacent-row disagreement counts, non-cyclic (rows 1..m-1 against their successor).
MatrixVariation matrix_variation(const BinaryMatrix& m);

// All 2^n patterns, consecutive rows at Hamming distance 1, and column flip
// counts balanced to V(M) <= ceil(2^n / n). Backtracking search; supported
// for 1 <= n <= 5.
BinaryMatrix balanced_gray_code(int n);

struct ShatteredFamily {
    FunctionTable table;                 // rows = functions, columns = points
    ShatteringCertificate certificate;   // valid on transpose(table): the
                                         // functions are shattered by the points
};

// n = floor(log2(v/t)) step functions on the grid j/2^n with values +-t keyed
// to a balanced Gray code; each has variation at most v and the family is
// t-shattered by the grid with offset zero. Requires 4t < v.
ShatteredFamily bv_shattered_family(double variation_budget, double t);

// floor(log2 m) functions taking values +-t on a 2t/L-separated packing via a
// binary code; each extends L-Lipschitz-ly, and the family is t-shattered by
// the packing points with offset zero.
ShatteredFamily lipschitz_shattered_family(const std::vector<Point>& packing,
                                           double lipschitz_constant, double t);

// Checks the translated-cube condition on the given columns. With no offsets,
// searches r over the midpoints of observed value pairs per column (enough to
// recover any witness on a finite table). Returns nothing when the set is not
// shattered. Candidate sets above 20 columns are rejected (2^k enumeration).
std::optional<ShatteringCertificate> is_t_shattered(
    const FunctionTable& table, const std::vector<std::uint32_t>& candidate_columns, double t,
    const std::optional<std::vector<double>>& offsets = std::nullopt);

// Largest k <= k_max with a t-shattered column subset, by breadth-first
// extension of shattered sets (shattering is downward closed). Throws
// BudgetError carrying the best k found when the node budget runs out.
// Transpose the table to get the dual dimension.
int fat_shattering_dim(const FunctionTable& table, double t, int k_max,
                       std::size_t node_budget = 2'000'000);

// Greedy maximal eps-separated subset; every input point is within eps of it.
struct Packing {
    std::vector<std::uint32_t> indices;
    std::vector<Point> points;

    std::size_t count() const { return indices.size(); }
};

Packing packing_number_greedy(const std::vector<Point>& points, double eps);

}  // namespace medcompress
