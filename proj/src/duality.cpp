#include "medcompress/duality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace medcompress {

void FunctionTable::validate() const {
    for (const auto& row : values)
        if (row.size() != cols())
            throw InvalidArgument("function table rows have unequal lengths");
    if (!columns.empty() && columns.size() != cols())
        throw InvalidArgument("column point count does not match value columns");
    for (const auto& row : values)
        for (double v : row)
            if (!std::isfinite(v)) throw InvalidArgument("function table value is not finite");
}

FunctionTable transpose(const FunctionTable& t) {
    t.validate();
    FunctionTable out;
    out.values.assign(t.cols(), std::vector<double>(t.rows()));
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) out.values[j][i] = t.values[i][j];
    // transposed rows are the old points; columns get index-only identities
    out.columns.clear();
    return out;
}

namespace {

std::string format_value(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace

std::string table_to_csv(const FunctionTable& t) {
    t.validate();
    std::string out;
    for (std::size_t j = 0; j < t.cols(); ++j) {
        if (j) out += ',';
        if (j < t.columns.size()) {
            const auto& coords = t.columns[j].coords;
            for (std::size_t d = 0; d < coords.size(); ++d) {
                if (d) out += ';';
                out += format_value(coords[d]);
            }
        } else {
            out += format_value(static_cast<double>(j));
        }
    }
    out += '\n';
    for (const auto& row : t.values) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += format_value(row[j]);
        }
        out += '\n';
    }
    return out;
}

FunctionTable table_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    FunctionTable t;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        if (header) {
            while (std::getline(fields, field, ',')) {
                Point p;
                std::istringstream coords(field);
                std::string c;
                while (std::getline(coords, c, ';')) p.coords.push_back(std::strtod(c.c_str(), nullptr));
                t.columns.push_back(std::move(p));
            }
            header = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(fields, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
        t.values.push_back(std::move(row));
    }
    if (header) throw InvalidArgument("csv has no header row");
    t.validate();
    return t;
}

void BinaryMatrix::validate() const {
    for (const auto& row : entries) {
        if (row.size() != cols()) throw InvalidArgument("binary matrix rows have unequal lengths");
        for (auto v : row)
            if (v > 1) throw InvalidArgument("binary matrix entry outside {0,1}");
    }
}

MatrixVariation matrix_variation(const BinaryMatrix& m) {
    m.validate();
    if (m.rows() == 0) throw InvalidArgument("binary matrix has no rows");
    MatrixVariation out;
    out.per_column.assign(m.cols(), 0);
    for (std::size_t j = 0; j + 1 < m.rows(); ++j)
        for (std::size_t i = 0; i < m.cols(); ++i)
            if (m.entries[j][i] != m.entries[j + 1][i]) ++out.per_column[i];
    for (int v : out.per_column) {
        out.total += v;
        out.max = std::max(out.max, v);
    }
    return out;
}

namespace {

// Hamiltonian path through the n-cube whose per-coordinate flip counts stay
// within the cap; least-flipped-first ordering steers the search toward
// balance and finds a path quickly at these sizes.
bool gray_search(int n, int cap, std::vector<std::uint32_t>& path, std::vector<char>& visited,
                 std::vector<int>& flips) {
    if (path.size() == (1u << n)) return true;
    int remaining = static_cast<int>((1u << n) - path.size());
    int slack = 0;
    for (int i = 0; i < n; ++i) slack += cap - flips[i];
    if (slack < remaining) return false;

    std::uint32_t here = path.back();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return flips[a] != flips[b] ? flips[a] < flips[b] : a < b;
    });
    for (int bit : order) {
        if (flips[bit] >= cap) continue;
        std::uint32_t next = here ^ (1u << bit);
        if (visited[next]) continue;
        visited[next] = 1;
        ++flips[bit];
        path.push_back(next);
        if (gray_search(n, cap, path, visited, flips)) return true;
        path.pop_back();
        --flips[bit];
        visited[next] = 0;
    }
    return false;
}

}  // namespace

BinaryMatrix balanced_gray_code(int n) {
    if (n < 1 || n > 5)
        throw Unsupported("balanced gray code supported for 1 <= n <= 5, got " +
                          std::to_string(n));
    const int cap = static_cast<int>(std::ceil(std::ldexp(1.0, n) / n));
    std::vector<std::uint32_t> path{0};
    std::vector<char> visited(1u << n, 0);
    visited[0] = 1;
    std::vector<int> flips(n, 0);
    if (!gray_search(n, cap, path, visited, flips))
        throw Error("gray code search failed; the flip cap should always be feasible");

    BinaryMatrix m;
    m.entries.reserve(path.size());
    for (std::uint32_t code : path) {
        std::vector<std::uint8_t> row(n);
        for (int i = 0; i < n; ++i) row[i] = (code >> i) & 1u;
        m.entries.push_back(std::move(row));
    }
    return m;
}

ShatteredFamily bv_shattered_family(double variation_budget, double t) {
    if (!(t > 0.0)) throw InvalidArgument("margin must be positive");
    if (!(4.0 * t < variation_budget))
        throw InvalidArgument("construction needs 4t < v, got t = " + format_value(t) +
                              ", v = " + format_value(variation_budget));
    const int n = static_cast<int>(std::floor(std::log2(variation_budget / t)));
    BinaryMatrix code = balanced_gray_code(n);
    const std::size_t grid = code.rows();  // 2^n

    ShatteredFamily fam;
    fam.table.values.assign(static_cast<std::size_t>(n), std::vector<double>(grid));
    fam.table.columns.reserve(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        fam.table.columns.push_back(
            make_point(static_cast<double>(j + 1) / static_cast<double>(grid)));
        for (int i = 0; i < n; ++i)
            fam.table.values[static_cast<std::size_t>(i)][j] = code.entries[j][i] ? t : -t;
    }

    fam.certificate.shattered_indices.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        fam.certificate.shattered_indices[static_cast<std::size_t>(i)] =
            static_cast<std::uint32_t>(i);
    fam.certificate.offsets.assign(static_cast<std::size_t>(n), 0.0);
    fam.certificate.witnesses.assign(1u << n, 0);
    for (std::size_t j = 0; j < grid; ++j) {
        std::uint32_t pattern = 0;
        for (int i = 0; i < n; ++i)
            if (code.entries[j][i]) pattern |= 1u << i;
        fam.certificate.witnesses[pattern] = static_cast<std::uint32_t>(j);
    }
    return fam;
}

ShatteredFamily lipschitz_shattered_family(const std::vector<Point>& packing,
                                           double lipschitz_constant, double t) {
    if (!(t > 0.0)) throw InvalidArgument("margin must be positive");
    if (!(lipschitz_constant > 0.0)) throw InvalidArgument("Lipschitz constant must be positive");
    if (packing.size() < 2) throw InvalidArgument("packing needs at least two points");
    const double separation = 2.0 * t / lipschitz_constant;
    for (std::size_t a = 0; a < packing.size(); ++a)
        for (std::size_t b = a + 1; b < packing.size(); ++b)
            if (euclidean_distance(packing[a], packing[b]) < separation - 1e-12)
                throw InvalidArgument("points " + std::to_string(a) + " and " + std::to_string(b) +
                                      " are closer than 2t/L");

    const int n = static_cast<int>(std::floor(std::log2(static_cast<double>(packing.size()))));
    const std::uint32_t patterns = 1u << n;

    ShatteredFamily fam;
    fam.table.columns = packing;
    fam.table.values.assign(static_cast<std::size_t>(n),
                            std::vector<double>(packing.size()));
    for (std::size_t j = 0; j < packing.size(); ++j) {
        std::uint32_t c = static_cast<std::uint32_t>(j) % patterns;
        for (int i = 0; i < n; ++i)
            fam.table.values[static_cast<std::size_t>(i)][j] = ((c >> i) & 1u) ? t : -t;
    }

    fam.certificate.shattered_indices.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        fam.certificate.shattered_indices[static_cast<std::size_t>(i)] =
            static_cast<std::uint32_t>(i);
    fam.certificate.offsets.assign(static_cast<std::size_t>(n), 0.0);
    fam.certificate.witnesses.resize(patterns);
    for (std::uint32_t p = 0; p < patterns; ++p) fam.certificate.witnesses[p] = p;
    return fam;
}

namespace {

using RowMask = std::vector<std::uint64_t>;

RowMask make_mask(std::size_t rows) { return RowMask((rows + 63) / 64, 0); }

void set_bit(RowMask& m, std::size_t i) { m[i / 64] |= 1ULL << (i % 64); }

bool intersect_nonempty(const std::vector<const RowMask*>& masks, std::size_t words) {
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = ~0ULL;
        for (const RowMask* m : masks) acc &= (*m)[w];
        if (acc) return true;
    }
    return false;
}

// One admissible offset for a column: the rows it sends high (>= r + t) and
// low (<= r - t). Distinct offsets inducing the same split are redundant.
struct ColumnSplit {
    double offset;
    RowMask high;
    RowMask low;
};

std::vector<ColumnSplit> column_splits(const FunctionTable& table, std::uint32_t col, double t) {
    std::vector<double> values;
    values.reserve(table.rows());
    for (std::size_t u = 0; u < table.rows(); ++u) values.push_back(table.values[u][col]);

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<double> candidates;
    for (std::size_t a = 0; a < sorted.size(); ++a)
        for (std::size_t b = a; b < sorted.size(); ++b)
            candidates.push_back(0.5 * (sorted[a] + sorted[b]));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<ColumnSplit> splits;
    std::vector<std::pair<RowMask, RowMask>> seen;
    for (double r : candidates) {
        ColumnSplit s{r, make_mask(values.size()), make_mask(values.size())};
        bool any_high = false, any_low = false;
        for (std::size_t u = 0; u < values.size(); ++u) {
            if (values[u] >= r + t) {
                set_bit(s.high, u);
                any_high = true;
            } else if (values[u] <= r - t) {
                set_bit(s.low, u);
                any_low = true;
            }
        }
        if (!any_high || !any_low) continue;  // both signs must be realizable
        bool duplicate = false;
        for (const auto& p : seen)
            if (p.first == s.high && p.second == s.low) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        seen.emplace_back(s.high, s.low);
        splits.push_back(std::move(s));
    }
    return splits;
}

// Finds witnesses for every sign pattern given a fixed split per candidate
// column; nullopt when some pattern has no realizing row.
std::optional<std::vector<std::uint32_t>> pattern_witnesses(
    const std::vector<const ColumnSplit*>& chosen, std::size_t rows) {
    const std::size_t k = chosen.size();
    const std::size_t words = (rows + 63) / 64;
    std::vector<std::uint32_t> witnesses;
    witnesses.reserve(1u << k);
    std::vector<const RowMask*> masks(k);
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
        for (std::size_t i = 0; i < k; ++i)
            masks[i] = ((pattern >> i) & 1u) ? &chosen[i]->high : &chosen[i]->low;
        std::uint32_t witness = 0;
        bool found = false;
        for (std::size_t w = 0; w < words && !found; ++w) {
            std::uint64_t acc = ~0ULL;
            for (const RowMask* m : masks) acc &= (*m)[w];
            if (acc) {
                witness = static_cast<std::uint32_t>(w * 64 +
                                                     static_cast<std::size_t>(__builtin_ctzll(acc)));
                found = true;
            }
        }
        if (!found) return std::nullopt;
        witnesses.push_back(witness);
    }
    return witnesses;
}

std::optional<ShatteringCertificate> shattered_search(
    const FunctionTable& table, const std::vector<std::uint32_t>& candidates, double t,
    const std::optional<std::vector<double>>& offsets, std::size_t* budget) {
    const std::size_t k = candidates.size();
    if (k > 20) throw InvalidArgument("candidate sets above 20 columns are not searchable");
    for (std::uint32_t c : candidates)
        if (c >= table.cols()) throw InvalidArgument("candidate column out of range");
    if (offsets && offsets->size() != k)
        throw InvalidArgument("offset count does not match candidate count");

    if (k == 0) return ShatteringCertificate{};  // one empty pattern, nothing to witness

    // Per-column admissible splits; with fixed offsets there is exactly one
    // split to try per column.
    std::vector<std::vector<ColumnSplit>> splits(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (offsets) {
            double r = (*offsets)[i];
            ColumnSplit s{r, make_mask(table.rows()), make_mask(table.rows())};
            for (std::size_t u = 0; u < table.rows(); ++u) {
                double v = table.values[u][candidates[i]];
                if (v >= r + t)
                    set_bit(s.high, u);
                else if (v <= r - t)
                    set_bit(s.low, u);
            }
            splits[i].push_back(std::move(s));
        } else {
            splits[i] = column_splits(table, candidates[i], t);
        }
        if (splits[i].empty()) return std::nullopt;
    }

    // Odometer over the split choices, cheapest-feasibility order.
    std::vector<std::size_t> pick(k, 0);
    std::vector<const ColumnSplit*> chosen(k);
    while (true) {
        if (budget) {
            if (*budget == 0)
                throw BudgetError("shattering search budget exhausted", -1);
            --*budget;
        }
        for (std::size_t i = 0; i < k; ++i) chosen[i] = &splits[i][pick[i]];
        if (auto witnesses = pattern_witnesses(chosen, table.rows())) {
            ShatteringCertificate cert;
            cert.shattered_indices = candidates;
            cert.offsets.reserve(k);
            for (const ColumnSplit* s : chosen) cert.offsets.push_back(s->offset);
            cert.witnesses = std::move(*witnesses);
            return cert;
        }
        std::size_t i = 0;
        while (i < k && ++pick[i] == splits[i].size()) {
            pick[i] = 0;
            ++i;
        }
        if (i == k) return std::nullopt;
    }
}

}  // namespace

std::optional<ShatteringCertificate> is_t_shattered(
    const FunctionTable& table, const std::vector<std::uint32_t>& candidate_columns, double t,
    const std::optional<std::vector<double>>& offsets) {
    table.validate();
    if (!(t > 0.0)) throw InvalidArgument("margin must be positive");
    return shattered_search(table, candidate_columns, t, offsets, nullptr);
}

int fat_shattering_dim(const FunctionTable& table, double t, int k_max,
                       std::size_t node_budget) {
    table.validate();
    if (!(t > 0.0)) throw InvalidArgument("margin must be positive");
    if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");

    const std::size_t cols = table.cols();
    std::size_t budget = node_budget;
    int best = 0;

    // Shatterability is downward closed, so grow shattered sets one column at
    // a time, extending only past the largest member to visit each set once.
    std::vector<std::vector<std::uint32_t>> frontier{{}};
    for (int k = 1; k <= k_max && !frontier.empty(); ++k) {
        std::vector<std::vector<std::uint32_t>> next;
        for (const auto& base : frontier) {
            std::uint32_t start = base.empty() ? 0 : base.back() + 1;
            for (std::uint32_t c = start; c < cols; ++c) {
                std::vector<std::uint32_t> candidate(base);
                candidate.push_back(c);
                bool shattered = false;
                try {
                    shattered =
                        shattered_search(table, candidate, t, std::nullopt, &budget).has_value();
                } catch (const BudgetError&) {
                    throw BudgetError("fat-shattering search budget exhausted; best k found = " +
                                          std::to_string(best),
                                      best);
                }
                if (shattered) {
                    best = k;
                    next.push_back(std::move(candidate));
                }
            }
        }
        frontier = std::move(next);
    }
    return best;
}

Packing packing_number_greedy(const std::vector<Point>& points, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("packing radius must be positive");
    Packing out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        validate_point(points[i]);
        bool separated = true;
        for (const Point& kept : out.points)
            if (euclidean_distance(points[i], kept) < eps) {
                separated = false;
                break;
            }
        if (separated) {
            out.indices.push_back(static_cast<std::uint32_t>(i));
            out.points.push_back(points[i]);
        }
    }
    return out;
}

}  // namespace medcompress
