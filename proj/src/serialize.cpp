#include "medcompress/serialize.hpp"

#include <gmp.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace medcompress {

void BitString::push_bit(bool b) {
    if (bit_count % 8 == 0) bytes.push_back(0);
    if (b) bytes.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count % 8));
    ++bit_count;
}

bool BitString::bit(std::size_t i) const {
    return (bytes[i / 8] >> (7 - i % 8)) & 1u;
}

namespace {

// Total order on doubles by IEEE bit pattern, consistent with < on ordinary
// values and deterministic on -0.0 vs +0.0. NaN never reaches here (points
// are validated finite).
std::uint64_t order_key(double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, sizeof(u));
    return (u & 0x8000000000000000ULL) ? ~u : (u | 0x8000000000000000ULL);
}

std::vector<std::uint64_t> point_key(const LabeledPoint& p) {
    std::vector<std::uint64_t> k;
    k.reserve(p.point.coords.size() + 1);
    for (double c : p.point.coords) k.push_back(order_key(c));
    k.push_back(order_key(p.label));
    return k;
}

// Positions of `points` in canonical sorted order; stable, so equal points
// keep their relative order and the inverse permutation is canonical too.
std::vector<std::uint32_t> canonical_order(const std::vector<LabeledPoint>& points) {
    std::vector<std::vector<std::uint64_t>> keys;
    keys.reserve(points.size());
    for (const auto& p : points) keys.push_back(point_key(p));
    std::vector<std::uint32_t> order(points.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
    return order;
}

// Fenwick tree over marked slots: rank of a position among marked slots,
// select of the r-th marked slot, and unmark. Backs the Lehmer coding.
class MarkTree {
public:
    explicit MarkTree(std::size_t n) : n_(n), tree_(n + 1, 0) {
        for (std::size_t i = 1; i <= n_; ++i) {
            tree_[i] += 1;
            std::size_t j = i + (i & (~i + 1));
            if (j <= n_) tree_[j] += tree_[i];
        }
        log_step_ = 1;
        while ((log_step_ << 1) <= n_) log_step_ <<= 1;
    }

    // marked slots strictly before 0-based position i
    std::uint64_t rank(std::size_t i) const {
        std::uint64_t s = 0;
        for (std::size_t j = i; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

    void unmark(std::size_t i) {
        for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] -= 1;
    }

    // 0-based position of the r-th (0-based) marked slot
    std::size_t select(std::uint64_t r) const {
        std::uint64_t need = r + 1;
        std::size_t pos = 0;
        for (std::size_t step = log_step_; step > 0; step >>= 1) {
            std::size_t next = pos + step;
            if (next <= n_ && tree_[next] < need) {
                pos = next;
                need -= tree_[next];
            }
        }
        return pos;
    }

private:
    std::size_t n_;
    std::vector<std::uint32_t> tree_;
    std::size_t log_step_ = 1;
};

class Mpz {
public:
    Mpz() { mpz_init(z); }
    ~Mpz() { mpz_clear(z); }
    Mpz(const Mpz&) = delete;
    Mpz& operator=(const Mpz&) = delete;
    mpz_t z;
};

// Lehmer digits of the permutation (digit i is the rank of pi[i] among the
// slots not yet used), packed into one factorial-number-system integer.
void permutation_to_mpz(const std::vector<std::uint32_t>& pi, mpz_t out) {
    const std::size_t k = pi.size();
    MarkTree marks(k);
    mpz_set_ui(out, 0);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t digit = marks.rank(pi[i]);
        marks.unmark(pi[i]);
        if (i > 0) mpz_mul_ui(out, out, static_cast<unsigned long>(k - i));
        mpz_add_ui(out, out, static_cast<unsigned long>(digit));
    }
}

std::vector<std::uint32_t> mpz_to_permutation(const mpz_t index, std::size_t k) {
    std::vector<unsigned long> digits(k, 0);
    Mpz n;
    mpz_set(n.z, index);
    for (std::size_t i = k; i-- > 0;) {
        unsigned long divisor = static_cast<unsigned long>(k - i);
        digits[i] = mpz_fdiv_q_ui(n.z, n.z, divisor);  // returns the remainder
    }
    MarkTree marks(k);
    std::vector<std::uint32_t> pi(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t slot = marks.select(digits[i]);
        marks.unmark(slot);
        pi[i] = static_cast<std::uint32_t>(slot);
    }
    return pi;
}

BitString encode_side_info(const std::vector<std::uint32_t>& group_sizes,
                           const std::vector<LabeledPoint>& points) {
    BitString bits;
    for (std::uint32_t s : group_sizes) {
        for (std::uint32_t i = 0; i < s; ++i) bits.push_bit(true);
        bits.push_bit(false);
    }
    const std::size_t k = points.size();
    std::vector<std::uint32_t> order = canonical_order(points);
    std::vector<std::uint32_t> pi(k);  // training position i holds sorted slot pi[i]
    for (std::uint32_t slot = 0; slot < k; ++slot) pi[order[slot]] = slot;

    Mpz index;
    permutation_to_mpz(pi, index.z);
    const std::size_t width = permutation_index_bits(k);
    for (std::size_t b = 0; b < width; ++b)
        bits.push_bit(mpz_tstbit(index.z, static_cast<mp_bitcnt_t>(width - 1 - b)) != 0);
    return bits;
}

struct SideInfo {
    std::vector<std::uint32_t> group_sizes;
    std::vector<std::uint32_t> pi;  // training position -> sorted slot
};

SideInfo decode_side_info(const BitString& bits, std::size_t n, std::size_t k) {
    SideInfo out;
    std::size_t pos = 0;
    for (std::size_t g = 0; g < n; ++g) {
        std::uint32_t size = 0;
        while (pos < bits.bit_count && bits.bit(pos)) {
            ++size;
            ++pos;
        }
        if (pos >= bits.bit_count) throw DecodeError("side info ran out inside group sizes");
        ++pos;  // the terminating zero
        if (size == 0) throw DecodeError("side info declares an empty group");
        out.group_sizes.push_back(size);
    }
    std::size_t declared = 0;
    for (std::uint32_t s : out.group_sizes) declared += s;
    if (declared != k)
        throw DecodeError("group sizes sum to " + std::to_string(declared) +
                          " but the set holds " + std::to_string(k) + " points");
    const std::size_t width = permutation_index_bits(k);
    if (bits.bit_count - pos != width)
        throw DecodeError("side info bit count inconsistent with point count");

    Mpz index;
    for (std::size_t b = 0; b < width; ++b)
        if (bits.bit(pos + b))
            mpz_setbit(index.z, static_cast<mp_bitcnt_t>(width - 1 - b));
    if (k >= 2) {
        Mpz fact;
        mpz_fac_ui(fact.z, static_cast<unsigned long>(k));
        if (mpz_cmp(index.z, fact.z) >= 0)
            throw DecodeError("permutation index out of range");
    }
    out.pi = mpz_to_permutation(index.z, k);
    return out;
}

// --- byte stream helpers (little-endian) ---

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, sizeof(u));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

class ByteReader {
public:
    ByteReader(const std::vector<std::uint8_t>& bytes, std::size_t limit)
        : bytes_(bytes), limit_(limit) {}

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        double d;
        std::memcpy(&d, &u, sizeof(d));
        return d;
    }
    std::vector<std::uint8_t> raw(std::size_t count) {
        need(count);
        std::vector<std::uint8_t> out(bytes_.begin() + pos_, bytes_.begin() + pos_ + count);
        pos_ += count;
        return out;
    }
    std::size_t position() const { return pos_; }
    bool exhausted() const { return pos_ == limit_; }

private:
    void need(std::size_t count) {
        if (pos_ + count > limit_) throw DecodeError("serialized compression set is truncated");
    }
    const std::vector<std::uint8_t>& bytes_;
    std::size_t limit_;
    std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'M', 'C', 'S', 'C'};
constexpr std::uint16_t kVersion = 1;

}  // namespace medcompress::{anonymous}

bool CompressionSet::equal_points(const CompressionSet& other) const {
    if (points.size() != other.points.size()) return false;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (point_key(points[i]) != point_key(other.points[i])) return false;
    return true;
}

std::size_t permutation_index_bits(std::size_t k) {
    if (k < 2) return 0;
    Mpz fact;
    mpz_fac_ui(fact.z, static_cast<unsigned long>(k));
    std::size_t bits = mpz_sizeinbase(fact.z, 2);
    // sizeinbase gives floor(log2)+1; exact powers of two need one bit less
    if (mpz_popcount(fact.z) == 1) bits -= 1;
    return bits;
}

CompressionSet make_compression_set(
    SchemeMeta meta, const std::vector<std::vector<LabeledPoint>>& groups,
    std::optional<std::vector<std::vector<std::uint32_t>>> source_groups) {
    if (groups.empty()) throw InvalidArgument("compression set needs at least one group");
    if (meta.erm_id.empty()) throw InvalidArgument("compression set needs an erm id");
    if (!(std::isfinite(meta.eta) && std::isfinite(meta.gamma)))
        throw InvalidArgument("compression set needs finite eta and gamma");

    CompressionSet cs;
    cs.meta = std::move(meta);
    std::size_t dim = 0;
    for (const auto& g : groups) {
        if (g.empty()) throw InvalidArgument("compression set group is empty");
        cs.group_sizes.push_back(static_cast<std::uint32_t>(g.size()));
        for (const auto& p : g) {
            validate_point(p.point);
            if (dim == 0) dim = p.point.coords.size();
            if (p.point.coords.size() != dim)
                throw InvalidArgument("compression set points have mixed dimensions");
            if (!std::isfinite(p.label)) throw InvalidArgument("label is not finite");
            cs.points.push_back(p);
        }
    }
    if (source_groups) {
        if (source_groups->size() != groups.size())
            throw InvalidArgument("source group count mismatch");
        for (std::size_t j = 0; j < groups.size(); ++j)
            if ((*source_groups)[j].size() != groups[j].size())
                throw InvalidArgument("source group size mismatch");
        cs.source_groups = std::move(source_groups);
    }
    cs.side_info = encode_side_info(cs.group_sizes, cs.points);
    return cs;
}

std::vector<std::uint8_t> serialize(const CompressionSet& cs) {
    const std::size_t n = cs.group_count();
    const std::size_t k = cs.total_examples();
    if (n == 0 || k == 0) throw InvalidArgument("refusing to serialize an empty compression set");
    std::size_t declared = 0;
    for (std::uint32_t s : cs.group_sizes) {
        if (s == 0) throw InvalidArgument("refusing to serialize an empty group");
        declared += s;
    }
    if (declared != k) throw InvalidArgument("group sizes do not cover the stored points");
    if (cs.side_info.bit_count != k + n + permutation_index_bits(k))
        throw InvalidArgument("side info does not match the stored points; "
                              "compression sets must come from make_compression_set");
    const std::size_t dim = cs.points.front().point.coords.size();
    for (const auto& p : cs.points)
        if (p.point.coords.size() != dim)
            throw InvalidArgument("compression set points have mixed dimensions");
    if (cs.meta.version != kVersion)
        throw InvalidArgument("unsupported format version " + std::to_string(cs.meta.version));

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, cs.meta.version);
    out.push_back(static_cast<std::uint8_t>(cs.meta.task));
    put_u16(out, static_cast<std::uint16_t>(dim));
    put_f64(out, cs.meta.eta);
    put_f64(out, cs.meta.gamma);
    put_u32(out, static_cast<std::uint32_t>(cs.meta.erm_id.size()));
    out.insert(out.end(), cs.meta.erm_id.begin(), cs.meta.erm_id.end());
    put_u32(out, static_cast<std::uint32_t>(n));
    put_u32(out, static_cast<std::uint32_t>(k));

    // the examples as a canonically sorted multiset; order lives in side_info
    for (std::uint32_t idx : canonical_order(cs.points)) {
        const auto& p = cs.points[idx];
        for (double c : p.point.coords) put_f64(out, c);
        put_f64(out, p.label);
    }

    put_u32(out, static_cast<std::uint32_t>(cs.side_info.bit_count));
    out.insert(out.end(), cs.side_info.bytes.begin(), cs.side_info.bytes.end());

    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size())));
    put_u32(out, crc);
    return out;
}

CompressionSet deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8) throw DecodeError("serialized compression set is truncated");
    std::uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i)
        stored_crc |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
    std::uint32_t computed = static_cast<std::uint32_t>(crc32(
        0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size() - 4)));
    if (stored_crc != computed) throw DecodeError("checksum mismatch");

    ByteReader in(bytes, bytes.size() - 4);
    auto magic = in.raw(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw DecodeError("bad magic");
    std::uint16_t version = in.u16();
    if (version != kVersion)
        throw DecodeError("unsupported format version " + std::to_string(version));
    std::uint8_t task_byte = in.u8();
    if (task_byte > 1) throw DecodeError("bad task kind");
    std::uint16_t dim = in.u16();
    if (dim == 0) throw DecodeError("point dimension is zero");
    double eta = in.f64();
    double gamma = in.f64();
    if (!std::isfinite(eta) || !std::isfinite(gamma))
        throw DecodeError("eta/gamma are not finite");
    std::uint32_t id_len = in.u32();
    auto id_bytes = in.raw(id_len);
    std::uint32_t n = in.u32();
    std::uint32_t k = in.u32();
    if (n == 0 || k == 0 || n > k) throw DecodeError("bad group/point counts");

    std::vector<LabeledPoint> sorted;
    sorted.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        LabeledPoint p;
        p.point.coords.resize(dim);
        for (std::uint16_t d = 0; d < dim; ++d) p.point.coords[d] = in.f64();
        p.label = in.f64();
        for (double c : p.point.coords)
            if (!std::isfinite(c)) throw DecodeError("stored coordinate is not finite");
        if (!std::isfinite(p.label)) throw DecodeError("stored label is not finite");
        sorted.push_back(std::move(p));
    }

    std::uint32_t bit_count = in.u32();
    BitString side;
    side.bit_count = bit_count;
    side.bytes = in.raw((bit_count + 7) / 8);
    for (std::size_t b = bit_count; b < side.bytes.size() * 8; ++b)
        if ((side.bytes[b / 8] >> (7 - b % 8)) & 1u)
            throw DecodeError("nonzero padding in side info");
    if (!in.exhausted()) throw DecodeError("trailing bytes after side info");

    SideInfo info = decode_side_info(side, n, k);

    CompressionSet cs;
    cs.meta.version = version;
    cs.meta.task = static_cast<TaskKind>(task_byte);
    cs.meta.eta = eta;
    cs.meta.gamma = gamma;
    cs.meta.erm_id.assign(id_bytes.begin(), id_bytes.end());
    cs.group_sizes = std::move(info.group_sizes);
    cs.points.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) cs.points[i] = sorted[info.pi[i]];
    cs.side_info = std::move(side);
    return cs;
}

}  // namespace medcompress
