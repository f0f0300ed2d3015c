#include "ncbcast/galois.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace ncbcast {

namespace {

// One irreducible polynomial per width, bitmask with the leading term.
// Entries are standard low-weight irreducibles from LFSR/coding tables;
// the constructor re-verifies every width we can afford to check.
constexpr std::array<std::uint64_t, 33> kStandardPoly = {
    0,
    (1ull << 1) | 0b1,                                             // x + 1
    (1ull << 2) | 0b011,                                           // x^2+x+1
    (1ull << 3) | 0b011,                                           // x^3+x+1
    (1ull << 4) | 0b0011,                                          // x^4+x+1
    (1ull << 5) | 0b00101,                                         // x^5+x^2+1
    (1ull << 6) | 0b000011,                                        // x^6+x+1
    (1ull << 7) | 0b0000011,                                       // x^7+x+1
    (1ull << 8) | 0x1D,                                            // x^8+x^4+x^3+x^2+1
    (1ull << 9) | 0x011,                                           // x^9+x^4+1
    (1ull << 10) | 0x009,                                          // x^10+x^3+1
    (1ull << 11) | 0x005,                                          // x^11+x^2+1
    (1ull << 12) | 0x053,                                          // x^12+x^6+x^4+x+1
    (1ull << 13) | 0x01B,                                          // x^13+x^4+x^3+x+1
    (1ull << 14) | 0x443,                                          // x^14+x^10+x^6+x+1
    (1ull << 15) | 0x003,                                          // x^15+x+1
    (1ull << 16) | 0x100B,                                         // x^16+x^12+x^3+x+1
    (1ull << 17) | 0x00009,                                        // x^17+x^3+1
    (1ull << 18) | 0x00081,                                        // x^18+x^7+1
    (1ull << 19) | 0x00027,                                        // x^19+x^5+x^2+x+1
    (1ull << 20) | 0x00009,                                        // x^20+x^3+1
    (1ull << 21) | 0x000005,                                       // x^21+x^2+1
    (1ull << 22) | 0x000003,                                       // x^22+x+1
    (1ull << 23) | 0x000021,                                       // x^23+x^5+1
    (1ull << 24) | 0x000087,                                       // x^24+x^7+x^2+x+1
    (1ull << 25) | 0x0000009,                                      // x^25+x^3+1
    (1ull << 26) | 0x0000047,                                      // x^26+x^6+x^2+x+1
    (1ull << 27) | 0x0000027,                                      // x^27+x^5+x^2+x+1
    (1ull << 28) | 0x0000009,                                      // x^28+x^3+1
    (1ull << 29) | 0x00000005,                                     // x^29+x^2+1
    (1ull << 30) | 0x00000053,                                     // x^30+x^6+x^4+x+1
    (1ull << 31) | 0x00000009,                                     // x^31+x^3+1
    (1ull << 32) | 0x00400007,                                     // x^32+x^22+x^2+x+1
};

int poly_degree(std::uint64_t poly) {
    return poly == 0 ? -1 : 63 - std::countl_zero(poly);
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    const int dm = poly_degree(m);
    for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) a ^= m << (d - dm);
    return a;
}

} // namespace

bool poly_irreducible(std::uint64_t poly, int degree) {
    if (degree < 1 || poly_degree(poly) != degree) return false;
    if (degree == 1) return true;
    if ((poly & 1) == 0) return false; // divisible by x
    for (int d = 1; d <= degree / 2; ++d)
        for (std::uint64_t low = 0; low < (1ull << d); ++low) {
            const std::uint64_t divisor = (1ull << d) | low;
            if (poly_mod(poly, divisor) == 0) return false;
        }
    return true;
}

FieldSpec FieldSpec::standard(int g) {
    if (g < 1 || g > 32) throw std::invalid_argument("field width must be in [1,32]");
    return FieldSpec{g, kStandardPoly[static_cast<std::size_t>(g)]};
}

FieldSpec FieldSpec::with_poly(int g, std::uint64_t poly) {
    if (g < 1 || g > 32) throw std::invalid_argument("field width must be in [1,32]");
    if (poly_degree(poly) != g)
        throw std::invalid_argument("polynomial degree must equal the field width");
    if (g <= 16 && !poly_irreducible(poly, g))
        throw std::invalid_argument("polynomial of degree " + std::to_string(g) +
                                    " is not irreducible");
    return FieldSpec{g, poly};
}

std::uint32_t field_mul(std::uint32_t a, std::uint32_t b, const FieldSpec& f) {
    std::uint64_t acc = 0;
    std::uint64_t shifted = a;
    const std::uint64_t top = 1ull << f.g;
    while (b) {
        if (b & 1u) acc ^= shifted;
        b >>= 1;
        shifted <<= 1;
        if (shifted & top) shifted ^= f.poly;
    }
    return static_cast<std::uint32_t>(acc);
}

std::uint32_t field_inv(std::uint32_t a, const FieldSpec& f) {
    if (a == 0) throw std::invalid_argument("zero has no multiplicative inverse");
    // Extended Euclid over GF(2)[x]: maintain g1*a = r (mod poly).
    std::uint64_t r0 = f.poly, r1 = a;
    std::uint64_t g0 = 0, g1 = 1;
    while (r1 != 0) {
        const int shift = poly_degree(r0) - poly_degree(r1);
        if (shift < 0) {
            std::swap(r0, r1);
            std::swap(g0, g1);
            continue;
        }
        r0 ^= r1 << shift;
        g0 ^= g1 << shift;
    }
    // r0 is now the gcd, a nonzero constant (1) since poly is irreducible.
    return static_cast<std::uint32_t>(poly_mod(g0, f.poly));
}

DecoderState::DecoderState(int block_size, FieldSpec field)
    : field_(field), m_(block_size) {
    if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
}

bool DecoderState::absorb(std::span<const std::uint32_t> coding_vector) {
    if (coding_vector.size() != static_cast<std::size_t>(m_))
        throw std::invalid_argument("coding vector length must equal the block size");

    std::vector<std::uint32_t> v(coding_vector.begin(), coding_vector.end());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const std::uint32_t c = v[pivots_[r]];
        if (c == 0) continue;
        for (int j = 0; j < m_; ++j) v[j] ^= field_mul(c, rows_[r][j], field_);
    }
    int pivot = -1;
    for (int j = 0; j < m_; ++j)
        if (v[j] != 0) {
            pivot = j;
            break;
        }
    if (pivot < 0) return false;

    const std::uint32_t inv = field_inv(v[pivot], field_);
    for (int j = 0; j < m_; ++j) v[j] = field_mul(v[j], inv, field_);
    // Back-eliminate the new pivot from the stored rows to keep them reduced.
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const std::uint32_t c = rows_[r][pivot];
        if (c == 0) continue;
        for (int j = 0; j < m_; ++j) rows_[r][j] ^= field_mul(c, v[j], field_);
    }
    std::size_t pos = 0;
    while (pos < rows_.size() && pivots_[pos] < pivot) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), pivot);
    return true;
}

} // namespace ncbcast
