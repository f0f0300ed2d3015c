#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ncbcast {

/// GF(2^g), 1 <= g <= 32. Elements are unsigned integers below 2^g;
/// arithmetic is shift-and-reduce, so no tables are needed for large g.
struct FieldSpec {
    int g = 1;
    std::uint64_t poly = 0b11; // irreducible polynomial, leading term included

    std::uint32_t order_mask() const { return g == 32 ? 0xffffffffu : ((1u << g) - 1u); }

    /// Built-in vetted polynomial for the given width.
    static FieldSpec standard(int g);

    /// Custom polynomial; irreducibility is verified exhaustively for
    /// g <= 16 and accepted as-is above that.
    static FieldSpec with_poly(int g, std::uint64_t poly);
};

/// Exhaustive trial division over GF(2)[x]; intended for degree <= 20.
bool poly_irreducible(std::uint64_t poly, int degree);

std::uint32_t field_mul(std::uint32_t a, std::uint32_t b, const FieldSpec& f);
std::uint32_t field_inv(std::uint32_t a, const FieldSpec& f);
inline std::uint32_t field_add(std::uint32_t a, std::uint32_t b) { return a ^ b; }

/// Incremental rank tracker over received coding vectors: a reduced
/// row-echelon basis of the span. Payloads are not stored; completion
/// statistics only need the rank.
class DecoderState {
public:
    DecoderState(int block_size, FieldSpec field);

    int block_size() const { return m_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    int dofs_needed() const { return m_ - rank(); }

    /// Gaussian elimination against the stored pivots; returns true iff
    /// the vector was innovative (rank increased).
    bool absorb(std::span<const std::uint32_t> coding_vector);

private:
    FieldSpec field_;
    int m_;
    std::vector<std::vector<std::uint32_t>> rows_; // pivot-normalized, ascending pivot column
    std::vector<int> pivots_;
};

} // namespace ncbcast
