#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ncbcast/galois.hpp"

using namespace ncbcast;

namespace {

// Independent rank oracle: fraction-free style Gaussian elimination written
// separately from DecoderState.
int naive_rank(std::vector<std::vector<std::uint32_t>> rows, const FieldSpec& f) {
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[row]);
        for (std::size_t r = row + 1; r < rows.size(); ++r) {
            if (rows[r][col] == 0) continue;
            const std::uint32_t factor =
                field_mul(rows[r][col], field_inv(rows[row][col], f), f);
            for (std::size_t c = 0; c < cols; ++c)
                rows[r][c] ^= field_mul(factor, rows[row][c], f);
        }
        ++row;
        ++rank;
    }
    return rank;
}

} // namespace

TEST_CASE("hand-reduced product in GF(16)") {
    // x * x^3 = x^4 = x + 1 under x^4 + x + 1.
    const FieldSpec f = FieldSpec::with_poly(4, 0b10011);
    CHECK(field_mul(0b0010, 0b1000, f) == 0b0011);
}

TEST_CASE("multiplicative identity and inverses") {
    for (int g : {1, 2, 4, 8, 12}) {
        const FieldSpec f = FieldSpec::standard(g);
        const std::uint32_t n = 1u << g;
        for (std::uint32_t a = 0; a < n; ++a) CHECK(field_mul(a, 1, f) == a);
        for (std::uint32_t a = 1; a < n; ++a) {
            CHECK(field_mul(a, field_inv(a, f), f) == 1);
            CHECK(field_inv(field_inv(a, f), f) == a);
        }
        CHECK(field_inv(1, f) == 1);
        CHECK_THROWS_AS(field_inv(0, f), std::invalid_argument);
    }
}

TEST_CASE("field axioms hold exhaustively in small fields") {
    for (int g : {1, 2, 3, 4}) {
        const FieldSpec f = FieldSpec::standard(g);
        const std::uint32_t n = 1u << g;
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b) {
                CHECK(field_mul(a, b, f) == field_mul(b, a, f));
                for (std::uint32_t c = 0; c < n; ++c) {
                    CHECK(field_mul(field_mul(a, b, f), c, f) ==
                          field_mul(a, field_mul(b, c, f), f));
                    CHECK(field_mul(a, field_add(b, c), f) ==
                          field_add(field_mul(a, b, f), field_mul(a, c, f)));
                }
            }
    }
}

TEST_CASE("field axioms hold on random samples in large fields") {
    for (int g : {16, 20, 32}) {
        const FieldSpec f = FieldSpec::standard(g);
        std::mt19937_64 rng(67 + g);
        std::uniform_int_distribution<std::uint32_t> pick(0, f.order_mask());
        for (int trial = 0; trial < 20000; ++trial) {
            const std::uint32_t a = pick(rng), b = pick(rng), c = pick(rng);
            CHECK(field_mul(a, b, f) == field_mul(b, a, f));
            CHECK(field_mul(field_mul(a, b, f), c, f) == field_mul(a, field_mul(b, c, f), f));
            CHECK(field_mul(a, field_add(b, c), f) ==
                  field_add(field_mul(a, b, f), field_mul(a, c, f)));
            if (a != 0) CHECK(field_mul(a, field_inv(a, f), f) == 1);
        }
    }
}

TEST_CASE("built-in polynomials are irreducible") {
    for (int g = 1; g <= 20; ++g) {
        const FieldSpec f = FieldSpec::standard(g);
        CHECK(poly_irreducible(f.poly, g));
    }
}

TEST_CASE("reducible polynomials are rejected for g <= 16") {
    // x^4 + 1 = (x+1)^4 over GF(2).
    CHECK_THROWS_AS(FieldSpec::with_poly(4, 0b10001), std::invalid_argument);
    CHECK_THROWS_AS(FieldSpec::with_poly(4, 0b10011 << 1 | 0), std::invalid_argument);
}

TEST_CASE("decoder: zero vectors and unit vectors") {
    const FieldSpec f = FieldSpec::standard(8);
    DecoderState dec(4, f);
    CHECK_FALSE(dec.absorb(std::vector<std::uint32_t>{0, 0, 0, 0}));
    CHECK(dec.rank() == 0);
    for (int j = 0; j < 4; ++j) {
        std::vector<std::uint32_t> unit(4, 0);
        unit[static_cast<std::size_t>(j)] = 1;
        CHECK(dec.absorb(unit));
    }
    CHECK(dec.rank() == 4);
    CHECK(dec.dofs_needed() == 0);
    // Anything further is dependent.
    CHECK_FALSE(dec.absorb(std::vector<std::uint32_t>{3, 1, 4, 1}));
}

TEST_CASE("decoder rank equals the independent oracle on random matrices") {
    const FieldSpec f = FieldSpec::standard(8);
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<std::uint32_t> pick(0, f.order_mask());
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<std::uint32_t>> rows(6, std::vector<std::uint32_t>(4));
        // Mix random rows with planted dependencies.
        for (auto& row : rows)
            for (auto& v : row) v = pick(rng) % (trial % 3 == 0 ? 2u : f.order_mask() + 0u);
        if (trial % 4 == 0) rows[5] = rows[0];

        DecoderState dec(4, f);
        for (const auto& row : rows) dec.absorb(row);
        CHECK(dec.rank() == naive_rank(rows, f));
    }
}

TEST_CASE("decoder rank is insensitive to arrival order") {
    const FieldSpec f = FieldSpec::standard(4);
    std::mt19937_64 rng(73);
    std::uniform_int_distribution<std::uint32_t> pick(0, f.order_mask());
    std::vector<std::vector<std::uint32_t>> rows(5, std::vector<std::uint32_t>(3));
    for (auto& row : rows)
        for (auto& v : row) v = pick(rng);

    DecoderState ordered(3, f);
    for (const auto& row : rows) ordered.absorb(row);
    for (int shuffle = 0; shuffle < 10; ++shuffle) {
        std::shuffle(rows.begin(), rows.end(), rng);
        DecoderState dec(3, f);
        for (const auto& row : rows) dec.absorb(row);
        CHECK(dec.rank() == ordered.rank());
    }
}

TEST_CASE("random vectors reach full rank at least as often as the field-size bound") {
    // P(M uniform vectors are independent) >= prod_k (1 - 2^(-g k)).
    const int M = 4;
    for (int g : {4, 8}) {
        const FieldSpec f = FieldSpec::standard(g);
        std::mt19937_64 rng(79 + g);
        std::uniform_int_distribution<std::uint32_t> pick(0, f.order_mask());
        const int runs = 20000;
        int full = 0;
        for (int r = 0; r < runs; ++r) {
            DecoderState dec(M, f);
            std::vector<std::uint32_t> v(M);
            for (int k = 0; k < M; ++k) {
                for (auto& x : v) x = pick(rng);
                dec.absorb(v);
            }
            if (dec.rank() == M) ++full;
        }
        double lower = 1.0;
        for (int k = 1; k <= M; ++k) lower *= 1.0 - std::pow(2.0, -g * k);
        const double rate = static_cast<double>(full) / runs;
        const double se = std::sqrt(lower * (1 - lower) / runs) + 1e-9;
        CHECK(rate >= lower - 3 * se);
    }
}
