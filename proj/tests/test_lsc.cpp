#include <doctest.h>

#include <lsckit/lsc.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <vector>

using namespace lsckit;

namespace {

// Enumerates x in GF(q)^n by mixed radix.
std::vector<uint32_t> nth_tuple(size_t cell, size_t n, uint32_t q) {
    std::vector<uint32_t> x(n);
    for (size_t i = n; i-- > 0;) {
        x[i] = static_cast<uint32_t>(cell % q);
        cell /= q;
    }
    return x;
}

size_t pow_sz(uint32_t q, size_t e) {
    size_t v = 1;
    while (e--) v *= q;
    return v;
}

}  // namespace

TEST_CASE("lsc_new wires the construction together") {
    const LscCode code(Field::prime(5), 4, 2);
    CHECK(code.normalized_list_size() == doctest::Approx(0.5));
    CHECK(code.list_size() == 25);
    CHECK(code.parity_check() ==
          FqMatrix::from_rows(Field::prime(5), {{1, 1, 1, 1}, {1, 2, 3, 4}}));

    const LscCode tiny(Field::prime(2), 2, 1);
    CHECK(tiny.parity_check() == FqMatrix::from_rows(Field::prime(2), {{1, 1}}));
    CHECK(tiny.completion() == FqMatrix::from_rows(Field::prime(2), {{1, 0}}));

    CHECK_THROWS_AS(LscCode(Field::prime(5), 6, 2), BlockTooLong);
}

TEST_CASE("encode") {
    const LscCode code(Field::prime(5), 4, 2);
    const std::vector<uint32_t> zero(4, 0);
    CHECK(code.encode(zero) == std::vector<uint32_t>{0, 0});
    const std::vector<uint32_t> e0{1, 0, 0, 0};
    CHECK(code.encode(e0) == std::vector<uint32_t>{1, 1});  // first Vandermonde column
    const std::vector<uint32_t> shorter{1, 2, 3};
    CHECK_THROWS_AS(code.encode(shorter), LengthMismatch);
}

TEST_CASE("rate list function") {
    CHECK(rate_list_function(std::log2(5.0), 5, 0.5) == doctest::Approx(0.5 * std::log2(5.0)));
    CHECK(rate_list_function(1.0, 2, 0.0) == doctest::Approx(1.0));
    CHECK(rate_list_function(1.0, 2, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(rate_list_function(1.0, 2, 1.5), OutOfRange);
}

TEST_CASE("pos and coset_element are inverse bijections") {
    const LscCode code(Field::prime(5), 4, 2);

    // pos of the D-kernel representative is 0
    const auto x0 = code.coset_element(std::vector<uint32_t>{0, 0}, uint64_t{0});
    CHECK(code.pos(x0) == 0);

    // enumerate the zero-syndrome coset: exactly the 25 codewords
    const std::vector<uint32_t> zero_sigma{0, 0};
    std::set<std::vector<uint32_t>> seen;
    for (uint64_t idx = 0; idx < 25; ++idx) {
        const auto x = code.coset_element(zero_sigma, idx);
        CHECK(code.encode(x) == zero_sigma);
        CHECK(code.pos(x) == idx);
        seen.insert(x);
    }
    CHECK(seen.size() == 25);
    CHECK_THROWS_AS(code.coset_element(zero_sigma, uint64_t{25}), IndexOutOfRange);
}

TEST_CASE("round trip over the whole space") {
    for (const auto& [field, n, k] : {std::tuple{Field::prime(5), 4u, 2u},
                                      std::tuple{Field::prime(3), 3u, 1u},
                                      std::tuple{Field::binary(0x7), 4u, 2u}}) {
        const LscCode code(field, n, k);
        const size_t total = pow_sz(field.order(), n);
        for (size_t cell = 0; cell < total; ++cell) {
            const auto x = nth_tuple(cell, n, field.order());
            const auto sigma = code.encode(x);
            const auto back = code.coset_element(sigma, code.pos(x));
            CHECK(back == x);
        }
    }
}

TEST_CASE("syndromes partition the space into equal cosets") {
    const LscCode code(Field::prime(5), 4, 2);
    std::map<std::vector<uint32_t>, size_t> coset_sizes;
    for (size_t cell = 0; cell < pow_sz(5, 4); ++cell)
        ++coset_sizes[code.encode(nth_tuple(cell, 4, 5))];
    CHECK(coset_sizes.size() == 25);  // q^(n-k)
    for (const auto& [sigma, count] : coset_sizes) CHECK(count == 25);
}

TEST_CASE("MDS symbol spread: every k-projection of a coset is onto") {
    for (const auto& [field, n, k] : {std::tuple{Field::prime(5), 4u, 2u},
                                      std::tuple{Field::prime(7), 6u, 3u},
                                      std::tuple{Field::binary(0xB), 5u, 2u}}) {
        const LscCode code(field, n, k);
        const uint32_t q = field.order();
        const size_t coset = pow_sz(q, k);
        // iterate syndromes and position sets
        for (size_t scell = 0; scell < pow_sz(q, n - k); ++scell) {
            const auto sigma = nth_tuple(scell, n - k, q);
            for (uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (static_cast<size_t>(__builtin_popcount(mask)) != k) continue;
                std::set<std::vector<uint32_t>> projections;
                for (uint64_t idx = 0; idx < coset; ++idx) {
                    const auto x = code.coset_element(sigma, idx);
                    std::vector<uint32_t> proj;
                    for (size_t i = 0; i < n; ++i)
                        if (mask >> i & 1u) proj.push_back(x[i]);
                    projections.insert(proj);
                }
                CHECK(projections.size() == coset);
            }
            if (scell > 3 && n >= 6) break;  // full syndrome sweep only for the small codes
        }
    }
}

TEST_CASE("trivial prefix reference scheme") {
    const std::vector<uint32_t> x{1, 2, 3, 4};
    CHECK(trivial_prefix_encode(x, 0.5) == std::vector<uint32_t>{1, 2});
    CHECK(trivial_prefix_encode(x, 0.0) == x);
    CHECK(trivial_prefix_encode(x, 1.0) == std::vector<uint32_t>{});
}

TEST_CASE("syndrome bit length accounting") {
    const LscCode byte_code(Field::binary(0x11B), 16, 4);
    CHECK(byte_code.syndrome_bit_length() == 12 * 8);
    const LscCode gf5(Field::prime(5), 4, 2);
    // ceil(2 log2 5) = ceil(4.64) = 5
    CHECK(gf5.syndrome_bit_length() == 5);
}
