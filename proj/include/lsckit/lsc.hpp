#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "detail/bigint.hpp"
#include "galois.hpp"

namespace lsckit {

/// A list-source code over GF(q): block length n, list dimension k.
///
/// H is the (n-k) x n MDS parity-check matrix, D a deterministic completion
/// of its rows to a basis of GF(q)^n. The encoder publishes the syndrome
/// sigma = H x; the coset {x : H x = sigma} is the decoded list of q^k
/// candidates. The normalized list size is L = k/n.
///
/// Immutable after construction; all member operations are pure.
class LscCode {
   public:
    LscCode(const Field& field, size_t n, size_t k)
        : field_(field),
          n_(n),
          k_(k),
          h_(rs_parity_check(n, k, field)),
          d_(complete_basis(h_)),
          stacked_inv_(FqMatrix::vstack(h_, d_).inverse()) {}

    const Field& field() const { return field_; }
    size_t n() const { return n_; }
    size_t k() const { return k_; }
    const FqMatrix& parity_check() const { return h_; }
    const FqMatrix& completion() const { return d_; }

    double normalized_list_size() const { return static_cast<double>(k_) / static_cast<double>(n_); }
    double list_size_log2() const { return k_ * std::log2(static_cast<double>(field_.order())); }

    /// q^k when it fits in 64 bits.
    std::optional<uint64_t> list_size() const {
        uint64_t v = 1;
        for (size_t i = 0; i < k_; ++i) {
            if (v > UINT64_MAX / field_.order()) return std::nullopt;
            v *= field_.order();
        }
        return v;
    }

    /// sigma = H x.
    std::vector<uint32_t> encode(std::span<const uint32_t> x) const {
        if (x.size() != n_) throw LengthMismatch("source block length != n");
        return h_.mul_vec(x);
    }

    /// Coset rank of x as base-q digits of D x, most significant first.
    std::vector<uint32_t> pos_digits(std::span<const uint32_t> x) const {
        if (x.size() != n_) throw LengthMismatch("source block length != n");
        return d_.mul_vec(x);
    }

    /// Coset rank as an integer; requires q^k to fit in 64 bits.
    uint64_t pos(std::span<const uint32_t> x) const {
        return digits_to_index(pos_digits(x));
    }

    /// The unique x with H x = sigma and D x = digits, via the cached
    /// inverse of the stacked system [H; D].
    std::vector<uint32_t> coset_element(std::span<const uint32_t> sigma,
                                        std::span<const uint32_t> digits) const {
        if (sigma.size() != n_ - k_) throw LengthMismatch("syndrome length != n-k");
        if (digits.size() != k_) throw LengthMismatch("rank digit count != k");
        std::vector<uint32_t> rhs(n_);
        std::copy(sigma.begin(), sigma.end(), rhs.begin());
        std::copy(digits.begin(), digits.end(), rhs.begin() + (n_ - k_));
        return stacked_inv_.mul_vec(rhs);
    }

    std::vector<uint32_t> coset_element(std::span<const uint32_t> sigma, uint64_t index) const {
        return coset_element(sigma, index_to_digits(index));
    }

    /// Big-endian base-q digit expansion of a coset index.
    std::vector<uint32_t> index_to_digits(uint64_t index) const {
        std::vector<uint32_t> digits(k_, 0);
        const uint32_t q = field_.order();
        for (size_t i = k_; i-- > 0;) {
            digits[i] = static_cast<uint32_t>(index % q);
            index /= q;
        }
        if (index != 0) throw IndexOutOfRange("coset index >= q^k");
        return digits;
    }

    uint64_t digits_to_index(std::span<const uint32_t> digits) const {
        uint64_t v = 0;
        for (uint32_t d : digits) {
            if (v > (UINT64_MAX - d) / field_.order())
                throw IndexOutOfRange("coset index does not fit in 64 bits");
            v = v * field_.order() + d;
        }
        return v;
    }

    /// Bits needed to store one syndrome: ceil((n-k) log2 q), exact.
    size_t syndrome_bit_length() const {
        return detail::pow_ceil_log2(field_.order(), n_ - k_);
    }

   private:
    Field field_;
    size_t n_, k_;
    FqMatrix h_, d_;
    FqMatrix stacked_inv_;
};

/// Minimum achievable rate at normalized list size L (bits per symbol):
/// R(L) = H(X) - L log2 |X|.
inline double rate_list_function(double source_entropy_bits, double alphabet_size, double L) {
    if (alphabet_size < 2) throw BadParameters("alphabet size must be >= 2");
    const double log_alpha = std::log2(alphabet_size);
    if (L < 0 || L * log_alpha > source_entropy_bits + 1e-12)
        throw OutOfRange("need 0 <= L <= H(X)/log|X|");
    return source_entropy_bits - L * log_alpha;
}

/// Reference scheme: keep the first n - floor(L n) symbols, discard the rest.
/// Achieves the rate-list tradeoff but concentrates all uncertainty on the
/// suffix; used by the analysis suite as a negative example.
inline std::vector<uint32_t> trivial_prefix_encode(std::span<const uint32_t> x, double L) {
    const size_t n = x.size();
    const size_t s = static_cast<size_t>(std::floor(L * static_cast<double>(n)));
    const size_t keep = n - std::min(s, n);
    return {x.begin(), x.begin() + keep};
}

}  // namespace lsckit
