#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lsckit::detail {

// Minimal unsigned big integer (little-endian byte limbs). Only the
// operations needed for mixed-radix packing live here.
class ByteInt {
   public:
    ByteInt() = default;

    static ByteInt from_bytes_be(std::span<const uint8_t> be) {
        ByteInt v;
        v.b_.assign(be.rbegin(), be.rend());
        v.trim();
        return v;
    }

    bool is_zero() const { return b_.empty(); }

    // *this = *this * m + a
    void mul_add(uint32_t m, uint32_t a) {
        uint64_t carry = a;
        for (auto& limb : b_) {
            const uint64_t v = uint64_t{limb} * m + carry;
            limb = static_cast<uint8_t>(v & 0xFF);
            carry = v >> 8;
        }
        while (carry) {
            b_.push_back(static_cast<uint8_t>(carry & 0xFF));
            carry >>= 8;
        }
        trim();
    }

    // *this /= d, returns remainder. d must be nonzero.
    uint32_t divmod(uint32_t d) {
        uint64_t rem = 0;
        for (size_t i = b_.size(); i-- > 0;) {
            const uint64_t cur = (rem << 8) | b_[i];
            b_[i] = static_cast<uint8_t>(cur / d);
            rem = cur % d;
        }
        trim();
        return static_cast<uint32_t>(rem);
    }

    void decrement() {  // requires *this > 0
        for (auto& limb : b_) {
            if (limb-- != 0) break;
        }
        trim();
    }

    size_t bit_length() const {
        if (b_.empty()) return 0;
        uint8_t top = b_.back();
        size_t bits = (b_.size() - 1) * 8;
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    /// Fixed-width big-endian serialization; value must fit.
    std::vector<uint8_t> to_bytes_be(size_t width) const {
        std::vector<uint8_t> out(width, 0);
        for (size_t i = 0; i < b_.size(); ++i) out[width - 1 - i] = b_[i];
        return out;
    }

    size_t byte_length() const { return b_.size(); }

   private:
    void trim() {
        while (!b_.empty() && b_.back() == 0) b_.pop_back();
    }

    std::vector<uint8_t> b_;
};

/// ceil(log2(q^e)) computed exactly.
inline size_t pow_ceil_log2(uint32_t q, size_t e) {
    if (e == 0) return 0;
    ByteInt v;
    v.mul_add(1, 1);  // v = 1
    for (size_t i = 0; i < e; ++i) v.mul_add(q, 0);
    v.decrement();  // ceil(log2 x) = bit_length(x - 1) for x >= 1
    return v.bit_length();
}

}  // namespace lsckit::detail
