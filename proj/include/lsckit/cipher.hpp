#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "detail/bigint.hpp"
#include "lsc.hpp"

namespace lsckit {

namespace detail {

inline uint32_t crc32_ieee(std::span<const uint8_t> data) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int b = 0; b < 8; ++b) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = 0xFFFFFFFFu;
    for (uint8_t byte : data) crc = table[(crc ^ byte) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

inline uint64_t fnv1a64(std::span<const uint8_t> data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint8_t b : data) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline size_t floor_log2(uint32_t q) {
    size_t b = 0;
    while ((uint64_t{1} << (b + 1)) <= q) ++b;
    return b;
}

// Packs `digits` (base q, most significant first) into a fixed-width
// big-endian byte field of ceil(ceil(e log2 q) / 8) bytes.
inline void pack_radix(std::span<const uint32_t> digits, uint32_t q, std::span<uint8_t> out) {
    ByteInt v;
    for (uint32_t d : digits) v.mul_add(q, d);
    const auto bytes = v.to_bytes_be(out.size());
    std::copy(bytes.begin(), bytes.end(), out.begin());
}

inline std::vector<uint32_t> unpack_radix(std::span<const uint8_t> in, uint32_t q, size_t count) {
    ByteInt v = ByteInt::from_bytes_be(in);
    std::vector<uint32_t> digits(count);
    for (size_t i = count; i-- > 0;) digits[i] = v.divmod(q);
    if (!v.is_zero()) throw CorruptPhase("packed symbol field out of range");
    return digits;
}

// Chunked parallel loop over [0, count); deterministic since every block
// writes disjoint preallocated output. The first worker exception is
// rethrown on the calling thread.
template <typename Fn>
void parallel_blocks(size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count < 2 * threads) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const size_t lo = t * chunk;
        const size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &errors, t] {
            try {
                for (size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Per-block key for the position-masking cipher: an integer in [0, q^k)
/// stored as base-q digits (most significant first). Byte keys are reduced
/// big-endian: the key bytes are read as one big-endian integer mod q^k.
struct LscKey {
    std::vector<uint32_t> digits;

    static LscKey from_bytes(const LscCode& code, std::span<const uint8_t> key) {
        if (key.empty()) throw BadKey("key bytes must be nonempty");
        detail::ByteInt v = detail::ByteInt::from_bytes_be(key);
        const uint32_t q = code.field().order();
        std::vector<uint32_t> digits(code.k());
        for (size_t i = code.k(); i-- > 0;) digits[i] = v.divmod(q);
        return {std::move(digits)};
    }

    static LscKey from_index(const LscCode& code, uint64_t index) {
        return {code.index_to_digits(index)};
    }
};

namespace detail {

// (a + b) mod q^k and (a - b) mod q^k on big-endian digit vectors.
inline std::vector<uint32_t> digits_add(std::span<const uint32_t> a, std::span<const uint32_t> b,
                                        uint32_t q) {
    std::vector<uint32_t> out(a.size());
    uint32_t carry = 0;
    for (size_t i = a.size(); i-- > 0;) {
        const uint32_t s = a[i] + b[i] + carry;
        out[i] = s % q;
        carry = s / q;
    }
    return out;
}

inline std::vector<uint32_t> digits_sub(std::span<const uint32_t> a, std::span<const uint32_t> b,
                                        uint32_t q) {
    std::vector<uint32_t> out(a.size());
    int64_t borrow = 0;
    for (size_t i = a.size(); i-- > 0;) {
        int64_t s = int64_t{a[i]} - b[i] - borrow;
        borrow = s < 0;
        if (borrow) s += q;
        out[i] = static_cast<uint32_t>(s);
    }
    return out;
}

}  // namespace detail

/// Enc(x, key) = (H x, (pos(x) + key) mod q^k).
inline std::pair<std::vector<uint32_t>, std::vector<uint32_t>> lsc_encrypt(
    const LscCode& code, std::span<const uint32_t> x, const LscKey& key) {
    if (key.digits.size() != code.k()) throw KeyOutOfRange("key has wrong digit count");
    for (uint32_t d : key.digits)
        if (d >= code.field().order()) throw KeyOutOfRange("key digit not a field element");
    auto sigma = code.encode(x);
    auto masked = detail::digits_add(code.pos_digits(x), key.digits, code.field().order());
    return {std::move(sigma), std::move(masked)};
}

/// Dec((sigma, masked), key): the unique x with H x = sigma and
/// pos(x) = (masked - key) mod q^k.
inline std::vector<uint32_t> lsc_decrypt(const LscCode& code, std::span<const uint32_t> sigma,
                                         std::span<const uint32_t> masked_pos, const LscKey& key) {
    if (key.digits.size() != code.k()) throw KeyOutOfRange("key has wrong digit count");
    const auto digits = detail::digits_sub(masked_pos, key.digits, code.field().order());
    return code.coset_element(sigma, digits);
}

/// Phase-II stream cipher choices. `strict_otp` XORs the key itself and
/// requires key length >= payload length. `counter_mixer` is a deterministic
/// test keystream for interoperability: byte_i is the low byte of
/// splitmix64(fnv1a64(key) + i). Neither carries a cryptographic claim; any
/// externally secure Enc' can be plugged in via the callback overloads.
enum class KeystreamKind : uint8_t { strict_otp = 0, counter_mixer = 1 };

inline std::vector<uint8_t> keystream_bytes(KeystreamKind kind, std::span<const uint8_t> key,
                                            size_t length) {
    if (key.empty()) throw BadKey("key bytes must be nonempty");
    std::vector<uint8_t> out(length);
    if (kind == KeystreamKind::strict_otp) {
        if (key.size() < length)
            throw KeyTooShort("strict OTP needs key length >= payload length (" +
                              std::to_string(length) + " bytes)");
        std::copy(key.begin(), key.begin() + length, out.begin());
        return out;
    }
    const uint64_t seed = detail::fnv1a64(key);
    for (size_t i = 0; i < length; ++i)
        out[i] = static_cast<uint8_t>(detail::splitmix64(seed + i) & 0xFF);
    return out;
}

/// Self-describing ciphertext container.
///
/// Layout (little-endian): magic "LSC1", version u8 = 1, field-kind u8,
/// q u32, n u16, k u16, pad-len u8, flags u8 (bit0: phase-2 present, bit1:
/// phase-1 omitted), block-count u64, CRC32 of the header bytes so far,
/// then the phase-1 stream, then the phase-2 stream. Both streams use fixed
/// per-block byte widths, so either phase is seekable by block index.
struct CipherContainer {
    static constexpr std::array<uint8_t, 4> kMagic = {'L', 'S', 'C', '1'};
    static constexpr uint8_t kVersion = 1;
    static constexpr uint8_t kFlagPhase2 = 0x01;
    static constexpr uint8_t kFlagNoPhase1 = 0x02;

    FieldKind field_kind = FieldKind::binary_ext;
    uint32_t q = 0;
    uint16_t n = 0;
    uint16_t k = 0;
    uint8_t pad_len = 0;
    uint8_t flags = 0;
    uint64_t block_count = 0;
    std::vector<uint8_t> phase1;
    std::vector<uint8_t> phase2;

    bool has_phase1() const { return !(flags & kFlagNoPhase1); }
    bool has_phase2() const { return flags & kFlagPhase2; }

    /// Phase-1 bytes per block: ceil((n-k) log2 q) bits, byte aligned.
    size_t phase1_block_bytes() const {
        return (detail::pow_ceil_log2(q, n - k) + 7) / 8;
    }

    /// Phase-2 bytes per block: ceil(k log2 q) bits, byte aligned.
    size_t phase2_block_bytes() const {
        return (detail::pow_ceil_log2(q, k) + 7) / 8;
    }

    std::vector<uint8_t> serialize() const {
        std::vector<uint8_t> out;
        out.reserve(28 + phase1.size() + phase2.size());
        auto put_u8 = [&](uint8_t v) { out.push_back(v); };
        auto put_u16 = [&](uint16_t v) {
            for (int i = 0; i < 2; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
        };
        auto put_u32 = [&](uint32_t v) {
            for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
        };
        auto put_u64 = [&](uint64_t v) {
            for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
        };
        out.insert(out.end(), kMagic.begin(), kMagic.end());
        put_u8(kVersion);
        put_u8(static_cast<uint8_t>(field_kind));
        put_u32(q);
        put_u16(n);
        put_u16(k);
        put_u8(pad_len);
        put_u8(flags);
        put_u64(block_count);
        put_u32(detail::crc32_ieee({out.data(), out.size()}));
        out.insert(out.end(), phase1.begin(), phase1.end());
        out.insert(out.end(), phase2.begin(), phase2.end());
        return out;
    }

    static CipherContainer parse(std::span<const uint8_t> bytes) {
        if (bytes.size() < 28) throw BadContainer("container truncated before header end");
        CipherContainer c;
        if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
            throw BadContainer("bad magic");
        if (bytes[4] != kVersion) throw BadContainer("unsupported container version");
        const uint8_t kind = bytes[5];
        if (kind > 1) throw BadContainer("unknown field kind");
        c.field_kind = static_cast<FieldKind>(kind);
        auto get_u32 = [&](size_t off) {
            uint32_t v = 0;
            for (int i = 0; i < 4; ++i) v |= uint32_t{bytes[off + i]} << (8 * i);
            return v;
        };
        auto get_u16 = [&](size_t off) {
            return static_cast<uint16_t>(bytes[off] | (uint16_t{bytes[off + 1]} << 8));
        };
        auto get_u64 = [&](size_t off) {
            uint64_t v = 0;
            for (int i = 0; i < 8; ++i) v |= uint64_t{bytes[off + i]} << (8 * i);
            return v;
        };
        c.q = get_u32(6);
        c.n = get_u16(10);
        c.k = get_u16(12);
        c.pad_len = bytes[14];
        c.flags = bytes[15];
        c.block_count = get_u64(16);
        if (detail::crc32_ieee(bytes.subspan(0, 24)) != get_u32(24))
            throw BadContainer("header CRC mismatch");
        if (c.n == 0 || c.k == 0 || c.k >= c.n) throw BadContainer("invalid code parameters");
        if (c.q < 2 || c.q > (uint32_t{1} << 31)) throw BadContainer("field order out of range");
        if (c.n > c.q) throw BadContainer("block length exceeds field order");
        // keep a hostile header from demanding absurd per-block widths
        if (static_cast<double>(c.n) * std::log2(static_cast<double>(c.q)) > (1 << 20))
            throw BadContainer("per-block size limit exceeded");
        size_t off = 28;
        if (c.has_phase1()) {
            const size_t len = c.phase1_block_bytes() * c.block_count;
            if (bytes.size() < off + len) throw BadContainer("phase-1 stream truncated");
            c.phase1.assign(bytes.begin() + off, bytes.begin() + off + len);
            off += len;
        }
        if (c.has_phase2()) {
            const size_t len = c.phase2_block_bytes() * c.block_count;
            if (bytes.size() < off + len) throw BadContainer("phase-2 stream truncated");
            c.phase2.assign(bytes.begin() + off, bytes.begin() + off + len);
            off += len;
        }
        if (off != bytes.size()) throw BadContainer("trailing bytes after container payload");
        return c;
    }

    Field make_field() const {
        if (field_kind == FieldKind::prime) return Field::prime(q);
        unsigned m = 0;
        while ((uint64_t{1} << m) < q) ++m;
        if ((uint64_t{1} << m) != q) throw BadContainer("extension field order is not a power of 2");
        return Field::binary(Field::default_poly(m));
    }
};

namespace detail {

// Bytes per plaintext block: each of the n symbols carries floor(log2 q)
// bits, whole bytes only.
inline size_t plaintext_block_bytes(const LscCode& code) {
    const size_t bits = code.n() * floor_log2(code.field().order());
    const size_t bytes = bits / 8;
    if (bytes == 0) throw BadParameters("code block too small to carry a byte of plaintext");
    if (bytes > 256) throw BadParameters("plaintext block exceeds the 256-byte container limit");
    return bytes;
}

// MSB-first bit packing between bytes and b-bit symbols. Bits beyond the
// byte payload are zero.
inline void bytes_to_symbols(std::span<const uint8_t> block, size_t bits_per_symbol,
                             std::span<uint32_t> symbols) {
    size_t bitpos = 0;
    const size_t total_bits = block.size() * 8;
    for (auto& s : symbols) {
        uint32_t v = 0;
        for (size_t b = 0; b < bits_per_symbol; ++b, ++bitpos) {
            v <<= 1;
            if (bitpos < total_bits) v |= (block[bitpos / 8] >> (7 - bitpos % 8)) & 1u;
        }
        s = v;
    }
}

inline void symbols_to_bytes(std::span<const uint32_t> symbols, size_t bits_per_symbol,
                             std::span<uint8_t> block) {
    std::fill(block.begin(), block.end(), uint8_t{0});
    size_t bitpos = 0;
    const size_t total_bits = block.size() * 8;
    for (uint32_t s : symbols) {
        for (size_t b = 0; b < bits_per_symbol; ++b, ++bitpos) {
            const uint32_t bit = (s >> (bits_per_symbol - 1 - b)) & 1u;
            if (bitpos < total_bits)
                block[bitpos / 8] |= static_cast<uint8_t>(bit << (7 - bitpos % 8));
        }
    }
}

inline void require_container_compatible(const LscCode& code) {
    const auto& f = code.field();
    if (f.kind() == FieldKind::binary_ext && f.poly() != Field::default_poly(f.degree()))
        throw BadParameters("containers can only describe default-polynomial extension fields");
    if (code.n() > UINT16_MAX || code.k() > UINT16_MAX)
        throw BadParameters("container stores n and k as 16-bit fields");
}

}  // namespace detail

/// Two-phase encryption: phase 1 is the key-independent syndrome stream
/// (pre-cacheable), phase 2 is Enc'(D x) over the concatenated
/// basis-completion payload. Either phase can be omitted via the flags.
inline CipherContainer two_phase_encrypt(const LscCode& code, std::span<const uint8_t> plaintext,
                                         std::span<const uint8_t> key,
                                         KeystreamKind ks = KeystreamKind::counter_mixer,
                                         bool with_phase1 = true, bool with_phase2 = true,
                                         unsigned threads = 1) {
    detail::require_container_compatible(code);
    if (!with_phase1 && !with_phase2) throw BadParameters("at least one phase must be emitted");
    const size_t pbytes = detail::plaintext_block_bytes(code);
    const size_t bsym = detail::floor_log2(code.field().order());

    CipherContainer c;
    c.field_kind = code.field().kind();
    c.q = code.field().order();
    c.n = static_cast<uint16_t>(code.n());
    c.k = static_cast<uint16_t>(code.k());
    c.flags = static_cast<uint8_t>((with_phase2 ? CipherContainer::kFlagPhase2 : 0) |
                                   (with_phase1 ? 0 : CipherContainer::kFlagNoPhase1));

    const size_t pad = (pbytes - plaintext.size() % pbytes) % pbytes;
    c.pad_len = static_cast<uint8_t>(pad);
    std::vector<uint8_t> padded(plaintext.begin(), plaintext.end());
    padded.insert(padded.end(), pad, static_cast<uint8_t>(pad));
    c.block_count = padded.size() / pbytes;

    const size_t w1 = c.phase1_block_bytes();
    const size_t w2 = c.phase2_block_bytes();
    if (with_phase1) c.phase1.assign(w1 * c.block_count, 0);
    std::vector<uint8_t> payload(with_phase2 ? w2 * c.block_count : 0, 0);

    detail::parallel_blocks(c.block_count, threads, [&](size_t blk) {
        std::vector<uint32_t> x(code.n());
        detail::bytes_to_symbols({padded.data() + blk * pbytes, pbytes}, bsym, x);
        if (with_phase1) {
            const auto sigma = code.encode(x);
            detail::pack_radix(sigma, c.q, {c.phase1.data() + blk * w1, w1});
        }
        if (with_phase2) {
            const auto t = code.pos_digits(x);
            detail::pack_radix(t, c.q, {payload.data() + blk * w2, w2});
        }
    });

    if (with_phase2) {
        const auto stream = keystream_bytes(ks, key, payload.size());
        for (size_t i = 0; i < payload.size(); ++i) payload[i] ^= stream[i];
        c.phase2 = std::move(payload);
    }
    return c;
}

/// Residual uncertainty of a phase-1-only container, as a printable q^k.
inline std::string residual_list_size(const CipherContainer& c) {
    std::string out = std::to_string(c.q) + "^" + std::to_string(c.k);
    unsigned __int128 v = 1;
    bool fits = true;
    for (uint16_t i = 0; i < c.k && fits; ++i) {
        v *= c.q;
        if (v > static_cast<unsigned __int128>(UINT64_MAX)) fits = false;
    }
    if (fits) out += " = " + std::to_string(static_cast<uint64_t>(v));
    return out;
}

inline std::vector<uint8_t> two_phase_decrypt(const CipherContainer& c, std::span<const uint8_t> key,
                                              KeystreamKind ks = KeystreamKind::counter_mixer,
                                              unsigned threads = 1) {
    if (!c.has_phase2())
        throw BadContainer("phase 2 missing; residual list size " + residual_list_size(c));
    if (!c.has_phase1()) throw BadContainer("phase 1 missing; supply the pre-cached container");
    const Field field = c.make_field();
    const LscCode code(field, c.n, c.k);
    const size_t pbytes = detail::plaintext_block_bytes(code);
    const size_t bsym = detail::floor_log2(c.q);
    const size_t w1 = c.phase1_block_bytes();
    const size_t w2 = c.phase2_block_bytes();

    std::vector<uint8_t> payload = c.phase2;
    const auto stream = keystream_bytes(ks, key, payload.size());
    for (size_t i = 0; i < payload.size(); ++i) payload[i] ^= stream[i];

    std::vector<uint8_t> padded(pbytes * c.block_count, 0);
    detail::parallel_blocks(c.block_count, threads, [&](size_t blk) {
        const auto sigma = detail::unpack_radix({c.phase1.data() + blk * w1, w1}, c.q,
                                                code.n() - code.k());
        const auto t = detail::unpack_radix({payload.data() + blk * w2, w2}, c.q, code.k());
        const auto x = code.coset_element(sigma, t);
        const uint32_t symbol_cap = uint32_t{1} << bsym;
        for (uint32_t s : x)
            if (s >= symbol_cap) throw CorruptPhase("decoded symbol outside plaintext range");
        detail::symbols_to_bytes(x, bsym, {padded.data() + blk * pbytes, pbytes});
    });

    if (c.pad_len > 0) {
        if (c.pad_len >= pbytes || padded.size() < c.pad_len)
            throw BadContainer("padding length inconsistent with block size");
        for (size_t i = padded.size() - c.pad_len; i < padded.size(); ++i)
            if (padded[i] != c.pad_len) throw CorruptPhase("padding check failed");
        padded.resize(padded.size() - c.pad_len);
    }
    return padded;
}

/// Combines a phase-1-only container with a phase-2-only container produced
/// by the same parameters (pre-caching workflow).
inline CipherContainer merge_phases(const CipherContainer& phase1_part,
                                    const CipherContainer& phase2_part) {
    if (!phase1_part.has_phase1() || phase1_part.has_phase2())
        throw BadContainer("first argument must be a phase-1-only container");
    if (!phase2_part.has_phase2() || phase2_part.has_phase1())
        throw BadContainer("second argument must be a phase-2-only container");
    if (phase1_part.q != phase2_part.q || phase1_part.n != phase2_part.n ||
        phase1_part.k != phase2_part.k || phase1_part.block_count != phase2_part.block_count ||
        phase1_part.field_kind != phase2_part.field_kind)
        throw BadContainer("phase containers disagree on parameters");
    CipherContainer c = phase1_part;
    c.flags = CipherContainer::kFlagPhase2;
    c.pad_len = phase2_part.pad_len;
    c.phase2 = phase2_part.phase2;
    return c;
}

}  // namespace lsckit
