#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace lsckit {

enum class FieldKind : uint8_t { prime = 0, binary_ext = 1 };

namespace detail {

// Carry-less multiply of two GF(2)[x] polynomials, reduced modulo `poly`
// (degree m, leading bit set). Operands must already be reduced.
inline uint32_t gf2_mulmod(uint32_t a, uint32_t b, uint32_t poly, unsigned m) {
    uint64_t acc = 0;
    uint64_t aa = a;
    while (b) {
        if (b & 1u) acc ^= aa;
        b >>= 1;
        aa <<= 1;
    }
    // reduce degree-(2m-2) product
    for (int bit = 2 * static_cast<int>(m) - 2; bit >= static_cast<int>(m); --bit) {
        if (acc >> bit & 1u) acc ^= static_cast<uint64_t>(poly) << (bit - m);
    }
    return static_cast<uint32_t>(acc);
}

inline unsigned poly_degree(uint32_t poly) {
    unsigned d = 0;
    while (poly >> (d + 1)) ++d;
    return d;
}

// Trial division by every GF(2)[x] polynomial of degree 1..m/2.
inline bool gf2_irreducible(uint32_t poly) {
    const unsigned m = poly_degree(poly);
    if (m == 0) return false;
    for (unsigned d = 1; 2 * d <= m; ++d) {
        for (uint32_t div = 1u << d; div < (2u << d); ++div) {
            // polynomial long division remainder
            uint64_t rem = poly;
            while (true) {
                unsigned rd = 63;
                while (rd > 0 && !(rem >> rd & 1u)) --rd;
                if (rem == 0 || rd < d) break;
                rem ^= static_cast<uint64_t>(div) << (rd - d);
            }
            if (rem == 0) return false;  // divisible -> reducible
        }
    }
    return true;
}

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

/// Runtime description of GF(q), q prime or 2^m with m <= 16.
///
/// Prime fields use modular arithmetic directly; binary extension fields
/// build log/antilog tables over a multiplicative generator, so the defining
/// polynomial does not have to be primitive (0x11B is not).
/// Cheap to copy: table storage is shared.
class Field {
   public:
    /// Default irreducible polynomial used for GF(2^m) when none is given.
    /// m = 8 is x^8+x^4+x^3+x+1 = 0x11B so field symbols coincide with bytes
    /// in their most common convention.
    static uint32_t default_poly(unsigned m) {
        static constexpr uint32_t polys[17] = {0,     0x3,   0x7,    0xB,    0x13,   0x25,
                                               0x43,  0x89,  0x11B,  0x211,  0x409,  0x805,
                                               0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};
        if (m < 1 || m > 16) throw BadParameters("no GF(2^m) support for m = " + std::to_string(m));
        return polys[m];
    }

    static Field prime(uint64_t p) {
        if (p < 2 || p > (uint64_t{1} << 31) || !detail::is_prime_u64(p))
            throw NonPrimeOrder("field order " + std::to_string(p) + " is not prime");
        return Field(FieldKind::prime, static_cast<uint32_t>(p), 0);
    }

    static Field binary(uint32_t poly) {
        const unsigned m = detail::poly_degree(poly);
        if (m < 1 || m > 16) throw BadParameters("polynomial degree must be in [1,16]");
        if (!detail::gf2_irreducible(poly))
            throw ReduciblePolynomial("polynomial 0x" + to_hex(poly) + " is reducible over GF(2)");
        return Field(FieldKind::binary_ext, 1u << m, poly);
    }

    /// Infers the kind from the order: prime -> prime field, 2^m -> binary
    /// extension with the default polynomial.
    static Field of_order(uint64_t q) {
        if (q >= 4 && (q & (q - 1)) == 0) {
            unsigned m = 0;
            while ((uint64_t{1} << m) < q) ++m;
            return binary(default_poly(m));
        }
        return prime(q);
    }

    FieldKind kind() const { return kind_; }
    uint32_t order() const { return q_; }
    uint32_t poly() const { return poly_; }
    unsigned degree() const { return kind_ == FieldKind::binary_ext ? detail::poly_degree(poly_) : 1; }

    /// Multiplicative generator backing the log/antilog tables (binary fields)
    /// and the canonical point enumeration.
    uint32_t generator() const { return gen_; }

    uint32_t add(uint32_t a, uint32_t b) const {
        return kind_ == FieldKind::prime ? (a + b) % q_ : (a ^ b);
    }

    uint32_t neg(uint32_t a) const {
        if (kind_ == FieldKind::binary_ext) return a;
        return a == 0 ? 0 : q_ - a;
    }

    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (kind_ == FieldKind::prime) return static_cast<uint32_t>(uint64_t{a} * b % q_);
        if (a == 0 || b == 0) return 0;
        const auto& t = *tables_;
        return t.exp[(t.log[a] + t.log[b]) % (q_ - 1)];
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) throw BadParameters("inverse of zero");
        if (kind_ == FieldKind::prime) return pow(a, q_ - 2);
        const auto& t = *tables_;
        return t.exp[(q_ - 1 - t.log[a]) % (q_ - 1)];
    }

    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

    uint32_t pow(uint32_t a, uint64_t e) const {
        uint32_t r = 1;
        uint32_t base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /// Canonical enumeration of evaluation points: the q-1 nonzero elements
    /// (prime fields: 1,2,...; binary fields: 1, g, g^2, ...) followed by 0,
    /// so up to q distinct points exist.
    uint32_t element_at(size_t j) const {
        if (j >= q_) throw IndexOutOfRange("element index " + std::to_string(j) + " >= field order");
        if (j == static_cast<size_t>(q_) - 1) return 0;
        if (kind_ == FieldKind::prime) return static_cast<uint32_t>(j + 1);
        return tables_->exp[j];
    }

    bool operator==(const Field& o) const {
        return kind_ == o.kind_ && q_ == o.q_ && poly_ == o.poly_;
    }

   private:
    struct Tables {
        std::vector<uint32_t> exp;  // exp[i] = g^i, i in [0, q-1)
        std::vector<uint32_t> log;  // log[exp[i]] = i
    };

    Field(FieldKind kind, uint32_t q, uint32_t poly) : kind_(kind), q_(q), poly_(poly) {
        if (kind_ == FieldKind::prime) {
            gen_ = find_prime_generator();
            return;
        }
        gen_ = find_ext_generator();
        auto t = std::make_shared<Tables>();
        t->exp.assign(q_ - 1, 0);
        t->log.assign(q_, 0);
        const unsigned m = detail::poly_degree(poly_);
        uint32_t v = 1;
        for (uint32_t i = 0; i + 1 < q_; ++i) {
            t->exp[i] = v;
            t->log[v] = i;
            v = detail::gf2_mulmod(v, gen_, poly_, m);
        }
        tables_ = std::move(t);
    }

    static std::string to_hex(uint32_t v) {
        std::ostringstream os;
        os << std::hex << v;
        return os.str();
    }

    uint32_t find_prime_generator() const {
        if (q_ == 2) return 1;
        const uint32_t phi = q_ - 1;
        std::vector<uint32_t> factors;
        uint32_t n = phi;
        for (uint32_t d = 2; uint64_t{d} * d <= n; ++d)
            while (n % d == 0) {
                if (factors.empty() || factors.back() != d) factors.push_back(d);
                n /= d;
            }
        if (n > 1) factors.push_back(n);
        for (uint32_t g = 2; g < q_; ++g) {
            bool ok = true;
            for (uint32_t f : factors)
                if (pow_mod(g, phi / f) == 1) {
                    ok = false;
                    break;
                }
            if (ok) return g;
        }
        throw Error("no generator found");  // unreachable for prime q
    }

    uint32_t pow_mod(uint32_t a, uint32_t e) const {
        uint64_t r = 1, b = a;
        while (e) {
            if (e & 1) r = r * b % q_;
            b = b * b % q_;
            e >>= 1;
        }
        return static_cast<uint32_t>(r);
    }

    uint32_t find_ext_generator() const {
        if (q_ == 2) return 1;
        const unsigned m = detail::poly_degree(poly_);
        const uint32_t phi = q_ - 1;
        std::vector<uint32_t> factors;
        uint32_t n = phi;
        for (uint32_t d = 2; uint64_t{d} * d <= n; ++d)
            while (n % d == 0) {
                if (factors.empty() || factors.back() != d) factors.push_back(d);
                n /= d;
            }
        if (n > 1) factors.push_back(n);
        for (uint32_t g = 2; g < q_; ++g) {
            bool ok = true;
            for (uint32_t f : factors) {
                uint32_t r = 1;
                for (uint32_t i = 0; i < phi / f; ++i) r = detail::gf2_mulmod(r, g, poly_, m);
                if (r == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) return g;
        }
        throw Error("no generator found");
    }

    FieldKind kind_;
    uint32_t q_;
    uint32_t poly_;
    uint32_t gen_ = 0;
    std::shared_ptr<const Tables> tables_;
};

/// Dense matrix over GF(q), row-major. All operations are exact.
class FqMatrix {
   public:
    FqMatrix(Field field, size_t rows, size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    static FqMatrix from_rows(const Field& field, const std::vector<std::vector<uint32_t>>& rows) {
        if (rows.empty()) throw BadParameters("matrix needs at least one row");
        FqMatrix m(field, rows.size(), rows.front().size());
        for (size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_) throw DimensionMismatch("ragged row list");
            for (size_t c = 0; c < m.cols_; ++c) {
                if (rows[r][c] >= field.order()) throw BadParameters("entry not a field element");
                m(r, c) = rows[r][c];
            }
        }
        return m;
    }

    static FqMatrix identity(const Field& field, size_t n) {
        FqMatrix m(field, n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    uint32_t& operator()(size_t r, size_t c) { return e_[r * cols_ + c]; }
    uint32_t operator()(size_t r, size_t c) const { return e_[r * cols_ + c]; }

    std::span<const uint32_t> row(size_t r) const { return {e_.data() + r * cols_, cols_}; }

    bool operator==(const FqMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && e_ == o.e_;
    }

    FqMatrix operator*(const FqMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product dimensions");
        if (!(field_ == o.field_)) throw DimensionMismatch("matrix product over different fields");
        FqMatrix out(field_, rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t l = 0; l < cols_; ++l) {
                const uint32_t a = (*this)(i, l);
                if (a == 0) continue;
                for (size_t j = 0; j < o.cols_; ++j)
                    out(i, j) = field_.add(out(i, j), field_.mul(a, o(l, j)));
            }
        return out;
    }

    std::vector<uint32_t> mul_vec(std::span<const uint32_t> x) const {
        if (x.size() != cols_) throw LengthMismatch("vector length != cols");
        std::vector<uint32_t> y(rows_, 0);
        for (size_t i = 0; i < rows_; ++i) {
            uint32_t acc = 0;
            for (size_t j = 0; j < cols_; ++j) acc = field_.add(acc, field_.mul((*this)(i, j), x[j]));
            y[i] = acc;
        }
        return y;
    }

    /// Vertical stack [top; bottom].
    static FqMatrix vstack(const FqMatrix& top, const FqMatrix& bottom) {
        if (top.cols_ != bottom.cols_ || !(top.field_ == bottom.field_))
            throw DimensionMismatch("vstack shape mismatch");
        FqMatrix out(top.field_, top.rows_ + bottom.rows_, top.cols_);
        std::copy(top.e_.begin(), top.e_.end(), out.e_.begin());
        std::copy(bottom.e_.begin(), bottom.e_.end(), out.e_.begin() + top.e_.size());
        return out;
    }

    size_t rank() const {
        FqMatrix a(*this);
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t piv = r;
            while (piv < rows_ && a(piv, c) == 0) ++piv;
            if (piv == rows_) continue;
            a.swap_rows(piv, r);
            const uint32_t s = field_.inv(a(r, c));
            for (size_t j = c; j < cols_; ++j) a(r, j) = field_.mul(a(r, j), s);
            for (size_t i = 0; i < rows_; ++i) {
                if (i == r || a(i, c) == 0) continue;
                const uint32_t f = a(i, c);
                for (size_t j = c; j < cols_; ++j)
                    a(i, j) = field_.sub(a(i, j), field_.mul(f, a(r, j)));
            }
            ++r;
        }
        return r;
    }

    /// One solution x of Ax = b (free variables set to zero).
    std::vector<uint32_t> solve(std::span<const uint32_t> b) const {
        if (b.size() != rows_) throw LengthMismatch("rhs length != rows");
        FqMatrix a(field_, rows_, cols_ + 1);
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) a(i, j) = (*this)(i, j);
            a(i, cols_) = b[i];
        }
        std::vector<size_t> pivot_col;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t piv = r;
            while (piv < rows_ && a(piv, c) == 0) ++piv;
            if (piv == rows_) continue;
            a.swap_rows(piv, r);
            const uint32_t s = field_.inv(a(r, c));
            for (size_t j = c; j <= cols_; ++j) a(r, j) = field_.mul(a(r, j), s);
            for (size_t i = 0; i < rows_; ++i) {
                if (i == r || a(i, c) == 0) continue;
                const uint32_t f = a(i, c);
                for (size_t j = c; j <= cols_; ++j)
                    a(i, j) = field_.sub(a(i, j), field_.mul(f, a(r, j)));
            }
            pivot_col.push_back(c);
            ++r;
        }
        for (size_t i = r; i < rows_; ++i)
            if (a(i, cols_) != 0) throw InconsistentSystem("no solution: zero row with nonzero rhs");
        std::vector<uint32_t> x(cols_, 0);
        for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = a(i, cols_);
        return x;
    }

    FqMatrix inverse() const {
        if (rows_ != cols_) throw DimensionMismatch("inverse of non-square matrix");
        FqMatrix a(*this);
        FqMatrix inv = identity(field_, rows_);
        for (size_t c = 0; c < cols_; ++c) {
            size_t piv = c;
            while (piv < rows_ && a(piv, c) == 0) ++piv;
            if (piv == rows_) throw SingularMatrix("matrix is singular");
            a.swap_rows(piv, c);
            inv.swap_rows(piv, c);
            const uint32_t s = field_.inv(a(c, c));
            for (size_t j = 0; j < cols_; ++j) {
                a(c, j) = field_.mul(a(c, j), s);
                inv(c, j) = field_.mul(inv(c, j), s);
            }
            for (size_t i = 0; i < rows_; ++i) {
                if (i == c || a(i, c) == 0) continue;
                const uint32_t f = a(i, c);
                for (size_t j = 0; j < cols_; ++j) {
                    a(i, j) = field_.sub(a(i, j), field_.mul(f, a(c, j)));
                    inv(i, j) = field_.sub(inv(i, j), field_.mul(f, inv(c, j)));
                }
            }
        }
        return inv;
    }

   private:
    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    Field field_;
    size_t rows_, cols_;
    std::vector<uint32_t> e_;
};

namespace detail {

// Incremental row-echelon accumulator: tracks a reduced basis of the row
// space and answers "does this row increase the rank" in O(rows * cols).
class RowSpace {
   public:
    explicit RowSpace(const Field& f, size_t cols) : f_(f), cols_(cols) {}

    size_t rank() const { return rows_.size(); }

    /// Reduces `v` against the stored basis; if a nonzero residual remains,
    /// absorbs it (normalized) and returns true.
    bool add(std::vector<uint32_t> v) {
        for (size_t i = 0; i < rows_.size(); ++i) {
            const uint32_t c = v[pivots_[i]];
            if (c == 0) continue;
            for (size_t j = 0; j < cols_; ++j) v[j] = f_.sub(v[j], f_.mul(c, rows_[i][j]));
        }
        size_t p = 0;
        while (p < cols_ && v[p] == 0) ++p;
        if (p == cols_) return false;
        const uint32_t s = f_.inv(v[p]);
        for (size_t j = 0; j < cols_; ++j) v[j] = f_.mul(v[j], s);
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }

   private:
    Field f_;
    size_t cols_;
    std::vector<std::vector<uint32_t>> rows_;
    std::vector<size_t> pivots_;
};

}  // namespace detail

/// Parity-check matrix of an (n, k) MDS code: the (n-k) x n Vandermonde
/// matrix with entry (i, j) = alpha_j^i over the canonical point enumeration.
/// Every maximal minor is nonsingular, so the code has minimum
/// distance n-k+1.
inline FqMatrix rs_parity_check(size_t n, size_t k, const Field& field) {
    if (n > field.order())
        throw BlockTooLong("block length " + std::to_string(n) + " exceeds field order " +
                           std::to_string(field.order()));
    if (k == 0 || k >= n) throw BadParameters("need 0 < k < n");
    FqMatrix h(field, n - k, n);
    for (size_t j = 0; j < n; ++j) {
        const uint32_t alpha = field.element_at(j);
        uint32_t p = 1;
        for (size_t i = 0; i < n - k; ++i) {
            h(i, j) = p;
            p = field.mul(p, alpha);
        }
    }
    return h;
}

/// Completes a full-row-rank H to a basis of GF(q)^cols: returns D with
/// cols - rank(H) rows such that [H; D] is invertible. Deterministic:
/// standard-basis rows are tried in index order and kept when they increase
/// the rank.
inline FqMatrix complete_basis(const FqMatrix& h) {
    detail::RowSpace space(h.field(), h.cols());
    for (size_t r = 0; r < h.rows(); ++r) {
        std::vector<uint32_t> v(h.row(r).begin(), h.row(r).end());
        if (!space.add(std::move(v)))
            throw RankDeficientInput("parity-check matrix does not have full row rank");
    }
    FqMatrix d(h.field(), h.cols() - h.rows(), h.cols());
    size_t next = 0;
    for (size_t i = 0; i < h.cols() && next < d.rows(); ++i) {
        std::vector<uint32_t> e(h.cols(), 0);
        e[i] = 1;
        if (space.add(std::move(e))) {
            d(next, i) = 1;
            ++next;
        }
    }
    return d;
}

/// Text fixture format: first line "q rows cols", then row-major entries.
inline void write_matrix(std::ostream& os, const FqMatrix& m) {
    os << m.field().order() << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (size_t r = 0; r < m.rows(); ++r) {
        for (size_t c = 0; c < m.cols(); ++c) os << m(r, c) << (c + 1 == m.cols() ? '\n' : ' ');
    }
}

inline FqMatrix read_matrix(std::istream& is) {
    uint64_t q;
    size_t rows, cols;
    if (!(is >> q >> rows >> cols)) throw BadParameters("matrix header must be: q rows cols");
    Field f = Field::of_order(q);
    FqMatrix m(f, rows, cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
            uint64_t v;
            if (!(is >> v)) throw BadParameters("matrix body truncated");
            if (v >= q) throw BadParameters("matrix entry not a field element");
            m(r, c) = static_cast<uint32_t>(v);
        }
    return m;
}

}  // namespace lsckit
