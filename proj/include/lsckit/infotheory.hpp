#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"

namespace lsckit {

namespace detail {

// Kahan-compensated accumulator.
class KahanSum {
   public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

   private:
    double s_ = 0, c_ = 0;
};

inline double plogp(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

}  // namespace detail

/// Exact finite joint distribution over an X-tuple and a leakage variable Z.
///
/// Stored dense, row-major with Z fastest-varying. Coordinates 0..n-1 index
/// the X-tuple; z_coord() indexes Z. When built from integer weights the
/// exact backend is kept alongside the float table, so independence can be
/// decided without tolerances.
class JointPmf {
   public:
    static constexpr size_t kMaxCells = 1u << 24;

    JointPmf(std::vector<uint32_t> x_arity, uint32_t z_arity, std::vector<double> probs)
        : arity_(std::move(x_arity)) {
        arity_.push_back(z_arity);
        init_strides();
        if (probs.size() != cells_) throw BadParameters("probability table has wrong size");
        p_ = std::move(probs);
        detail::KahanSum total;
        for (double p : p_) {
            if (p < 0) throw BadParameters("negative probability");
            total.add(p);
        }
        if (std::abs(total.value() - 1.0) > 1e-12) throw BadParameters("probabilities must sum to 1");
    }

    /// Exact-backend constructor: cell probabilities weights[i] / sum(weights).
    JointPmf(std::vector<uint32_t> x_arity, uint32_t z_arity, std::vector<uint64_t> weights)
        : arity_(std::move(x_arity)) {
        arity_.push_back(z_arity);
        init_strides();
        if (weights.size() != cells_) throw BadParameters("weight table has wrong size");
        w_ = std::move(weights);
        wtot_ = 0;
        for (uint64_t w : w_) {
            if (wtot_ > UINT64_MAX - w) throw BadParameters("weight overflow");
            wtot_ += w;
        }
        if (wtot_ == 0) throw BadParameters("all weights zero");
        p_.resize(cells_);
        for (size_t i = 0; i < cells_; ++i)
            p_[i] = static_cast<double>(w_[i]) / static_cast<double>(wtot_);
    }

    size_t n() const { return arity_.size() - 1; }
    size_t z_coord() const { return arity_.size() - 1; }
    uint32_t arity(size_t coord) const { return arity_.at(coord); }
    const std::vector<double>& probs() const { return p_; }
    bool has_exact() const { return wtot_ != 0; }

    std::vector<uint32_t> x_arity() const { return {arity_.begin(), arity_.end() - 1}; }
    uint32_t z_arity() const { return arity_.back(); }

    /// Dense marginal over the given coordinates (mixed radix, in the order
    /// the coordinates are listed).
    std::vector<double> marginal(std::span<const size_t> coords) const {
        check_coords(coords);
        std::vector<double> out(subspace_size(coords), 0.0);
        std::vector<detail::KahanSum> acc(out.size());
        for (size_t cell = 0; cell < cells_; ++cell)
            acc[project(cell, coords)].add(p_[cell]);
        for (size_t i = 0; i < out.size(); ++i) out[i] = acc[i].value();
        return out;
    }

    /// H(coords) in bits.
    double entropy(std::span<const size_t> coords) const {
        const auto m = marginal(coords);
        detail::KahanSum h;
        for (double p : m) h.add(detail::plogp(p));
        return h.value();
    }

    /// I(A; B) in bits; A and B must be disjoint.
    double mutual_information(std::span<const size_t> a, std::span<const size_t> b) const {
        require_disjoint(a, b);
        std::vector<size_t> ab(a.begin(), a.end());
        ab.insert(ab.end(), b.begin(), b.end());
        return entropy(a) + entropy(b) - entropy(ab);
    }

    /// H(A | B) in bits.
    double conditional_entropy(std::span<const size_t> a, std::span<const size_t> b) const {
        require_disjoint(a, b);
        std::vector<size_t> ab(a.begin(), a.end());
        ab.insert(ab.end(), b.begin(), b.end());
        return entropy(ab) - entropy(b);
    }

    /// I(A; B | C) in bits.
    double conditional_mutual_information(std::span<const size_t> a, std::span<const size_t> b,
                                          std::span<const size_t> c) const {
        require_disjoint(a, b);
        require_disjoint(a, c);
        require_disjoint(b, c);
        auto join = [](std::span<const size_t> u, std::span<const size_t> v) {
            std::vector<size_t> w(u.begin(), u.end());
            w.insert(w.end(), v.begin(), v.end());
            return w;
        };
        const auto ac = join(a, c), bc = join(b, c), abc = join(join(a, b), c);
        return entropy(ac) + entropy(bc) - entropy(abc) - entropy(c);
    }

    /// Exact test of I(A; B) = 0, i.e. the (A, B) marginal factorizes.
    /// Requires the exact backend.
    bool independent(std::span<const size_t> a, std::span<const size_t> b) const {
        if (!has_exact()) throw BadParameters("exact backend not available for this pmf");
        require_disjoint(a, b);
        std::vector<size_t> ab(a.begin(), a.end());
        ab.insert(ab.end(), b.begin(), b.end());
        const auto wa = weight_marginal(a);
        const auto wb = weight_marginal(b);
        const auto wab = weight_marginal(ab);
        const size_t bsize = subspace_size(b);
        for (size_t ia = 0; ia < wa.size(); ++ia)
            for (size_t ib = 0; ib < wb.size(); ++ib) {
                const auto lhs = static_cast<unsigned __int128>(wab[ia * bsize + ib]) * wtot_;
                const auto rhs = static_cast<unsigned __int128>(wa[ia]) * wb[ib];
                if (lhs != rhs) return false;
            }
        return true;
    }

    std::vector<uint64_t> weight_marginal(std::span<const size_t> coords) const {
        if (!has_exact()) throw BadParameters("exact backend not available for this pmf");
        check_coords(coords);
        std::vector<uint64_t> out(subspace_size(coords), 0);
        for (size_t cell = 0; cell < cells_; ++cell) out[project(cell, coords)] += w_[cell];
        return out;
    }

   private:
    void init_strides() {
        if (arity_.size() < 2) throw BadParameters("need at least one X coordinate");
        cells_ = 1;
        for (uint32_t a : arity_) {
            if (a == 0) throw BadParameters("zero arity");
            if (cells_ > kMaxCells / a) throw TooLarge("joint distribution too large for exact analysis");
            cells_ *= a;
        }
        strides_.assign(arity_.size(), 1);
        for (size_t i = arity_.size() - 1; i-- > 0;) strides_[i] = strides_[i + 1] * arity_[i + 1];
    }

    void check_coords(std::span<const size_t> coords) const {
        for (size_t c : coords)
            if (c >= arity_.size()) throw BadCoordinates("coordinate index out of range");
        for (size_t i = 0; i < coords.size(); ++i)
            for (size_t j = i + 1; j < coords.size(); ++j)
                if (coords[i] == coords[j]) throw BadCoordinates("repeated coordinate");
    }

    void require_disjoint(std::span<const size_t> a, std::span<const size_t> b) const {
        for (size_t x : a)
            for (size_t y : b)
                if (x == y) throw BadCoordinates("coordinate sets must be disjoint");
    }

    size_t subspace_size(std::span<const size_t> coords) const {
        size_t s = 1;
        for (size_t c : coords) s *= arity_[c];
        return s;
    }

    size_t project(size_t cell, std::span<const size_t> coords) const {
        size_t idx = 0;
        for (size_t c : coords) idx = idx * arity_[c] + (cell / strides_[c]) % arity_[c];
        return idx;
    }

    std::vector<uint32_t> arity_;  // x arities then z arity
    std::vector<size_t> strides_;
    size_t cells_ = 0;
    std::vector<double> p_;
    std::vector<uint64_t> w_;
    uint64_t wtot_ = 0;  // 0 means float-only
};

/// h_b(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
inline double binary_entropy(double x) {
    if (x < 0 || x > 1) throw OutOfRange("binary_entropy needs x in [0,1]");
    return detail::plogp(x) + detail::plogp(1 - x);
}

/// Inverse of h_b on the branch [0, 1/2], by bisection to 1e-12.
inline double inv_binary_entropy(double y) {
    if (y < 0 || y > 1) throw OutOfRange("inv_binary_entropy needs y in [0,1]");
    if (y == 0) return 0;
    if (y == 1) return 0.5;
    double lo = 0, hi = 0.5;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace lsckit
