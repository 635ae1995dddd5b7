#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "boolfourier.hpp"
#include "errors.hpp"
#include "infotheory.hpp"

namespace lsckit {

namespace detail {

inline void check_zn_args(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || a.size() != b.size()) throw BadParameters("z_n needs matching nonempty vectors");
    for (double v : a)
        if (!(v > 0)) throw NonPositiveA("z_n requires a_i > 0");
    for (double v : b)
        if (v < 0) throw NegativeB("z_n requires b_i >= 0");
}

// Indices sorted by b_i/a_i ascending, ties broken by original index. The
// optimal value is invariant under the tie order.
inline std::vector<size_t> ratio_order(std::span<const double> a, std::span<const double> b) {
    std::vector<size_t> ord(a.size());
    std::iota(ord.begin(), ord.end(), size_t{0});
    std::stable_sort(ord.begin(), ord.end(),
                     [&](size_t i, size_t j) { return b[i] * a[j] < b[j] * a[i]; });
    return ord;
}

// Shared ratio scan: prefix sums over the sorted order (pa2[k] = sum of the
// first k squared a's, etc.) and the largest consistent pin count k*. Using
// pa2[n] as ||a||^2 keeps the slack term exactly zero when everything pins.
struct ZnScan {
    std::vector<size_t> ord;
    std::vector<double> pa2, pb2, pab;  // length n+1
    size_t k_star = 0;

    double norm_a2() const { return pa2.back(); }
    double slack() const {
        return std::max(0.0, pa2.back() - pa2[k_star]) * std::max(0.0, 1 - pb2[k_star]);
    }
};

inline ZnScan zn_scan(std::span<const double> a, std::span<const double> b) {
    check_zn_args(a, b);
    const size_t n = a.size();
    ZnScan s;
    s.ord = ratio_order(a, b);
    s.pa2.assign(n + 1, 0);
    s.pb2.assign(n + 1, 0);
    s.pab.assign(n + 1, 0);
    for (size_t k = 1; k <= n; ++k) {
        const size_t i = s.ord[k - 1];
        s.pa2[k] = s.pa2[k - 1] + a[i] * a[i];
        s.pb2[k] = s.pb2[k - 1] + b[i] * b[i];
        s.pab[k] = s.pab[k - 1] + a[i] * b[i];
    }
    for (size_t k = 1; k <= n; ++k) {
        const size_t i = s.ord[k - 1];
        // ratio_k <= sqrt((1 - sum_{i<k} b^2)^+ / (||a||^2 - sum_{i<k} a^2))
        const double num = std::max(0.0, 1 - s.pb2[k - 1]);
        const double den = s.pa2[n] - s.pa2[k - 1];
        if (b[i] * b[i] * den <= num * a[i] * a[i]) s.k_star = k;
    }
    return s;
}

}  // namespace detail

/// Closed-form solution of  max{ a^T y : ||y||_2 <= 1, y <= b }.
///
/// Scans k in ratio order for the largest k whose pinned prefix is
/// consistent, pins y_i = b_i there and spreads the remaining norm over the
/// free coordinates. k* = 0 (nothing pinned) yields ||a||_2, the
/// all-constraints-slack case.
inline double z_n(std::span<const double> a, std::span<const double> b) {
    const auto s = detail::zn_scan(a, b);
    return s.pab[s.k_star] + std::sqrt(s.slack());
}

/// Primal/dual optimizers certifying z_n: a^T y* equals the dual value
/// a^T b + u*^T b + ||u*||_2 at the constructed pair, both feasible.
struct ZnCertificate {
    std::vector<double> y;  // primal optimum, original index order
    std::vector<double> u;  // dual optimum
    double primal = 0;
    double dual = 0;
    size_t k_star = 0;
};

inline ZnCertificate z_n_certificate(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    const auto s = detail::zn_scan(a, b);

    ZnCertificate cert;
    cert.k_star = s.k_star;
    cert.y.assign(n, 0);
    cert.u.assign(n, 0);
    if (s.k_star == n) {
        // everything pinned: y* = b, u* = 0
        for (size_t i = 0; i < n; ++i) cert.y[i] = b[i];
    } else {
        const double c =
            std::sqrt(std::max(0.0, 1 - s.pb2[s.k_star]) / (s.pa2[n] - s.pa2[s.k_star]));
        if (!(c > 0)) throw Error("degenerate boundary instance has no finite dual optimizer");
        for (size_t k = 0; k < n; ++k) {
            const size_t i = s.ord[k];
            if (k < s.k_star) {
                cert.y[i] = b[i];
                cert.u[i] = -b[i] / c;
            } else {
                cert.y[i] = a[i] * c;
                cert.u[i] = -a[i];
            }
        }
    }
    double ab = 0, uy = 0, unorm2 = 0;
    for (size_t i = 0; i < n; ++i) {
        cert.primal += a[i] * cert.y[i];
        ab += a[i] * b[i];
        uy += cert.u[i] * b[i];
        unorm2 += cert.u[i] * cert.u[i];
    }
    cert.dual = ab + uy + std::sqrt(unorm2);
    return cert;
}

/// Correlation/estimability data feeding the converse bounds.
///
/// rho_i = |E[phi(X) phi_i(X)]| against an orthonormal reference set,
/// lambda_i >= ||E[phi_i(X)|Y]||_2, and rho0 = sqrt(1 - sum rho_i^2) is the
/// residual correlation mass, clamped to zero near the boundary.
struct BoundInputs {
    std::vector<double> rho;
    std::vector<double> lambda;
    double rho0 = 0;

    static BoundInputs make(std::span<const double> rho, std::span<const double> lambda) {
        if (rho.size() != lambda.size()) throw BadParameters("rho and lambda must have equal length");
        double s = 0;
        for (double r : rho) {
            if (!(r > 0) || r > 1 + 1e-12) throw BadParameters("rho entries must lie in (0,1]");
            s += r * r;
        }
        for (double l : lambda)
            if (l < 0 || l > 1 + 1e-12) throw BadParameters("lambda entries must lie in [0,1]");
        if (s > 1 + 1e-9) throw BadParameters("sum of rho^2 exceeds 1");
        BoundInputs in;
        in.rho.assign(rho.begin(), rho.end());
        in.lambda.assign(lambda.begin(), lambda.end());
        in.rho0 = s >= 1 - 1e-12 ? 0.0 : std::sqrt(1 - s);
        return in;
    }
};

namespace detail {

// z over (rho0 prepended when positive, with lambda0 = 1); [0,1]-clamped.
inline double b_value(double rho0, std::span<const double> rho, std::span<const double> lambda) {
    std::vector<double> a, b;
    if (rho0 > 0) {
        a.push_back(rho0);
        b.push_back(1.0);
    }
    a.insert(a.end(), rho.begin(), rho.end());
    b.insert(b.end(), lambda.begin(), lambda.end());
    if (a.empty()) return 0.0;  // B_0 = 0
    return std::clamp(z_n(a, b), 0.0, 1.0);
}

}  // namespace detail

/// B_m: the norm ceiling on ||E[phi(X)|Y]||_2 given the reference set.
inline double B_m(const BoundInputs& in) {
    return detail::b_value(in.rho0, in.rho, in.lambda);
}

/// mmse(phi(X)|Y) >= 1 - B_m^2.
inline double mmse_lower_loose(const BoundInputs& in) {
    const double b = B_m(in);
    return std::max(0.0, 1 - b * b);
}

/// Tighter bound when the first t reference images psi_i = E[phi_i|Y] are
/// pairwise orthogonal in L2(p_Y): mmse >= 1 - sum_{i<=t} lambda_i^2 rho_i^2
/// - B_rest^2 where B_rest covers the remaining references (with the
/// original residual rho0). With t = m and rho0 = 0 this is exactly
/// 1 - sum lambda_i^2 rho_i^2.
inline double mmse_lower_tight(const BoundInputs& in, size_t t) {
    if (t > in.rho.size()) throw BadT("t exceeds the number of reference functions");
    double pinned = 0;
    for (size_t i = 0; i < t; ++i) pinned += in.lambda[i] * in.lambda[i] * in.rho[i] * in.rho[i];
    const std::span<const double> rrest(in.rho.data() + t, in.rho.size() - t);
    const std::span<const double> lrest(in.lambda.data() + t, in.lambda.size() - t);
    const double b_rest = detail::b_value(in.rho0, rrest, lrest);
    return std::max(0.0, 1 - pinned - b_rest * b_rest);
}

/// ||E[phi(X)|Y]||_2 ceiling in the tighter (partially orthogonal) regime.
inline double conditional_norm_upper_tight(const BoundInputs& in, size_t t) {
    if (t > in.rho.size()) throw BadT("t exceeds the number of reference functions");
    double pinned = 0;
    for (size_t i = 0; i < t; ++i) pinned += in.lambda[i] * in.lambda[i] * in.rho[i] * in.rho[i];
    const std::span<const double> rrest(in.rho.data() + t, in.rho.size() - t);
    const std::span<const double> lrest(in.lambda.data() + t, in.lambda.size() - t);
    const double b_rest = detail::b_value(in.rho0, rrest, lrest);
    return std::sqrt(pinned + b_rest * b_rest);
}

/// Error floor for guessing a +/-1 predicate F correlated with predicates F_i
/// that are each mispredicted with probability >= alpha_i = (1 - lambda_i)/2:
/// Pr(F != F-hat) >= (1 - B)/2.
inline double onebit_error_lower(std::span<const double> rho, std::span<const double> lambda) {
    const double b = B_m(BoundInputs::make(rho, lambda));
    return std::max(0.0, 0.5 * (1 - b));
}

/// Single-reference triangle-inequality floor: ((1 - rho)/2 - alpha)^+.
inline double simple_error_lower(double rho, double alpha) {
    if (rho < 0 || rho > 1) throw OutOfRange("need rho in [0,1]");
    if (alpha < 0 || alpha > 0.5) throw OutOfRange("need alpha in [0,1/2]");
    return std::max(0.0, (1 - rho) / 2 - alpha);
}

/// A binary F that cannot be guessed better than error alpha from Y leaks at
/// most 1 - 2 alpha bits (the erasure channel is the extremal case).
inline double erasure_mi_bound(double alpha) {
    if (alpha < 0 || alpha > 0.5) throw OutOfRange("need alpha in [0,1/2]");
    return 1 - 2 * alpha;
}

/// Error-correlation decomposition: mmse(W|Y) = sum_i mmse(phi_i(X)|Y) rho_i^2
/// under full orthogonality with sum rho_i^2 = 1.
inline double correlation_error_product(std::span<const double> mmse, std::span<const double> rho) {
    if (mmse.size() != rho.size() || rho.empty()) throw BadWeights("vectors must match and be nonempty");
    double s2 = 0;
    for (double r : rho) s2 += r * r;
    if (std::abs(s2 - 1) > 1e-9) throw BadWeights("sum of rho^2 must equal 1");
    double out = 0;
    for (size_t i = 0; i < mmse.size(); ++i) {
        if (mmse[i] < 0 || mmse[i] > 1 + 1e-12) throw BadWeights("mmse entries must lie in [0,1]");
        out += mmse[i] * rho[i] * rho[i];
    }
    return out;
}

/// Predicate-secrecy bounds assembled from a symbol-secrecy profile.
///
/// The headline `bound` uses the absolute-symbol-secrecy route: characters
/// with |S| <= n mu0 are exactly hidden, so
/// Pr(error) >= (1 - sqrt(sum_{|S| > n mu0} rho_S^2))/2. Two companions are
/// reported: `bound_entropy_lambda` feeds lambda(|S|) = h_b^{-1}((1 -
/// eps*_t t)^+) directly into B, and `bound_correlation_lambda` the
/// 1 - 2 h_b^{-1}(.) form matching the one-bit floor's lambda = 1 - 2 alpha
/// convention. The headline and correlation forms are always valid
/// floors; the entropy-lambda form is reported for reference only.
struct FunctionSecrecyBound {
    double mu0 = 0;
    double bound = 0;
    double bound_entropy_lambda = 0;
    double bound_correlation_lambda = 0;
};

inline FunctionSecrecyBound function_secrecy_bound(const FourierSpectrum& spec,
                                                   std::span<const double> eps_star, size_t n) {
    if (spec.n() != n || eps_star.size() != n)
        throw BadParameters("eps_star must have one entry per coordinate");
    if (std::abs(spec[0]) > 1e-9) throw NotBalanced("phi must satisfy E[phi] = 0");

    static constexpr double kTol = 1e-10;
    size_t t0 = 0;
    for (size_t t = 1; t <= n; ++t) {
        if (eps_star[t - 1] > kTol) break;
        t0 = t;
    }
    FunctionSecrecyBound out;
    out.mu0 = static_cast<double>(t0) / static_cast<double>(n);

    double tail = 0;
    std::vector<double> rho, lam_h, lam_c;
    for (size_t mask = 1; mask < spec.size(); ++mask) {
        const double r = spec[static_cast<uint32_t>(mask)];
        if (std::abs(r) < 1e-12) continue;
        const size_t t = static_cast<size_t>(std::popcount(mask));
        if (t > t0) tail += r * r;
        const double fano = inv_binary_entropy(
            std::clamp(1 - eps_star[t - 1] * static_cast<double>(t), 0.0, 1.0));
        rho.push_back(std::abs(r));
        lam_h.push_back(fano);
        lam_c.push_back(1 - 2 * fano);
    }
    out.bound = std::max(0.0, 0.5 * (1 - std::sqrt(std::min(1.0, tail))));
    if (rho.empty()) {
        out.bound_entropy_lambda = 0.5;
        out.bound_correlation_lambda = 0.5;
        return out;
    }
    out.bound_entropy_lambda = std::max(0.0, 0.5 * (1 - B_m(BoundInputs::make(rho, lam_h))));
    out.bound_correlation_lambda = std::max(0.0, 0.5 * (1 - B_m(BoundInputs::make(rho, lam_c))));
    return out;
}

}  // namespace lsckit
