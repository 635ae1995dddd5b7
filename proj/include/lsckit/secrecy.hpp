#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "infotheory.hpp"
#include "lsc.hpp"

namespace lsckit {

/// Exact symbol-secrecy profile of a joint (X^n, Z).
///
/// worst_leakage_per_t[t-1] is max over all subsets J of size t of
/// I(X^J; Z)/t. Everything else is derived from that one enumeration pass:
/// mu_eps is the largest fraction t/n such that every subset of size <= t
/// leaks at most eps bits per symbol, and eps_star[t-1] is the smallest eps
/// making mu_eps >= t/n.
struct SecrecyProfile {
    size_t n = 0;
    std::vector<double> worst_leakage_per_t;  // bits per symbol, index t-1
    std::vector<double> eps_star;             // index t-1, nondecreasing
    std::vector<bool> exact_zero_per_t;       // exact backend only: all I(X^J;Z)=0 for |J|=t
    bool exact = false;
    double mu0 = 0;

    static constexpr double kTol = 1e-10;

    double mu_eps(double eps) const {
        size_t best = 0;
        for (size_t t = 1; t <= n; ++t)
            if (eps_star[t - 1] <= eps + kTol) best = t;
        return static_cast<double>(best) / static_cast<double>(n);
    }
};

namespace detail {

// Sparse exact joint over (X^n, Z): only cells with positive mass.
struct JointSupport {
    std::vector<uint32_t> x_arity;
    uint32_t z_arity = 0;
    size_t entries = 0;
    std::vector<uint8_t> digits;  // entries x n, per-coordinate symbol values
    std::vector<uint32_t> z;
    std::vector<double> p;
    std::vector<uint64_t> w;  // exact weights; empty when float-only
    uint64_t wtot = 0;

    size_t n() const { return x_arity.size(); }
};

inline std::vector<size_t> all_coords(const JointPmf& pmf) {
    std::vector<size_t> c(pmf.n() + 1);
    for (size_t i = 0; i <= pmf.n(); ++i) c[i] = i;
    return c;
}

inline JointSupport support_from_pmf(const JointPmf& pmf) {
    JointSupport s;
    s.x_arity = pmf.x_arity();
    s.z_arity = pmf.z_arity();
    const size_t n = s.x_arity.size();
    for (uint32_t a : s.x_arity)
        if (a > 256) throw TooLarge("per-coordinate alphabet too large for profile");
    const auto& p = pmf.probs();
    std::vector<size_t> radix(n + 1);
    for (size_t cell = 0; cell < p.size(); ++cell) {
        if (p[cell] <= 0) continue;
        size_t rest = cell;
        const uint32_t zv = static_cast<uint32_t>(rest % s.z_arity);
        rest /= s.z_arity;
        std::vector<uint8_t> dig(n);
        for (size_t i = n; i-- > 0;) {
            dig[i] = static_cast<uint8_t>(rest % s.x_arity[i]);
            rest /= s.x_arity[i];
        }
        s.digits.insert(s.digits.end(), dig.begin(), dig.end());
        s.z.push_back(zv);
        s.p.push_back(p[cell]);
        ++s.entries;
    }
    if (pmf.has_exact()) {
        s.wtot = 0;
        // Recover weights by a second pass in the same order.
        const auto wm = pmf.weight_marginal(all_coords(pmf));
        for (size_t cell = 0; cell < wm.size(); ++cell)
            if (wm[cell] > 0) {
                s.w.push_back(wm[cell]);
                s.wtot += wm[cell];
            }
    }
    return s;
}

// One subset's statistics from the support list.
struct SubsetStats {
    double mi = 0;
    bool exact_zero = false;
};

inline SubsetStats subset_mi(const JointSupport& s, uint32_t mask) {
    const size_t n = s.n();
    std::unordered_map<uint64_t, double> pa, pz, paz;
    std::unordered_map<uint64_t, uint64_t> wa, wz, waz;
    const bool exact = s.wtot != 0;
    pa.reserve(s.entries);
    paz.reserve(s.entries);
    for (size_t e = 0; e < s.entries; ++e) {
        uint64_t key = 0;
        const uint8_t* dig = s.digits.data() + e * n;
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) key = key * s.x_arity[i] + dig[i];
        const uint64_t zk = s.z[e];
        const uint64_t azk = key * s.z_arity + zk;
        pa[key] += s.p[e];
        pz[zk] += s.p[e];
        paz[azk] += s.p[e];
        if (exact) {
            wa[key] += s.w[e];
            wz[zk] += s.w[e];
            waz[azk] += s.w[e];
        }
    }
    auto ent = [](const std::unordered_map<uint64_t, double>& m) {
        KahanSum h;
        for (const auto& [k, v] : m) h.add(plogp(v));
        return h.value();
    };
    SubsetStats out;
    out.mi = ent(pa) + ent(pz) - ent(paz);
    if (exact) {
        bool zero = waz.size() == wa.size() * wz.size();
        if (zero)
            for (const auto& [key, wab] : waz) {
                const uint64_t ka = key / s.z_arity, kz = key % s.z_arity;
                if (static_cast<unsigned __int128>(wab) * s.wtot !=
                    static_cast<unsigned __int128>(wa.at(ka)) * wz.at(kz)) {
                    zero = false;
                    break;
                }
            }
        out.exact_zero = zero;
    }
    return out;
}

inline SecrecyProfile profile_from_support(const JointSupport& s) {
    const size_t n = s.n();
    if (n > 20) throw TooLarge("symbol-secrecy enumeration limited to n <= 20");
    SecrecyProfile prof;
    prof.n = n;
    prof.exact = s.wtot != 0;
    prof.worst_leakage_per_t.assign(n, 0.0);
    prof.exact_zero_per_t.assign(n, prof.exact);
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        const size_t t = static_cast<size_t>(__builtin_popcount(mask));
        const auto st = subset_mi(s, mask);
        const double per_symbol = std::max(0.0, st.mi / static_cast<double>(t));
        prof.worst_leakage_per_t[t - 1] = std::max(prof.worst_leakage_per_t[t - 1], per_symbol);
        if (prof.exact && !st.exact_zero) prof.exact_zero_per_t[t - 1] = false;
    }
    prof.eps_star.assign(n, 0.0);
    double running = 0;
    for (size_t t = 1; t <= n; ++t) {
        running = std::max(running, prof.worst_leakage_per_t[t - 1]);
        prof.eps_star[t - 1] = running;
    }
    size_t t0 = 0;
    for (size_t t = 1; t <= n; ++t) {
        const bool zero = prof.exact ? prof.exact_zero_per_t[t - 1]
                                     : prof.worst_leakage_per_t[t - 1] <= SecrecyProfile::kTol;
        if (!zero) break;
        t0 = t;
    }
    prof.mu0 = static_cast<double>(t0) / static_cast<double>(n);
    return prof;
}

}  // namespace detail

/// Full exact profile by enumerating every nonempty subset of coordinates.
inline SecrecyProfile secrecy_profile(const JointPmf& pmf) {
    return detail::profile_from_support(detail::support_from_pmf(pmf));
}

/// Upper bound on (1/n) I(X^n; Z) implied by mu_eps = mu for a discrete
/// memoryless source: H(X) - mu (H(X) - eps).
inline double mueps_mi_bound(double h_x, double eps, double mu) {
    if (eps < 0 || eps > h_x + 1e-12) throw OutOfRange("need 0 <= eps <= H(X)");
    if (mu < 0 || mu > 1 + 1e-12) throw OutOfRange("need 0 <= mu <= 1");
    return h_x - mu * (h_x - eps);
}

/// Upper bound on mu_eps for any list-source code at normalized list size L:
/// min{ L log2|X| / (H(X) - eps), 1 }.
inline double epsilon_bound(double L, double alphabet_size, double h_x, double eps) {
    if (eps < 0 || eps >= h_x) throw OutOfRange("need 0 <= eps < H(X)");
    if (L < 0) throw OutOfRange("need L >= 0");
    return std::min(L * std::log2(alphabet_size) / (h_x - eps), 1.0);
}

/// Joint distribution of (X^n, sigma) when X is i.i.d. `source` and the
/// observer sees the syndrome. Exact-rational variant: source given as
/// integer weights (probability w_i / sum w).
inline JointPmf lsc_leakage_channel(const LscCode& code, const std::vector<uint64_t>& source_weights) {
    const uint32_t q = code.field().order();
    if (source_weights.size() != q) throw BadPmf("source weight vector must have q entries");
    const size_t n = code.n();
    double states = 1;
    for (size_t i = 0; i < n; ++i) states *= q;
    if (states > 1e6) throw TooLarge("q^n exceeds the exact-analysis limit of 1e6");
    uint64_t z_states = 1;
    for (size_t i = 0; i < n - code.k(); ++i) z_states *= q;

    const auto total_states = static_cast<size_t>(states);
    if (total_states > JointPmf::kMaxCells / z_states)
        throw TooLarge("dense (X^n, sigma) table too large; use lsc_secrecy_profile");
    std::vector<uint64_t> weights(total_states * z_states, 0);
    std::vector<uint32_t> x(n, 0);
    for (size_t cell = 0; cell < total_states; ++cell) {
        size_t rest = cell;
        for (size_t i = n; i-- > 0;) {
            x[i] = static_cast<uint32_t>(rest % q);
            rest /= q;
        }
        uint64_t w = 1;
        bool zero = false;
        for (size_t i = 0; i < n; ++i) {
            const uint64_t sw = source_weights[x[i]];
            if (sw == 0) {
                zero = true;
                break;
            }
            if (w > UINT64_MAX / sw) throw TooLarge("source weights overflow");
            w *= sw;
        }
        if (zero) continue;
        const auto sigma = code.encode(x);
        uint64_t zidx = 0;
        for (uint32_t sv : sigma) zidx = zidx * q + sv;
        weights[cell * z_states + zidx] = w;
    }
    return JointPmf(std::vector<uint32_t>(n, q), static_cast<uint32_t>(z_states), std::move(weights));
}

inline JointPmf lsc_leakage_channel(const LscCode& code, std::span<const double> source_pmf) {
    const uint32_t q = code.field().order();
    if (source_pmf.size() != q) throw BadPmf("source pmf must have q entries");
    double sum = 0;
    for (double p : source_pmf) {
        if (p < 0) throw BadPmf("negative source probability");
        sum += p;
    }
    if (std::abs(sum - 1) > 1e-9) throw BadPmf("source pmf must sum to 1");
    const size_t n = code.n();
    double states = 1;
    for (size_t i = 0; i < n; ++i) states *= q;
    if (states > 1e6) throw TooLarge("q^n exceeds the exact-analysis limit of 1e6");
    uint64_t z_states = 1;
    for (size_t i = 0; i < n - code.k(); ++i) z_states *= q;

    const auto total_states = static_cast<size_t>(states);
    if (total_states > JointPmf::kMaxCells / z_states)
        throw TooLarge("dense (X^n, sigma) table too large; use lsc_secrecy_profile");
    std::vector<double> probs(total_states * z_states, 0.0);
    std::vector<uint32_t> x(n, 0);
    for (size_t cell = 0; cell < total_states; ++cell) {
        size_t rest = cell;
        for (size_t i = n; i-- > 0;) {
            x[i] = static_cast<uint32_t>(rest % q);
            rest /= q;
        }
        double w = 1;
        for (size_t i = 0; i < n; ++i) w *= source_pmf[x[i]];
        if (w <= 0) continue;
        const auto sigma = code.encode(x);
        uint64_t zidx = 0;
        for (uint32_t sv : sigma) zidx = zidx * q + sv;
        probs[cell * z_states + zidx] = w;
    }
    return JointPmf(std::vector<uint32_t>(n, q), static_cast<uint32_t>(z_states), std::move(probs));
}

/// Profile of the syndrome channel without materializing the dense joint;
/// handles every instance with q^n <= 1e6.
inline SecrecyProfile lsc_secrecy_profile(const LscCode& code,
                                          const std::vector<uint64_t>& source_weights) {
    const uint32_t q = code.field().order();
    if (source_weights.size() != q) throw BadPmf("source weight vector must have q entries");
    const size_t n = code.n();
    double states = 1;
    for (size_t i = 0; i < n; ++i) states *= q;
    if (states > 1e6) throw TooLarge("q^n exceeds the exact-analysis limit of 1e6");
    uint64_t z_states = 1;
    for (size_t i = 0; i < n - code.k(); ++i) z_states *= q;

    detail::JointSupport s;
    s.x_arity.assign(n, q);
    s.z_arity = static_cast<uint32_t>(z_states);
    const auto total_states = static_cast<size_t>(states);
    std::vector<uint32_t> x(n, 0);
    uint64_t wtot = 0;
    std::vector<uint64_t> ws;
    for (size_t cell = 0; cell < total_states; ++cell) {
        size_t rest = cell;
        for (size_t i = n; i-- > 0;) {
            x[i] = static_cast<uint32_t>(rest % q);
            rest /= q;
        }
        uint64_t w = 1;
        bool zero = false;
        for (size_t i = 0; i < n; ++i) {
            const uint64_t sw = source_weights[x[i]];
            if (sw == 0) {
                zero = true;
                break;
            }
            if (w > UINT64_MAX / sw) throw TooLarge("source weights overflow");
            w *= sw;
        }
        if (zero) continue;
        const auto sigma = code.encode(x);
        uint64_t zidx = 0;
        for (uint32_t sv : sigma) zidx = zidx * q + sv;
        for (size_t i = 0; i < n; ++i) s.digits.push_back(static_cast<uint8_t>(x[i]));
        s.z.push_back(static_cast<uint32_t>(zidx));
        ws.push_back(w);
        wtot += w;
        ++s.entries;
    }
    s.w = std::move(ws);
    s.wtot = wtot;
    s.p.resize(s.entries);
    for (size_t e = 0; e < s.entries; ++e)
        s.p[e] = static_cast<double>(s.w[e]) / static_cast<double>(wtot);
    return detail::profile_from_support(s);
}

}  // namespace lsckit
