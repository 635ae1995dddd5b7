#pragma once

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lsckit {

// Conventions used by this module and by the bound evaluators:
//   - A subset S of [n] is a bitmask; bit i set  <=>  i in S.
//   - A truth-table index i encodes the input whose coordinate j is +1 iff
//     bit j of i is 0, so chi_S(x_i) = (-1)^popcount(i & S).
//   - At byte boundaries, 0 maps to +1 and 1 maps to -1.

/// phi: {-1,+1}^n -> {-1,+1} as a dense table of 2^n values.
class BoolFunction {
   public:
    BoolFunction(size_t n, std::vector<int8_t> table) : n_(n), t_(std::move(table)) {
        if (n_ > 20) throw TooLarge("Boolean-function analysis limited to n <= 20");
        if (t_.size() != (size_t{1} << n_)) throw BadParameters("table must have 2^n entries");
        for (int8_t v : t_)
            if (v != 1 && v != -1) throw BadParameters("table values must be +1 or -1");
    }

    /// chi_S: the parity character over coordinate set S.
    static BoolFunction character(size_t n, uint32_t s_mask) {
        std::vector<int8_t> t(size_t{1} << n);
        for (size_t i = 0; i < t.size(); ++i)
            t[i] = std::popcount(i & s_mask) % 2 == 0 ? int8_t{1} : int8_t{-1};
        return {n, std::move(t)};
    }

    size_t n() const { return n_; }
    int8_t operator[](size_t i) const { return t_[i]; }
    const std::vector<int8_t>& table() const { return t_; }

    /// Truth-table text format: line 1 "n", line 2 a string of 2^n
    /// characters from {+, -}.
    static BoolFunction parse(const std::string& text) {
        size_t pos = 0;
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        size_t end = pos;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        if (end == pos) throw BadParameters("truth table must start with n");
        const size_t n = std::stoul(text.substr(pos, end - pos));
        if (n > 20) throw TooLarge("Boolean-function analysis limited to n <= 20");
        std::vector<int8_t> t;
        t.reserve(size_t{1} << n);
        for (size_t i = end; i < text.size(); ++i) {
            if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
            if (text[i] == '+')
                t.push_back(1);
            else if (text[i] == '-')
                t.push_back(-1);
            else
                throw BadParameters("truth table characters must be + or -");
        }
        return {n, std::move(t)};
    }

    std::string format() const {
        std::string out = std::to_string(n_) + "\n";
        for (int8_t v : t_) out += v > 0 ? '+' : '-';
        out += '\n';
        return out;
    }

   private:
    size_t n_;
    std::vector<int8_t> t_;
};

namespace detail {

// In-place fast Walsh-Hadamard transform, kernel (-1)^popcount(i & S).
inline void fwht(std::vector<double>& v) {
    for (size_t half = 1; half < v.size(); half <<= 1)
        for (size_t base = 0; base < v.size(); base += half << 1)
            for (size_t i = base; i < base + half; ++i) {
                const double a = v[i];
                const double b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
}

}  // namespace detail

/// Fourier coefficients rho_S indexed by subset bitmask. For a +/-1-valued
/// function Parseval gives sum_S rho_S^2 = 1; real-valued tables are accepted
/// too (the transform is linear) and then the sum equals ||f||_2^2.
class FourierSpectrum {
   public:
    FourierSpectrum(size_t n, std::vector<double> coeffs) : n_(n), c_(std::move(coeffs)) {
        if (c_.size() != (size_t{1} << n_)) throw BadParameters("spectrum must have 2^n entries");
    }

    size_t n() const { return n_; }
    size_t size() const { return c_.size(); }
    double operator[](uint32_t s_mask) const { return c_[s_mask]; }
    double& operator[](uint32_t s_mask) { return c_[s_mask]; }
    const std::vector<double>& coeffs() const { return c_; }

    double energy() const {
        double s = 0;
        for (double c : c_) s += c * c;
        return s;
    }

    /// Total squared mass on subsets with |S| >= k.
    double tail_energy(size_t k) const {
        double s = 0;
        for (size_t mask = 0; mask < c_.size(); ++mask)
            if (static_cast<size_t>(std::popcount(mask)) >= k) s += c_[mask] * c_[mask];
        return s;
    }

   private:
    size_t n_;
    std::vector<double> c_;
};

/// rho_S = 2^-n sum_x f(x) chi_S(x) for every S, by fast Walsh-Hadamard.
inline FourierSpectrum fourier_transform(size_t n, std::span<const double> table) {
    if (n > 20) throw TooLarge("Boolean-function analysis limited to n <= 20");
    if (table.size() != (size_t{1} << n)) throw BadParameters("table must have 2^n entries");
    std::vector<double> v(table.begin(), table.end());
    detail::fwht(v);
    const double scale = 1.0 / static_cast<double>(size_t{1} << n);
    for (double& x : v) x *= scale;
    return {n, std::move(v)};
}

inline FourierSpectrum fourier_transform(const BoolFunction& f) {
    std::vector<double> t(f.table().begin(), f.table().end());
    return fourier_transform(f.n(), t);
}

/// Reconstructs the value table; exact inverse of fourier_transform.
inline std::vector<double> inverse_fourier(const FourierSpectrum& spec) {
    std::vector<double> v = spec.coeffs();
    detail::fwht(v);
    return v;
}

/// Attenuation coefficients c_S = E[chi_S(Z^n)] of a key/noise distribution
/// given as a pmf over {-1,+1}^n (table indexing as above).
inline std::vector<double> channel_attenuation(size_t n, std::span<const double> key_pmf) {
    if (key_pmf.size() != (size_t{1} << n)) throw BadPmf("key pmf must have 2^n entries");
    double sum = 0;
    for (double p : key_pmf) {
        if (p < 0) throw BadPmf("negative key probability");
        sum += p;
    }
    if (std::abs(sum - 1) > 1e-9) throw BadPmf("key pmf must sum to 1");
    std::vector<double> v(key_pmf.begin(), key_pmf.end());
    detail::fwht(v);  // unnormalized: sum_z p(z) chi_S(z)
    return v;
}

/// i.i.d. key with Pr{Z_i = -1} = eps: c_S = (1-2 eps)^|S|.
inline std::vector<double> iid_attenuation(size_t n, double eps) {
    if (eps < 0 || eps > 1) throw OutOfRange("bit flip probability must be in [0,1]");
    std::vector<double> c(size_t{1} << n);
    for (size_t mask = 0; mask < c.size(); ++mask)
        c[mask] = std::pow(1 - 2 * eps, std::popcount(mask));
    return c;
}

struct OtpBound {
    double bits = 0;
    bool zero = false;  // true iff c_S = 0 for every S with rho_S != 0
};

/// Generalized one-time-pad leakage bound:
/// I(phi(X^n); Y^n) <= sqrt(sum_S (c_S rho_S)^2), with equality to zero iff
/// every character carrying spectral mass is fully attenuated.
inline OtpBound otp_mi_bound(const FourierSpectrum& spec, std::span<const double> attenuation) {
    if (attenuation.size() != spec.size()) throw DimensionMismatch("attenuation size != 2^n");
    double s = 0;
    bool zero = true;
    for (size_t mask = 0; mask < spec.size(); ++mask) {
        const double term = attenuation[mask] * spec[static_cast<uint32_t>(mask)];
        s += term * term;
        if (std::abs(spec[static_cast<uint32_t>(mask)]) > 1e-12 &&
            std::abs(attenuation[mask]) > 1e-12)
            zero = false;
    }
    return {std::sqrt(s), zero};
}

/// Exact MMSE of estimating phi(X^n) from the BSC(eps) observation of a
/// uniform X^n: 1 - sum_S rho_S^2 (1-2 eps)^(2|S|).
inline double bsc_mmse(const FourierSpectrum& spec, double eps) {
    if (eps < 0 || eps > 0.5) throw OutOfRange("crossover probability must be in [0,1/2]");
    double kept = 0;
    for (size_t mask = 0; mask < spec.size(); ++mask) {
        const double a = std::pow(1 - 2 * eps, std::popcount(mask));
        const double c = spec[static_cast<uint32_t>(mask)];
        kept += c * c * a * a;
    }
    return 1 - kept;
}

/// Generalized-key variant: 1 - sum_S rho_S^2 E[chi_S(Z^n)]^2.
inline double generalized_otp_mmse(const FourierSpectrum& spec, std::span<const double> attenuation) {
    if (attenuation.size() != spec.size()) throw DimensionMismatch("attenuation size != 2^n");
    double kept = 0;
    for (size_t mask = 0; mask < spec.size(); ++mask) {
        const double c = spec[static_cast<uint32_t>(mask)];
        kept += c * c * attenuation[mask] * attenuation[mask];
    }
    return 1 - kept;
}

/// Guessing-error floor for any phi with spectral mass only on |S| >= k under
/// an i.i.d. one-time pad with bias eps: (1 - (1-2 eps)^k)/2.
inline double phi_k_error_lower(size_t k, double eps) {
    if (k < 1) throw OutOfRange("need k >= 1");
    if (eps < 0 || eps > 0.5) throw OutOfRange("bit flip probability must be in [0,1/2]");
    return 0.5 * (1 - std::pow(1 - 2 * eps, static_cast<double>(k)));
}

}  // namespace lsckit
