#include <doctest.h>

#include <lsckit/bounds.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace lsckit;

namespace {

// Independent oracle for max{a^T y : ||y|| <= 1, y <= b}: enumerate every
// KKT active set P (pinned coordinates y_i = b_i), spread the leftover norm
// proportionally to a over the free coordinates, and keep the best feasible
// candidate. Exact up to float rounding; exponential in n, so n stays small.
double zn_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    double best = -1e300;
    for (uint32_t pin = 0; pin < (1u << n); ++pin) {
        double pinned_val = 0, pinned_b2 = 0, free_a2 = 0;
        for (size_t i = 0; i < n; ++i) {
            if (pin >> i & 1u) {
                pinned_val += a[i] * b[i];
                pinned_b2 += b[i] * b[i];
            } else {
                free_a2 += a[i] * a[i];
            }
        }
        const double slack = 1 - pinned_b2;
        if (slack < -1e-15) continue;  // pinned part alone violates the ball
        double cand;
        bool feasible = true;
        if (free_a2 == 0) {
            cand = pinned_val;
        } else {
            const double c = std::sqrt(std::max(0.0, slack) / free_a2);
            for (size_t i = 0; i < n && feasible; ++i)
                if (!(pin >> i & 1u) && a[i] * c > b[i] + 1e-12) feasible = false;
            cand = pinned_val + std::sqrt(std::max(0.0, slack) * free_a2);
        }
        if (feasible) best = std::max(best, cand);
    }
    return best;
}

// Coarse grid fallback used to sanity check the oracle itself at n = 2.
double zn_grid2(const std::vector<double>& a, const std::vector<double>& b) {
    double best = -1e300;
    const int steps = 2000;
    for (int i = -steps; i <= steps; ++i)
        for (int j = -steps; j <= steps; ++j) {
            const double y0 = i / static_cast<double>(steps);
            const double y1 = j / static_cast<double>(steps);
            if (y0 * y0 + y1 * y1 > 1 || y0 > b[0] || y1 > b[1]) continue;
            best = std::max(best, a[0] * y0 + a[1] * y1);
        }
    return best;
}

}  // namespace

TEST_CASE("z_n hand cases") {
    CHECK(z_n(std::vector<double>{3, 4}, std::vector<double>{1, 1}) == doctest::Approx(5.0));
    CHECK(z_n(std::vector<double>{1, 1}, std::vector<double>{0.1, 1}) ==
          doctest::Approx(0.1 + std::sqrt(0.99)));
    CHECK(z_n(std::vector<double>{1}, std::vector<double>{0.4}) == doctest::Approx(0.4));
    CHECK(z_n(std::vector<double>{1}, std::vector<double>{1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(z_n(std::vector<double>{0, 1}, std::vector<double>{1, 1}), NonPositiveA);
    CHECK_THROWS_AS(z_n(std::vector<double>{1, 1}, std::vector<double>{-0.5, 1}), NegativeB);
}

TEST_CASE("z_n tie order does not matter") {
    // equal ratios b_i/a_i across permuted coordinates
    const std::vector<double> a1{1, 2, 2, 1}, b1{0.2, 0.4, 0.4, 0.2};
    const std::vector<double> a2{2, 1, 1, 2}, b2{0.4, 0.2, 0.2, 0.4};
    CHECK(z_n(a1, b1) == doctest::Approx(z_n(a2, b2)).epsilon(1e-12));
}

TEST_CASE("z_n agrees with the grid check at n = 2") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a{0.2 + std::generate_canonical<double, 32>(rng),
                              0.2 + std::generate_canonical<double, 32>(rng)};
        std::vector<double> b{std::generate_canonical<double, 32>(rng),
                              std::generate_canonical<double, 32>(rng)};
        CHECK(z_n(a, b) == doctest::Approx(zn_grid2(a, b)).epsilon(2e-3));
    }
}

TEST_CASE("z_n equals the active-set oracle on random instances") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const size_t n = 1 + rng() % 5;
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = 0.05 + 2 * std::generate_canonical<double, 32>(rng);
        for (auto& v : b) v = std::generate_canonical<double, 32>(rng);
        CHECK(z_n(a, b) == doctest::Approx(zn_oracle(a, b)).epsilon(1e-6));
    }
}

TEST_CASE("z_n monotone in a and b") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const size_t n = 1 + rng() % 4;
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = 0.1 + std::generate_canonical<double, 32>(rng);
        for (auto& v : b) v = std::generate_canonical<double, 32>(rng);
        const double base = z_n(a, b);
        const size_t i = rng() % n;
        auto a2 = a;
        a2[i] += 0.2;
        CHECK(z_n(a2, b) >= base - 1e-12);
        auto b2 = b;
        b2[i] += 0.2;
        CHECK(z_n(a, b2) >= base - 1e-12);
    }
}

TEST_CASE("primal-dual certificate") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        const size_t n = 1 + rng() % 5;
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = 0.05 + 2 * std::generate_canonical<double, 32>(rng);
        for (auto& v : b) v = std::generate_canonical<double, 32>(rng);
        const auto cert = z_n_certificate(a, b);
        CHECK(cert.primal == doctest::Approx(z_n(a, b)).epsilon(1e-9));
        CHECK(cert.primal == doctest::Approx(cert.dual).epsilon(1e-9));
        double norm2 = 0;
        for (size_t i = 0; i < n; ++i) {
            norm2 += cert.y[i] * cert.y[i];
            CHECK(cert.y[i] <= b[i] + 1e-9);
            CHECK(cert.u[i] >= -a[i] - 1e-9);
        }
        CHECK(norm2 <= 1 + 1e-9);
    }
}

TEST_CASE("B_m cases") {
    // single reference: B = lambda
    const auto single = BoundInputs::make(std::vector<double>{1.0}, std::vector<double>{0.5});
    CHECK(B_m(single) == doctest::Approx(0.5));
    CHECK(mmse_lower_loose(single) == doctest::Approx(0.75));

    // no constraint once rho0 = 0 and lambdas are slack
    const auto slack = BoundInputs::make(std::vector<double>{0.6, 0.8}, std::vector<double>{1, 1});
    CHECK(slack.rho0 == doctest::Approx(0.0));
    CHECK(B_m(slack) == doctest::Approx(1.0));
    CHECK(mmse_lower_loose(slack) == doctest::Approx(0.0));

    // vacuous when residual mass is unconstrained
    const auto vac = BoundInputs::make(std::vector<double>{0.5}, std::vector<double>{1.0});
    CHECK(mmse_lower_loose(vac) == doctest::Approx(0.0));

    // perfectly hidden single reference
    const auto hidden = BoundInputs::make(std::vector<double>{1.0}, std::vector<double>{0.0});
    CHECK(mmse_lower_loose(hidden) == doctest::Approx(1.0));
}

TEST_CASE("equal correlations closed form") {
    for (size_t m : {size_t{1}, size_t{2}, size_t{3}, size_t{4}}) {
        for (double rho2 : {0.8 / m, 0.95 / m, 1.0 / m}) {
            const double rho = std::sqrt(rho2);
            for (double lam : {0.0, 0.3 * rho, 0.9 * rho, rho}) {
                const std::vector<double> rv(m, rho), lv(m, lam);
                const double expected =
                    m * lam * rho + std::sqrt(std::max(0.0, (1 - m * rho2) * (1 - m * lam * lam)));
                CHECK(B_m(BoundInputs::make(rv, lv)) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("tight bound reduces and sharpens") {
    const auto in = BoundInputs::make(std::vector<double>{0.5, 0.5}, std::vector<double>{0.4, 0.6});
    CHECK(mmse_lower_tight(in, 0) == doctest::Approx(mmse_lower_loose(in)));
    CHECK_THROWS_AS(mmse_lower_tight(in, 3), BadT);

    // full orthogonality with rho0 = 0: exactly 1 - sum lambda^2 rho^2
    std::vector<double> rho{std::sqrt(0.5), std::sqrt(0.5)};
    std::vector<double> lam{0.3, 0.7};
    const auto full = BoundInputs::make(rho, lam);
    const double expect = 1 - (0.5 * 0.09 + 0.5 * 0.49);
    CHECK(mmse_lower_tight(full, 2) == doctest::Approx(expect).epsilon(1e-12));

    // BSC with phi = chi_{1,2}: lambda = (1-2 eps)^2, single reference, t = 1
    const double eps = 0.1;
    const double lam12 = (1 - 2 * eps) * (1 - 2 * eps);
    const auto bsc = BoundInputs::make(std::vector<double>{1.0}, std::vector<double>{lam12});
    CHECK(mmse_lower_tight(bsc, 1) == doctest::Approx(1 - std::pow(0.8, 4)).epsilon(1e-12));
}

TEST_CASE("onebit error floor") {
    CHECK(onebit_error_lower(std::vector<double>{1.0}, std::vector<double>{0.0}) ==
          doctest::Approx(0.5));
    CHECK(onebit_error_lower(std::vector<double>{1.0}, std::vector<double>{0.8}) ==
          doctest::Approx(0.1));
    CHECK(onebit_error_lower(std::vector<double>{0.5}, std::vector<double>{1.0}) ==
          doctest::Approx(0.0));
}

TEST_CASE("simple error floor") {
    CHECK(simple_error_lower(0.6, 0.1) == doctest::Approx(0.1));
    CHECK(simple_error_lower(1.0, 0.3) == doctest::Approx(0.0));
    CHECK(simple_error_lower(0.0, 0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(simple_error_lower(-0.1, 0.0), OutOfRange);
    CHECK_THROWS_AS(simple_error_lower(0.5, 0.6), OutOfRange);
}

TEST_CASE("erasure information ceiling") {
    CHECK(erasure_mi_bound(0.5) == doctest::Approx(0.0));
    CHECK(erasure_mi_bound(0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(erasure_mi_bound(0.7), OutOfRange);
}

TEST_CASE("correlation-error product") {
    CHECK(correlation_error_product(std::vector<double>{1, 1},
                                    std::vector<double>{std::sqrt(0.5), std::sqrt(0.5)}) ==
          doctest::Approx(1.0));
    CHECK(correlation_error_product(std::vector<double>{0, 1},
                                    std::vector<double>{std::sqrt(0.5), std::sqrt(0.5)}) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(correlation_error_product(std::vector<double>{1}, std::vector<double>{0.5}),
                    BadWeights);
}

TEST_CASE("correlation-error product decomposes the exact BSC mmse") {
    // W = sum rho_i chi_{S_i} through a BSC: references are the characters,
    // whose conditional images stay orthogonal, so the decomposition is exact
    std::mt19937 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const size_t n = 2 + rng() % 3;
        const double eps = 0.05 + 0.4 * std::generate_canonical<double, 32>(rng);
        const size_t m = 1 + rng() % 3;
        std::vector<uint32_t> masks;
        while (masks.size() < m) {
            const uint32_t cand = 1 + rng() % ((1u << n) - 1);
            bool dup = false;
            for (uint32_t s : masks) dup = dup || s == cand;
            if (!dup) masks.push_back(cand);
        }
        std::vector<double> rho(m);
        double r2 = 0;
        for (auto& r : rho) {
            r = 0.1 + std::generate_canonical<double, 32>(rng);
            r2 += r * r;
        }
        for (auto& r : rho) r /= std::sqrt(r2);
        std::vector<double> coeffs(size_t{1} << n, 0.0);
        std::vector<double> mmse_refs(m);
        for (size_t i = 0; i < m; ++i) {
            coeffs[masks[i]] = rho[i];
            mmse_refs[i] = 1 - std::pow(1 - 2 * eps, 2.0 * std::popcount(masks[i]));
        }
        const FourierSpectrum w_spec(n, coeffs);
        CHECK(correlation_error_product(mmse_refs, rho) ==
              doctest::Approx(bsc_mmse(w_spec, eps)).epsilon(1e-12));
    }
}

TEST_CASE("function secrecy bound from a profile") {
    // perfect secrecy: every eps* is zero
    {
        std::vector<double> coeffs(8, 0.0);
        coeffs[0b011] = 1.0;  // chi_{1,2} on n = 3
        const FourierSpectrum spec(3, coeffs);
        const std::vector<double> eps_star{0, 0, 0};
        const auto out = function_secrecy_bound(spec, eps_star, 3);
        CHECK(out.mu0 == doctest::Approx(1.0));
        CHECK(out.bound == doctest::Approx(0.5));
        CHECK(out.bound_correlation_lambda == doctest::Approx(0.5));
    }
    // parity through a single-parity code: fully revealed
    {
        std::vector<double> coeffs(4, 0.0);
        coeffs[0b11] = 1.0;  // chi_{1,2} on n = 2
        const FourierSpectrum spec(2, coeffs);
        const std::vector<double> eps_star{0, 0.5};  // mu0 = 1/2, full set leaks 1 bit over 2
        const auto out = function_secrecy_bound(spec, eps_star, 2);
        CHECK(out.mu0 == doctest::Approx(0.5));
        CHECK(out.bound == doctest::Approx(0.0));
        CHECK(out.bound_correlation_lambda == doctest::Approx(0.0));
    }
    // low-degree character under absolute secrecy mu0 = 1/2 stays perfectly hidden
    {
        std::vector<double> coeffs(16, 0.0);
        coeffs[0b0011] = 1.0;
        const FourierSpectrum spec(4, coeffs);
        const std::vector<double> eps_star{0, 0, 0.4, 0.5};
        const auto out = function_secrecy_bound(spec, eps_star, 4);
        CHECK(out.mu0 == doctest::Approx(0.5));
        CHECK(out.bound == doctest::Approx(0.5));
    }
    // unbalanced target rejected
    {
        std::vector<double> coeffs(4, 0.0);
        coeffs[0] = 1.0;
        const FourierSpectrum spec(2, coeffs);
        const std::vector<double> eps_star{0, 0};
        CHECK_THROWS_AS(function_secrecy_bound(spec, eps_star, 2), NotBalanced);
    }
}
