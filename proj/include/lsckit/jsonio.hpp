#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "boolfourier.hpp"
#include "infotheory.hpp"
#include "secrecy.hpp"

// JSON encodings for the analysis fixtures and reports. Binary data lives in
// the cipher container format; everything analytic is JSON for scriptability.

namespace lsckit {

/// Rounds to 12 significant digits so emitted JSON numbers are stable
/// across platforms.
inline double round_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

/// {"x_arity":[...], "z_arity":m, "probs":[...]} with Z fastest-varying.
inline JointPmf pmf_from_json(const nlohmann::json& j) {
    if (!j.contains("x_arity") || !j.contains("z_arity") || !j.contains("probs"))
        throw BadParameters("pmf JSON needs x_arity, z_arity and probs");
    std::vector<uint32_t> x_arity = j.at("x_arity").get<std::vector<uint32_t>>();
    const auto z_arity = j.at("z_arity").get<uint32_t>();
    std::vector<double> probs = j.at("probs").get<std::vector<double>>();
    return {std::move(x_arity), z_arity, std::move(probs)};
}

inline nlohmann::json pmf_to_json(const JointPmf& pmf) {
    return {{"x_arity", pmf.x_arity()}, {"z_arity", pmf.z_arity()}, {"probs", pmf.probs()}};
}

inline nlohmann::json profile_to_json(const SecrecyProfile& p) {
    nlohmann::json wl = nlohmann::json::array();
    nlohmann::json es = nlohmann::json::array();
    for (double v : p.worst_leakage_per_t) wl.push_back(round_sig(v));
    for (double v : p.eps_star) es.push_back(round_sig(v));
    return {{"n", p.n},
            {"worst_leakage_per_t", wl},
            {"mu0", round_sig(p.mu0)},
            {"eps_star", es},
            {"exact", p.exact}};
}

inline nlohmann::json spectrum_to_json(const FourierSpectrum& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (size_t mask = 0; mask < s.size(); ++mask) {
        const double v = s[static_cast<uint32_t>(mask)];
        if (std::abs(v) < 1e-12) continue;
        coeffs.push_back({{"s", mask}, {"rho", round_sig(v)}});
    }
    return {{"n", s.n()}, {"coeffs", coeffs}};
}

inline FourierSpectrum spectrum_from_json(const nlohmann::json& j) {
    const auto n = j.at("n").get<size_t>();
    if (n > 20) throw TooLarge("Boolean-function analysis limited to n <= 20");
    std::vector<double> c(size_t{1} << n, 0.0);
    for (const auto& e : j.at("coeffs")) {
        const auto mask = e.at("s").get<size_t>();
        if (mask >= c.size()) throw BadParameters("subset mask out of range");
        c[mask] = e.at("rho").get<double>();
    }
    return {n, std::move(c)};
}

}  // namespace lsckit
