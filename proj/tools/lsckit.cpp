// lsckit: list-source coding, the induced short-key cipher, and exact
// information-leakage analysis from the command line.
//
// Subcommands
//   encrypt / decrypt   two-phase container encryption over GF(q)
//   keygen              random key file from OS entropy
//   analyze secrecy     exact symbol-secrecy profiles (fixture or --mds)
//   bounds quad|mmse|onebit|funsec
//   fourier transform|otpbound
//
// All analysis I/O is JSON with numbers at 12 significant digits. Exit
// codes: 0 ok, 2 usage, 3 data error, 4 limit exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <lsckit/jsonio.hpp>
#include <lsckit/lsckit.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace lsckit;

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadParameters("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadParameters("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParameters("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw BadParameters(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

unsigned thread_count() {
    if (const char* env = std::getenv("LSCKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

struct FieldArgs {
    uint64_t q = 256;
    std::optional<uint32_t> poly;

    Field make() const {
        if (poly) return Field::binary(*poly);
        return Field::of_order(q);
    }
};

KeystreamKind parse_keystream(const std::string& name) {
    if (name == "otp") return KeystreamKind::strict_otp;
    if (name == "mixer") return KeystreamKind::counter_mixer;
    throw BadParameters("unknown keystream: " + name);
}

int run_encrypt(const std::string& in_path, const std::string& out_path,
                const std::string& key_path, const FieldArgs& fa, size_t n, size_t k,
                const std::string& phase, const std::string& ks_name) {
    const bool p1 = phase == "1" || phase == "both";
    const bool p2 = phase == "2" || phase == "both";
    if (!p1 && !p2) throw BadParameters("--phase must be 1, 2 or both");
    std::vector<uint8_t> key{0};
    if (p2) {
        if (key_path.empty()) throw BadKey("phase 2 requires --key");
        key = read_file(key_path);
        if (key.empty()) throw BadKey("key file is empty");
    }
    const LscCode code(fa.make(), n, k);
    const auto plain = read_file(in_path);
    const auto c = two_phase_encrypt(code, plain, key, parse_keystream(ks_name), p1, p2,
                                     thread_count());
    write_file(out_path, c.serialize());
    return 0;
}

int run_decrypt(const std::string& in_path, const std::string& out_path,
                const std::string& key_path, const std::string& phase1_path,
                const std::string& ks_name) {
    auto c = CipherContainer::parse(read_file(in_path));
    if (!phase1_path.empty()) {
        const auto p1 = CipherContainer::parse(read_file(phase1_path));
        c = merge_phases(p1, c);
    }
    if (key_path.empty()) throw BadKey("decrypt requires --key");
    const auto key = read_file(key_path);
    if (key.empty()) throw BadKey("key file is empty");
    const auto plain = two_phase_decrypt(c, key, parse_keystream(ks_name), thread_count());
    write_file(out_path, plain);
    return 0;
}

int run_keygen(const std::string& out_path, size_t bytes) {
    std::random_device rd;
    std::vector<uint8_t> key(bytes);
    for (auto& b : key) b = static_cast<uint8_t>(rd());
    write_file(out_path, key);
    return 0;
}

int run_analyze_secrecy(const std::string& fixture, const std::vector<uint64_t>& mds,
                        bool exact_required) {
    SecrecyProfile prof;
    if (!mds.empty()) {
        if (mds.size() != 3) throw BadParameters("--mds needs q n k");
        const Field field = Field::of_order(mds[0]);
        const LscCode code(field, mds[1], mds[2]);
        prof = lsc_secrecy_profile(code, std::vector<uint64_t>(field.order(), 1));
    } else if (!fixture.empty()) {
        const auto pmf = pmf_from_json(read_json(fixture));
        prof = secrecy_profile(pmf);
    } else {
        throw BadParameters("analyze secrecy needs a fixture file or --mds q n k");
    }
    if (exact_required && !prof.exact)
        throw BadParameters("--exact requested but no integer-weight backend is available");
    std::cout << profile_to_json(prof).dump(2) << '\n';
    return 0;
}

int run_bounds(const std::string& which, const std::string& input_path) {
    const json in = read_json(input_path);
    json out;
    if (which == "quad") {
        const auto a = in.at("a").get<std::vector<double>>();
        const auto b = in.at("b").get<std::vector<double>>();
        const auto cert = z_n_certificate(a, b);
        out = {{"z", round_sig(z_n(a, b))},
               {"k_star", cert.k_star},
               {"primal", round_sig(cert.primal)},
               {"dual", round_sig(cert.dual)}};
    } else if (which == "mmse") {
        const auto rho = in.at("rho").get<std::vector<double>>();
        const auto lambda = in.at("lambda").get<std::vector<double>>();
        const auto inputs = BoundInputs::make(rho, lambda);
        out = {{"B", round_sig(B_m(inputs))},
               {"rho0", round_sig(inputs.rho0)},
               {"mmse_lower", round_sig(mmse_lower_loose(inputs))}};
        if (in.contains("t")) {
            const auto t = in.at("t").get<size_t>();
            out["mmse_lower_tight"] = round_sig(mmse_lower_tight(inputs, t));
            out["conditional_norm_upper"] = round_sig(conditional_norm_upper_tight(inputs, t));
        }
    } else if (which == "onebit") {
        const auto rho = in.at("rho").get<std::vector<double>>();
        std::vector<double> lambda;
        if (in.contains("alpha")) {
            for (double a : in.at("alpha").get<std::vector<double>>()) lambda.push_back(1 - 2 * a);
        } else {
            lambda = in.at("lambda").get<std::vector<double>>();
        }
        out = {{"error_lower", round_sig(onebit_error_lower(rho, lambda))}};
        if (rho.size() == 1 && in.contains("alpha"))
            out["simple_error_lower"] =
                round_sig(simple_error_lower(rho[0], in.at("alpha").at(0).get<double>()));
    } else if (which == "funsec") {
        const auto n = in.at("n").get<size_t>();
        const auto eps_star = in.at("eps_star").get<std::vector<double>>();
        FourierSpectrum spec =
            in.contains("table")
                ? fourier_transform(BoolFunction::parse(in.at("table").get<std::string>()))
                : spectrum_from_json(in.at("spectrum"));
        const auto r = function_secrecy_bound(spec, eps_star, n);
        out = {{"mu0", round_sig(r.mu0)},
               {"bound", round_sig(r.bound)},
               {"bound_entropy_lambda", round_sig(r.bound_entropy_lambda)},
               {"bound_correlation_lambda", round_sig(r.bound_correlation_lambda)}};
    } else {
        throw BadParameters("unknown bounds subcommand: " + which);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int run_fourier_transform(const std::string& table_path) {
    std::ifstream in(table_path);
    if (!in) throw BadParameters("cannot open " + table_path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto f = BoolFunction::parse(text);
    std::cout << spectrum_to_json(fourier_transform(f)).dump(2) << '\n';
    return 0;
}

int run_fourier_otpbound(const std::string& table_path, const std::string& key_pmf_path,
                         std::optional<double> iid_eps) {
    std::ifstream in(table_path);
    if (!in) throw BadParameters("cannot open " + table_path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto f = BoolFunction::parse(text);
    const auto spec = fourier_transform(f);
    std::vector<double> atten;
    if (iid_eps) {
        atten = iid_attenuation(f.n(), *iid_eps);
    } else if (!key_pmf_path.empty()) {
        const auto pmf = read_json(key_pmf_path).at("probs").get<std::vector<double>>();
        atten = channel_attenuation(f.n(), pmf);
    } else {
        throw BadParameters("otpbound needs --eps or --key-pmf");
    }
    const auto bound = otp_mi_bound(spec, atten);
    const json out = {{"mi_upper_bits", round_sig(bound.bits)},
                      {"zero_leakage", bound.zero},
                      {"mmse", round_sig(generalized_otp_mmse(spec, atten))}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

void emit_error(const std::string& type, const std::string& what) {
    std::cerr << json{{"error", what}, {"type", type}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"list-source codes: encryption and exact secrecy analysis"};
    app.require_subcommand(1);

    auto* enc = app.add_subcommand("encrypt", "two-phase encrypt a file into a container");
    std::string in_path, out_path, key_path, phase = "both", ks_name = "mixer", phase1_path;
    FieldArgs fa;
    size_t n = 255, k = 64, key_bytes = 32;
    enc->add_option("-i,--in", in_path, "plaintext file")->required();
    enc->add_option("-o,--out", out_path, "container file")->required();
    enc->add_option("--key", key_path, "key file (unused for --phase 1)");
    enc->add_option("--q", fa.q, "field order (prime or power of 2)")->capture_default_str();
    enc->add_option("--poly", fa.poly, "explicit GF(2^m) polynomial bitmask");
    enc->add_option("--n", n, "symbols per block")->capture_default_str();
    enc->add_option("--k", k, "list dimension")->capture_default_str();
    enc->add_option("--phase", phase, "1, 2 or both")->capture_default_str();
    enc->add_option("--keystream", ks_name, "otp (strict) or mixer (test keystream)")
        ->capture_default_str();

    auto* dec = app.add_subcommand("decrypt", "decrypt a container");
    dec->add_option("-i,--in", in_path, "container file")->required();
    dec->add_option("-o,--out", out_path, "plaintext output")->required();
    dec->add_option("--key", key_path, "key file")->required();
    dec->add_option("--phase1", phase1_path, "pre-cached phase-1 container to merge");
    dec->add_option("--keystream", ks_name, "otp (strict) or mixer (test keystream)")
        ->capture_default_str();

    auto* kg = app.add_subcommand("keygen", "write random key bytes from OS entropy");
    kg->add_option("-o,--out", out_path, "key file")->required();
    kg->add_option("--bytes", key_bytes, "key length in bytes")->capture_default_str();

    auto* an = app.add_subcommand("analyze", "information-leakage analysis");
    an->require_subcommand(1);
    auto* sec = an->add_subcommand("secrecy", "exact symbol-secrecy profile");
    std::string fixture;
    std::vector<uint64_t> mds;
    bool exact_flag = false;
    sec->add_option("fixture", fixture, "joint pmf JSON fixture");
    sec->add_option("--mds", mds, "q n k: MDS list-source code with a uniform source")->expected(3);
    sec->add_flag("--exact", exact_flag, "require the exact-rational backend");

    auto* bd = app.add_subcommand("bounds", "converse bound calculators");
    bd->require_subcommand(1);
    std::string bounds_input;
    auto* bd_quad = bd->add_subcommand("quad", "closed-form norm-ball maximization");
    auto* bd_mmse = bd->add_subcommand("mmse", "MMSE lower bounds");
    auto* bd_onebit = bd->add_subcommand("onebit", "predicate guessing-error floor");
    auto* bd_funsec = bd->add_subcommand("funsec", "function secrecy from a profile");
    for (auto* sub : {bd_quad, bd_mmse, bd_onebit, bd_funsec})
        sub->add_option("-i,--in", bounds_input, "input JSON")->required();

    auto* fr = app.add_subcommand("fourier", "Boolean-function Fourier tools");
    fr->require_subcommand(1);
    std::string table_path, key_pmf_path;
    std::optional<double> iid_eps;
    auto* fr_tr = fr->add_subcommand("transform", "truth table -> spectrum JSON");
    fr_tr->add_option("-i,--in", table_path, "truth table file")->required();
    auto* fr_ob = fr->add_subcommand("otpbound", "one-time-pad leakage bound");
    fr_ob->add_option("-i,--in", table_path, "truth table file")->required();
    fr_ob->add_option("--key-pmf", key_pmf_path, "key pmf JSON ({\"probs\":[...]})");
    fr_ob->add_option("--eps", iid_eps, "i.i.d. key bias");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (enc->parsed()) return run_encrypt(in_path, out_path, key_path, fa, n, k, phase, ks_name);
        if (dec->parsed()) return run_decrypt(in_path, out_path, key_path, phase1_path, ks_name);
        if (kg->parsed()) return run_keygen(out_path, key_bytes);
        if (sec->parsed()) return run_analyze_secrecy(fixture, mds, exact_flag);
        if (bd_quad->parsed()) return run_bounds("quad", bounds_input);
        if (bd_mmse->parsed()) return run_bounds("mmse", bounds_input);
        if (bd_onebit->parsed()) return run_bounds("onebit", bounds_input);
        if (bd_funsec->parsed()) return run_bounds("funsec", bounds_input);
        if (fr_tr->parsed()) return run_fourier_transform(table_path);
        if (fr_ob->parsed()) return run_fourier_otpbound(table_path, key_pmf_path, iid_eps);
        std::cerr << app.help();
        return 2;
    } catch (const LimitError& e) {
        emit_error("limit", e.what());
        return 4;
    } catch (const Error& e) {
        emit_error("data", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 3;
    }
}
