#include <doctest.h>

#include <json.hpp>

#include <lsckit/lsckit.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

// End-to-end checks of the installed command-line surface. Every invocation
// goes through the real binary so output formats and exit codes stay honest.

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "lsckit_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args, bool raw_command = false) {
    const auto out_path = work_dir() / "stdout.txt";
    const auto err_path = work_dir() / "stderr.txt";
    const std::string cmd = (raw_command ? args : std::string(LSCKIT_BIN) + " " + args) + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

void write_bytes(const fs::path& p, const std::vector<uint8_t>& data) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

std::vector<uint8_t> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("encrypt/decrypt round trip through the binary") {
    const auto dir = work_dir();
    std::mt19937 rng(1);
    std::vector<uint8_t> plain(3000);
    for (auto& b : plain) b = static_cast<uint8_t>(rng() & 0xFF);
    write_bytes(dir / "plain.bin", plain);

    auto kg = run("keygen -o " + (dir / "key.bin").string() + " --bytes 32");
    REQUIRE(kg.exit_code == 0);

    auto enc = run("encrypt -i " + (dir / "plain.bin").string() + " -o " +
                   (dir / "c.lsc").string() + " --key " + (dir / "key.bin").string());
    REQUIRE(enc.exit_code == 0);

    auto dec = run("decrypt -i " + (dir / "c.lsc").string() + " -o " +
                   (dir / "back.bin").string() + " --key " + (dir / "key.bin").string());
    REQUIRE(dec.exit_code == 0);
    CHECK(read_bytes(dir / "back.bin") == plain);
}

TEST_CASE("phase 1 needs no key and decrypting it alone fails with the list size") {
    const auto dir = work_dir();
    std::vector<uint8_t> plain(600, 0x42);
    write_bytes(dir / "p.bin", plain);
    write_bytes(dir / "k.bin", std::vector<uint8_t>(16, 7));

    auto p1 = run("encrypt -i " + (dir / "p.bin").string() + " -o " + (dir / "p1.lsc").string() +
                  " --phase 1");
    REQUIRE(p1.exit_code == 0);

    auto dec = run("decrypt -i " + (dir / "p1.lsc").string() + " -o " + (dir / "x.bin").string() +
                   " --key " + (dir / "k.bin").string());
    CHECK(dec.exit_code == 3);
    const auto err = json::parse(dec.err);
    CHECK(err.at("type") == "data");
    const std::string msg = err.at("error");
    CHECK(msg.find("phase 2 missing") != std::string::npos);
    CHECK(msg.find("256^64") != std::string::npos);

    // phase 2 alone + the pre-cached phase 1 decrypts fine
    auto p2 = run("encrypt -i " + (dir / "p.bin").string() + " -o " + (dir / "p2.lsc").string() +
                  " --phase 2 --key " + (dir / "k.bin").string());
    REQUIRE(p2.exit_code == 0);
    auto dec2 = run("decrypt -i " + (dir / "p2.lsc").string() + " --phase1 " +
                    (dir / "p1.lsc").string() + " -o " + (dir / "y.bin").string() + " --key " +
                    (dir / "k.bin").string());
    REQUIRE(dec2.exit_code == 0);
    CHECK(read_bytes(dir / "y.bin") == plain);
}

TEST_CASE("analyze secrecy --mds prints mu0 = k/n") {
    auto r = run("analyze secrecy --mds 5 4 2");
    REQUIRE(r.exit_code == 0);
    const auto out = json::parse(r.out);
    CHECK(out.at("mu0").get<double>() == doctest::Approx(0.5));
    CHECK(out.at("exact").get<bool>());
    CHECK(out.at("n").get<int>() == 4);
}

TEST_CASE("analyze secrecy on the erasure fixture") {
    const auto dir = work_dir();
    // hand-rolled n = 2, alpha = 0.5 erasure fixture (z symbol 2 = erased)
    const size_t n = 2;
    std::vector<double> probs(4 * 9, 0.0);
    for (size_t x = 0; x < 4; ++x)
        for (size_t pat = 0; pat < 4; ++pat) {
            double w = 0.25;
            size_t z = 0;
            for (size_t i = 0; i < n; ++i) {
                const bool erased = pat >> i & 1u;
                w *= 0.5;
                z = z * 3 + (erased ? 2 : (x >> i & 1u));
            }
            probs[x * 9 + z] += w;
        }
    json fixture = {{"x_arity", {2, 2}}, {"z_arity", 9}, {"probs", probs}};
    write_text(dir / "erasure.json", fixture.dump());
    auto r = run("analyze secrecy " + (dir / "erasure.json").string());
    REQUIRE(r.exit_code == 0);
    const auto out = json::parse(r.out);
    for (double wl : out.at("worst_leakage_per_t").get<std::vector<double>>())
        CHECK(wl == doctest::Approx(0.5).epsilon(1e-9));
    // every dual value sits at 1 - alpha, so mu_eps steps from 0 to 1 there
    for (double es : out.at("eps_star").get<std::vector<double>>())
        CHECK(es == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(out.at("mu0").get<double>() == doctest::Approx(0.0));
}

TEST_CASE("limit errors exit with code 4") {
    auto r = run("analyze secrecy --mds 32 25 5");
    CHECK(r.exit_code == 4);
    const auto err = json::parse(r.err);
    CHECK(err.at("type") == "limit");
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("bogus-subcommand").exit_code == 2);
    CHECK(run("encrypt").exit_code == 2);
}

TEST_CASE("bounds quad matches the closed form") {
    const auto dir = work_dir();
    write_text(dir / "quad.json", R"({"a":[1,1],"b":[0.1,1]})");
    auto r = run("bounds quad -i " + (dir / "quad.json").string());
    REQUIRE(r.exit_code == 0);
    const auto out = json::parse(r.out);
    CHECK(out.at("z").get<double>() == doctest::Approx(1.09498743710662).epsilon(1e-11));
    CHECK(out.at("primal").get<double>() == doctest::Approx(out.at("dual").get<double>()));
}

TEST_CASE("bounds mmse and onebit") {
    const auto dir = work_dir();
    write_text(dir / "mmse.json", R"({"rho":[1.0],"lambda":[0.5],"t":1})");
    auto r = run("bounds mmse -i " + (dir / "mmse.json").string());
    REQUIRE(r.exit_code == 0);
    auto out = json::parse(r.out);
    CHECK(out.at("mmse_lower").get<double>() == doctest::Approx(0.75));
    CHECK(out.at("mmse_lower_tight").get<double>() == doctest::Approx(0.75));

    write_text(dir / "onebit.json", R"({"rho":[1.0],"alpha":[0.1]})");
    auto r2 = run("bounds onebit -i " + (dir / "onebit.json").string());
    REQUIRE(r2.exit_code == 0);
    CHECK(json::parse(r2.out).at("error_lower").get<double>() == doctest::Approx(0.1));
}

TEST_CASE("fourier transform and otpbound") {
    const auto dir = work_dir();
    write_text(dir / "parity2.tt", "2\n+--+\n");  // chi_{1,2} on two bits
    auto tr = run("fourier transform -i " + (dir / "parity2.tt").string());
    REQUIRE(tr.exit_code == 0);
    const auto spec = json::parse(tr.out);
    REQUIRE(spec.at("coeffs").size() == 1);
    CHECK(spec.at("coeffs")[0].at("s").get<int>() == 3);
    CHECK(spec.at("coeffs")[0].at("rho").get<double>() == doctest::Approx(1.0));

    // uniform key wipes out the leakage entirely
    std::vector<double> uniform(4, 0.25);
    write_text(dir / "ukey.json", json{{"probs", uniform}}.dump());
    auto ob = run("fourier otpbound -i " + (dir / "parity2.tt").string() + " --key-pmf " +
                  (dir / "ukey.json").string());
    REQUIRE(ob.exit_code == 0);
    auto out = json::parse(ob.out);
    CHECK(out.at("mi_upper_bits").get<double>() == doctest::Approx(0.0));
    CHECK(out.at("zero_leakage").get<bool>());

    // iid pad at eps = 0.25 on a degree-2 character: bound = 0.25 bits
    auto ob2 = run("fourier otpbound -i " + (dir / "parity2.tt").string() + " --eps 0.25");
    REQUIRE(ob2.exit_code == 0);
    CHECK(json::parse(ob2.out).at("mi_upper_bits").get<double>() == doctest::Approx(0.25));
}

TEST_CASE("funsec headline bound") {
    const auto dir = work_dir();
    // MDS-style profile at mu0 = 1/2 on two coordinates, parity target
    write_text(dir / "funsec.json", R"({"n":2,"eps_star":[0.0,0.5],"table":"2\n+--+\n"})");
    auto r = run("bounds funsec -i " + (dir / "funsec.json").string());
    REQUIRE(r.exit_code == 0);
    const auto out = json::parse(r.out);
    CHECK(out.at("mu0").get<double>() == doctest::Approx(0.5));
    CHECK(out.at("bound").get<double>() == doctest::Approx(0.0));

    // perfect secrecy: headline 1/2
    write_text(dir / "funsec2.json", R"({"n":2,"eps_star":[0.0,0.0],"table":"2\n+--+\n"})");
    auto r2 = run("bounds funsec -i " + (dir / "funsec2.json").string());
    REQUIRE(r2.exit_code == 0);
    CHECK(json::parse(r2.out).at("bound").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("CLI output equals direct library calls byte for byte") {
    // the encrypt path must be a thin adapter: byte-identical container
    const auto dir = work_dir();
    std::vector<uint8_t> plain(100, 0x5A);
    std::vector<uint8_t> key(8, 3);
    write_bytes(dir / "adapter_p.bin", plain);
    write_bytes(dir / "adapter_k.bin", key);
    auto enc = run("encrypt -i " + (dir / "adapter_p.bin").string() + " -o " +
                   (dir / "adapter_c.lsc").string() + " --key " + (dir / "adapter_k.bin").string() +
                   " --q 256 --n 16 --k 4");
    REQUIRE(enc.exit_code == 0);

    const lsckit::LscCode code(lsckit::Field::binary(0x11B), 16, 4);
    const auto direct = lsckit::two_phase_encrypt(code, plain, key);
    CHECK(read_bytes(dir / "adapter_c.lsc") == direct.serialize());
}

TEST_CASE("LSCKIT_THREADS changes parallelism but never the bytes") {
    const auto dir = work_dir();
    std::mt19937 rng(77);
    std::vector<uint8_t> plain(4096);
    for (auto& b : plain) b = static_cast<uint8_t>(rng() & 0xFF);
    write_bytes(dir / "par_p.bin", plain);
    write_bytes(dir / "par_k.bin", std::vector<uint8_t>(16, 5));

    auto seq = run("encrypt -i " + (dir / "par_p.bin").string() + " -o " +
                   (dir / "par_seq.lsc").string() + " --key " + (dir / "par_k.bin").string() +
                   " --q 256 --n 32 --k 8");
    REQUIRE(seq.exit_code == 0);
    auto par = run("env LSCKIT_THREADS=4 " + std::string(LSCKIT_BIN) + " encrypt -i " +
                       (dir / "par_p.bin").string() + " -o " + (dir / "par_par.lsc").string() +
                       " --key " + (dir / "par_k.bin").string() + " --q 256 --n 32 --k 8",
                   true);
    REQUIRE(par.exit_code == 0);
    CHECK(read_bytes(dir / "par_seq.lsc") == read_bytes(dir / "par_par.lsc"));
}
