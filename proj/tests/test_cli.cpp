#include "doctest.h"

#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& shell_command) {
    FILE* pipe = popen((shell_command + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t m;
    while ((m = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, m);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

const std::string kBin = MCP_GAP_BIN;

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("compute: JSON shape and the flat-case bracket") {
    RunResult r = run(kBin + " compute --K 0 --N 5 --D 1 --n 256");
    REQUIRE(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == "direct");
    CHECK(j["argmin"] == 1.0);
    CHECK(j["K"] == 0.0);
    double v = j["value"];
    CHECK(v >= 0.390625);
    CHECK(v <= 15.4212568767022);
    CHECK(v >= j["comparisons"]["closed_form_lower"].get<double>() - 1e-9);
    CHECK(v <= j["comparisons"]["closed_form_upper"].get<double>() + 1e-9);
    CHECK(v >= j["comparisons"]["intro_lower"].get<double>() - 1e-9);
    CHECK(j["comparisons"].contains("sturm"));
    CHECK(j["comparisons"].contains("von_renesse"));
    CHECK(j["model"]["method"] == "solver");
}

TEST_CASE("compute: reruns and thread counts do not change a single byte") {
    std::string cmd = kBin + " compute --K 1 --N 13 --D 3 --n 64";
    RunResult a = run(cmd);
    RunResult b = run(cmd);
    RunResult c = run("MCP_GAP_THREADS=1 " + cmd);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
}

TEST_CASE("compute: diameters beyond the positive-curvature maximum coincide") {
    RunResult a = run(kBin + " compute --K 1 --N 2 --D 10 --n 64");
    RunResult b = run(kBin + " compute --K 1 --N 2 --D 100 --n 64");
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    nlohmann::json j = nlohmann::json::parse(a.out);
    CHECK(j["D"].get<double>() == doctest::Approx(3.14159265359));
}

TEST_CASE("scan: CSV header, row count, verdict trailer") {
    RunResult r = run(kBin + " scan --K 0 --N 3 --D 1 --count 8 --n 64");
    REQUIRE(r.status == 0);
    std::vector<std::string> ls = lines(r.out);
    REQUIRE(ls.size() == 10);
    CHECK(ls[0] == "D_prime,lambda,scaled,error");
    CHECK(ls[9] == "# lambda: strictly decreasing; scaled: constant");
    // every data row has four comma-separated numeric fields
    for (int i = 1; i <= 8; ++i) {
        std::istringstream row(ls[i]);
        std::string field;
        int fields = 0;
        while (std::getline(row, field, ',')) {
            CHECK_NOTHROW((void)std::stod(field));
            ++fields;
        }
        CHECK(fields == 4);
    }
}

TEST_CASE("scan: K > 0 defaults --D to the diameter bound") {
    RunResult r = run(kBin + " scan --K 1 --N 2 --count 8 --n 64");
    CHECK(r.status == 0);
    CHECK(lines(r.out).back().find("# lambda:") == 0);
}

TEST_CASE("validate: generated densities pass and round-trip through stdin") {
    RunResult rep = run(kBin + " validate --K 0 --N 3 --D 1 --n 128 --seed 5");
    REQUIRE(rep.status == 0);
    nlohmann::json j = nlohmann::json::parse(rep.out);
    CHECK(j["pass"] == true);
    CHECK(j["diameter_ok"] == true);
    CHECK(j["worst_ratio"].get<double>() <= 1.0 + 1e-9);

    RunResult piped = run(kBin + " validate --K 0 --N 3 --D 1 --n 128 --seed 5 --emit-density | " +
                          kBin + " validate --K 0 --N 3 --input -");
    CHECK(piped.status == 0);
    CHECK(nlohmann::json::parse(piped.out)["pass"] == true);
}

TEST_CASE("validate: over-steep density is rejected with exit code 1") {
    // x^4 grows one power faster than the N = 3 class admits
    std::ostringstream density;
    density << "{\"a\": 0, \"b\": 1, \"n\": 64, \"samples\": [";
    for (int i = 0; i <= 64; ++i)
        density << (i ? "," : "") << std::pow(i / 64.0, 4.0);
    density << "]}";
    RunResult r = run("printf '%s' '" + density.str() + "' | " + kBin +
                      " validate --K 0 --N 3 --input -");
    CHECK(r.status == 1);
    CHECK(nlohmann::json::parse(r.out)["pass"] == false);
}

TEST_CASE("bounds: closed-form route and density route") {
    RunResult cf = run(kBin + " bounds --K 0 --N 5 --D 2");
    REQUIRE(cf.status == 0);
    nlohmann::json j = nlohmann::json::parse(cf.out);
    CHECK(j["scaled_bracket"]["lower"] == doctest::Approx(0.390625));
    CHECK(j["lambda_bracket"]["lower"] == doctest::Approx(0.390625 / 4.0));
    CHECK(j["scaled_bracket"]["provenance"] == "zero-curvature sandwich");
    CHECK(j.contains("intro_lower"));

    // a weight bounded away from zero: the bracket must capture the gap
    std::ostringstream density;
    density << "{\"a\": 0, \"b\": 1, \"n\": 128, \"samples\": [";
    for (int i = 0; i <= 128; ++i) density << (i ? "," : "") << 1.0 + i / 128.0;
    density << "]}";
    RunResult dens = run("printf '%s' '" + density.str() + "' | " + kBin +
                         " bounds --input - --eigenfunction");
    REQUIRE(dens.status == 0);
    nlohmann::json b = nlohmann::json::parse(dens.out);
    CHECK(b["A"].get<double>() == doctest::Approx(0.354892530424).epsilon(1e-4));
    double lam = b["spectral"]["lambda"];
    CHECK(lam >= b["bracket"]["lower"].get<double>() * (1.0 - 1e-6));
    CHECK(lam <= b["bracket"]["upper"].get<double>() * (1.0 + 1e-6));
    CHECK(b["spectral"]["eigenfunction"].size() == 129);

    // generated class densities may degenerate at the interval ends; the
    // density route still reports the requested interval as given
    RunResult gen = run(kBin + " validate --K 0 --N 3 --D 1 --n 128 --emit-density | " +
                        kBin + " bounds --input -");
    REQUIRE(gen.status == 0);
    nlohmann::json g = nlohmann::json::parse(gen.out);
    CHECK(g.contains("A"));
    CHECK(g.contains("bracket"));
    CHECK(g["spectral"]["lambda"].get<double>() > 0.0);
}

TEST_CASE("exit codes distinguish configuration errors") {
    CHECK(run(kBin + " compute --K 0 --N 0.5 --D 1").status == 2);   // N <= 1
    CHECK(run(kBin + " compute --K 0 --N 3").status == 2);           // missing --D
    CHECK(run(kBin + " scan --K -1 --N 3 --n 64 --count 8").status == 2);  // no default D
    CHECK(run(kBin + " compute --K 0 --N 3 --D 1 --bogus").status == 2);   // unknown flag
    CHECK(run(kBin + " compute --N 3 --D 1").status == 2);           // missing required --K
    CHECK(run(kBin + " compute --K 0 --N 3 --D 1 --output csv").status == 2);
    CHECK(run("printf 'not json' | " + kBin + " validate --K 0 --N 3 --input -").status == 2);
    CHECK(run(kBin + " --help").status == 0);
}

TEST_CASE("selftest: the acceptance battery passes at a coarse grid") {
    RunResult r = run(kBin + " selftest --n 64");
    CHECK(r.status == 0);
    CHECK(r.out.find("11/11 pass") != std::string::npos);
    CHECK(r.out.find("runtime_ok=yes") != std::string::npos);
}
