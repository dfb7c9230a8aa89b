#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcstat/cli.hpp"

using namespace mcstat;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream f(path, std::ios::trunc);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

const char* kLoopPlusEdge =
    "genus 2\n"
    "vertex a genus 0\n"
    "vertex b genus 1\n"
    "edge e1 a a weight 1\n"
    "edge e2 a b weight 1\n";

const char* kThetaPants =
    "genus 2\n"
    "vertex a genus 0\n"
    "vertex b genus 0\n"
    "edge e1 a b weight 1\n"
    "edge e2 a b weight 1\n"
    "edge e3 a b weight 1\n";

}  // namespace

TEST_CASE("wpvol prints canonical polynomials") {
    CliResult r = run({"wpvol", "1", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "(1/24)*x1^2 + (1/6)*u\n");

    r = run({"wpvol", "0", "3"});
    CHECK(r.out == "1\n");

    r = run({"wpvol", "0", "2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("unstable") != std::string::npos);

    r = run({"--cap", "3", "wpvol", "2", "2"});
    CHECK(r.code == 2);
}

TEST_CASE("poly subcommand") {
    TempFile f("cli_poly_test.mc", kLoopPlusEdge);
    CliResult r = run({"poly", f.path});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "vars: x1=e1 x2=e2\n"
          "P = (1/48)*x1*x2^3 + (1/12)*u*x1*x2\n"
          "P_top = (1/48)*x1*x2^3\n");
}

TEST_CASE("prob subcommand emits the exact rational and decimal") {
    TempFile f("cli_prob_test.mc", kThetaPants);
    CliResult r = run({"prob", f.path, "--box", "1=0:1/2"});
    CHECK(r.code == 0);
    CHECK(r.out == "probability = 13/16 = 0.812500000000\n");

    r = run({"--format", "exact", "prob", f.path, "--box", "1=0:1/2"});
    CHECK(r.out == "probability = 13/16\n");

    r = run({"--format", "decimal", "--digits", "4", "prob", f.path, "--box", "1=0:1/2"});
    CHECK(r.out == "probability = 0.8125\n");

    r = run({"prob", f.path, "--box", "9=0:1/2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("out of range") != std::string::npos);
}

TEST_CASE("mass subcommand") {
    TempFile f("cli_mass_test.mc", kLoopPlusEdge);
    CliResult r = run({"--format", "exact", "mass", f.path});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "vars: x1=e1 x2=e2\n"
          "M(L) = (1/960)*L^5 + (1/72)*u*L^3\n"
          "C = 1/960\n"
          "feasible: yes\n");

    r = run({"--format", "exact", "mass", f.path, "--box", "1=3/4:7/8", "--box", "2=3/4:7/8"});
    CHECK(r.out.find("M(L) = 0\n") != std::string::npos);
    CHECK(r.out.find("feasible: no") != std::string::npos);
}

TEST_CASE("density, moments, marginal, count-coef") {
    TempFile f("cli_theta_test.mc", kThetaPants);
    CliResult r = run({"--format", "exact", "density", f.path, "--point", "1/3,1/3,1/3"});
    CHECK(r.out == "density = 40/9\n");

    r = run({"--format", "exact", "moments", f.path, "--m", "1,0,0", "--m", "2,0,0"});
    CHECK(r.out == "E[x1] = 1/3\nE[x1^2] = 1/7\n");

    r = run({"--format", "exact", "marginal", f.path, "--i", "1", "--plot", "2"});
    CHECK(r.out ==
          "vars: x1=e1 x2=e2 x3=e3\n"
          "support: (0, 1)\n"
          "density(t) = -20*t^4 + 60*t^3 - 60*t^2 + 20*t\n"
          "0 0\n"
          "1/2 5/4\n"
          "1 0\n");

    r = run({"--format", "exact", "count-coef", f.path, "--ratio", "1"});
    CHECK(r.out == "counting_coefficient = 1/720\n");
}

TEST_CASE("sample determinism and enumerate output") {
    TempFile f("cli_sample_test.mc", kThetaPants);
    CliResult a = run({"sample", f.path, "--count", "50", "--seed", "9"});
    CliResult b = run({"sample", f.path, "--count", "50", "--seed", "9"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# sample k=3 count=50 seed=9 workers=4\n") == 0);

    CliResult e = run({"enumerate", "--genus", "2", "--curves", "1"});
    CHECK(e.code == 0);
    CHECK(e.out.find("count: 2\n") == 0);
    CHECK(e.out.find("g2 k1") != std::string::npos);
}

TEST_CASE("verify passes on valid input and reports the degree rule") {
    TempFile f("cli_verify_test.mc",
               "genus 3\nvertex a genus 2\nvertex b genus 1\nedge e1 a b weight 1\n");
    CliResult r = run({"verify", f.path});
    CHECK(r.code == 0);
    CHECK(r.out.find("[ok] degree of top part: deg(P_top) = 11 = 2d-k (d=6, k=1)") !=
          std::string::npos);
    CHECK(r.out.find("verify: all checks passed") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);

    TempFile g("cli_verify_pants.mc", kThetaPants);
    CliResult rp = run({"verify", g.path});
    CHECK(rp.code == 0);
    CHECK(rp.out.find("[ok] product-form density") != std::string::npos);
    CHECK(rp.out.find("[ok] cone-form equivalence") != std::string::npos);

    CliResult rmc = run({"verify", g.path, "--mc", "5000", "--seed", "11"});
    CHECK(rmc.code == 0);
    CHECK(rmc.out.find("[ok] Monte Carlo consistency") != std::string::npos);
    CHECK(rmc.out.find("stat P[1=0:1/2] exact 13/16") != std::string::npos);
}

TEST_CASE("cache round trip through the CLI") {
    std::string cache = "cli_cache_test.tmp";
    std::remove(cache.c_str());
    CliResult a = run({"--cache", cache, "wpvol", "2", "1"});
    CHECK(a.code == 0);
    std::ifstream in(cache);
    CHECK(in.good());
    CliResult b = run({"--cache", cache, "wpvol", "2", "1"});
    CHECK(b.out == a.out);
    std::remove(cache.c_str());
}

TEST_CASE("malformed input produces exit code 1 with a line diagnostic") {
    TempFile f("cli_bad_test.mc", "vertex a genus 0\nedge e1 a a weight 1\n");
    CliResult r = run({"poly", f.path});
    CHECK(r.code == 1);
    CHECK(r.err.find("unstable") != std::string::npos);

    CliResult missing = run({"poly", "no_such_file.mc"});
    CHECK(missing.code == 1);
}
