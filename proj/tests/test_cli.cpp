#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

const char* cli_path() { return std::getenv("QCURV_CLI"); }

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

json parse_json(const std::string& text) {
    return json::parse(text, nullptr, true);
}

std::string strip_timestamp(std::string s) {
    static const std::regex ts("\"timestamp\": \"[^\"]*\"");
    return std::regex_replace(s, ts, "\"timestamp\": \"X\"");
}

std::string temp_path(const std::string& stem) {
    return "/tmp/qcurv_cli_test_" + std::to_string(getpid()) + "_" + stem;
}

// Every case needs the binary; ctest provides QCURV_CLI.
#define REQUIRE_CLI()                                  \
    do {                                               \
        if (!cli_path()) {                             \
            MESSAGE("QCURV_CLI not set; case skipped"); \
            return;                                    \
        }                                              \
    } while (0)

}  // namespace

TEST_CASE("eval: round sphere values and residuals") {
    REQUIRE_CLI();
    auto r = run_cli(
        "eval --metric sphere --param n=4 --point 1.0,1.2,0.8,2.0");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    CHECK(d["command"] == "eval");
    CHECK(d["backend"] == "analytic");
    CHECK(d["dim"] == 4);
    CHECK(double(d["q"]) == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(double(d["scalar_curvature"]) == doctest::Approx(12.0).epsilon(1e-11));
    CHECK(double(d["residuals"]["trace_j"]) < 1e-9);
    CHECK(double(d["residuals"]["bach_routes"]) < 1e-8);
    CHECK(double(d["residuals"]["q_routes"]) < 1e-9);
    CHECK(bool(d["einstein"]) == true);
    CHECK(bool(d["within_tolerance"]) == true);
    CHECK(d.contains("timestamp"));
    CHECK_FALSE(d.contains("s_j"));  // dimension 4
}

TEST_CASE("eval: dimension 6 exposes the J-Schouten block") {
    REQUIRE_CLI();
    auto r = run_cli(
        "eval --metric sphere --param n=6 --point 1.0,1.1,1.2,1.3,1.4,2.0");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    CHECK(double(d["sigma1_j"]) == doctest::Approx(1.2).epsilon(1e-10));
    CHECK(double(d["sigma2_j"]) == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(d.contains("s_j"));
}

TEST_CASE("eval: flat metric is identically zero") {
    REQUIRE_CLI();
    auto r = run_cli("eval --metric flat --param n=5 --point 0,0.1,0.2,0.3,0");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    CHECK(double(d["q"]) == 0.0);
    CHECK(double(d["scalar_curvature"]) == 0.0);
}

TEST_CASE("eval: strict mode turns tolerance misses into exit 1") {
    REQUIRE_CLI();
    std::string base =
        "eval --metric sphere --param n=4 --point 1,1,1,1 --tol trace_j=1e-30";
    auto lax = run_cli(base);
    CHECK(lax.exit_code == 0);
    CHECK(bool(parse_json(lax.out)["within_tolerance"]) == false);
    auto strict = run_cli(base + " --strict");
    CHECK(strict.exit_code == 1);
}

TEST_CASE("eval: usage errors exit with 2") {
    REQUIRE_CLI();
    CHECK(run_cli("eval --metric sphere --param n=4").exit_code == 2);
    CHECK(run_cli("eval --metric sphere --param n=4 --point 9,9,9,9")
              .exit_code == 2);  // outside the chart
    CHECK(run_cli("eval --metric nosuch --point 1,1,1").exit_code == 2);
    CHECK(run_cli("eval --metric sphere --param n=4 --point 1,1,1,1 "
                  "--tol bogus=1")
              .exit_code == 2);
    CHECK(run_cli("eval --metric sphere --param n=4 --point 1,1,1,1 "
                  "--backend sorcery")
              .exit_code == 2);
    auto r = run_cli("frobnicate");
    CHECK(r.exit_code == 2);
}

TEST_CASE("verify: all identities pass on a non-Einstein analytic metric") {
    REQUIRE_CLI();
    auto r = run_cli("verify --metric conformal-sphere --param n=5 "
                     "--param eps=0.1");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    CHECK(d["command"] == "verify");
    CHECK(bool(d["pass"]) == true);
    REQUIRE(d["reports"].size() == 8);
    for (const auto& rep : d["reports"]) {
        CHECK(bool(rep["pass"]) == true);
        CHECK(rep.contains("scalars"));
    }
}

TEST_CASE("verify: dimension 4 skips the S_J divergence with a notice") {
    REQUIRE_CLI();
    auto r = run_cli("verify --metric conformal-torus --param n=4 "
                     "--param eps=0.1");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    bool found = false;
    for (const auto& rep : d["reports"])
        if (rep["name"] == "div-sj-trace-gradient") {
            found = true;
            CHECK(bool(rep["informational"]) == true);
            std::string note = rep["note"];
            CHECK(note.find("n = 4") != std::string::npos);
        }
    CHECK(found);
}

TEST_CASE("verify: fd backend relaxes the pinned tolerances") {
    REQUIRE_CLI();
    auto r = run_cli("verify --metric torus --param n=3 --backend fd");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    CHECK(d["backend"] == "fd");
    for (const auto& rep : d["reports"])
        if (rep["name"] == "trace-j-equals-q")
            CHECK(double(rep["tolerances"]["residual"]) ==
                  doctest::Approx(1e-5));
}

TEST_CASE("verify: tolerance overrides are honored and can fail the run") {
    REQUIRE_CLI();
    auto r = run_cli("verify --metric sphere --param n=3 "
                     "--tol trace-j-equals-q=1e-30");
    CHECK(r.exit_code == 1);
    CHECK(bool(parse_json(r.out)["pass"]) == false);
}

TEST_CASE("report: gauss-bonnet with the characteristic from metadata") {
    REQUIRE_CLI();
    auto r = run_cli("report gauss-bonnet --metric sphere --param n=4 "
                     "--grid 8,8,8,4");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    REQUIRE(d["reports"].size() == 1);
    CHECK(d["reports"][0]["name"] == "gauss-bonnet");
    CHECK(bool(d["reports"][0]["pass"]) == true);
    CHECK(int(d["reports"][0]["inputs"]["chi"]) == 2);
}

TEST_CASE("report: several names in one run") {
    REQUIRE_CLI();
    auto r = run_cli(
        "report divergence gauss-bonnet --metric conformal-torus "
        "--param n=4 --param eps=0.1 --grid 8,8,8,8");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    REQUIRE(d["reports"].size() == 2);
    CHECK(d["reports"][0]["name"] == "divergence-identity");
    CHECK(d["reports"][1]["name"] == "gauss-bonnet");
    CHECK(bool(d["pass"]) == true);
}

TEST_CASE("report: almost-schur on a low-dimensional bump") {
    REQUIRE_CLI();
    auto r = run_cli("report almost-schur --metric conformal-sphere "
                     "--param n=3 --param eps=0.05 --grid 12,8,4");
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);
    CHECK(double(d["reports"][0]["scalars"]["ratio"]) < 1.0);
}

TEST_CASE("report: dimension preconditions surface the degenerate factor") {
    REQUIRE_CLI();
    auto r = run_cli("report q-yamabe --metric sphere --param n=4 "
                     "--grid 4,4,4,4");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("n - 4") != std::string::npos);

    auto r2 = run_cli("report nosuch --metric sphere --param n=4");
    CHECK(r2.exit_code == 2);
    CHECK(r2.out.find("almost-schur") != std::string::npos);  // lists names
}

TEST_CASE("config file provides defaults, flags override") {
    REQUIRE_CLI();
    std::string cfg = temp_path("base.cfg");
    {
        std::ofstream f(cfg);
        f << "# base configuration\n"
          << "metric = sphere\n"
          << "param.n = 4\n"
          << "param.r = 1.0\n"
          << "point = 1,1,1,1\n";
    }
    auto r = run_cli("eval --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(parse_json(r.out)["dim"] == 4);

    auto r2 = run_cli("eval --config " + cfg +
                      " --param n=5 --point 1,1,1,1,1");
    CHECK(r2.exit_code == 0);
    CHECK(parse_json(r2.out)["dim"] == 5);

    std::string bad = temp_path("bad.cfg");
    {
        std::ofstream f(bad);
        f << "metrc = sphere\n";
    }
    auto r3 = run_cli("eval --config " + bad + " --point 1,1,1,1");
    CHECK(r3.exit_code == 2);
    CHECK(r3.out.find("metrc") != std::string::npos);
    std::remove(cfg.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("expression metrics run through the fd backend") {
    REQUIRE_CLI();
    std::string cfg = temp_path("expr.cfg");
    {
        std::ofstream f(cfg);
        f << "metric = expr\n"
          << "dim = 3\n"
          << "domain = -1,1\n"
          << "g_1_1 = exp(2 * 0.1 * cos(x1) * cos(x2))\n"
          << "g_2_2 = exp(2 * 0.1 * cos(x1) * cos(x2))\n"
          << "g_3_3 = exp(2 * 0.1 * cos(x1) * cos(x2))\n"
          << "backend = fd\n"
          << "point = 0.2,-0.3,0.1\n";
    }
    auto r = run_cli("eval --config " + cfg);
    CHECK(r.exit_code == 0);
    json d = parse_json(r.out);

    // Same metric written analytically (the torus chart is periodic, so
    // the negative coordinate lands at 2 pi - 0.3).
    auto ra = run_cli("eval --metric conformal-torus --param n=3 "
                      "--param eps=0.1 --point 0.2,-0.3,0.1");
    CHECK(ra.exit_code == 0);
    json da = parse_json(ra.out);
    CHECK(double(d["q"]) ==
          doctest::Approx(double(da["q"])).epsilon(1e-4));
    CHECK(double(d["scalar_curvature"]) ==
          doctest::Approx(double(da["scalar_curvature"])).epsilon(1e-6));

    // The analytic backend cannot differentiate component tables.
    auto rb = run_cli("eval --config " + cfg + " --backend analytic");
    CHECK(rb.exit_code == 2);
    CHECK(rb.out.find("fd") != std::string::npos);
    std::remove(cfg.c_str());
}

TEST_CASE("csv rendering flattens the document") {
    REQUIRE_CLI();
    auto r = run_cli("report gauss-bonnet --metric sphere --param n=4 "
                     "--grid 8,8,8,4 --csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("key,value\n", 0) == 0);
    CHECK(r.out.find("reports.0.scalars.residual,") != std::string::npos);
    CHECK(r.out.find("reports.0.pass,") != std::string::npos);
}

TEST_CASE("output file plus console trace") {
    REQUIRE_CLI();
    std::string out = temp_path("doc.json");
    auto r = run_cli("report gauss-bonnet --metric sphere --param n=4 "
                     "--grid 8,8,8,4 --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("gauss-bonnet: pass") != std::string::npos);
    std::ifstream f(out);
    REQUIRE(f.good());
    json d = json::parse(f);
    CHECK(d["command"] == "report");
    std::remove(out.c_str());
}

TEST_CASE("runs are deterministic up to the timestamp") {
    REQUIRE_CLI();
    std::string cmd = "verify --metric sphere --param n=3";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
    CHECK(a.out.find("wall_time") == std::string::npos);
}

TEST_CASE("help text names the three commands") {
    REQUIRE_CLI();
    auto r = run_cli("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("eval") != std::string::npos);
    CHECK(r.out.find("verify") != std::string::npos);
    CHECK(r.out.find("report") != std::string::npos);
}
