#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef CML_BIN
#define CML_BIN "cml"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CML_BIN) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmpdir() {
    char templ[] = "/tmp/cml-cli-XXXXXX";
    char* dir = mkdtemp(templ);
    REQUIRE(dir != nullptr);
    return dir;
}

} // namespace

TEST_CASE("gen writes catalog, grid and figure") {
    const std::string dir = tmpdir();
    auto res = run("gen --family fnp --n 5 --p 1 --level 1 --out " + dir);
    CHECK(res.code == 0);
    auto catalog = nlohmann::json::parse(slurp(dir + "/catalog.json"));
    CHECK(catalog.size() == 5);
    auto grid = nlohmann::json::parse(slurp(dir + "/grid.json"));
    CHECK(grid.at("side") == 5);
    CHECK(slurp(dir + "/figure.svg").find("<svg") == 0);

    auto sm = run("gen --family sm --m 3 --level 1 --out " + dir + "/sm");
    CHECK(sm.code == 0);
    CHECK(sm.out.find("8 cells") != std::string::npos);
}

TEST_CASE("gen rejects invalid specs with exit 2") {
    CHECK(run("gen --family fnp --n 5 --p 2 --level 1 --out /tmp").code == 2);
    CHECK(run("gen --family sm --m 4 --level 1 --out /tmp").code == 2);
}

TEST_CASE("gen rejects oversized grids with exit 4") {
    CHECK(run("gen --family fnp --n 5 --p 1 --level 9 --out /tmp").code == 4);
}

TEST_CASE("modulus: cache hits return identical bytes") {
    const std::string dir = tmpdir();
    const std::string args =
        "modulus --family fnp --n 5 --p 1 --pair O,M1 --level 1 --cache " + dir + "/cache";
    auto first = run(args);
    auto second = run(args);
    CHECK(first.code == 0);
    CHECK(second.code == 0);
    CHECK(first.out == second.out);
    auto j = nlohmann::json::parse(first.out);
    CHECK(j.at("schema") == "cm-report/1");
    CHECK(j.at("value").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("modulus: brute force agrees with constraint generation") {
    auto cg = run("modulus --family fnp --n 5 --p 1 --pair O,M2 --level 1 --no-cache");
    auto bf = run("modulus --family fnp --n 5 --p 1 --pair O,M2 --level 1 --brute-force --no-cache");
    const double v1 = nlohmann::json::parse(cg.out).at("value").get<double>();
    const double v2 = nlohmann::json::parse(bf.out).at("value").get<double>();
    CHECK(std::abs(v1 - v2) < 1e-8);
}

TEST_CASE("modulus: group quotient runs") {
    auto res = run("modulus --family fnp --n 5 --p 1 --pair O,M1 --level 1 --group d4 --no-cache");
    CHECK(res.code == 0);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j.contains("orbit_rho"));
}

TEST_CASE("experiment signature: S3 unique, S5 ties raise exit 3") {
    const std::string dir = tmpdir();
    auto s3 = run("experiment signature --family sm --m 3 --level 2 --out " + dir);
    CHECK(s3.code == 0);
    CHECK(s3.out.find("multiplicity 1") != std::string::npos);
    auto s5 = run("experiment signature --family sm --m 5 --level 2 --out " + dir);
    CHECK(s5.code == 3);
}

TEST_CASE("experiment tangent emits a tg-report") {
    const std::string dir = tmpdir();
    auto res = run("experiment tangent --family fnp --n 5 --p 1 --depth 2 --out " + dir);
    CHECK(res.code == 0);
    auto j = nlohmann::json::parse(slurp(dir + "/report.json"));
    CHECK(j.at("schema") == "tg-report/1");
    CHECK(j.at("admissibility").at("violation") == false);
    CHECK(j.at("third_transfer").at("mass_ratio")[0] == 1);
    CHECK(j.at("third_transfer").at("mass_ratio")[1] == 3);
}

TEST_CASE("experiment config file merges under flags") {
    const std::string dir = tmpdir();
    {
        std::ofstream cfg(dir + "/cfg.json");
        cfg << R"({"family":"sm","m":3,"level":2})";
    }
    auto res = run("experiment signature --config " + dir + "/cfg.json --out " + dir);
    CHECK(res.code == 0);
    CHECK(res.out.find("multiplicity 1") != std::string::npos);
}
