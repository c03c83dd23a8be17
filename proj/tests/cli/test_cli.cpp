#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GS_CLI_PATH) + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
    const int st = pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        std::vector<double> r;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_SUITE("cli") {
TEST_CASE("defaults mirror the reference config") {
    const Run r = run("defaults");
    REQUIRE(r.status == 0);
    std::ifstream ref(GS_REFERENCE_CONFIG);
    REQUIRE(ref.good());
    CHECK(json::parse(r.out) == json::parse(ref));
}

TEST_CASE("spectrum") {
    const Run r = run("spectrum --a 1 --b 0.3 --ell 3.14159265358979 --n-max 40");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["version"] == "1.0.0");
    CHECK(j["config"]["n_max"] == 40);
    CHECK(j["eigenvalues"].size() >= 80);
    CHECK(j["gap"]["gamma1"].get<double>() > 0.0);
    CHECK(j["params"]["regime"] == "RealDistinct");

    const Run d = run("spectrum --a 0 --b 0 --ell 3.14159265358979 --n-max 10");
    REQUIRE(d.status == 0);
    for (const auto& e : json::parse(d.out)["eigenvalues"]) {
        const double l = e["re_lambda"].get<double>();
        CHECK(std::abs(l - std::round(std::sqrt(l)) * std::round(std::sqrt(l))) < 1e-10);
        CHECK(e["alg_mult"] == 2);
    }
    CHECK(json::parse(d.out)["gap"].is_null());
}

TEST_CASE("usage errors exit with status 2") {
    const Run r = run("spectrum --ell 0");
    CHECK(r.status == 2);
    CHECK(r.out.find("ell") != std::string::npos);
    CHECK(run("spectrum --no-such-flag 1").status == 2);
    CHECK(run("").status == 2);
}

TEST_CASE("outputs are byte stable") {
    const std::string args = "spectrum --a 2 --b 1 --n-max 12";
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("weyl bounds hold on every row") {
    const Run r = run("weyl --a 1 --b 1 --ell 3.14159265358979 --r-max 1600");
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    CHECK(rows.size() == 50);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        CHECK(row[1] >= row[2]);
        CHECK(row[1] <= row[3]);
    }
}

TEST_CASE("theta table certificates") {
    const Run r = run("theta --ell 3.14159265358979 --k-max 4");
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    CHECK(rows.size() == 5);
    for (const auto& row : rows) {
        CHECK(row[10] < 1e-10);
        CHECK(row[11] < 1e-10);
    }
}

TEST_CASE("crosscheck on a single draw") {
    const Run r = run("crosscheck --regime RealDistinct --draws 1 --seed 3");
    CHECK(r.status == 0);
    CHECK(json::parse(r.out)["ok"] == true);
}
}
