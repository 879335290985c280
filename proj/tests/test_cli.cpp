#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hlab/cli.hpp"
#include "hlab/report.hpp"
#include "hlab/sweep.hpp"

using namespace hlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "histories_lab_tests";
    fs::create_directories(dir);
    const auto p = dir / name;
    fs::remove(p);
    return p;
}

std::vector<std::string> csv_rows(const std::string& text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    return rows;
}

std::vector<std::string> fields(const std::string& row) {
    std::vector<std::string> out;
    std::istringstream in(row);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    if (!row.empty() && row.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

TEST_CASE("missing config exits 2 without a report") {
    const auto out = scratch("missing.json.report");
    const auto r = run({"analyze", "--config", "missing.json", "--out", out.string()});
    CHECK(r.code == kExitValidation);
    CHECK_FALSE(fs::exists(out));
    CHECK(r.err.find("missing.json") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"analyze", "--scenario", "nope"}).code == kExitValidation);
    CHECK(run({"analyze"}).code == kExitValidation);
    CHECK(run({"analyze", "--scenario", "eprb", "--config", "x.json"}).code == kExitValidation);
    CHECK(run({"frobnicate"}).code == kExitValidation);
    CHECK(run({"analyze", "--scenario", "eprb", "--param", "theta1"}).code == kExitValidation);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("three_box exact report carries a certificate that re-verifies from file") {
    const auto out = scratch("three_box.json");
    REQUIRE(run({"analyze", "--scenario", "three_box", "--exact", "--out", out.string()}).code == kExitOk);
    const auto report = report_from_json(ordered_json::parse(slurp(out)));
    REQUIRE(report.unify);
    CHECK(report.unify->verdict.infeasible());
    CHECK(report.unify->verdict.arithmetic == Arithmetic::exact);
    CHECK(report.unify->verdict.exact_certificate);
    std::string why;
    CHECK_MESSAGE(reverify(report, &why), why);
}

TEST_CASE("griffiths report has the unit unifier cell") {
    const auto r = run({"analyze", "--scenario", "griffiths_spin"});
    REQUIRE(r.code == kExitOk);
    const auto report = report_from_json(ordered_json::parse(r.out));
    const auto cell = resolve_key(report, "witness/+,up");
    REQUIRE(cell);
    CHECK(std::abs(*cell - 1.0) < 1e-12);
    CHECK(reverify(report));
}

TEST_CASE("reports round-trip and tampering is caught") {
    for (const auto& name : scenario_names()) {
        const auto r = run({"analyze", "--scenario", name});
        REQUIRE(r.code == kExitOk);
        const auto report = report_from_json(ordered_json::parse(r.out));
        CHECK(dump_report(report) == r.out);
        CHECK(reverify(report));
    }
    auto report = report_from_json(ordered_json::parse(run({"analyze", "--scenario", "eprb"}).out));
    report.unify->verdict.witness[0] += 0.1;
    CHECK_FALSE(reverify(report));
}

TEST_CASE("configs run through analyze") {
    const auto r = run({"analyze", "--config", std::string(HLAB_TEST_DATA) + "/three_box.json", "--exact"});
    REQUIRE(r.code == kExitOk);
    const auto report = report_from_json(ordered_json::parse(r.out));
    CHECK(report.expected_pass());
    CHECK(report.source == "config");
}

TEST_CASE("sweep validation") {
    CHECK(run({"sweep", "--scenario", "leggett_garg", "--param", "omega", "--range", "0:1:0"}).code == kExitValidation);
    CHECK(run({"sweep", "--scenario", "three_box", "--param", "omega", "--range", "0:1:3"}).code == kExitValidation);
    CHECK(run({"sweep", "--scenario", "leggett_garg", "--param", "omega"}).code == kExitValidation);
    CHECK(run({"sweep", "--scenario", "leggett_garg", "--param", "zeta", "--range", "0:1:2"}).code == kExitValidation);
    CHECK(run({"sweep", "--scenario", "leggett_garg", "--param", "omega", "--range", "0:x:2"}).code == kExitValidation);
}

TEST_CASE("leggett-garg sweep: feasibility tracks the Bell bound") {
    // omega over [0, pi] with t = 0, 1, 2, so omega is the spacing phase.
    const auto r = run({"sweep", "--scenario", "leggett_garg", "--param", "omega", "--range", "0:3.141592653589793:181"});
    REQUIRE(r.code == kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 182);
    CHECK(rows[0] == "omega,pairwise_consistent,combined_consistent,combined_linearly_positive,max_inequality_value,"
                     "inequality_satisfied,feasible");
    int flips = 0, violated = 0;
    std::string prev;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        REQUIRE(f.size() == 7);
        CHECK(f[1] == "1");
        const double max_value = std::stod(f[4]);
        if (std::abs(max_value - 1.0) >= 1e-8) CHECK(f[6] == f[5]);
        if (f[5] == "0") ++violated;
        if (!prev.empty() && f[6] != prev) ++flips;
        prev = f[6];
    }
    CHECK(violated > 0);
    CHECK(flips >= 1);
}

TEST_CASE("sweep output does not depend on the thread count") {
    const std::vector<SweepAxis> axes{parse_range("theta3", "0:1.5707963267948966:7"),
                                      parse_range("theta4", "1.5:2.5:5")};
    const auto one = sweep_csv(axes, run_sweep("eprb", axes, {}, {}, 1));
    const auto four = sweep_csv(axes, run_sweep("eprb", axes, {}, {}, 4));
    CHECK(one == four);
    CHECK(csv_rows(one).size() == 36);
}

TEST_CASE("eprb sweep through the Tsirelson point") {
    // theta3 = pi/4 with theta1 = 0, theta2 = pi/2, theta4 = 3 pi/4.
    const auto r = run({"sweep", "--scenario", "eprb", "--fix", "theta4=2.356194490192345", "--param", "theta3",
                        "--range", "0:1.5707963267948966:3"});
    REQUIRE(r.code == kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    const auto mid = fields(rows[2]);
    CHECK(std::abs(std::stod(mid[4]) - 2 * std::sqrt(2.0)) < 1e-9);
    CHECK(mid[6] == "0");
}
