#include <doctest.h>

#include "hlab/config.hpp"
#include "hlab/errors.hpp"

#ifndef HLAB_TEST_DATA
#define HLAB_TEST_DATA "tests/data"
#endif

using namespace hlab;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<ConfigIssue>& issues, const std::string& path) {
    for (const auto& i : issues)
        if (i.path == path) return true;
    return false;
}

const char* kSpin = R"({
  "dim": 2,
  "initial": {"ket": [1, 0]},
  "sets": [{"name": "s", "slots": [{"time": 1, "labels": ["+", "-"],
            "projectors": [{"bloch": [0.6, 0, 0.8], "sign": 1}, {"bloch": [0.6, 0, 0.8], "sign": -1}]}]}]
})";

}  // namespace

TEST_CASE("three-box config matches the built-in scenario") {
    const auto parsed = parse_config_file(std::string(HLAB_TEST_DATA) + "/three_box.json");
    CHECK(equivalent(parsed, three_box(), 1e-15));
}

TEST_CASE("built-in scenarios round-trip through config JSON") {
    for (const auto& name : scenario_names()) {
        const auto s = make_scenario(name);
        const auto text = to_config_json(s).dump();
        const auto back = parse_config_text(text);
        CHECK(equivalent(s, back, 0.0));
        CHECK(to_config_json(back).dump() == text);
    }
}

TEST_CASE("bloch projectors and complex entries") {
    const auto s = parse_config_text(kSpin);
    CHECK(s.sets[0].schedule.slots()[0].projectors[0].matrix()(0, 0).real() == doctest::Approx(0.9));

    const auto h = parse_config_text(R"({
      "dim": 2, "initial": [[0.5, [0, -0.5]], [[0, 0.5], 0.5]],
      "hamiltonian": [[0, [0, -1]], [[0, 1], 0]],
      "sets": [{"name": "s", "slots": [{"time": 1, "labels": ["u", "d"],
                "projectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}]}]})");
    CHECK(h.hamiltonian.matrix()(0, 1) == Complex(0, -1));
    CHECK(h.hamiltonian.matrix()(1, 0) == Complex(0, 1));
    CHECK(h.initial.matrix()(0, 1) == Complex(0, -0.5));
}

TEST_CASE("non-unit Bloch vector names the field") {
    std::string bad = kSpin;
    bad.replace(bad.find("[0.6, 0, 0.8], \"sign\": 1"), 13, "[0.6, 0, 0.9]");
    const auto issues = issues_of(bad);
    REQUIRE_FALSE(issues.empty());
    CHECK(mentions(issues, "sets[0].slots[0].projectors[0].bloch"));
}

TEST_CASE("every schema problem is reported") {
    const auto issues = issues_of(R"({
      "dim": 2, "initial": {"ket": [1, 0, 0]}, "final": "up",
      "sets": [{"name": "s", "slots": [{"time": "one", "labels": ["a"],
                "projectors": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}]},
               {"slots": []}],
      "unify": {"variables": [{"name": "v", "outcomes": ["a", "b"]}], "map": {"missing": ["v"]}}})");
    CHECK(mentions(issues, "initial.ket"));
    CHECK(mentions(issues, "final"));
    CHECK(mentions(issues, "sets[0].slots[0].time"));
    CHECK(mentions(issues, "sets[1].name"));
    CHECK(mentions(issues, "sets[1].slots"));
    CHECK(mentions(issues, "unify.map.missing"));
    CHECK(issues.size() >= 6);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("definitely/missing.json"), ValidationError);
    CHECK(mentions(issues_of(R"({"dim": 2000, "initial": [[1]], "sets": []})"), "dim"));
}

TEST_CASE("scenario form") {
    const auto s = parse_config_text(R"({"scenario": "leggett_garg", "parameters": {"omega": 0.5}})");
    CHECK(equivalent(s, leggett_garg(0.5, 0, 1, 2), 0.0));
    CHECK_THROWS_AS(parse_config_text(R"({"scenario": "leggett_garg", "parameters": {"tau": 1}})"), ValidationError);
}
