#include <doctest.h>

#include <random>

#include "hlab/analysis.hpp"
#include "hlab/errors.hpp"
#include "hlab/scenarios.hpp"
#include "test_support.hpp"

using namespace hlab;
namespace ts = testing_support;

TEST_CASE("built-in scenarios meet their expected values") {
    for (const auto& name : scenario_names()) {
        for (bool exact : {false, true}) {
            AnalysisOptions o;
            o.exact = exact;
            const auto r = analyze(make_scenario(name), o);
            for (const auto& e : r.expected) {
                INFO(name << (exact ? " exact " : " float ") << e.key << " expected " << e.expected << " got "
                          << (e.actual ? *e.actual : -999.0));
                CHECK(e.pass);
            }
        }
    }
}

TEST_CASE("expected values carry provenance") {
    for (const auto& name : scenario_names()) {
        const auto s = make_scenario(name);
        CHECK_FALSE(s.expected.empty());
        for (const auto& e : s.expected) {
            const std::string p = to_string(e.provenance);
            CHECK((p == "published" || p == "trivial" || p == "derived"));
        }
    }
}

TEST_CASE("eprb validation and parameters") {
    CHECK_THROWS_AS(eprb({0, 0, 2}, {1, 0, 0}, {0, 0, 1}, {1, 0, 0}), ValidationError);
    CHECK_THROWS_AS(make_scenario("eprb", {{"theta9", 1.0}}), ValidationError);
    CHECK_THROWS_AS(make_scenario("eprb", {{"theta1", 1.0}, {"a1_x", 1.0}}), ValidationError);
    CHECK_THROWS_AS(make_scenario("nope"), ValidationError);
    CHECK_THROWS_AS(make_scenario("three_box", {{"omega", 1.0}}), ValidationError);
}

TEST_CASE("leggett_garg needs increasing times") {
    CHECK_THROWS_AS(leggett_garg(1.0, 0.0, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(leggett_garg(1.0, 2.0, 1.0, 3.0), ValidationError);
    CHECK_NOTHROW(leggett_garg(1.0, 0.0, 0.5, 3.0));
}

TEST_CASE("eprb pair correlations match the singlet brute force") {
    std::mt19937 rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        std::array<Eigen::Vector3d, 4> a;
        for (auto& v : a) v = ts::random_unit(rng);
        AnalysisOptions o;
        o.uniqueness = false;
        const auto r = analyze(eprb(a[0], a[1], a[2], a[3]), o);
        for (auto [i, j] : {std::pair{1, 3}, {1, 4}, {2, 3}, {2, 4}}) {
            const auto c = resolve_key(r, "corr/s" + std::to_string(i) + ",s" + std::to_string(j));
            REQUIRE(c);
            CHECK(std::abs(*c - ts::singlet_correlation(a[i - 1], a[j - 1])) < 1e-12);
            const auto p = resolve_key(r, "p/" + std::to_string(i) + std::to_string(j) + "/+,-");
            REQUIRE(p);
            CHECK(std::abs(*p - ts::singlet_pair_probability(a[i - 1], 1, a[j - 1], -1)) < 1e-12);
        }
    }
}

TEST_CASE("eprb with a1 = a2 gives identical pair sets") {
    const Eigen::Vector3d z(0, 0, 1), x(1, 0, 0), d = Eigen::Vector3d(1, 0, 1).normalized();
    const auto r = analyze(eprb(z, z, d, x));
    const auto* s13 = r.find_set("13");
    const auto* s23 = r.find_set("23");
    REQUIRE(s13);
    REQUIRE(s23);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s13->probabilities[i] == s23->probabilities[i]);
}

TEST_CASE("scenario constructors are deterministic") {
    CHECK(equivalent(eprb_planar(0.1, 0.2, 0.3, 0.4), eprb_planar(0.1, 0.2, 0.3, 0.4), 0.0));
    CHECK(equivalent(leggett_garg(0.5, 0, 1, 2), leggett_garg(0.5, 0, 1, 2), 0.0));
    CHECK_FALSE(equivalent(leggett_garg(0.5, 0, 1, 2), leggett_garg(0.6, 0, 1, 2)));
}

TEST_CASE("leggett-garg three-time set consistency is evaluated") {
    // At omega tau = pi/3 the three-time set interferes; at omega tau = pi/2 the
    // pairwise probabilities admit a joint distribution.
    const auto r = analyze(leggett_garg(std::numbers::pi / 3, 0, 1, 2));
    CHECK_FALSE(r.find_set("123")->classicality.consistent);
    CHECK(r.unify->verdict.infeasible());
    const auto r2 = analyze(leggett_garg(std::numbers::pi / 2, 0, 1, 2));
    CHECK(r2.unify->verdict.feasible());
}
