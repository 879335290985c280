#include <doctest.h>

#include "hlab/classicality.hpp"
#include "hlab/scenarios.hpp"
#include "test_support.hpp"

using namespace hlab;
namespace ts = testing_support;

namespace {

HistorySet set_of(const ScenarioDescriptor& s, const std::string& name) { return build_set(s, *s.find_set(name)); }

bool implies(bool a, bool b) { return !a || b; }

void check_hierarchy(const ClassicalityReport& r) {
    CHECK(implies(r.decoherent, r.consistent));
    CHECK(implies(r.consistent, r.partially_decoherent));
    CHECK(implies(r.partially_decoherent, r.linearly_positive));
}

HistorySet random_set(std::mt19937& rng, int n) { return ts::random_history_set(rng, n, false); }

}  // namespace

TEST_CASE("griffiths sets") {
    const auto g = griffiths_spin();
    CHECK(classify(set_of(g, "z")).consistent);
    CHECK(classify(set_of(g, "x")).consistent);
    const auto zx = classify(set_of(g, "zx"));
    CHECK_FALSE(zx.consistent);
    CHECK_FALSE(zx.linearly_positive);  // q(-, down) = -1/2
    CHECK(zx.min_quasi == doctest::Approx(-0.5).epsilon(1e-12));
    check_hierarchy(zx);
}

TEST_CASE("hierarchy and monotonicity in the tolerance") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto set = random_set(rng, 2 + trial % 3);
        const auto d = decoherence_functional(set);
        const auto q = quasi_probabilities(set);
        ClassicalityReport prev = classify(d, q, 1e-14);
        check_hierarchy(prev);
        for (double tol : {1e-10, 1e-4, 1e-2, 0.1, 1.0, 10.0}) {
            const auto r = classify(d, q, tol);
            check_hierarchy(r);
            CHECK(implies(prev.decoherent, r.decoherent));
            CHECK(implies(prev.consistent, r.consistent));
            CHECK(implies(prev.partially_decoherent, r.partially_decoherent));
            CHECK(implies(prev.linearly_positive, r.linearly_positive));
            prev = r;
        }
        CHECK(prev.decoherent);  // |D| <= 1 everywhere
    }
}

TEST_CASE("three-box zero cover") {
    const auto tb = three_box();
    const auto fine = detect_zero_cover(set_of(tb, "fine"));
    REQUIRE(fine.found());
    // Both {1,3} and {2,3} have zero measure; {1,3} comes first.
    CHECK(fine.witness == std::vector<std::size_t>{0, 2});
    CHECK(fine.witnesses.size() == 2);
    CHECK(fine.witnesses[1] == std::vector<std::size_t>{1, 2});
    CHECK(fine.witness_measure <= 1e-12);
    CHECK(detect_zero_cover(set_of(tb, "set1")).preclusive());

    ZeroCoverOptions tight;
    tight.enumeration_cap = 2;
    CHECK(detect_zero_cover(set_of(tb, "fine"), tight).status == ZeroCoverStatus::not_evaluated);
    ZeroCoverOptions pairs;
    pairs.max_subset = 2;
    CHECK(detect_zero_cover(set_of(tb, "fine"), pairs).witnesses.size() == 2);
}

TEST_CASE("union measure is bilinear in the members") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto set = random_set(rng, 2 + trial % 3);
        const auto d = decoherence_functional(set);
        const auto n = static_cast<Eigen::Index>(set.size());
        ComplexMatrix c = ComplexMatrix::Zero(static_cast<Eigen::Index>(set.dim()), static_cast<Eigen::Index>(set.dim()));
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i)
            if ((trial >> (i % 5)) & 1 || i == 0) {
                members.push_back(i);
                c += set.operators()[static_cast<std::size_t>(i)].matrix();
            }
        double expect = 0.0;
        for (auto i : members)
            for (auto j : members) expect += d.entries(i, j).real();
        CHECK(std::abs(measure(set, c) - expect) < 1e-10);
    }
}
