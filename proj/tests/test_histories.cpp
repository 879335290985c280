#include <doctest.h>

#include "hlab/classicality.hpp"
#include "hlab/errors.hpp"
#include "hlab/histories.hpp"
#include "test_support.hpp"

using namespace hlab;
namespace ts = testing_support;

namespace {

ComplexVector ket(std::initializer_list<Complex> v) {
    ComplexVector k(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) k(i++) = c;
    return k;
}

HistorySet random_set(std::mt19937& rng, int n, bool post_select) {
    return ts::random_history_set(rng, n, post_select);
}

}  // namespace

TEST_CASE("schedule validation") {
    const auto h = Hamiltonian::zero(2);
    const std::vector<Projector> z{Projector::spin({0, 0, 1}, 1), Projector::spin({0, 0, 1}, -1)};
    CHECK_THROWS_AS(HistorySchedule({{1.0, z, {"u", "d"}}, {1.0, z, {"u", "d"}}}, h), ValidationError);
    CHECK_THROWS_AS(HistorySchedule({{1.0, {z[0]}, {"u"}}}, h), ValidationError);
    CHECK_THROWS_AS(HistorySchedule({{1.0, z, {"u"}}}, h), ValidationError);
    CHECK_NOTHROW(HistorySchedule({{1.0, z, {"u", "d"}}, {2.0, z, {"u", "d"}}}, h));
}

TEST_CASE("history cap") {
    const auto h = Hamiltonian::zero(2);
    const std::vector<Projector> z{Projector::spin({0, 0, 1}, 1), Projector::spin({0, 0, 1}, -1)};
    const HistorySchedule s({{1.0, z, {"u", "d"}}, {2.0, z, {"u", "d"}}}, h);
    BuildOptions opts;
    opts.history_cap = 3;
    CHECK_THROWS_AS(build_class_operators(s, opts), HistoryCountError);
    opts.history_cap = 4;
    CHECK(build_class_operators(s, opts).size() == 4);
}

TEST_CASE("griffiths spin probabilities") {
    // p(a) = 2 |<+|P_a|up>|^2
    const auto h = Hamiltonian::zero(2);
    const auto up = ket({1, 0});
    const auto plus = ket({1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2});
    for (const auto& axis : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0)}) {
        const std::vector<Projector> ps{Projector::spin(axis, 1), Projector::spin(axis, -1)};
        const auto set = HistorySet::from_schedule(HistorySchedule({{1.0, ps, {"a", "b"}}}, h),
                                                   DensityOperator::pure(up), DensityOperator::pure(plus));
        for (std::size_t i = 0; i < 2; ++i) {
            const double oracle = 2.0 * std::norm((plus.adjoint() * ts::spin_projector(axis, i ? -1 : 1) * up)(0, 0));
            CHECK(std::abs(history_probability(set, i) - oracle) < 1e-12);
        }
        CHECK(std::abs(history_probability(set, 0) - 1.0) < 1e-12);
    }
}

TEST_CASE("degenerate post-selection is refused") {
    const auto h = Hamiltonian::zero(2);
    const std::vector<Projector> z{Projector::spin({0, 0, 1}, 1), Projector::spin({0, 0, 1}, -1)};
    CHECK_THROWS_AS(HistorySet::from_schedule(HistorySchedule({{1.0, z, {"u", "d"}}}, h),
                                              DensityOperator::pure(ket({1, 0})), DensityOperator::pure(ket({0, 1}))),
                    DegeneratePostSelectionError);
}

TEST_CASE("three-box quasi-probabilities from amplitudes") {
    const double r = 1 / std::sqrt(3.0);
    const auto psi = ket({r, r, r});
    const auto psif = ket({r, r, -r});
    std::vector<Projector> ps;
    for (int i = 0; i < 3; ++i) {
        ComplexVector e = ComplexVector::Zero(3);
        e(i) = 1;
        ps.push_back(Projector::onto(e));
    }
    const auto set = HistorySet::from_schedule(HistorySchedule({{1.0, ps, {"1", "2", "3"}}}, Hamiltonian::zero(3)),
                                               DensityOperator::pure(psi), DensityOperator::pure(psif));
    // q(i) = Re <psif|P_i|psi><psi|psif> / |<psif|psi>|^2, with <psif|P_i|psi> = (1, 1, -1)/3.
    const Complex overlap = (psi.adjoint() * psif)(0, 0);
    for (int i = 0; i < 3; ++i) {
        const Complex amp = (psif.adjoint() * ps[i].matrix() * psi)(0, 0);
        const double oracle = (amp * overlap).real() / std::norm(overlap);
        CHECK(std::abs(quasi_probability(set, static_cast<std::size_t>(i)) - oracle) < 1e-12);
    }
    CHECK(std::abs(quasi_probability(set, 2) + 1.0) < 1e-12);
}

TEST_CASE("leggett-garg pair probabilities") {
    const std::vector<Projector> q{Projector::spin({0, 0, 1}, -1), Projector::spin({0, 0, 1}, 1)};
    for (double omega : {0.2, 1.0, 2.7}) {
        const Hamiltonian h(0.5 * omega * pauli::x());
        const auto set = HistorySet::from_schedule(HistorySchedule({{0.3, q, {"+", "-"}}, {1.1, q, {"+", "-"}}}, h),
                                                   DensityOperator::maximally_mixed(2));
        const auto p = history_probabilities(set);
        for (int s1 : {0, 1})
            for (int s2 : {0, 1}) {
                const double oracle = ts::lg_pair_probability(s1 ? -1 : 1, s2 ? -1 : 1, omega, 0.8);
                CHECK(std::abs(p[static_cast<std::size_t>(2 * s1 + s2)] - oracle) < 1e-12);
            }
        CHECK(classify(set).consistent);
    }
}

TEST_CASE("negation is an involution") {
    std::mt19937 rng(3);
    const auto set = random_set(rng, 3, false);
    for (const auto& c : set.operators()) {
        CHECK(negate(negate(c)) == c);
        CHECK(max_norm(negate(c).matrix() + c.matrix() - identity(3)) < 1e-14);
        CHECK_FALSE(negate(c).homogeneous());
    }
}

TEST_CASE("structural invariants on random sets") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 3;
        const bool post = trial % 4 == 3;
        const auto set = random_set(rng, n, post);
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (const auto& c : set.operators()) sum += c.matrix();
        CHECK(max_norm(sum - identity(static_cast<std::size_t>(n))) < 1e-10);

        const auto d = decoherence_functional(set);
        CHECK(max_norm(d.entries - d.entries.adjoint()) < 1e-10);
        if (!post) CHECK(std::abs(d.total() - Complex(1, 0)) < 1e-10);

        const auto q = quasi_probabilities(set);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto& c = set.operators()[i];
            const double p = d.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
            const Complex cross = interference(set, c.matrix(), negate(c).matrix());
            // Sum of C is 1, so Tr(C rho) = Tr(C rho C^dag) + Tr(C rho (1 - C)^dag): one Re D, not two.
            CHECK(std::abs(q[i] - (p + cross.real())) < 1e-10);
        }
    }
}

TEST_CASE("product systems factorize") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_set(rng, 2, trial % 2 == 0);
        const auto b = random_set(rng, 2 + trial % 2, false);
        const auto ab = product_set(a, b);
        const auto da = decoherence_functional(a), db = decoherence_functional(b), dab = decoherence_functional(ab);
        REQUIRE(ab.size() == a.size() * b.size());
        const auto nb = static_cast<Eigen::Index>(b.size());
        for (Eigen::Index i = 0; i < dab.entries.rows(); ++i)
            for (Eigen::Index j = 0; j < dab.entries.cols(); ++j)
                CHECK(std::abs(dab.entries(i, j) - da.entries(i / nb, j / nb) * db.entries(i % nb, j % nb)) < 1e-10);
    }
}
