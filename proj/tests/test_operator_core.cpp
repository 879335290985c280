#include <doctest.h>

#include "hlab/errors.hpp"
#include "hlab/operator_core.hpp"
#include "test_support.hpp"

using namespace hlab;
namespace ts = testing_support;

TEST_CASE("projector validation") {
    ComplexMatrix half = 0.5 * identity(2);
    CHECK_THROWS_AS(Projector{half}, ValidationError);  // not idempotent
    ComplexMatrix skew(2, 2);
    skew << 1, 1, 0, 0;
    CHECK_THROWS_AS(Projector{skew}, ValidationError);  // idempotent, not Hermitian
    CHECK_NOTHROW(Projector{identity(3)});
    CHECK_THROWS_AS(Projector::spin(Eigen::Vector3d(1, 1, 0), 1), ValidationError);
}

TEST_CASE("spin projectors match the written-out form") {
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto a = ts::random_unit(rng);
        for (int s : {1, -1}) CHECK(approx_equal(Projector::spin(a, s).matrix(), ts::spin_projector(a, s), 1e-14));
    }
}

TEST_CASE("density operator validation") {
    CHECK_THROWS_AS(DensityOperator{identity(2)}, ValidationError);  // trace 2
    ComplexMatrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(DensityOperator{neg}, ValidationError);
    ComplexVector k(2);
    k << 1, 1;
    CHECK_THROWS_AS(DensityOperator::pure(k), ValidationError);  // not normalized
    CHECK(approx_equal(DensityOperator::maximally_mixed(3).matrix(), identity(3) / 3.0, 0.0));
}

TEST_CASE("propagator agrees with a Taylor-series exponential") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 4;
        const ComplexMatrix h = ts::random_hermitian(rng, n);
        const double t = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        const ComplexMatrix u = propagator(Hamiltonian(h), t);
        const ComplexMatrix oracle = ts::taylor_exp(Complex(0, -t) * h);
        CHECK(max_norm(u - oracle) < 1e-10);
        CHECK(max_norm(u.adjoint() * u - identity(static_cast<std::size_t>(n))) < 1e-12);
    }
}

TEST_CASE("propagator group law and zero cases") {
    std::mt19937 rng(13);
    const Hamiltonian h(ts::random_hermitian(rng, 3));
    CHECK(propagator(h, 0.0) == identity(3));
    CHECK(propagator(Hamiltonian::zero(3), 2.5) == identity(3));
    CHECK(max_norm(propagator(h, 0.7) * propagator(h, 0.4) - propagator(h, 1.1)) < 1e-12);
}

TEST_CASE("spin precession closed form") {
    // exp(-i theta sigma_x) = cos(theta) - i sin(theta) sigma_x
    const Hamiltonian h(0.5 * pauli::x());
    for (double t : {0.3, 1.0, std::numbers::pi, 5.0}) {
        const ComplexMatrix oracle = std::cos(t / 2) * identity(2) - Complex(0, std::sin(t / 2)) * pauli::x();
        CHECK(max_norm(propagator(h, t) - oracle) < 1e-14);
    }
    const ComplexMatrix at_pi = propagator(h, std::numbers::pi);
    CHECK(max_norm(at_pi - Complex(0, -1) * pauli::x()) < 1e-14);
}

TEST_CASE("heisenberg projectors stay projectors") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3;
        const Hamiltonian h(ts::random_hermitian(rng, n));
        const auto ps = ts::random_decomposition(rng, n, 2);
        const Projector p = heisenberg_projector(ps[0], h, 1.3);
        CHECK(max_norm(p.matrix() * p.matrix() - p.matrix()) < 1e-12);
        const ComplexMatrix u = propagator(h, 1.3);
        CHECK(max_norm(p.matrix() - u.adjoint() * ps[0].matrix() * u) < 1e-12);
        CHECK(heisenberg_projector(ps[0], h, 0.0).matrix() == ps[0].matrix());
    }
}

TEST_CASE("tensor product blocks and dimension cap") {
    const ComplexMatrix a = pauli::x(), b = pauli::z();
    CHECK(approx_equal(tensor_product(a, b), ts::kron(a, b), 0.0));
    CHECK_THROWS_AS(tensor_product(identity(40), identity(40), 1024), DimensionLimitError);
    CHECK_NOTHROW(tensor_product(identity(32), identity(32), 1024));
}

TEST_CASE("projective decomposition validation") {
    std::mt19937 rng(19);
    const auto good = ts::random_decomposition(rng, 4, 3);
    CHECK(validate_projective_decomposition(good).valid);

    std::vector<Projector> incomplete{good[0], good[1]};
    const auto r1 = validate_projective_decomposition(incomplete);
    CHECK_FALSE(r1.valid);
    CHECK(r1.completeness_violation > 0.1);

    ComplexVector k0(2), kd(2);
    k0 << 1, 0;
    kd << 1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2;
    std::vector<Projector> overlapping{Projector::onto(k0), Projector::onto(kd)};
    CHECK(validate_projective_decomposition(overlapping).orthogonality_violation > 0.1);

    CHECK_FALSE(validate_projective_decomposition(std::vector<Projector>{}).valid);
    std::vector<Projector> mixed_dims{Projector(identity(2)), Projector(identity(3))};
    CHECK_FALSE(validate_projective_decomposition(mixed_dims).valid);
}
