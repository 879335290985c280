#include <doctest.h>

#include <random>

#include "hlab/rational.hpp"
#include "hlab/simplex.hpp"

using namespace hlab;
using lp::Problem;
using lp::Status;

namespace {

template <class T>
Problem<T> make(std::size_t rows, std::size_t cols, const std::vector<T>& a, const std::vector<T>& b) {
    Problem<T> p(rows, cols);
    p.a = a;
    p.b = b;
    return p;
}

// y^T A >= -eps and y^T b < 0
template <class T>
bool farkas_holds(const Problem<T>& p, const std::vector<T>& y, double eps = 0.0) {
    if (y.size() != p.rows) return false;
    for (std::size_t j = 0; j < p.cols; ++j) {
        T s = 0;
        for (std::size_t i = 0; i < p.rows; ++i) s += y[i] * p.at(i, j);
        if (s < T(-eps)) return false;
    }
    T yb = 0;
    for (std::size_t i = 0; i < p.rows; ++i) yb += y[i] * p.b[i];
    return yb < T(0);
}

template <class T>
double residual(const Problem<T>& p, const std::vector<T>& x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.rows; ++i) {
        T s = 0;
        for (std::size_t j = 0; j < p.cols; ++j) s += p.at(i, j) * x[j];
        worst = std::max(worst, std::abs(static_cast<double>(s - p.b[i])));
    }
    return worst;
}

}  // namespace

TEST_CASE("feasible and optimal") {
    // x + y + s = 4, x + 3y + t = 6; min -x - y  -> optimum -4
    const auto p = make<double>(2, 4, {1, 1, 1, 0, 1, 3, 0, 1}, {4, 6});
    const std::vector<double> c{-1, -1, 0, 0};
    const auto r = lp::solve<double>(p, c);
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(-4.0));
    CHECK(residual(p, r.x) < 1e-12);
}

TEST_CASE("infeasible with certificate, both arithmetics") {
    // x1 + x2 = 1 and x1 + x2 = 2
    const auto pd = make<double>(2, 2, {1, 1, 1, 1}, {1, 2});
    const auto rd = lp::solve<double>(pd);
    REQUIRE(rd.status == Status::infeasible);
    CHECK(farkas_holds(pd, rd.farkas, 1e-12));

    const auto pr = make<Rational>(2, 2, {1, 1, 1, 1}, {1, 2});
    const auto rr = lp::solve<Rational>(pr);
    REQUIRE(rr.status == Status::infeasible);
    CHECK(farkas_holds(pr, rr.farkas));
}

TEST_CASE("negative right-hand sides") {
    // -x = -2 -> x = 2
    const auto p = make<Rational>(1, 1, {-1}, {-2});
    const auto r = lp::solve<Rational>(p);
    REQUIRE(r.status == Status::optimal);
    CHECK(r.x[0] == 2);
}

TEST_CASE("unbounded objective") {
    // x - y = 0, min -x
    const auto p = make<double>(1, 2, {1, -1}, {0});
    const std::vector<double> c{-1, 0};
    CHECK(lp::solve<double>(p, c).status == Status::unbounded);
}

TEST_CASE("Beale's cycling example terminates under Bland's rule") {
    // min -3/4 x4 + 20 x5 - 1/2 x6 + 6 x7
    //   x1 + 1/4 x4 -  8 x5 -      x6 + 9 x7 = 0
    //   x2 + 1/2 x4 - 12 x5 - 1/2 x6 + 3 x7 = 0
    //   x3 +                       x6       = 1
    using R = Rational;
    const auto p = make<R>(3, 7,
                           {1, 0, 0, R(1, 4), -8, -1, 9,  //
                            0, 1, 0, R(1, 2), -12, R(-1, 2), 3,  //
                            0, 0, 1, 0, 0, 1, 0},
                           {0, 0, 1});
    const std::vector<R> c{0, 0, 0, R(-3, 4), 20, R(-1, 2), 6};
    const auto r = lp::solve<R>(p, c);
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == R(-5, 4));
}

TEST_CASE("random systems: constructed-feasible solve, rational agrees with double") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> coef(-3, 3), val(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + trial % 4, n = m + 1 + trial % 3;
        Problem<Rational> pr(m, n);
        Problem<double> pd(m, n);
        std::vector<int> x0(n);
        for (auto& v : x0) v = val(rng);
        const bool make_infeasible = trial % 3 == 0;
        for (std::size_t i = 0; i < m; ++i) {
            int b = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const int a = coef(rng);
                pr.at(i, j) = a;
                pd.at(i, j) = a;
                b += a * x0[j];
            }
            pr.b[i] = b;
            pd.b[i] = b;
        }
        if (make_infeasible) {
            // Duplicate row 0 with a shifted right-hand side.
            for (std::size_t j = 0; j < n; ++j) {
                pr.at(1, j) = pr.at(0, j);
                pd.at(1, j) = pd.at(0, j);
            }
            pr.b[1] = pr.b[0] + 1;
            pd.b[1] = pd.b[0] + 1;
        }
        const auto rr = lp::solve<Rational>(pr);
        const auto rd = lp::solve<double>(pd);
        CHECK(rr.status == rd.status);
        if (rr.status == Status::optimal) {
            CHECK(residual(pr, rr.x) == 0.0);
            CHECK(residual(pd, rd.x) < 1e-9);
            for (const auto& v : rr.x) CHECK(v >= 0);
        } else {
            CHECK(make_infeasible);
            CHECK(farkas_holds(pr, rr.farkas));
            CHECK(farkas_holds(pd, rd.farkas, 1e-9));
        }
    }
}
