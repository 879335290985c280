#pragma once
// Dense two-phase simplex on the standard form  A x = b, x >= 0.
//
// Pivoting uses Bland's rule (lowest-index entering column, lowest-index
// basic variable on ratio ties), so the solver terminates on degenerate
// problems and returns the same vertex on every run. The scalar is either
// double (with explicit epsilons) or an exact rational type.
//
// When phase 1 ends with a positive artificial sum the problem is
// infeasible, and the phase-1 duals give a Farkas certificate y with
// y^T A >= 0 and y^T b < 0.

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "hlab/errors.hpp"

namespace hlab::lp {

enum class Status { optimal, infeasible, unbounded };

template <class T>
struct Problem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> a;  // row-major, rows x cols
    std::vector<T> b;

    Problem() = default;
    Problem(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)), b(r, T(0)) {}
    T& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const T& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

template <class T>
struct Result {
    Status status = Status::infeasible;
    std::vector<T> x;       // primal solution (optimal only)
    std::vector<T> farkas;  // certificate over rows (infeasible only)
    T objective = T(0);
    std::size_t pivots = 0;
};

struct Settings {
    double pivot_eps = 1e-12;        // |entry| below this is treated as zero
    double feasibility_eps = 1e-11;  // phase-1 residual treated as zero
    std::size_t max_pivots = 200000;
};

namespace detail {

template <class T>
inline constexpr bool kFloating = std::is_floating_point_v<T>;

template <class T>
bool negative(const T& v, double eps) {
    if constexpr (kFloating<T>) return v < -eps;
    else return v < 0;
}

template <class T>
bool positive(const T& v, double eps) {
    if constexpr (kFloating<T>) return v > eps;
    else return v > 0;
}

template <class T>
bool nonzero(const T& v, double eps) {
    return negative(v, eps) || positive(v, eps);
}

template <class T>
class Tableau {
public:
    Tableau(std::size_t m, std::size_t width) : m_(m), w_(width), t_((m + 1) * width, T(0)) {}

    T& at(std::size_t r, std::size_t c) { return t_[r * w_ + c]; }
    const T& at(std::size_t r, std::size_t c) const { return t_[r * w_ + c]; }
    T& rhs(std::size_t r) { return at(r, w_ - 1); }
    std::size_t obj() const { return m_; }

    void pivot(std::size_t r, std::size_t c, double eps) {
        const T p = at(r, c);
        for (std::size_t j = 0; j < w_; ++j)
            if (nonzero(at(r, j), 0.0)) at(r, j) /= p;
        at(r, c) = T(1);
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const T f = at(i, c);
            if (!nonzero(f, 0.0)) continue;
            for (std::size_t j = 0; j < w_; ++j) {
                if (!nonzero(at(r, j), 0.0)) continue;
                at(i, j) -= f * at(r, j);
                if constexpr (kFloating<T>) {
                    if (std::abs(at(i, j)) < eps * 1e-3) at(i, j) = T(0);
                }
            }
            at(i, c) = T(0);
        }
    }

private:
    std::size_t m_;
    std::size_t w_;
    std::vector<T> t_;
};

// One simplex phase over columns [0, allowed). Returns false if unbounded.
template <class T>
bool run_phase(Tableau<T>& tab, std::vector<std::size_t>& basis, std::size_t allowed, const Settings& s,
               std::size_t& pivots) {
    const std::size_t m = basis.size();
    while (true) {
        std::size_t enter = allowed;
        for (std::size_t j = 0; j < allowed; ++j) {
            if (negative(tab.at(tab.obj(), j), s.pivot_eps)) {
                enter = j;
                break;
            }
        }
        if (enter == allowed) return true;
        std::size_t leave = m;
        T best_ratio = T(0);
        for (std::size_t i = 0; i < m; ++i) {
            if (!positive(tab.at(i, enter), s.pivot_eps)) continue;
            const T ratio = tab.rhs(i) / tab.at(i, enter);
            if (leave == m) {
                leave = i;
                best_ratio = ratio;
                continue;
            }
            bool better = false;
            bool tie = false;
            if constexpr (kFloating<T>) {
                better = ratio < best_ratio - s.pivot_eps;
                tie = !better && ratio <= best_ratio + s.pivot_eps;
            } else {
                better = ratio < best_ratio;
                tie = ratio == best_ratio;
            }
            if (better || (tie && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) return false;
        tab.pivot(leave, enter, s.pivot_eps);
        basis[leave] = enter;
        if (++pivots > s.max_pivots) throw NumericFailure("simplex pivot limit exceeded");
    }
}

}  // namespace detail

// Minimizes cost^T x over {A x = b, x >= 0}; an empty cost asks for any
// feasible point.
template <class T>
Result<T> solve(const Problem<T>& p, std::span<const T> cost = {}, const Settings& s = {}) {
    using detail::negative;
    using detail::nonzero;
    using detail::positive;
    const std::size_t m = p.rows;
    const std::size_t n = p.cols;
    if (p.a.size() != m * n || p.b.size() != m) throw ValidationError("malformed LP problem");
    if (!cost.empty() && cost.size() != n) throw ValidationError("LP cost vector has wrong length");

    const std::size_t width = n + m + 1;
    detail::Tableau<T> tab(m, width);
    std::vector<int> flip(m, 1);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (negative(p.b[i], 0.0)) flip[i] = -1;
        const T f = T(flip[i]);
        for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = f * p.at(i, j);
        tab.at(i, n + i) = T(1);
        tab.rhs(i) = f * p.b[i];
        basis[i] = n + i;
    }
    // Phase-1 reduced costs for the all-artificial basis.
    for (std::size_t j = 0; j < n; ++j) {
        T sum = T(0);
        for (std::size_t i = 0; i < m; ++i) sum += tab.at(i, j);
        tab.at(m, j) = -sum;
    }
    {
        T sum = T(0);
        for (std::size_t i = 0; i < m; ++i) sum += tab.rhs(i);
        tab.rhs(m) = -sum;
    }

    Result<T> res;
    detail::run_phase(tab, basis, n + m, s, res.pivots);

    const T infeas = -tab.rhs(m);
    if (positive(infeas, s.feasibility_eps)) {
        res.status = Status::infeasible;
        res.objective = infeas;
        res.farkas.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const T y = T(1) - tab.at(m, n + i);
            res.farkas[i] = -T(flip[i]) * y;
        }
        return res;
    }

    // Drive remaining artificials out of the basis where possible; rows that
    // cannot be pivoted are redundant and keep their artificial at zero.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (nonzero(tab.at(i, j), s.pivot_eps)) {
                tab.pivot(i, j, s.pivot_eps);
                basis[i] = j;
                break;
            }
        }
    }

    if (!cost.empty()) {
        for (std::size_t j = 0; j < width; ++j) tab.at(m, j) = T(0);
        for (std::size_t j = 0; j < n; ++j) tab.at(m, j) = cost[j];
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] >= n) continue;
            const T cb = cost[basis[i]];
            if (!nonzero(cb, 0.0)) continue;
            for (std::size_t j = 0; j < width; ++j) tab.at(m, j) -= cb * tab.at(i, j);
        }
        if (!detail::run_phase(tab, basis, n, s, res.pivots)) {
            res.status = Status::unbounded;
            return res;
        }
    }

    res.status = Status::optimal;
    res.x.assign(n, T(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) continue;
        T v = tab.rhs(i);
        if constexpr (detail::kFloating<T>) {
            if (v < 0) v = 0;  // round-off below zero
        }
        res.x[basis[i]] = v;
    }
    if (!cost.empty()) {
        T obj = T(0);
        for (std::size_t j = 0; j < n; ++j) obj += cost[j] * res.x[j];
        res.objective = obj;
    }
    return res;
}

}  // namespace hlab::lp
