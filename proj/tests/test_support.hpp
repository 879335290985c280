#pragma once
// Random instance generators and independent oracles for the test suites.
// The oracles avoid the library's own code paths: exponentials by Taylor
// series, spin projectors and the singlet written out entry by entry, and
// closed forms for the Leggett-Garg and three-box amplitudes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hlab/histories.hpp"

namespace testing_support {

using hlab::Complex;
using hlab::ComplexMatrix;
using hlab::ComplexVector;

inline ComplexMatrix random_gaussian(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline ComplexMatrix random_unitary(std::mt19937& rng, int n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(rng, n));
    ComplexMatrix q = qr.householderQ();
    return q;
}

inline ComplexMatrix random_hermitian(std::mt19937& rng, int n, double scale = 1.0) {
    const ComplexMatrix g = random_gaussian(rng, n);
    return scale * 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_density(std::mt19937& rng, int n) {
    const ComplexMatrix g = random_gaussian(rng, n);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

// Columns of a random unitary split into k non-empty groups.
inline std::vector<hlab::Projector> random_decomposition(std::mt19937& rng, int n, int k) {
    const ComplexMatrix u = random_unitary(rng, n);
    std::vector<int> group(n);
    for (int i = 0; i < n; ++i) group[i] = i < k ? i : std::uniform_int_distribution<int>(0, k - 1)(rng);
    std::shuffle(group.begin(), group.end(), rng);
    std::vector<ComplexMatrix> ps(k, ComplexMatrix::Zero(n, n));
    for (int i = 0; i < n; ++i) ps[group[i]] += u.col(i) * u.col(i).adjoint();
    std::vector<hlab::Projector> out;
    for (auto& p : ps) out.emplace_back(0.5 * (p + p.adjoint()));
    return out;
}

// exp(A) by scaling and squaring around a long Taylor series.
inline ComplexMatrix taylor_exp(const ComplexMatrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const ComplexMatrix s = a / std::pow(2.0, squarings);
    ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
    ComplexMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * s / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

// (1 + s a.sigma) / 2, written out.
inline ComplexMatrix spin_projector(const Eigen::Vector3d& a, int s) {
    ComplexMatrix p(2, 2);
    p(0, 0) = 0.5 * (1.0 + s * a.z());
    p(1, 1) = 0.5 * (1.0 - s * a.z());
    p(0, 1) = 0.5 * s * Complex(a.x(), -a.y());
    p(1, 0) = 0.5 * s * Complex(a.x(), a.y());
    return p;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// (|01> - |10>) / sqrt 2 in the basis |00>, |01>, |10>, |11>.
inline ComplexVector singlet() {
    ComplexVector v = ComplexVector::Zero(4);
    v(1) = 1.0 / std::numbers::sqrt2;
    v(2) = -1.0 / std::numbers::sqrt2;
    return v;
}

// <psi| P^a_s (x) P^b_t |psi> in the singlet.
inline double singlet_pair_probability(const Eigen::Vector3d& a, int s, const Eigen::Vector3d& b, int t) {
    const ComplexVector psi = singlet();
    return (psi.adjoint() * kron(spin_projector(a, s), spin_projector(b, t)) * psi)(0, 0).real();
}

inline double singlet_correlation(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    double c = 0.0;
    for (int s : {1, -1})
        for (int t : {1, -1}) c += s * t * singlet_pair_probability(a, s, b, t);
    return c;
}

// Two-time probability for sigma_z under H = omega sigma_x / 2, maximally mixed state.
inline double lg_pair_probability(int s1, int s2, double omega, double dt) {
    return 0.25 * (1.0 + s1 * s2 * std::cos(omega * dt));
}

// Two-slot schedule with random decompositions at t = 0.4 and 1.3 under a
// random Hamiltonian; optionally post-selected on a random final state.
inline hlab::HistorySet random_history_set(std::mt19937& rng, int n, bool post_select) {
    std::uniform_int_distribution<int> parts(2, n);
    const hlab::Hamiltonian h(random_hermitian(rng, n));
    std::vector<hlab::HistorySlot> slots;
    for (int k = 0; k < 2; ++k) {
        const int m = parts(rng);
        hlab::HistorySlot s{0.4 + 0.9 * k, random_decomposition(rng, n, m), {}};
        for (int i = 0; i < m; ++i) s.labels.push_back(std::to_string(i));
        slots.push_back(std::move(s));
    }
    std::optional<hlab::DensityOperator> fin;
    if (post_select) fin = hlab::DensityOperator(random_density(rng, n));
    return hlab::HistorySet::from_schedule(hlab::HistorySchedule(slots, h),
                                           hlab::DensityOperator(random_density(rng, n)), fin);
}

inline Eigen::Vector3d random_unit(std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = Eigen::Vector3d(g(rng), g(rng), g(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

inline Eigen::Vector3d planar(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

}  // namespace testing_support
