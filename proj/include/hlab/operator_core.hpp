#pragma once
// Dense complex linear algebra on small Hilbert spaces: projectors, density
// operators, Kronecker products and Hermitian time evolution.
//
// All comparisons take an explicit absolute tolerance on the max-norm.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultDimensionCap = 1024;

// max_ij |m_ij|
double max_norm(const ComplexMatrix& m);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTolerance);
bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerance);
ComplexMatrix identity(std::size_t dim);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

// Hermitian idempotent matrix.
class Projector {
public:
    explicit Projector(ComplexMatrix m, double tol = kDefaultTolerance);

    // |k><k| / <k|k>
    static Projector onto(const ComplexVector& ket, double tol = kDefaultTolerance);
    // (1 + sign * axis.sigma) / 2 for a unit Bloch vector.
    static Projector spin(const Eigen::Vector3d& axis, int sign, double tol = kDefaultTolerance);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

private:
    ComplexMatrix m_;
};

// Hermitian, unit trace, positive semidefinite (all within tolerance).
class DensityOperator {
public:
    explicit DensityOperator(ComplexMatrix m, double tol = kDefaultTolerance);

    // |psi><psi| for a normalized ket.
    static DensityOperator pure(const ComplexVector& ket, double tol = kDefaultTolerance);
    static DensityOperator maximally_mixed(std::size_t dim);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

private:
    ComplexMatrix m_;
};

// Hermitian generator with its spectral decomposition cached, so that
// repeated propagators at different times cost two matrix products.
// Units: hbar = 1, energies in angular frequency.
class Hamiltonian {
public:
    explicit Hamiltonian(ComplexMatrix h, double tol = kDefaultTolerance);
    static Hamiltonian zero(std::size_t dim);

    const ComplexMatrix& matrix() const noexcept { return h_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(h_.rows()); }
    bool is_zero() const noexcept { return zero_; }
    const Eigen::VectorXd& eigenvalues() const noexcept { return evals_; }
    const ComplexMatrix& eigenvectors() const noexcept { return evecs_; }

private:
    ComplexMatrix h_;
    Eigen::VectorXd evals_;
    ComplexMatrix evecs_;
    bool zero_ = false;
};

// Kronecker product; block (i, j) of the result is a(i, j) * b.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             std::size_t dim_cap = kDefaultDimensionCap);

// exp(-i h t) by spectral decomposition.
ComplexMatrix propagator(const Hamiltonian& h, double t);
ComplexMatrix propagator(const ComplexMatrix& h, double t, double tol = kDefaultTolerance);

// U(t)^dagger p U(t), U = propagator(h, t).
Projector heisenberg_projector(const Projector& p, const Hamiltonian& h, double t,
                               double tol = kDefaultTolerance);

struct DecompositionReport {
    bool valid = false;
    double completeness_violation = 0.0;   // ||sum_a P_a - 1||_max
    double orthogonality_violation = 0.0;  // max_{a,b} ||P_a P_b - delta_ab P_a||_max
    double max_violation() const noexcept {
        return completeness_violation > orthogonality_violation ? completeness_violation
                                                                : orthogonality_violation;
    }
};

// Checks sum_a P_a = 1 and P_a P_b = delta_ab P_a. Never throws on a bad
// decomposition; the report carries the largest violation found.
DecompositionReport validate_projective_decomposition(std::span<const Projector> ps,
                                                      double tol = kDefaultTolerance);

}  // namespace hlab
