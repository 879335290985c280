#include "hlab/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
}

}  // namespace

double max_norm(const ComplexMatrix& m) {
    double out = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) out = std::max(out, std::abs(m(i, j)));
    return out;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_norm(a - b) <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && max_norm(m - m.adjoint()) <= tol;
}

ComplexMatrix identity(std::size_t dim) {
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

namespace pauli {
ComplexMatrix x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
ComplexMatrix y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}
ComplexMatrix z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
}  // namespace pauli

// ---------------------------------------------------------------------------

Projector::Projector(ComplexMatrix m, double tol) : m_(std::move(m)) {
    require_square(m_, "projector");
    if (!is_hermitian(m_, tol)) throw ValidationError("projector is not Hermitian");
    const double idem = max_norm(m_ * m_ - m_);
    if (idem > tol) {
        std::ostringstream os;
        os << "projector is not idempotent (||P^2 - P|| = " << idem << ")";
        throw ValidationError(os.str());
    }
}

Projector Projector::onto(const ComplexVector& ket, double tol) {
    const double n2 = ket.squaredNorm();
    if (!(n2 > 0.0)) throw ValidationError("cannot project onto the zero vector");
    return Projector(ket * ket.adjoint() / n2, tol);
}

Projector Projector::spin(const Eigen::Vector3d& axis, int sign, double tol) {
    if (sign != 1 && sign != -1) throw ValidationError("spin projector sign must be +1 or -1");
    if (std::abs(axis.norm() - 1.0) > tol) {
        std::ostringstream os;
        os << "spin axis is not a unit vector (norm " << axis.norm() << ")";
        throw ValidationError(os.str());
    }
    const ComplexMatrix a_sigma = axis.x() * pauli::x() + axis.y() * pauli::y() + axis.z() * pauli::z();
    return Projector(0.5 * (identity(2) + static_cast<double>(sign) * a_sigma), tol);
}

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(ComplexMatrix m, double tol) : m_(std::move(m)) {
    require_square(m_, "density operator");
    if (!is_hermitian(m_, tol)) throw ValidationError("density operator is not Hermitian");
    const Complex tr = m_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
        std::ostringstream os;
        os << "density operator trace is " << tr.real() << ", expected 1";
        throw ValidationError(os.str());
    }
    const ComplexMatrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericFailure("eigen-solver failed on density operator");
    if (es.eigenvalues().minCoeff() < -tol) {
        std::ostringstream os;
        os << "density operator has negative eigenvalue " << es.eigenvalues().minCoeff();
        throw ValidationError(os.str());
    }
}

DensityOperator DensityOperator::pure(const ComplexVector& ket, double tol) {
    if (std::abs(ket.squaredNorm() - 1.0) > tol) {
        std::ostringstream os;
        os << "state vector is not normalized (|psi|^2 = " << ket.squaredNorm() << ")";
        throw ValidationError(os.str());
    }
    return DensityOperator(ket * ket.adjoint(), tol);
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    if (dim == 0) throw ValidationError("dimension must be positive");
    return DensityOperator(identity(dim) / static_cast<double>(dim));
}

// ---------------------------------------------------------------------------

Hamiltonian::Hamiltonian(ComplexMatrix h, double tol) : h_(std::move(h)) {
    require_square(h_, "hamiltonian");
    if (!is_hermitian(h_, tol)) throw ValidationError("hamiltonian is not Hermitian");
    zero_ = max_norm(h_) == 0.0;
    // Symmetrize so the solver sees an exactly Hermitian matrix.
    const ComplexMatrix herm = 0.5 * (h_ + h_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    if (es.info() != Eigen::Success) throw NumericFailure("eigen-solver failed on hamiltonian");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
}

Hamiltonian Hamiltonian::zero(std::size_t dim) {
    if (dim == 0) throw ValidationError("dimension must be positive");
    return Hamiltonian(ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t dim_cap) {
    const auto ra = static_cast<std::size_t>(a.rows());
    const auto rb = static_cast<std::size_t>(b.rows());
    if (ra != 0 && rb > dim_cap / ra) {
        std::ostringstream os;
        os << "tensor product dimension " << ra << "*" << rb << " exceeds cap " << dim_cap;
        throw DimensionLimitError(os.str());
    }
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix propagator(const Hamiltonian& h, double t) {
    if (t == 0.0 || h.is_zero()) return identity(h.dim());
    const auto& v = h.eigenvectors();
    Eigen::VectorXcd phases(h.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -h.eigenvalues()(k) * t));
    return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix propagator(const ComplexMatrix& h, double t, double tol) {
    return propagator(Hamiltonian(h, tol), t);
}

Projector heisenberg_projector(const Projector& p, const Hamiltonian& h, double t, double tol) {
    if (p.dim() != h.dim()) throw ValidationError("projector and hamiltonian dimensions differ");
    if (t == 0.0 || h.is_zero()) return p;
    const ComplexMatrix u = propagator(h, t);
    ComplexMatrix out = u.adjoint() * p.matrix() * u;
    // Remove the antihermitian rounding residue before validation.
    out = 0.5 * (out + out.adjoint()).eval();
    return Projector(std::move(out), tol);
}

DecompositionReport validate_projective_decomposition(std::span<const Projector> ps, double tol) {
    DecompositionReport r;
    if (ps.empty()) {
        r.completeness_violation = 1.0;
        return r;
    }
    const std::size_t dim = ps.front().dim();
    for (const auto& p : ps) {
        if (p.dim() != dim) {
            r.completeness_violation = 1.0;
            return r;
        }
    }
    ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& p : ps) sum += p.matrix();
    r.completeness_violation = max_norm(sum - identity(dim));
    for (std::size_t a = 0; a < ps.size(); ++a) {
        for (std::size_t b = a; b < ps.size(); ++b) {
            ComplexMatrix prod = ps[a].matrix() * ps[b].matrix();
            if (a == b) prod -= ps[a].matrix();
            r.orthogonality_violation = std::max(r.orthogonality_violation, max_norm(prod));
        }
    }
    r.valid = r.max_violation() <= tol;
    return r;
}

}  // namespace hlab
