// Dense Hermitian eigendecomposition (ascending eigenvalues, orthonormal
// eigenvectors), backed by Eigen's self-adjoint solver behind the module
// contract: the input is checked for Hermiticity and symmetrized before the
// solve.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ebath/errors.hpp"

namespace ebath {

struct HermitianEigen {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // columns, orthonormal
};

inline void check_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-10) {
    if (m.rows() != m.cols())
        throw validation_error("hermitian_eigen: matrix must be square");
    const double scale = m.cwiseAbs().maxCoeff();
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && dev > tol * scale)
        throw validation_error("hermitian_eigen: matrix is not Hermitian within tolerance");
}

inline HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& m) {
    check_hermitian(m);
    const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw convergence_error("hermitian_eigen: solver did not converge", 0.0, 0.0);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Real symmetric fast path (z-aligned decay matrices are real).
struct SymmetricEigen {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

inline SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw validation_error("symmetric_eigen: matrix must be square");
    const double scale = m.cwiseAbs().maxCoeff();
    const double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && dev > 1e-10 * scale)
        throw validation_error("symmetric_eigen: matrix is not symmetric within tolerance");
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw convergence_error("symmetric_eigen: solver did not converge", 0.0, 0.0);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

} // namespace ebath
