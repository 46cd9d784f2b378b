#pragma once

#include <Eigen/Dense>

namespace bcsdp {

// Dense symmetric matrices are plain Eigen matrices; routines that need
// symmetry read the lower triangle (eigh) or symmetrise first (project_psd).
using SymMatrix = Eigen::MatrixXd;

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

// Throws std::invalid_argument on non-finite input.
SpectralDecomposition eigh(const SymMatrix& a);

// Frobenius-nearest PSD matrix to (a + a^T) / 2: negative eigenvalues are set
// to exactly zero.
SymMatrix project_psd(const SymMatrix& a);

// Default shift used by cholesky_psd: 1e-9 * trace / n (at least 1e-12).
double default_shift(const SymMatrix& a);

// Lower-triangular L with L L^T = a + shift I. A negative `shift` selects the
// default. If the factorisation breaks down the shift is grown tenfold up to
// eight times before std::runtime_error is thrown.
Eigen::MatrixXd cholesky_psd(const SymMatrix& a, double shift = -1.0);

}  // namespace bcsdp
