#include "bcsdp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcsdp {

SpectralDecomposition eigh(const SymMatrix& a)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("eigh: matrix is not square");
    if (!a.allFinite()) throw std::invalid_argument("eigh: non-finite entry");
    SpectralDecomposition out;
    if (a.rows() == 0) {
        out.eigenvalues.resize(0);
        out.eigenvectors.resize(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: no convergence");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

SymMatrix project_psd(const SymMatrix& a)
{
    const SymMatrix sym = 0.5 * (a + a.transpose());
    if (sym.rows() == 0) return sym;
    const auto dec = eigh(sym);
    const Eigen::VectorXd clamped = dec.eigenvalues.cwiseMax(0.0);
    SymMatrix p = dec.eigenvectors * clamped.asDiagonal() * dec.eigenvectors.transpose();
    return 0.5 * (p + p.transpose());
}

double default_shift(const SymMatrix& a)
{
    if (a.rows() == 0) return 1e-12;
    return std::max(1e-12, 1e-9 * std::abs(a.trace()) / static_cast<double>(a.rows()));
}

Eigen::MatrixXd cholesky_psd(const SymMatrix& a, double shift)
{
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Eigen::MatrixXd(0, 0);
    if (!a.allFinite()) throw std::invalid_argument("cholesky_psd: non-finite entry");
    double s = shift < 0.0 ? default_shift(a) : shift;
    const SymMatrix sym = 0.5 * (a + a.transpose());
    for (int attempt = 0; attempt <= 8; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(sym + s * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) return llt.matrixL();
        s = std::max(s * 10.0, 1e-12);
    }
    throw std::runtime_error("cholesky_psd: factorisation failed within the shift budget");
}

}  // namespace bcsdp
