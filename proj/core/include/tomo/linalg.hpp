#pragma once

#include <cstddef>
#include <vector>

#include "tomo/matrix.hpp"

namespace tomo {

/// A d x d complex Hermitian matrix. Construction symmetrizes as (A+A^†)/2
/// when the asymmetry is within a relative tolerance and rejects otherwise,
/// so rounding noise is absorbed without hiding real bugs.
class HermitianMatrix {
public:
    explicit HermitianMatrix(std::size_t dim) : m_(dim, dim) {}

    static HermitianMatrix from_matrix(const CMatrix& a, double rel_tol = 1e-12);
    static HermitianMatrix diagonal(const std::vector<double>& d);
    static HermitianMatrix identity(std::size_t n);
    /// |v><v|
    static HermitianMatrix outer(const std::vector<cplx>& v);

    std::size_t dim() const noexcept { return m_.rows(); }
    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Sets (i,j) and mirrors (j,i) = conj; diagonal imaginary parts are dropped.
    void set(std::size_t i, std::size_t j, cplx v);

    const CMatrix& matrix() const noexcept { return m_; }

    double trace_real() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i).real();
        return t;
    }

    HermitianMatrix& operator+=(const HermitianMatrix& rhs) { m_ += rhs.m_; return *this; }
    HermitianMatrix& operator-=(const HermitianMatrix& rhs) { m_ -= rhs.m_; return *this; }
    HermitianMatrix& scale(double s) {
        for (cplx& z : m_.data()) z *= s;
        return *this;
    }
    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }

private:
    CMatrix m_;
};

/// Eigenvalues sorted descending (ties kept in original index order),
/// eigenvectors as unitary columns in matching order.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    CMatrix eigenvectors;
};

/// Cyclic Jacobi rotations on the complex Hermitian matrix. Converges when
/// the off-diagonal Frobenius mass drops below 1e-14 * ||H||_2; throws
/// SolverFailure (carrying the residual) after 50 sweeps without convergence.
EigenDecomposition hermitian_eig(const HermitianMatrix& h);

/// Nearest (Hilbert-Schmidt) PSD matrix: V Lambda_+ V^† with negative
/// eigenvalues zeroed.
HermitianMatrix psd_project(const HermitianMatrix& h);

/// Number of eigenvalues strictly greater than tol * ||H||_2.
int count_positive_eigs(const HermitianMatrix& h, double tol);

enum class MatrixNorm { Trace, HilbertSchmidt };

/// Trace norm (sum |lambda_i|) or Hilbert-Schmidt (Frobenius) norm.
double matrix_norm(const HermitianMatrix& h, MatrixNorm kind);

/// Singular values (descending) and full set of right singular directions
/// of a real matrix, via one-sided Jacobi column orthogonalization. The
/// right_vectors matrix is square (cols x cols) orthogonal; columns past the
/// numerical rank span the kernel. Small singular values are computed as
/// actual column norms of A*V, so kernel directions come out at rounding
/// level rather than sqrt(machine epsilon).
struct SvdResult {
    std::vector<double> singular_values;
    RMatrix right_vectors;
};

SvdResult singular_values_and_kernel(const RMatrix& a);

/// Largest singular value via power iteration on A^T A (scaled safe upper
/// estimate is the caller's business).
double spectral_norm_estimate(const RMatrix& a, std::size_t max_iters = 1000, double tol = 1e-14);

} // namespace tomo
