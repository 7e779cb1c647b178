#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "lufid/errors.hpp"

namespace lufid {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. The single numeric carrier of the library;
// everything (states, unitaries, Kraus operators, SDP blocks) is one of these.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    bool is_finite() const;
    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= cplx(s, 0.0); }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= cplx(s, 0.0); }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// Matrix product. `matmul` parallelizes large products with OpenMP; each output
// entry is computed by the same serial reduction, so results are bit-identical
// to `matmul_serial` regardless of thread count.
ComplexMatrix matmul_serial(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    return matmul(a, b);
}

struct HermitianEig {
    std::vector<double> eigenvalues;  // sorted descending
    ComplexMatrix eigenvectors;       // columns, orthonormal
};

struct SvdResult {
    ComplexMatrix left;                   // m x k, k = min(m, n)
    std::vector<double> singular_values;  // descending, nonnegative
    ComplexMatrix right;                  // n x k
};

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Robust at the dimensions this library needs (<= ~100) with no dependencies.
HermitianEig herm_eig(const ComplexMatrix& m);

// Eigenvalues only (descending); skips eigenvector accumulation.
std::vector<double> herm_eig_values(const ComplexMatrix& m);

// Principal square root of a PSD matrix. Eigenvalues in [-1e-8, 0) are
// treated as roundoff and clamped to zero; below -1e-8 raises NotPSD.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m);

// Thin SVD computed from herm_eig(a^dag a); left vectors for singular values
// below 1e-10 are completed by orthonormalization against the rest.
SvdResult svd(const ComplexMatrix& a);

// Q = U V^dag restricted to the singular support (sigma > 1e-10), so that
// Q^dag Q projects onto the row space and Re Tr(Q^dag a) = trace norm of a.
ComplexMatrix polar_isometry(const ComplexMatrix& a);

// Sum of singular values.
double trace_norm(const ComplexMatrix& a);

// Kronecker product; index convention (i1,i2) -> i1*cols(b)+i2 on both axes.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out subsystem `traced` (1 or 2) of an operator on a d1 x d2 bipartite
// space. Result acts on the remaining factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                            int traced);

// Transpose on the second tensor factor.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t d1, std::size_t d2);

// Row-major matrix <-> bipartite ket correspondence: vec(A)_{(i1,i2)} = A[i1][i2]
// for A of shape d1 x d2, so (U1 (x) U2) vec(A) = vec(U1 A U2^T).
std::vector<cplx> vec(const ComplexMatrix& a);
ComplexMatrix unvec(const std::vector<cplx>& v, std::size_t d1, std::size_t d2);

// Solve a x = b by Gaussian elimination with partial pivoting.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

// Joint spectral decomposition of a unitary: u = q diag(exp(i theta)) q^dag
// with theta in (-pi, pi].  Diagonalizes the Hermitian part, then the
// anti-Hermitian part inside each eigenvalue cluster.
struct UnitaryEig {
    std::vector<double> angles;
    ComplexMatrix vectors;
};
UnitaryEig unitary_eig(const ComplexMatrix& u);

// Vector helpers used for kets.
double ket_norm(const std::vector<cplx>& v);
cplx ket_inner(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> apply_matrix(const ComplexMatrix& m, const std::vector<cplx>& v);
ComplexMatrix outer(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace lufid
