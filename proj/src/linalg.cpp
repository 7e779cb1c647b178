#include "lufid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lufid {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdClampTol = 1e-8;    // below -1e-8 is a user error
constexpr double kSupportTol = 1e-10;    // singular/eigen support cutoff
constexpr double kJacobiTol = 1e-13;     // off-diagonal norm, relative

void require_finite(const ComplexMatrix& m, const char* who) {
    if (!m.is_finite()) throw NonFinite(std::string(who) + ": non-finite entries");
}

void require_square(const ComplexMatrix& m, const char* who) {
    if (!m.square()) throw DimensionMismatch(std::string(who) + ": matrix not square");
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One cyclic Jacobi pass over all (p,q) pairs; rotations accumulate into v
// when v is non-null. Returns the number of rotations applied.
std::size_t jacobi_sweep(ComplexMatrix& a, ComplexMatrix* v) {
    const std::size_t n = a.rows();
    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const cplx beta = a(p, q);
            const double r = std::abs(beta);
            if (r < 1e-300) continue;
            const cplx phase = beta / r;
            const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
            const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
            const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            // A <- J^dag A J with J(p,p)=c, J(p,q)=s*phase, J(q,p)=-s*conj(phase), J(q,q)=c
            for (std::size_t k = 0; k < n; ++k) {
                const cplx akp = a(k, p), akq = a(k, q);
                a(k, p) = c * akp - s * std::conj(phase) * akq;
                a(k, q) = s * phase * akp + c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const cplx apk = a(p, k), aqk = a(q, k);
                a(p, k) = c * apk - s * phase * aqk;
                a(q, k) = s * std::conj(phase) * apk + c * aqk;
            }
            a(p, q) = cplx(0.0, 0.0);
            a(q, p) = cplx(0.0, 0.0);
            if (v) {
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = (*v)(k, p), vkq = (*v)(k, q);
                    (*v)(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    (*v)(k, q) = s * phase * vkp + c * vkq;
                }
            }
            ++rotations;
        }
    }
    return rotations;
}

// Core Jacobi driver. `m` must be verified Hermitian by the caller.
void jacobi_eig(const ComplexMatrix& m, std::vector<double>& values, ComplexMatrix* vectors) {
    const std::size_t n = m.rows();
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx((m(i, i).real() + m(i, i).real()) / 2.0, 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx h = (m(i, j) + std::conj(m(j, i))) / 2.0;
            a(i, j) = h;
            a(j, i) = std::conj(h);
        }
    }
    if (vectors) *vectors = ComplexMatrix::identity(n);

    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const std::size_t rotation_cap = 100 * n * n;
    std::size_t used = 0;
    while (off_diagonal_norm(a) > kJacobiTol * scale && used < rotation_cap) {
        const std::size_t done = jacobi_sweep(a, vectors);
        used += done;
        if (done == 0) break;
    }

    values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });
    for (std::size_t i = 0; i < n; ++i) values[i] = diag[order[i]];
    if (vectors) {
        ComplexMatrix sorted(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) sorted(i, j) = (*vectors)(i, order[j]);
        *vectors = std::move(sorted);
    }
}

void require_hermitian(const ComplexMatrix& m, const char* who) {
    require_square(m, who);
    require_finite(m, who);
    if (!m.is_hermitian(kHermTol))
        throw NotHermitian(std::string(who) + ": matrix not Hermitian within 1e-12");
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) out.data_[i] = std::conj(data_[i]);
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::is_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    if (!square()) return false;
    const ComplexMatrix g = matmul_serial(adjoint(), *this);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(g(i, j) - want) > tol) return false;
        }
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix addition: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionMismatch("matrix subtraction: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

ComplexMatrix matmul_serial(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
            out(i, j) = acc;
        }
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
#ifdef _OPENMP
    const std::size_t work = a.rows() * a.cols() * b.cols();
    if (work >= 1u << 16) {
        ComplexMatrix out(a.rows(), b.cols());
        const long n = static_cast<long>(a.rows());
        const std::size_t k = a.cols(), m = b.cols();
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
                out(i, j) = acc;
            }
        return out;
    }
#endif
    return matmul_serial(a, b);
}

HermitianEig herm_eig(const ComplexMatrix& m) {
    require_hermitian(m, "herm_eig");
    HermitianEig out;
    jacobi_eig(m, out.eigenvalues, &out.eigenvectors);
    return out;
}

std::vector<double> herm_eig_values(const ComplexMatrix& m) {
    require_hermitian(m, "herm_eig");
    std::vector<double> values;
    jacobi_eig(m, values, nullptr);
    return values;
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& m) {
    HermitianEig eig = herm_eig(m);
    const std::size_t n = m.rows();
    // relative floor: eigenvalues below eps * lam_max are numerically zero,
    // and their square roots would pollute the null space at sqrt(eps) size
    const double floor = 1e-14 * std::max(eig.eigenvalues.front(), 0.0);
    for (double& lam : eig.eigenvalues) {
        if (lam < -kPsdClampTol) throw NotPSD("matrix_sqrt: eigenvalue below -1e-8");
        if (lam < floor) lam = 0.0;
    }
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                acc += eig.eigenvectors(i, k) * std::sqrt(eig.eigenvalues[k]) *
                       std::conj(eig.eigenvectors(j, k));
            out(i, j) = acc;
        }
    return out;
}

SvdResult svd(const ComplexMatrix& a) {
    require_finite(a, "svd");
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t k = std::min(m, n);
    const ComplexMatrix gram = matmul_serial(a.adjoint(), a);
    HermitianEig eig = herm_eig(gram);

    SvdResult out;
    out.singular_values.resize(k);
    out.right = ComplexMatrix(n, k);
    out.left = ComplexMatrix(m, k);
    // Refine each singular value as ||a v_i||; the Gram eigenvalue sqrt
    // carries sqrt(eps)-level noise near zero, the matrix-vector norm does not.
    std::vector<std::vector<cplx>> images(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<cplx> w(m, cplx(0.0, 0.0));
        for (std::size_t r = 0; r < m; ++r) {
            cplx acc(0.0, 0.0);
            for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * eig.eigenvectors(c, i);
            w[r] = acc;
        }
        out.singular_values[i] = ket_norm(w);
        images[i] = std::move(w);
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return out.singular_values[x] > out.singular_values[y];
    });
    {
        std::vector<double> sorted_sv(k);
        for (std::size_t i = 0; i < k; ++i) sorted_sv[i] = out.singular_values[order[i]];
        out.singular_values = std::move(sorted_sv);
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < n; ++r) out.right(r, i) = eig.eigenvectors(r, order[i]);

    // Left vectors u_i = a v_i / s_i where resolvable; re-orthonormalize as we go
    // and complete the rest from standard basis candidates.
    std::vector<bool> filled(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        if (out.singular_values[i] <= kSupportTol) continue;
        std::vector<cplx> u = images[order[i]];
        for (cplx& z : u) z /= out.singular_values[i];
        for (std::size_t j = 0; j < i; ++j) {
            if (!filled[j]) continue;
            cplx proj(0.0, 0.0);
            for (std::size_t r = 0; r < m; ++r) proj += std::conj(out.left(r, j)) * u[r];
            for (std::size_t r = 0; r < m; ++r) u[r] -= proj * out.left(r, j);
        }
        double norm = ket_norm(u);
        if (norm < 1e-14) continue;  // handled by completion below
        for (std::size_t r = 0; r < m; ++r) out.left(r, i) = u[r] / norm;
        filled[i] = true;
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (filled[i]) continue;
        // pick the standard basis vector with the largest orthogonal residual
        std::vector<cplx> best;
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::vector<cplx> u(m, cplx(0.0, 0.0));
            u[cand] = cplx(1.0, 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                if (!filled[j]) continue;
                cplx proj(0.0, 0.0);
                for (std::size_t r = 0; r < m; ++r) proj += std::conj(out.left(r, j)) * u[r];
                for (std::size_t r = 0; r < m; ++r) u[r] -= proj * out.left(r, j);
            }
            const double norm = ket_norm(u);
            if (norm > best_norm) {
                best_norm = norm;
                best = std::move(u);
            }
        }
        for (std::size_t r = 0; r < m; ++r) out.left(r, i) = best[r] / best_norm;
        filled[i] = true;
    }
    return out;
}

ComplexMatrix polar_isometry(const ComplexMatrix& a) {
    require_finite(a, "polar_isometry");
    const SvdResult s = svd(a);
    ComplexMatrix q(a.rows(), a.cols());
    for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
        if (s.singular_values[k] <= kSupportTol) continue;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                q(i, j) += s.left(i, k) * std::conj(s.right(j, k));
    }
    return q;
}

double trace_norm(const ComplexMatrix& a) {
    require_finite(a, "trace_norm");
    const ComplexMatrix gram = matmul_serial(a.adjoint(), a);
    const HermitianEig eig = herm_eig(gram);
    const double lmax = std::max(eig.eigenvalues.front(), 0.0);
    double s = 0.0;
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues[i] >= 1e-8 * lmax && eig.eigenvalues[i] > 0.0) {
            s += std::sqrt(eig.eigenvalues[i]);
            continue;
        }
        // sqrt of a near-zero Gram eigenvalue carries sqrt(eps) noise;
        // the matrix-vector image does not
        double nrm2 = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            cplx acc(0.0, 0.0);
            for (std::size_t c = 0; c < a.cols(); ++c)
                acc += a(r, c) * eig.eigenvectors(c, i);
            nrm2 += std::norm(acc);
        }
        s += std::sqrt(nrm2);
    }
    return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_finite(a, "kron");
    require_finite(b, "kron");
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const cplx aij = a(i1, j1);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = aij * b(i2, j2);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                            int traced) {
    if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
        throw DimensionMismatch("partial_trace: operator is not d1*d2 square");
    if (traced != 1 && traced != 2) throw BadParameter("partial_trace: subsystem must be 1 or 2");
    if (traced == 2) {
        ComplexMatrix out(d1, d1);
        for (std::size_t i1 = 0; i1 < d1; ++i1)
            for (std::size_t j1 = 0; j1 < d1; ++j1) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < d2; ++k) acc += m(i1 * d2 + k, j1 * d2 + k);
                out(i1, j1) = acc;
            }
        return out;
    }
    ComplexMatrix out(d2, d2);
    for (std::size_t i2 = 0; i2 < d2; ++i2)
        for (std::size_t j2 = 0; j2 < d2; ++j2) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < d1; ++k) acc += m(k * d2 + i2, k * d2 + j2);
            out(i2, j2) = acc;
        }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t d1, std::size_t d2) {
    if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
        throw DimensionMismatch("partial_transpose: operator is not d1*d2 square");
    ComplexMatrix out(d1 * d2, d1 * d2);
    for (std::size_t i1 = 0; i1 < d1; ++i1)
        for (std::size_t i2 = 0; i2 < d2; ++i2)
            for (std::size_t j1 = 0; j1 < d1; ++j1)
                for (std::size_t j2 = 0; j2 < d2; ++j2)
                    out(i1 * d2 + i2, j1 * d2 + j2) = m(i1 * d2 + j2, j1 * d2 + i2);
    return out;
}

std::vector<cplx> vec(const ComplexMatrix& a) {
    return a.data();
}

ComplexMatrix unvec(const std::vector<cplx>& v, std::size_t d1, std::size_t d2) {
    if (v.size() != d1 * d2) throw DimensionMismatch("unvec: length is not d1*d2");
    ComplexMatrix out(d1, d2);
    out.data() = v;
    return out;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "solve");
    if (a.rows() != b.rows()) throw DimensionMismatch("solve: rhs rows mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    ComplexMatrix lhs = a, rhs = b;
    const double floor = 1e-14 * std::max(a.max_abs(), 1e-300);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lhs(r, col)) > std::abs(lhs(piv, col))) piv = r;
        if (std::abs(lhs(piv, col)) <= floor)
            throw SingularRetraction("solve: singular linear system");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lhs(col, c), lhs(piv, c));
            for (std::size_t c = 0; c < m; ++c) std::swap(rhs(col, c), rhs(piv, c));
        }
        const cplx inv = cplx(1.0, 0.0) / lhs(col, col);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = lhs(r, col) * inv;
            if (f == cplx(0.0, 0.0)) continue;
            for (std::size_t c = col; c < n; ++c) lhs(r, c) -= f * lhs(col, c);
            for (std::size_t c = 0; c < m; ++c) rhs(r, c) -= f * rhs(col, c);
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        const cplx inv = cplx(1.0, 0.0) / lhs(r, r);
        for (std::size_t c = 0; c < m; ++c) rhs(r, c) *= inv;
    }
    return rhs;
}

UnitaryEig unitary_eig(const ComplexMatrix& u) {
    require_square(u, "unitary_eig");
    require_finite(u, "unitary_eig");
    if (!u.is_unitary(1e-8)) throw BadParameter("unitary_eig: input not unitary");
    const std::size_t n = u.rows();
    const ComplexMatrix udag = u.adjoint();
    ComplexMatrix h1(n, n), h2(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            h1(i, j) = (u(i, j) + udag(i, j)) / 2.0;
            h2(i, j) = (u(i, j) - udag(i, j)) / cplx(0.0, 2.0);
        }
    const HermitianEig e1 = herm_eig(h1);

    UnitaryEig out;
    out.vectors = ComplexMatrix(n, n);
    out.angles.resize(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && e1.eigenvalues[stop - 1] - e1.eigenvalues[stop] < 1e-8) ++stop;
        const std::size_t c = stop - start;
        // diagonalize the anti-Hermitian part restricted to this cluster
        ComplexMatrix basis(n, c);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < n; ++i) basis(i, j) = e1.eigenvectors(i, start + j);
        const ComplexMatrix block = matmul_serial(matmul_serial(basis.adjoint(), h2), basis);
        const HermitianEig e2 = herm_eig(block);
        const ComplexMatrix rotated = matmul_serial(basis, e2.eigenvectors);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < n; ++i) out.vectors(i, start + j) = rotated(i, j);
        start = stop;
    }
    for (std::size_t j = 0; j < n; ++j) {
        cplx mu(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            cplx uv(0.0, 0.0);
            for (std::size_t k = 0; k < n; ++k) uv += u(i, k) * out.vectors(k, j);
            mu += std::conj(out.vectors(i, j)) * uv;
        }
        out.angles[j] = std::atan2(mu.imag(), mu.real());
    }
    return out;
}

double ket_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

cplx ket_inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("ket_inner: length mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

std::vector<cplx> apply_matrix(const ComplexMatrix& m, const std::vector<cplx>& v) {
    if (m.cols() != v.size()) throw DimensionMismatch("apply: length mismatch");
    std::vector<cplx> out(m.rows(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix outer(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    ComplexMatrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

}  // namespace lufid
