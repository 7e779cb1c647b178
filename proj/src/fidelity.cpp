#include "lufid/fidelity.hpp"

#include <cmath>
#include <limits>

namespace lufid {

namespace {

constexpr double kSupportTol = 1e-10;

void require_same_order(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(who) + ": operand orders differ");
}

}  // namespace

KrausChannel make_channel(std::vector<ComplexMatrix> kraus_ops) {
    if (kraus_ops.empty()) throw InvalidChannel("make_channel: no Kraus operators");
    const std::size_t din = kraus_ops.front().cols();
    const std::size_t dout = kraus_ops.front().rows();
    ComplexMatrix acc(din, din);
    for (const ComplexMatrix& m : kraus_ops) {
        if (m.cols() != din || m.rows() != dout)
            throw DimensionMismatch("make_channel: Kraus operators have mixed shapes");
        acc += matmul(m.adjoint(), m);
    }
    for (std::size_t i = 0; i < din; ++i)
        for (std::size_t j = 0; j < din; ++j) {
            const cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(acc(i, j) - want) > 1e-10)
                throw InvalidChannel("make_channel: completeness relation violated");
        }
    return KrausChannel{std::move(kraus_ops)};
}

double fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_order(a, b, "fidelity");
    return trace_norm(matmul(matrix_sqrt(a), matrix_sqrt(b)));
}

double fidelity_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_order(a, b, "fidelity");
    const ComplexMatrix ra = matrix_sqrt(a);
    const ComplexMatrix inner = matmul(matmul(ra, b), ra);
    // inner is Hermitian PSD up to roundoff; hermitize before the eigensolve
    ComplexMatrix h(inner.rows(), inner.cols());
    for (std::size_t i = 0; i < inner.rows(); ++i)
        for (std::size_t j = 0; j < inner.cols(); ++j)
            h(i, j) = (inner(i, j) + std::conj(inner(j, i))) / 2.0;
    double sum = 0.0;
    for (double lam : herm_eig_values(h)) sum += std::sqrt(std::max(lam, 0.0));
    return sum;
}

double affine_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_order(a, b, "affine_fidelity");
    return matmul(matrix_sqrt(a), matrix_sqrt(b)).trace().real();
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_order(rho.mat, sigma.mat, "relative_entropy");
    const HermitianEig er = herm_eig(rho.mat);
    const HermitianEig es = herm_eig(sigma.mat);
    const std::size_t n = rho.mat.rows();

    // Support check: weight of rho inside ker(sigma) decides +infinity.
    ComplexMatrix kernel_proj(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (es.eigenvalues[k] >= kSupportTol) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                kernel_proj(i, j) += es.eigenvectors(i, k) * std::conj(es.eigenvectors(j, k));
    }
    const ComplexMatrix leak = matmul(matmul(kernel_proj, rho.mat), kernel_proj);
    if (leak.frobenius_norm() > 1e-9) return std::numeric_limits<double>::infinity();

    double tr_rho_log_rho = 0.0;
    for (double lam : er.eigenvalues)
        if (lam > kSupportTol) tr_rho_log_rho += lam * std::log(lam);

    double tr_rho_log_sigma = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (es.eigenvalues[k] < kSupportTol) continue;
        cplx weight(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            cplx rv(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) rv += rho.mat(i, j) * es.eigenvectors(j, k);
            weight += std::conj(es.eigenvectors(i, k)) * rv;
        }
        tr_rho_log_sigma += weight.real() * std::log(es.eigenvalues[k]);
    }
    return std::max(tr_rho_log_rho - tr_rho_log_sigma, 0.0);
}

ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& rho) {
    if (ch.kraus_ops.empty()) throw InvalidChannel("apply_channel: empty channel");
    if (ch.kraus_ops.front().cols() != rho.rows())
        throw DimensionMismatch("apply_channel: state order mismatch");
    const std::size_t dout = ch.kraus_ops.front().rows();
    ComplexMatrix out(dout, dout);
    for (const ComplexMatrix& m : ch.kraus_ops) out += matmul(matmul(m, rho), m.adjoint());
    return out;
}

std::tuple<double, double, double> monotonicity_chain(const DensityMatrix& rho,
                                                      const DensityMatrix& sigma,
                                                      const KrausChannel& ch) {
    const double f0 = fidelity(rho.mat, sigma.mat);
    double f_mid = 0.0;
    for (const ComplexMatrix& m : ch.kraus_ops) {
        const ComplexMatrix mr = matmul(matmul(m, rho.mat), m.adjoint());
        const ComplexMatrix ms = matmul(matmul(m, sigma.mat), m.adjoint());
        f_mid += fidelity(mr, ms);
    }
    const double f_out = fidelity(apply_channel(ch, rho.mat), apply_channel(ch, sigma.mat));
    // the ordering always holds mathematically; a violation past tolerance
    // means the numerics cannot be trusted
    if (f0 > f_mid + 1e-9 || f_mid > f_out + 1e-9)
        throw NonFinite("monotonicity_chain: computed chain violates the ordering");
    return {f0, f_mid, f_out};
}

}  // namespace lufid
