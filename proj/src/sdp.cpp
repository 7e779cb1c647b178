#include "lufid/sdp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lufid/fidelity.hpp"

namespace lufid {

namespace {

void require_psd_input(const ComplexMatrix& m, const char* who) {
    if (!m.square()) throw DimensionMismatch(std::string(who) + ": matrix not square");
    if (!m.is_finite()) throw NonFinite(std::string(who) + ": non-finite entries");
    if (!m.is_hermitian(1e-12)) throw NotHermitian(std::string(who) + ": not Hermitian");
    const std::vector<double> lam = herm_eig_values(m);
    if (lam.back() < -1e-8) throw NotPSD(std::string(who) + ": eigenvalue below -1e-8");
}

ComplexMatrix primal_block(const SdpProblem& p, const ComplexMatrix& x) {
    const std::size_t n = p.order;
    ComplexMatrix b(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            b(i, j) = p.rho(i, j);
            b(i, n + j) = x(i, j);
            b(n + i, j) = std::conj(x(j, i));
            b(n + i, n + j) = p.tau(i, j);
        }
    return b;
}

double min_eigenvalue(const ComplexMatrix& h) {
    return herm_eig_values(h).back();
}

std::string format_17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SdpProblem build_problem(const ComplexMatrix& rho, const ComplexMatrix& tau) {
    require_psd_input(rho, "build_problem(rho)");
    require_psd_input(tau, "build_problem(tau)");
    if (rho.rows() != tau.rows())
        throw DimensionMismatch("build_problem: rho and tau orders differ");
    SdpProblem p;
    p.rho = rho;
    p.tau = tau;
    p.order = rho.rows();
    return p;
}

ComplexMatrix optimal_primal(const SdpProblem& p) {
    const ComplexMatrix sr = matrix_sqrt(p.rho);
    const ComplexMatrix st = matrix_sqrt(p.tau);
    const ComplexMatrix q = polar_isometry(matmul(st, sr)).adjoint();
    return matmul(matmul(sr, q), st);
}

FeasibilityCheck check_primal_feasible(const SdpProblem& p, const ComplexMatrix& x) {
    if (x.rows() != p.order || x.cols() != p.order)
        throw DimensionMismatch("check_primal_feasible: candidate order mismatch");
    FeasibilityCheck out;
    out.min_eigenvalue = min_eigenvalue(primal_block(p, x));
    out.feasible = out.min_eigenvalue >= -1e-9;
    out.objective = x.trace().real();
    return out;
}

FeasibilityCheck check_dual_feasible(const SdpProblem& p, const ComplexMatrix& y,
                                     const ComplexMatrix& z) {
    if (y.rows() != p.order || y.cols() != p.order || z.rows() != p.order ||
        z.cols() != p.order)
        throw DimensionMismatch("check_dual_feasible: candidate order mismatch");
    if (!y.is_hermitian(1e-10) || !z.is_hermitian(1e-10))
        throw NotHermitian("check_dual_feasible: Y, Z must be Hermitian");
    const std::size_t n = p.order;
    ComplexMatrix b(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            b(i, j) = y(i, j);
            b(n + i, n + j) = z(i, j);
        }
        b(i, n + i) = cplx(-1.0, 0.0);
        b(n + i, i) = cplx(-1.0, 0.0);
    }
    FeasibilityCheck out;
    out.min_eigenvalue = min_eigenvalue(b);
    out.feasible = out.min_eigenvalue >= -1e-9;
    out.objective = 0.5 * (matmul(p.rho, y).trace().real() + matmul(p.tau, z).trace().real());
    return out;
}

ComplexMatrix real_embedding(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    ComplexMatrix s(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = h(i, j).real(), im = h(i, j).imag();
            s(i, j) = cplx(re, 0.0);
            s(n + i, n + j) = cplx(re, 0.0);
            s(i, n + j) = cplx(-im, 0.0);
            s(n + i, j) = cplx(im, 0.0);
        }
    return s;
}

void export_sdpa(const SdpProblem& p, const std::string& path) {
    const std::size_t n = p.order;
    const std::size_t nvars = 2 * n * n;
    const std::size_t big = 4 * n;  // 2 (block rows) x 2 (real embedding)

    std::ofstream f(path);
    if (!f) throw IoError("export_sdpa: cannot open " + path);
    f << "* fidelity SDP in sparse SDPA format\n";
    f << "* variables: x[v], v=1.." << n * n << " are Re X[k][l] (k = (v-1)/" << n
      << ", l = (v-1)%" << n << "), v=" << n * n + 1 << ".." << nvars
      << " are Im X[k][l]\n";
    f << "* complex Hermitian blocks embedded as [[Re,-Im],[Im,Re]]; block(x) = "
         "sum x_i F_i - F0 >= 0\n";
    f << "* objective: min c.x = -(Tr X + Tr X^dag)/2; optimal value = -F(rho,tau)\n";
    f << nvars << " = mDIM\n";
    f << "1 = nBLOCK\n";
    f << big << " = bLOCKsTRUCT\n";
    for (std::size_t v = 0; v < nvars; ++v) {
        const bool re_diag = v < n * n && (v / n) == (v % n);
        f << (re_diag ? "-1" : "0") << (v + 1 == nvars ? "\n" : " ");
    }

    // F0 = -embed([[rho, 0], [0, tau]]); upper triangle, 1-based
    const auto emit = [&](std::size_t matno, std::size_t i, std::size_t j, double v) {
        if (v == 0.0) return;
        if (i > j) return;
        f << matno << " 1 " << i + 1 << " " << j + 1 << " " << format_17(v) << "\n";
    };
    ComplexMatrix diag_block(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            diag_block(i, j) = p.rho(i, j);
            diag_block(n + i, n + j) = p.tau(i, j);
        }
    const ComplexMatrix f0 = real_embedding(diag_block);
    for (std::size_t i = 0; i < big; ++i)
        for (std::size_t j = i; j < big; ++j) emit(0, i, j, -f0(i, j).real());

    // F_v: derivative of the embedded block in each real parameter of X.
    for (std::size_t v = 0; v < nvars; ++v) {
        const bool is_re = v < n * n;
        const std::size_t k = (v % (n * n)) / n;
        const std::size_t l = (v % (n * n)) % n;
        // Hermitian basis element: X[k][l] += 1 (or += i)
        const std::size_t a = k, b = n + l;  // inside the 2n x 2n complex block
        if (is_re) {
            // embedding entries: (a,b) and (2n+a, 2n+b) equal 1 (plus mirrors)
            emit(v + 1, std::min(a, b), std::max(a, b), 1.0);
            emit(v + 1, std::min(a, b) + 2 * n, std::max(a, b) + 2 * n, 1.0);
        } else {
            // Im part: S(a, 2n+b) = -1, S(b, 2n+a) = +1 in the upper triangle
            emit(v + 1, a, 2 * n + b, -1.0);
            emit(v + 1, b, 2 * n + a, 1.0);
        }
    }
    if (!f) throw IoError("export_sdpa: write failure on " + path);
}

SdpProblem import_sdpa(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("import_sdpa: cannot open " + path);
    std::string line;
    std::vector<std::string> content;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '*' || line[0] == '"') continue;
        content.push_back(line);
    }
    if (content.size() < 4) throw IoError("import_sdpa: truncated file");
    const auto head_number = [](const std::string& s) {
        std::istringstream is(s);
        long v = 0;
        is >> v;
        if (!is) throw IoError("import_sdpa: malformed header line");
        return v;
    };
    const long nvars = head_number(content[0]);
    const long nblocks = head_number(content[1]);
    const long big = head_number(content[2]);
    if (nblocks != 1 || big <= 0 || big % 4 != 0)
        throw IoError("import_sdpa: unexpected block structure");
    const std::size_t n = static_cast<std::size_t>(big / 4);
    if (nvars != static_cast<long>(2 * n * n))
        throw IoError("import_sdpa: variable count does not match block size");

    ComplexMatrix f0(big, big);
    for (std::size_t idx = 4; idx < content.size(); ++idx) {
        std::istringstream is(content[idx]);
        long matno, blkno, i, j;
        double v;
        is >> matno >> blkno >> i >> j >> v;
        if (!is) throw IoError("import_sdpa: malformed entry line");
        if (matno != 0) continue;
        f0(i - 1, j - 1) = cplx(v, 0.0);
        f0(j - 1, i - 1) = cplx(v, 0.0);
    }
    // un-embed: H = UL + i LL of -F0, then split the two diagonal blocks
    ComplexMatrix h(2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j)
            h(i, j) = cplx(-f0(i, j).real(), -f0(2 * n + i, j).real());
    ComplexMatrix rho(n, n), tau(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            rho(i, j) = h(i, j);
            tau(i, j) = h(n + i, n + j);
        }
    return build_problem(rho, tau);
}

}  // namespace lufid
