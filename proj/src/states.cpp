#include "lufid/states.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "lufid/rng.hpp"

namespace lufid {

namespace {

// Box-Muller; every call consumes exactly two uniforms from the stream, so
// interleaving across parallel workers cannot change any stream's output.
cplx standard_normal_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u1 = unif(rng);
    const double u2 = unif(rng);
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double th = 2.0 * 3.14159265358979323846 * u2;
    return cplx(r * std::cos(th), r * std::sin(th));
}

}  // namespace

DensityMatrix make_density(ComplexMatrix mat, std::size_t d1, std::size_t d2) {
    if (d1 < 1 || d2 < 1 || mat.rows() != d1 * d2 || mat.cols() != d1 * d2)
        throw DimensionMismatch("make_density: matrix order is not d1*d2");
    if (!mat.is_finite()) throw NonFinite("make_density: non-finite entries");
    if (!mat.is_hermitian(1e-12)) throw NotHermitian("make_density: not Hermitian within 1e-12");
    if (std::abs(mat.trace().real() - 1.0) > 1e-12 || std::abs(mat.trace().imag()) > 1e-12)
        throw BadParameter("make_density: trace is not 1 within 1e-12");
    const std::vector<double> lam = herm_eig_values(mat);
    if (lam.back() < -1e-10) throw NotPSD("make_density: eigenvalue below -1e-10");
    return DensityMatrix{std::move(mat), d1, d2};
}

DensityMatrix projector(const PureState& psi) {
    if (std::abs(ket_norm(psi.ket) - 1.0) > 1e-12)
        throw BadParameter("projector: ket is not normalized");
    return DensityMatrix{outer(psi.ket, psi.ket), psi.d1, psi.d2};
}

ComplexMatrix swap_operator(std::size_t d) {
    ComplexMatrix s(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s(i * d + j, j * d + i) = cplx(1.0, 0.0);
    return s;
}

DensityMatrix werner(std::size_t d, double t) {
    if (d < 2) throw BadParameter("werner: d must be >= 2");
    if (t < -1.0 || t > 1.0) throw BadParameter("werner: t must lie in [-1, 1]");
    const ComplexMatrix swap = swap_operator(d);
    ComplexMatrix m(d * d, d * d);
    const double norm = 1.0 / (d * (d - t));
    for (std::size_t i = 0; i < d * d; ++i)
        for (std::size_t j = 0; j < d * d; ++j) {
            cplx v = -t * swap(i, j);
            if (i == j) v += 1.0;
            m(i, j) = v * norm;
        }
    return DensityMatrix{std::move(m), d, d};
}

DensityMatrix isotropic(std::size_t d, double lam) {
    if (d < 2) throw BadParameter("isotropic: d must be >= 2");
    if (lam < 0.0 || lam > 1.0) throw BadParameter("isotropic: lam must lie in [0, 1]");
    const PureState omega = max_entangled(d);
    const ComplexMatrix p = outer(omega.ket, omega.ket);
    ComplexMatrix m(d * d, d * d);
    const double mix = (1.0 - lam) / (d * d - 1.0);
    for (std::size_t i = 0; i < d * d; ++i)
        for (std::size_t j = 0; j < d * d; ++j) {
            cplx v = (lam - mix) * p(i, j);
            if (i == j) v += mix;
            m(i, j) = v;
        }
    return DensityMatrix{std::move(m), d, d};
}

PureState max_entangled(std::size_t d) {
    if (d < 2) throw BadParameter("max_entangled: d must be >= 2");
    PureState psi;
    psi.d1 = psi.d2 = d;
    psi.ket.assign(d * d, cplx(0.0, 0.0));
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) psi.ket[j * d + j] = cplx(a, 0.0);
    return psi;
}

ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng) {
    if (d < 1) throw BadParameter("haar_unitary: d must be >= 1");
    // QR of a Ginibre matrix via modified Gram-Schmidt, R diagonal made
    // positive real; this yields the Haar distribution exactly.
    ComplexMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = standard_normal_pair(rng);
    ComplexMatrix q(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        std::vector<cplx> v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = g(i, col);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t prev = 0; prev < col; ++prev) {
                cplx proj(0.0, 0.0);
                for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, prev)) * v[i];
                for (std::size_t i = 0; i < d; ++i) v[i] -= proj * q(i, prev);
            }
        // Normalizing the residual is exactly the positive-diagonal-R choice:
        // R(col,col) is the residual norm, real and positive.
        const double norm = ket_norm(v);
        for (std::size_t i = 0; i < d; ++i) q(i, col) = v[i] / norm;
    }
    return q;
}

ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng = substream(seed, 0);
    return haar_unitary(d, rng);
}

DensityMatrix random_density(std::size_t d1, std::size_t d2, std::size_t rank,
                             std::uint64_t seed) {
    const std::size_t n = d1 * d2;
    if (rank < 1 || rank > n) throw BadParameter("random_density: rank must lie in [1, d1*d2]");
    std::mt19937_64 rng = substream(seed, 0x5eedULL);
    // Haar purification on (d1 d2) x rank, traced over the rank factor.
    ComplexMatrix g(n, rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rank; ++j) g(i, j) = standard_normal_pair(rng);
    ComplexMatrix m = matmul_serial(g, g.adjoint());
    const double tr = m.trace().real();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) /= tr;
    // Hermitize roundoff before validation.
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = cplx(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx h = (m(i, j) + std::conj(m(j, i))) / 2.0;
            m(i, j) = h;
            m(j, i) = std::conj(h);
        }
    }
    return make_density(std::move(m), d1, d2);
}

SchmidtDecomposition schmidt(const PureState& psi) {
    if (psi.ket.size() != psi.d1 * psi.d2)
        throw DimensionMismatch("schmidt: ket length is not d1*d2");
    const ComplexMatrix a = unvec(psi.ket, psi.d1, psi.d2);
    const SvdResult s = svd(a);
    SchmidtDecomposition out;
    out.coefficients = s.singular_values;
    out.basis1 = s.left;
    out.basis2 = s.right.conjugate();
    return out;
}

PureState schmidt_reconstruct(const SchmidtDecomposition& sd, std::size_t d1, std::size_t d2) {
    PureState psi;
    psi.d1 = d1;
    psi.d2 = d2;
    psi.ket.assign(d1 * d2, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k)
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d2; ++j)
                psi.ket[i * d2 + j] += sd.coefficients[k] * sd.basis1(i, k) * sd.basis2(j, k);
    return psi;
}

ComplexMatrix local_to_global(const LocalUnitary& w) {
    return kron(w.u1, w.u2);
}

ComplexMatrix conjugate_by(const ComplexMatrix& m, const ComplexMatrix& u) {
    return matmul(matmul(u, m), u.adjoint());
}

std::string density_to_json(const DensityMatrix& rho) {
    nlohmann::json j;
    j["d1"] = rho.d1;
    j["d2"] = rho.d2;
    const std::size_t n = rho.mat.rows();
    std::vector<std::vector<double>> re(n, std::vector<double>(n));
    std::vector<std::vector<double>> im(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            re[i][k] = rho.mat(i, k).real();
            im[i][k] = rho.mat(i, k).imag();
        }
    j["re"] = re;
    j["im"] = im;
    return j.dump();
}

DensityMatrix density_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("state JSON parse failure: ") + e.what());
    }
    if (!j.contains("d1") || !j.contains("d2") || !j.contains("re") || !j.contains("im"))
        throw IoError("state JSON must have fields d1, d2, re, im");
    const std::size_t d1 = j["d1"].get<std::size_t>();
    const std::size_t d2 = j["d2"].get<std::size_t>();
    const auto re = j["re"].get<std::vector<std::vector<double>>>();
    const auto im = j["im"].get<std::vector<std::vector<double>>>();
    const std::size_t n = d1 * d2;
    if (re.size() != n || im.size() != n)
        throw IoError("state JSON: matrix rows do not match d1*d2");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != n || im[i].size() != n)
            throw IoError("state JSON: matrix cols do not match d1*d2");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = cplx(re[i][k], im[i][k]);
    }
    return make_density(std::move(m), d1, d2);
}

}  // namespace lufid
