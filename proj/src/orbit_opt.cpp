#include "lufid/orbit_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "lufid/fidelity.hpp"
#include "lufid/rng.hpp"

namespace lufid {

namespace {

constexpr double kSupportTol = 1e-10;
constexpr double kDegenerateGap = 1e-9;
constexpr double kPerturbSize = 1e-7;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;

void validate_config(const OptimizerConfig& cfg) {
    if (cfg.restarts < 1) throw BadConfig("optimizer: restarts must be >= 1");
    if (cfg.max_iters < 1) throw BadConfig("optimizer: max_iters must be >= 1");
    if (cfg.step_init <= 0.0) throw BadConfig("optimizer: step_init must be > 0");
    if (cfg.grad_tol <= 0.0 || cfg.value_tol <= 0.0)
        throw BadConfig("optimizer: tolerances must be > 0");
}

struct GradEval {
    ComplexMatrix grad;       // Euclidean gradient G, df = Re Tr(G^dag dW)
    bool degenerate = false;  // objective requests a tangent perturbation
};

// Objective over the product unitary group, evaluated at W = u1 (x) u2.
class OrbitObjective {
  public:
    virtual ~OrbitObjective() = default;
    virtual double value(const ComplexMatrix& w) const = 0;
    virtual GradEval gradient(const ComplexMatrix& w) const = 0;
};

// f(W) = || sqrt(rho) W sqrt(sigma) ||_1 = F(rho, W sigma W^dag).
class TraceNormObjective final : public OrbitObjective {
  public:
    TraceNormObjective(const ComplexMatrix& rho, const ComplexMatrix& sigma)
        : sqrt_rho_(matrix_sqrt(rho)), sqrt_sigma_(matrix_sqrt(sigma)) {}

    double value(const ComplexMatrix& w) const override {
        return trace_norm(matmul(matmul(sqrt_rho_, w), sqrt_sigma_));
    }

    GradEval gradient(const ComplexMatrix& w) const override {
        const ComplexMatrix a = matmul(matmul(sqrt_rho_, w), sqrt_sigma_);
        const SvdResult s = svd(a);
        GradEval out;
        // Trace-norm subgradient from the singular support. A near-degenerate
        // support boundary makes it unreliable; signal for a random tangent kick.
        const std::size_t n = a.rows();
        ComplexMatrix q(n, n);
        std::size_t in_support = 0;
        for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
            if (s.singular_values[k] <= kSupportTol) break;
            ++in_support;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    q(i, j) += s.left(i, k) * std::conj(s.right(j, k));
        }
        for (std::size_t k = 0; k + 1 < in_support; ++k)
            if (s.singular_values[k] - s.singular_values[k + 1] < kDegenerateGap)
                out.degenerate = true;
        if (in_support < s.singular_values.size() && in_support > 0 &&
            s.singular_values[in_support - 1] - kSupportTol < kDegenerateGap)
            out.degenerate = true;
        out.grad = matmul(matmul(sqrt_rho_, q), sqrt_sigma_);
        return out;
    }

    const ComplexMatrix& sqrt_rho() const { return sqrt_rho_; }
    const ComplexMatrix& sqrt_sigma() const { return sqrt_sigma_; }

  private:
    ComplexMatrix sqrt_rho_;
    ComplexMatrix sqrt_sigma_;
};

// f(W) = Tr(rho W sigma W^dag).
class HsOverlapObjective final : public OrbitObjective {
  public:
    HsOverlapObjective(const ComplexMatrix& rho, const ComplexMatrix& sigma)
        : rho_(rho), sigma_(sigma) {}

    double value(const ComplexMatrix& w) const override {
        return matmul(matmul(rho_, w), matmul(sigma_, w.adjoint())).trace().real();
    }

    GradEval gradient(const ComplexMatrix& w) const override {
        // df = 2 Re Tr(sigma W^dag rho dW)  =>  G = 2 rho W sigma
        GradEval out;
        out.grad = 2.0 * matmul(matmul(rho_, w), sigma_);
        return out;
    }

  private:
    ComplexMatrix rho_;
    ComplexMatrix sigma_;
};

// f(W) = || [rho, W sigma W^dag] ||_F^2  (squared norm keeps it smooth).
class CommutatorObjective final : public OrbitObjective {
  public:
    CommutatorObjective(const ComplexMatrix& rho, const ComplexMatrix& sigma)
        : rho_(rho), sigma_(sigma) {}

    double value(const ComplexMatrix& w) const override {
        const double n = commutator(w).frobenius_norm();
        return n * n;
    }

    GradEval gradient(const ComplexMatrix& w) const override {
        const ComplexMatrix tau = conjugate_by(sigma_, w);
        const ComplexMatrix c = matmul(rho_, tau) - matmul(tau, rho_);
        const ComplexMatrix d = matmul(c, rho_) - matmul(rho_, c);
        GradEval out;
        out.grad = -4.0 * matmul(matmul(d, w), sigma_);
        return out;
    }

    ComplexMatrix commutator(const ComplexMatrix& w) const {
        const ComplexMatrix tau = conjugate_by(sigma_, w);
        return matmul(rho_, tau) - matmul(tau, rho_);
    }

  private:
    ComplexMatrix rho_;
    ComplexMatrix sigma_;
};

// f(W) = S(rho || W sigma W^dag); sigma must be full rank.
class RelativeEntropyObjective final : public OrbitObjective {
  public:
    RelativeEntropyObjective(const DensityMatrix& rho, const DensityMatrix& sigma)
        : rho_(rho), sigma_(sigma.mat) {}

    double value(const ComplexMatrix& w) const override {
        const DensityMatrix tau{conjugate_by(sigma_, w), rho_.d1, rho_.d2};
        return relative_entropy(rho_, tau);
    }

    GradEval gradient(const ComplexMatrix& w) const override {
        const ComplexMatrix tau = conjugate_by(sigma_, w);
        const HermitianEig et = herm_eig(hermitize(tau));
        const std::size_t n = tau.rows();
        // Phi = sum_{ij} k_ij <v_i|rho|v_j> |v_i><v_j| with the log divided
        // differences k_ij; dS = -Tr(Phi dtau).
        ComplexMatrix rho_t(n, n);  // rho in the tau eigenbasis
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t p = 0; p < n; ++p) {
                    cplx rv(0.0, 0.0);
                    for (std::size_t q = 0; q < n; ++q)
                        rv += rho_.mat(p, q) * et.eigenvectors(q, j);
                    acc += std::conj(et.eigenvectors(p, i)) * rv;
                }
                rho_t(i, j) = acc;
            }
        ComplexMatrix phi_t(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double li = std::max(et.eigenvalues[i], kSupportTol);
                const double lj = std::max(et.eigenvalues[j], kSupportTol);
                const double k = (std::abs(li - lj) < 1e-12 * std::max(li, lj))
                                     ? 1.0 / li
                                     : (std::log(li) - std::log(lj)) / (li - lj);
                phi_t(i, j) = k * rho_t(i, j);
            }
        const ComplexMatrix phi =
            matmul(matmul(et.eigenvectors, phi_t), et.eigenvectors.adjoint());
        GradEval out;
        out.grad = -2.0 * matmul(matmul(phi, w), sigma_);
        return out;
    }

  private:
    static ComplexMatrix hermitize(const ComplexMatrix& m) {
        ComplexMatrix h(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                h(i, j) = (m(i, j) + std::conj(m(j, i))) / 2.0;
        return h;
    }

    DensityMatrix rho_;
    ComplexMatrix sigma_;
};

ComplexMatrix skew_projection(const ComplexMatrix& k, const ComplexMatrix& u) {
    // S = (K U^dag - U K^dag) / 2, the left-invariant Riemannian gradient
    const ComplexMatrix ku = matmul(k, u.adjoint());
    ComplexMatrix s(u.rows(), u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.rows(); ++j)
            s(i, j) = (ku(i, j) - std::conj(ku(j, i))) / 2.0;
    return s;
}

ComplexMatrix contract_factor1(const ComplexMatrix& g, const ComplexMatrix& u2,
                               std::size_t d1, std::size_t d2) {
    // K1 = Tr_2( G (1 (x) U2)^dag )
    ComplexMatrix k1(d1, d1);
    for (std::size_t i1 = 0; i1 < d1; ++i1)
        for (std::size_t j1 = 0; j1 < d1; ++j1) {
            cplx acc(0.0, 0.0);
            for (std::size_t p = 0; p < d2; ++p)
                for (std::size_t q = 0; q < d2; ++q)
                    acc += g(i1 * d2 + p, j1 * d2 + q) * std::conj(u2(p, q));
            k1(i1, j1) = acc;
        }
    return k1;
}

ComplexMatrix contract_factor2(const ComplexMatrix& g, const ComplexMatrix& u1,
                               std::size_t d1, std::size_t d2) {
    // K2 = Tr_1( G (U1 (x) 1)^dag )
    ComplexMatrix k2(d2, d2);
    for (std::size_t i2 = 0; i2 < d2; ++i2)
        for (std::size_t j2 = 0; j2 < d2; ++j2) {
            cplx acc(0.0, 0.0);
            for (std::size_t p = 0; p < d1; ++p)
                for (std::size_t q = 0; q < d1; ++q)
                    acc += g(p * d2 + i2, q * d2 + j2) * std::conj(u1(p, q));
            k2(i2, j2) = acc;
        }
    return k2;
}

ComplexMatrix cayley_apply(const ComplexMatrix& s, double eta, const ComplexMatrix& u) {
    const std::size_t n = u.rows();
    ComplexMatrix minus = ComplexMatrix::identity(n);
    ComplexMatrix plus = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            minus(i, j) -= 0.5 * eta * s(i, j);
            plus(i, j) += 0.5 * eta * s(i, j);
        }
    return solve(minus, matmul(plus, u));
}

ComplexMatrix random_skew(std::size_t n, double fro_norm, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ComplexMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = cplx(unif(rng), unif(rng));
    ComplexMatrix skew(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            skew(i, j) = (s(i, j) - std::conj(s(j, i))) / 2.0;
    const double norm = skew.frobenius_norm();
    if (norm > 0.0) skew *= cplx(fro_norm / norm, 0.0);
    return skew;
}

struct RestartOutcome {
    LocalUnitary w;
    double raw_value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

RestartOutcome run_restart(const OrbitObjective& obj, std::size_t d1, std::size_t d2,
                           LocalUnitary w, const OptimizerConfig& cfg, OptimizeMode mode,
                           std::mt19937_64& rng) {
    const double dir = (mode == OptimizeMode::Maximize) ? 1.0 : -1.0;
    ComplexMatrix big = kron(w.u1, w.u2);
    double f = obj.value(big);
    double eta_carry = cfg.step_init;
    std::size_t stall = 0;
    RestartOutcome out;

    std::size_t iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        GradEval ge = obj.gradient(big);
        if (ge.degenerate) {
            // Non-smooth point of the trace norm: random tangent kick, then carry on.
            const ComplexMatrix r1 = random_skew(d1, kPerturbSize, rng);
            const ComplexMatrix r2 = random_skew(d2, kPerturbSize, rng);
            w = cayley_retract(w, r1, r2, 1.0);
            big = kron(w.u1, w.u2);
            f = obj.value(big);
            ge = obj.gradient(big);
        }
        const ComplexMatrix k1 = contract_factor1(ge.grad, w.u2, d1, d2);
        const ComplexMatrix k2 = contract_factor2(ge.grad, w.u1, d1, d2);
        const ComplexMatrix s1 = skew_projection(k1, w.u1);
        const ComplexMatrix s2 = skew_projection(k2, w.u2);
        const double gn2 = s1.frobenius_norm() * s1.frobenius_norm() +
                           s2.frobenius_norm() * s2.frobenius_norm();
        if (std::sqrt(gn2) < cfg.grad_tol) {
            out.converged = true;
            break;
        }

        // the carried step may grow past step_init; Armijo gates every move
        double eta = std::min(1e8, 4.0 * eta_carry);
        bool accepted = false;
        bool any_retraction = false;
        double f_new = f;
        LocalUnitary w_new = w;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            try {
                w_new = cayley_retract(w, s1, s2, dir * eta);
            } catch (const SingularRetraction&) {
                eta *= 0.5;
                continue;
            }
            any_retraction = true;
            const ComplexMatrix big_new = kron(w_new.u1, w_new.u2);
            f_new = obj.value(big_new);
            const double gain = dir * (f_new - f);
            if (gain >= kArmijo * eta * gn2) {
                accepted = true;
                big = big_new;
                break;
            }
            eta *= 0.5;
        }
        if (!any_retraction)
            throw SingularRetraction("optimizer: Cayley retraction failed at every step size");
        if (!accepted) {
            // Line search exhausted: stationary within resolution.
            out.converged = true;
            break;
        }
        const double change = std::abs(f_new - f);
        w = w_new;
        f = f_new;
        eta_carry = eta;
        if (change < cfg.value_tol) {
            if (++stall >= 3) {
                out.converged = true;
                ++iter;
                break;
            }
        } else {
            stall = 0;
        }
    }
    out.w = std::move(w);
    out.raw_value = f;
    out.iterations = iter;
    return out;
}

using InitFn = std::function<LocalUnitary(std::size_t, std::mt19937_64&)>;
using FinalEval = std::function<double(const LocalUnitary&)>;

OptimizationReport optimize_multistart(const OrbitObjective& obj, std::size_t d1,
                                       std::size_t d2, const OptimizerConfig& cfg,
                                       OptimizeMode mode, const InitFn& init,
                                       const FinalEval& final_eval) {
    validate_config(cfg);
    const std::size_t n = cfg.restarts;
    std::vector<RestartOutcome> outcomes(n);
    std::vector<double> values(n, 0.0);
    std::exception_ptr failure = nullptr;

    auto body = [&](std::size_t r) {
        std::mt19937_64 rng = substream(cfg.seed, r);
        LocalUnitary w0 = init(r, rng);
        RestartOutcome oc = run_restart(obj, d1, d2, std::move(w0), cfg, mode, rng);
        values[r] = final_eval(oc.w);
        outcomes[r] = std::move(oc);
    };

    if (cfg.exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long r = 0; r < static_cast<long>(n); ++r) {
            try {
                body(static_cast<std::size_t>(r));
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!failure) failure = std::current_exception();
            }
        }
    } else {
        for (std::size_t r = 0; r < n; ++r) {
            try {
                body(r);
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        const bool better = (mode == OptimizeMode::Maximize) ? values[r] > values[best]
                                                             : values[r] < values[best];
        if (better) best = r;
    }
    OptimizationReport report;
    report.value = values[best];
    report.local_unitary = outcomes[best].w;
    report.per_restart_values = values;
    report.converged = outcomes[best].converged;
    report.iterations_used.resize(n);
    for (std::size_t r = 0; r < n; ++r) report.iterations_used[r] = outcomes[r].iterations;
    return report;
}

bool top_eigenvector_if_rank_one(const ComplexMatrix& psd, std::vector<cplx>& ket) {
    const HermitianEig eig = herm_eig(psd);
    if (eig.eigenvalues.front() <= 0.0) return false;
    if (eig.eigenvalues.size() > 1 &&
        eig.eigenvalues[1] > 1e-10 * eig.eigenvalues.front())
        return false;
    ket.resize(psd.rows());
    for (std::size_t i = 0; i < psd.rows(); ++i) ket[i] = eig.eigenvectors(i, 0);
    return true;
}

// Completes a d x k column-orthonormal matrix to a d x d unitary.
ComplexMatrix complete_unitary(const ComplexMatrix& cols, std::size_t d) {
    ComplexMatrix q(d, d);
    std::size_t have = cols.cols();
    for (std::size_t j = 0; j < have; ++j)
        for (std::size_t i = 0; i < d; ++i) q(i, j) = cols(i, j);
    for (std::size_t j = have; j < d; ++j) {
        std::vector<cplx> best;
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < d; ++cand) {
            std::vector<cplx> v(d, cplx(0.0, 0.0));
            v[cand] = cplx(1.0, 0.0);
            for (std::size_t prev = 0; prev < j; ++prev) {
                cplx proj(0.0, 0.0);
                for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, prev)) * v[i];
                for (std::size_t i = 0; i < d; ++i) v[i] -= proj * q(i, prev);
            }
            const double norm = ket_norm(v);
            if (norm > best_norm) {
                best_norm = norm;
                best = std::move(v);
            }
        }
        for (std::size_t i = 0; i < d; ++i) q(i, j) = best[i] / best_norm;
    }
    return q;
}

// Closed-form warm start for a pure-pure pair: local rotations carrying the
// Schmidt basis of sigma onto (mode = max) or orthogonal to (mode = min) the
// Schmidt basis of rho.
std::optional<LocalUnitary> schmidt_alignment(const ComplexMatrix& rho,
                                              const ComplexMatrix& sigma, std::size_t d1,
                                              std::size_t d2, OptimizeMode mode) {
    std::vector<cplx> kr, ks;
    if (!top_eigenvector_if_rank_one(rho, kr) || !top_eigenvector_if_rank_one(sigma, ks))
        return std::nullopt;
    const SvdResult sr = svd(unvec(kr, d1, d2));
    const SvdResult ss = svd(unvec(ks, d1, d2));
    const ComplexMatrix ur = complete_unitary(sr.left, d1);
    const ComplexMatrix us = complete_unitary(ss.left, d1);
    const ComplexMatrix vr = complete_unitary(sr.right, d2);
    const ComplexMatrix vs = complete_unitary(ss.right, d2);

    LocalUnitary w;
    w.u2 = matmul(vr.conjugate(), vs.transpose());
    if (mode == OptimizeMode::Maximize) {
        w.u1 = matmul(ur, us.adjoint());
        return w;
    }
    // Cyclic shift between the aligned bases sends every Schmidt term of
    // sigma onto a basis vector orthogonal to its partner in rho.
    const std::size_t ds = (d1 >= 2) ? d1 : d2;
    ComplexMatrix shift(ds, ds);
    for (std::size_t i = 0; i < ds; ++i) shift((i + 1) % ds, i) = cplx(1.0, 0.0);
    if (d1 >= 2) {
        w.u1 = matmul(matmul(ur, shift), us.adjoint());
    } else {
        w.u1 = matmul(ur, us.adjoint());
        w.u2 = matmul(matmul(vr.conjugate(), shift), vs.transpose());
    }
    return w;
}

InitFn standard_inits(const ComplexMatrix& rho, const ComplexMatrix& sigma, std::size_t d1,
                      std::size_t d2, OptimizeMode mode, bool try_alignment) {
    std::optional<LocalUnitary> aligned;
    if (try_alignment) aligned = schmidt_alignment(rho, sigma, d1, d2, mode);
    return [d1, d2, aligned](std::size_t r, std::mt19937_64& rng) -> LocalUnitary {
        if (r == 0) return LocalUnitary{ComplexMatrix::identity(d1), ComplexMatrix::identity(d2)};
        if (r == 1 && aligned) return *aligned;
        return LocalUnitary{haar_unitary(d1, rng), haar_unitary(d2, rng)};
    };
}

void check_orbit_inputs(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                        std::size_t d1, std::size_t d2) {
    if (rho.rows() != d1 * d2 || !rho.square() || sigma.rows() != d1 * d2 || !sigma.square())
        throw DimensionMismatch("orbit optimizer: operators are not d1*d2 square");
}

}  // namespace

double orbit_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                      const LocalUnitary& w) {
    return fidelity(rho, conjugate_by(sigma, kron(w.u1, w.u2)));
}

LocalUnitary cayley_retract(const LocalUnitary& w, const ComplexMatrix& s1,
                            const ComplexMatrix& s2, double eta) {
    LocalUnitary out;
    out.u1 = cayley_apply(s1, eta, w.u1);
    out.u2 = cayley_apply(s2, eta, w.u2);
    return out;
}

OptimizationReport gmax(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                        std::size_t d1, std::size_t d2, OptimizerConfig cfg) {
    check_orbit_inputs(rho, sigma, d1, d2);
    cfg.mode = OptimizeMode::Maximize;
    const TraceNormObjective obj(rho, sigma);
    return optimize_multistart(
        obj, d1, d2, cfg, cfg.mode, standard_inits(rho, sigma, d1, d2, cfg.mode, true),
        [&](const LocalUnitary& w) { return orbit_fidelity(rho, sigma, w); });
}

OptimizationReport gmin(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                        std::size_t d1, std::size_t d2, OptimizerConfig cfg) {
    check_orbit_inputs(rho, sigma, d1, d2);
    cfg.mode = OptimizeMode::Minimize;
    const TraceNormObjective obj(rho, sigma);
    return optimize_multistart(
        obj, d1, d2, cfg, cfg.mode, standard_inits(rho, sigma, d1, d2, cfg.mode, true),
        [&](const LocalUnitary& w) { return orbit_fidelity(rho, sigma, w); });
}

OptimizationReport gmax(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const OptimizerConfig& cfg) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("gmax: bipartite splits differ");
    return gmax(rho.mat, sigma.mat, rho.d1, rho.d2, cfg);
}

OptimizationReport gmin(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const OptimizerConfig& cfg) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("gmin: bipartite splits differ");
    return gmin(rho.mat, sigma.mat, rho.d1, rho.d2, cfg);
}

RiemannianStep riemannian_step(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                               std::size_t d1, std::size_t d2, const LocalUnitary& w,
                               OptimizeMode mode, double step_init) {
    check_orbit_inputs(rho, sigma, d1, d2);
    const TraceNormObjective obj(rho, sigma);
    const ComplexMatrix big = kron(w.u1, w.u2);

    RiemannianStep out;
    out.value_before = obj.value(big);
    const GradEval ge = obj.gradient(big);
    const ComplexMatrix k1 = contract_factor1(ge.grad, w.u2, d1, d2);
    const ComplexMatrix k2 = contract_factor2(ge.grad, w.u1, d1, d2);
    out.grad1 = skew_projection(k1, w.u1);
    out.grad2 = skew_projection(k2, w.u2);
    const double gn2 = out.grad1.frobenius_norm() * out.grad1.frobenius_norm() +
                       out.grad2.frobenius_norm() * out.grad2.frobenius_norm();
    out.grad_norm = std::sqrt(gn2);

    const double dir = (mode == OptimizeMode::Maximize) ? 1.0 : -1.0;
    double eta = step_init;
    out.next = w;
    out.value_after = out.value_before;
    bool any_retraction = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
        LocalUnitary w_new;
        try {
            w_new = cayley_retract(w, out.grad1, out.grad2, dir * eta);
        } catch (const SingularRetraction&) {
            eta *= 0.5;
            continue;
        }
        any_retraction = true;
        const double f_new = obj.value(kron(w_new.u1, w_new.u2));
        if (dir * (f_new - out.value_before) >= kArmijo * eta * gn2) {
            out.next = std::move(w_new);
            out.value_after = f_new;
            out.step_used = eta;
            break;
        }
        eta *= 0.5;
    }
    if (!any_retraction)
        throw SingularRetraction("riemannian_step: Cayley retraction failed at every step size");
    return out;
}

double orbit_directional_derivative(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                    std::size_t d1, std::size_t d2, const LocalUnitary& w,
                                    const ComplexMatrix& t1, const ComplexMatrix& t2) {
    check_orbit_inputs(rho, sigma, d1, d2);
    const TraceNormObjective obj(rho, sigma);
    const ComplexMatrix big = kron(w.u1, w.u2);
    const GradEval ge = obj.gradient(big);
    const ComplexMatrix k1 = contract_factor1(ge.grad, w.u2, d1, d2);
    const ComplexMatrix k2 = contract_factor2(ge.grad, w.u1, d1, d2);
    const ComplexMatrix t1u = matmul(t1, w.u1);
    const ComplexMatrix t2u = matmul(t2, w.u2);
    double d = 0.0;
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d1; ++j)
            d += (std::conj(k1(i, j)) * t1u(i, j)).real();
    for (std::size_t i = 0; i < d2; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            d += (std::conj(k2(i, j)) * t2u(i, j)).real();
    return d;
}

double s1_norm(const ComplexMatrix& x, std::size_t d1, std::size_t d2,
               const OptimizerConfig& cfg) {
    validate_config(cfg);
    if (x.rows() != d1 * d2 || !x.square())
        throw DimensionMismatch("s1_norm: operator is not d1*d2 square");
    if (!x.is_hermitian(1e-12)) throw NotHermitian("s1_norm: operator not Hermitian");

    const auto contract_v = [&](const std::vector<cplx>& v) {
        ComplexMatrix t(d1, d1);
        for (std::size_t i1 = 0; i1 < d1; ++i1)
            for (std::size_t j1 = 0; j1 < d1; ++j1) {
                cplx acc(0.0, 0.0);
                for (std::size_t p = 0; p < d2; ++p)
                    for (std::size_t q = 0; q < d2; ++q)
                        acc += x(i1 * d2 + p, j1 * d2 + q) * std::conj(v[p]) * v[q];
                t(i1, j1) = acc;
            }
        return t;
    };
    const auto contract_u = [&](const std::vector<cplx>& u) {
        ComplexMatrix t(d2, d2);
        for (std::size_t i2 = 0; i2 < d2; ++i2)
            for (std::size_t j2 = 0; j2 < d2; ++j2) {
                cplx acc(0.0, 0.0);
                for (std::size_t p = 0; p < d1; ++p)
                    for (std::size_t q = 0; q < d1; ++q)
                        acc += x(p * d2 + i2, q * d2 + j2) * std::conj(u[p]) * u[q];
                t(i2, j2) = acc;
            }
        return t;
    };
    const auto top_vector = [](const ComplexMatrix& h) {
        // hermitize roundoff before the eigensolve
        ComplexMatrix hh(h.rows(), h.cols());
        for (std::size_t i = 0; i < h.rows(); ++i)
            for (std::size_t j = 0; j < h.cols(); ++j)
                hh(i, j) = (h(i, j) + std::conj(h(j, i))) / 2.0;
        const HermitianEig eig = herm_eig(hh);
        std::vector<cplx> v(h.rows());
        for (std::size_t i = 0; i < h.rows(); ++i) v[i] = eig.eigenvectors(i, 0);
        return v;
    };

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        std::mt19937_64 rng = substream(cfg.seed, r);
        std::vector<cplx> v(d2);
        if (r == 0) {
            // warm start: Schmidt partner of the top eigenvector of x
            const HermitianEig ex = herm_eig(x);
            std::vector<cplx> top(x.rows());
            for (std::size_t i = 0; i < x.rows(); ++i) top[i] = ex.eigenvectors(i, 0);
            const SvdResult s = svd(unvec(top, d1, d2));
            for (std::size_t i = 0; i < d2; ++i) v[i] = std::conj(s.right(i, 0));
        } else {
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            for (std::size_t i = 0; i < d2; ++i) v[i] = cplx(unif(rng), unif(rng));
            const double norm = ket_norm(v);
            for (cplx& z : v) z /= norm;
        }
        double value = -std::numeric_limits<double>::infinity();
        for (std::size_t it = 0; it < cfg.max_iters; ++it) {
            const std::vector<cplx> u = top_vector(contract_v(v));
            const ComplexMatrix tu = contract_u(u);
            v = top_vector(tu);
            // value = <u v| x |u v> = v^dag (contract_u(u)) v
            cplx acc(0.0, 0.0);
            for (std::size_t i = 0; i < d2; ++i) {
                cplx row(0.0, 0.0);
                for (std::size_t j = 0; j < d2; ++j) row += tu(i, j) * v[j];
                acc += std::conj(v[i]) * row;
            }
            const double now = acc.real();
            if (std::abs(now - value) < cfg.value_tol) {
                value = now;
                break;
            }
            value = now;
        }
        best = std::max(best, value);
    }
    return best;
}

std::pair<double, double> hs_overlap_extrema(const DensityMatrix& rho,
                                             const DensityMatrix& sigma,
                                             const OptimizerConfig& cfg) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2 || rho.mat.rows() != sigma.mat.rows())
        throw DimensionMismatch("hs_overlap_extrema: dimensions differ");
    const std::size_t d1 = rho.d1, d2 = rho.d2;
    const HsOverlapObjective direct(rho.mat, sigma.mat);
    const auto eval_direct = [&](const LocalUnitary& w) {
        return direct.value(kron(w.u1, w.u2));
    };
    const OptimizationReport max_rep = optimize_multistart(
        direct, d1, d2, cfg, OptimizeMode::Maximize,
        standard_inits(rho.mat, sigma.mat, d1, d2, OptimizeMode::Maximize, false),
        eval_direct);

    // min over the orbit of sigma = 1 - max over the orbit of (1 - sigma)
    ComplexMatrix complement = ComplexMatrix::identity(sigma.mat.rows());
    complement -= sigma.mat;
    const HsOverlapObjective comp(rho.mat, complement);
    const OptimizationReport comp_rep = optimize_multistart(
        comp, d1, d2, cfg, OptimizeMode::Maximize,
        standard_inits(rho.mat, complement, d1, d2, OptimizeMode::Maximize, false),
        [&](const LocalUnitary& w) { return comp.value(kron(w.u1, w.u2)); });

    return {max_rep.value, 1.0 - comp_rep.value};
}

OptimizationReport commutator_min(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const OptimizerConfig& cfg) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2 || rho.mat.rows() != sigma.mat.rows())
        throw DimensionMismatch("commutator_min: dimensions differ");
    // the engine works on the squared norm, so a value stall near zero sits
    // at value_tol^2 scale; leave the stopping to the gradient test
    OptimizerConfig inner = cfg;
    inner.value_tol = std::min(cfg.value_tol, 1e-18);
    const CommutatorObjective obj(rho.mat, sigma.mat);
    return optimize_multistart(
        obj, rho.d1, rho.d2, inner, OptimizeMode::Minimize,
        standard_inits(rho.mat, sigma.mat, rho.d1, rho.d2, OptimizeMode::Minimize, false),
        [&](const LocalUnitary& w) { return obj.commutator(kron(w.u1, w.u2)).frobenius_norm(); });
}

OptimizationReport relative_entropy_extremum(const DensityMatrix& rho,
                                             const DensityMatrix& sigma,
                                             const OptimizerConfig& cfg) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2 || rho.mat.rows() != sigma.mat.rows())
        throw DimensionMismatch("relative_entropy_extremum: dimensions differ");
    const std::vector<double> lam = herm_eig_values(sigma.mat);
    if (lam.back() < kSupportTol)
        throw BadParameter("relative_entropy_extremum: sigma must be full rank");
    const RelativeEntropyObjective obj(rho, sigma);
    return optimize_multistart(
        obj, rho.d1, rho.d2, cfg, cfg.mode,
        standard_inits(rho.mat, sigma.mat, rho.d1, rho.d2, cfg.mode, false),
        [&](const LocalUnitary& w) {
            const DensityMatrix tau{conjugate_by(sigma.mat, kron(w.u1, w.u2)), rho.d1, rho.d2};
            return relative_entropy(rho, tau);
        });
}

}  // namespace lufid
