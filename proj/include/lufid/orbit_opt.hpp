#pragma once

#include <cstdint>
#include <utility>

#include "lufid/states.hpp"

namespace lufid {

enum class OptimizeMode { Maximize, Minimize };

// Restart execution policy. Parallel runs restarts under OpenMP; every
// restart owns a substream of the seed, and the merge is a fixed-order
// reduction, so both policies produce bit-identical reports.
enum class Exec { Serial, Parallel };

struct OptimizerConfig {
    std::size_t restarts = 24;
    std::size_t max_iters = 500;
    double step_init = 1.0;
    double grad_tol = 1e-9;
    double value_tol = 1e-10;
    std::uint64_t seed = 0;
    OptimizeMode mode = OptimizeMode::Maximize;
    Exec exec = Exec::Parallel;
};

struct OptimizationReport {
    double value = 0.0;
    LocalUnitary local_unitary;
    std::vector<double> per_restart_values;
    std::vector<std::size_t> iterations_used;
    bool converged = false;
};

// Independent evaluation F(rho, (u1 (x) u2) sigma (u1 (x) u2)^dag); every
// report's value is recomputed through this, never through optimizer state.
double orbit_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                      const LocalUnitary& w);

// Maximal / minimal fidelity between rho and the local unitary orbit of
// sigma. Inputs are PSD (trace one not required). The returned value is a
// certified one-sided bound: it is attained by the reported feasible point.
OptimizationReport gmax(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                        std::size_t d1, std::size_t d2, OptimizerConfig cfg);
OptimizationReport gmin(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                        std::size_t d1, std::size_t d2, OptimizerConfig cfg);

OptimizationReport gmax(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const OptimizerConfig& cfg);
OptimizationReport gmin(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const OptimizerConfig& cfg);

// One Riemannian ascent/descent step of the fidelity objective at w:
// Euclidean gradient of the trace norm via the polar isometry, factor-wise
// skew projections, Cayley retraction with Armijo backtracking.
struct RiemannianStep {
    ComplexMatrix grad1;  // skew tangent field at u1
    ComplexMatrix grad2;  // skew tangent field at u2
    double grad_norm = 0.0;
    LocalUnitary next;
    double value_before = 0.0;
    double value_after = 0.0;
    double step_used = 0.0;
};
RiemannianStep riemannian_step(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                               std::size_t d1, std::size_t d2, const LocalUnitary& w,
                               OptimizeMode mode, double step_init = 1.0);

// Analytic directional derivative of F(rho, W sigma W^dag) at w along the
// left-invariant tangent pair (t1, t2); finite-difference oracle target.
double orbit_directional_derivative(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                    std::size_t d1, std::size_t d2, const LocalUnitary& w,
                                    const ComplexMatrix& t1, const ComplexMatrix& t2);

// Cayley transform retraction u <- (1 - (eta/2) s)^{-1} (1 + (eta/2) s) u
// applied factor-wise; exactly unitary for anti-Hermitian s.
LocalUnitary cayley_retract(const LocalUnitary& w, const ComplexMatrix& s1,
                            const ComplexMatrix& s2, double eta);

// Maximal product-state expectation <uv|x|uv> of a Hermitian bipartite
// operator by alternating top-eigenvector iteration; equals the S(1)-norm
// for PSD x.
double s1_norm(const ComplexMatrix& x, std::size_t d1, std::size_t d2,
               const OptimizerConfig& cfg);

// Extrema of the Hilbert-Schmidt overlap Tr(rho W sigma W^dag) over local
// unitaries; the minimum is computed from the maximum of the complement
// 1 - sigma.
std::pair<double, double> hs_overlap_extrema(const DensityMatrix& rho,
                                             const DensityMatrix& sigma,
                                             const OptimizerConfig& cfg);

// Minimal Frobenius norm of [rho, W sigma W^dag] over local unitaries.
OptimizationReport commutator_min(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const OptimizerConfig& cfg);

// Extremum of S(rho || W sigma W^dag) over local unitaries (mode from cfg).
// Requires full-rank sigma; each restart value is a feasible-point estimate.
OptimizationReport relative_entropy_extremum(const DensityMatrix& rho,
                                             const DensityMatrix& sigma,
                                             const OptimizerConfig& cfg);

}  // namespace lufid
