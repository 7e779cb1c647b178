#pragma once

#include <string>

#include "lufid/orbit_opt.hpp"

namespace lufid {

// Result of the Schmidt-rank-two distillability probe on (rho^(x)n)^Gamma.
struct DistillReport {
    std::size_t n = 1;
    double x_shift = 0.0;
    double best_lambda = 0.5;
    double witness_value = 0.0;          // min over lambda of gmin^2
    bool distillable_flag = false;       // witness_value < x_shift - 1e-9
    double min_pt_eigenvalue = 0.0;      // direct eigensolve of the partial transpose
    double witness_expectation = 0.0;    // <psi| (rho^(x)n)^Gamma |psi> at the witness
    std::vector<cplx> witness;           // Schmidt-rank-<=2 ket (populated when flagged)
    std::vector<double> lambda_grid;
    std::vector<double> grid_values;     // gmin^2 per grid point
};

struct CommutativityReport {
    OptimizationReport best;                      // commutator_min outcome
    double best_norm = 0.0;                       // Frobenius norm at the optimum
    std::vector<std::size_t> rho_multiplicities;  // positive-eigenvalue clusters
    std::vector<std::size_t> sigma_multiplicities;
};

// rho^(x)n regrouped so the n copies of subsystem 1 come first: a state on
// d1^n x d2^n.
DensityMatrix tensor_power_bipartite(const DensityMatrix& rho, std::size_t n);

// Searches for a Schmidt-rank-two state with negative expectation on the
// partially transposed n-copy state, through the shifted-operator
// minimization min_lambda gmin^2(|phi_lambda>, (rho^(x)n)^Gamma + x 1).
DistillReport distill_probe(const DensityMatrix& rho, std::size_t n,
                            const OptimizerConfig& cfg);

CommutativityReport commutativity_experiment(const DensityMatrix& rho,
                                             const DensityMatrix& sigma,
                                             const OptimizerConfig& cfg);

std::string distill_to_json(const DistillReport& report);

}  // namespace lufid
