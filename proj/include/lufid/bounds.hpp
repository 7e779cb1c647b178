#pragma once

#include <optional>
#include <string>
#include <utility>

#include "lufid/orbit_opt.hpp"

namespace lufid {

struct BoundReport {
    std::string name;
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<LocalUnitary> witness;
    bool satisfied = true;  // satisfied <=> slack >= -1e-8
    double slack = 0.0;
    std::vector<std::string> notes;
};

// sigma' = (1 - sigma) / (d1 d2 - 1); a state whenever sigma is.
DensityMatrix complement_state(const DensityMatrix& sigma);

double trace_sqrt(const ComplexMatrix& psd);
std::size_t psd_rank(const ComplexMatrix& psd, double tol = 1e-10);

// rank(rho) >= gmax(rho,sigma)^2 + (d1 d2 - 1) gmin(rho,sigma')^2 >= 1.
// gmax_val must be computed against sigma and gmin_val against sigma'.
BoundReport prop1_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                        double gmax_val, double gmin_val);

// Three inequalities tying gmax(rho,sigma) and gmin(rho,sigma') through the
// fidelity of the rotated sigma-hat and sigma-hat'; witnesses come from the
// optimizer reports.
BoundReport prop2_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const OptimizationReport& gmax_report,
                        const OptimizationReport& gmin_report);

// Upper bound on gmax via fidelity monotonicity: the smallest of the global
// unitary maxima on either reduction and on the full state.
BoundReport gmax_upper_bound(const DensityMatrix& rho, const DensityMatrix& sigma);

// Lower bound on gmax: the Haar-average affine bound and, when provided, the
// relative-entropy bound exp(-rel_entropy_min/2). rel_entropy_min is any
// feasible-point value of S(rho || W sigma W^dag), which keeps the bound safe.
BoundReport gmax_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                             std::optional<double> rel_entropy_min = std::nullopt);

// gmin <= min(Tr sqrt(rho), Tr sqrt(sigma)) / sqrt(d1 d2).
BoundReport gmin_upper_bound(const DensityMatrix& rho, const DensityMatrix& sigma);

// Spectral lower bound on gmin for full-rank inputs (both directions); a
// supplied rel_entropy_max is reported as a note only, since a numerically
// *under*-estimated maximum would overstate the bound.
BoundReport gmin_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                             std::optional<double> rel_entropy_max = std::nullopt);

// Unitary u0 with A(rho, u0 sigma u0^dag) = F(rho, sigma) to 1e-8, found by
// bisecting the exponential path from the identity to the affine-fidelity
// maximizer (eigenbasis alignment).
std::pair<ComplexMatrix, double> find_affine_matching_unitary(const DensityMatrix& rho,
                                                              const DensityMatrix& sigma);

// Fills slack/satisfied of a one-sided bound report against an observed value.
void check_bound_against(BoundReport& report, double observed);

std::string bound_to_json(const BoundReport& report);

}  // namespace lufid
