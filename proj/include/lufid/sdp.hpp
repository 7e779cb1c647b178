#pragma once

#include <optional>
#include <string>
#include <utility>

#include "lufid/linalg.hpp"

namespace lufid {

// Block encoding of the fidelity SDP for a fixed pair (rho, tau):
//   maximize (Tr X + Tr X^dag)/2  subject to  [[rho, X], [X^dag, tau]] >= 0,
// whose optimum is F(rho, tau). The dual minimizes (<rho,Y> + <tau,Z>)/2
// over Hermitian Y, Z with [[Y, -1], [-1, Z]] >= 0.
struct SdpProblem {
    ComplexMatrix rho;
    ComplexMatrix tau;
    std::size_t order = 0;
    std::optional<ComplexMatrix> primal_candidate;
    std::optional<std::pair<ComplexMatrix, ComplexMatrix>> dual_candidate;
};

struct FeasibilityCheck {
    bool feasible = false;
    double objective = 0.0;
    double min_eigenvalue = 0.0;
};

SdpProblem build_problem(const ComplexMatrix& rho, const ComplexMatrix& tau);

// Analytic optimizer X* = sqrt(rho) Q sqrt(tau) with Q the adjoint of the
// polar isometry of sqrt(tau) sqrt(rho); objective equals F(rho, tau).
ComplexMatrix optimal_primal(const SdpProblem& p);

FeasibilityCheck check_primal_feasible(const SdpProblem& p, const ComplexMatrix& x);
FeasibilityCheck check_dual_feasible(const SdpProblem& p, const ComplexMatrix& y,
                                     const ComplexMatrix& z);

// Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian H;
// doubles every eigenvalue's multiplicity without moving it.
ComplexMatrix real_embedding(const ComplexMatrix& h);

// Sparse SDPA (.dat-s) export of the real-embedded problem. The file encodes
// min c.x with block(x) = sum x_i F_i - F0; the optimal value is -F(rho,tau).
void export_sdpa(const SdpProblem& p, const std::string& path);

// Recovers (rho, tau) from an exported file; exact to the printed 17 digits.
SdpProblem import_sdpa(const std::string& path);

}  // namespace lufid
