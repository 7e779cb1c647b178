#pragma once

#include <tuple>

#include "lufid/states.hpp"

namespace lufid {

// Kraus representation of a channel; sum of M_j^dag M_j must be the identity.
struct KrausChannel {
    std::vector<ComplexMatrix> kraus_ops;
};

KrausChannel make_channel(std::vector<ComplexMatrix> kraus_ops);

// Uhlmann fidelity between PSD matrices (trace one not required), computed as
// the trace norm of sqrt(a) sqrt(b).
double fidelity(const ComplexMatrix& a, const ComplexMatrix& b);
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    return fidelity(a.mat, b.mat);
}

// Reference evaluation Tr sqrt(sqrt(a) b sqrt(a)); used as a cross-check of
// the trace-norm route.
double fidelity_reference(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(sqrt(a) sqrt(b)); never exceeds the fidelity, equal for commuting inputs.
double affine_fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

// S(rho || sigma) with the natural logarithm; +infinity when the support of
// rho leaks outside the support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& rho);

// Fidelity monotonicity chain: F(rho,sigma), sum_j F(M_j rho M_j^dag, M_j
// sigma M_j^dag), F(Phi rho, Phi sigma); nondecreasing left to right.
std::tuple<double, double, double> monotonicity_chain(const DensityMatrix& rho,
                                                      const DensityMatrix& sigma,
                                                      const KrausChannel& ch);

}  // namespace lufid
