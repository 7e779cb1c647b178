#pragma once

#include <utility>

#include "lufid/states.hpp"

namespace lufid {

struct OptimizerConfig;  // orbit_opt.hpp

// Spectrum of a reduced density operator of a pure bipartite state:
// nonnegative, descending, summing to one. (These are the squares of the
// Schmidt coefficients.)
struct SchmidtSpectrum {
    std::vector<double> values;

    static SchmidtSpectrum from_values(std::vector<double> values);
    static SchmidtSpectrum from_coefficients(const std::vector<double>& coeffs);
    static SchmidtSpectrum of_pure(const PureState& psi);
};

// Maximal fidelity between two pure states over local unitaries:
// sum_j sqrt(a_j b_j) on the aligned reduced spectra.
double gmax_pure_pure(const SchmidtSpectrum& a, const SchmidtSpectrum& b);

// Minimal fidelity between two pure states over local unitaries (both local
// dimensions >= 2): the Schmidt bases can always be rotated orthogonal.
double gmin_pure_pure();

// Maximal fidelity between the Werner state sigma(t) and the orbit of a pure
// product state: sqrt((1 + |min(t,0)|) / (d (d - t))).
double gmax_werner_vs_pure_product(std::size_t d, double t);

// Both extremal fidelities between the isotropic state and the orbit of a
// pure product state; branches cross at lam = 1/d^2.
std::pair<double, double> iso_extrema_vs_pure_product(std::size_t d, double lam);

// Extremal fidelities over *global* unitaries from the sorted spectra:
// fmax pairs both descending, fmin pairs descending with ascending.
std::pair<double, double> global_unitary_extrema(std::vector<double> rho_spec,
                                                 std::vector<double> sigma_spec);

// Fully entangled fraction: squared maximal fidelity with the orbit of the
// maximally entangled state. Numerical (delegates to the orbit optimizer).
double fef(const DensityMatrix& rho, const OptimizerConfig& cfg);

}  // namespace lufid
