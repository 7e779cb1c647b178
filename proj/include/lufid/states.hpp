#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "lufid/linalg.hpp"

namespace lufid {

// Trace-one PSD operator on a d1 x d2 bipartite space.
struct DensityMatrix {
    ComplexMatrix mat;
    std::size_t d1 = 0;
    std::size_t d2 = 0;
};

struct PureState {
    std::vector<cplx> ket;  // unit norm
    std::size_t d1 = 0;
    std::size_t d2 = 0;
};

// U1 (x) U2 acting on the bipartite space.
struct LocalUnitary {
    ComplexMatrix u1;
    ComplexMatrix u2;
};

struct SchmidtDecomposition {
    std::vector<double> coefficients;  // descending, squares sum to 1
    ComplexMatrix basis1;              // d1 x k columns
    ComplexMatrix basis2;              // d2 x k columns
};

// Validating constructor; throws NotHermitian / NotPSD / BadParameter.
DensityMatrix make_density(ComplexMatrix mat, std::size_t d1, std::size_t d2);
DensityMatrix projector(const PureState& psi);

// sigma(t) = (1 (x) 1 - t SWAP) / (d (d - t)) on d x d, t in [-1, 1].
DensityMatrix werner(std::size_t d, double t);

// Convex mixture of the maximally entangled projector and the maximally
// mixed state, weight lam in [0, 1] on the entangled projector.
DensityMatrix isotropic(std::size_t d, double lam);

PureState max_entangled(std::size_t d);

ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng);
ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed);

// Fixed-rank state induced by tracing out a Haar purification.
DensityMatrix random_density(std::size_t d1, std::size_t d2, std::size_t rank,
                             std::uint64_t seed);

SchmidtDecomposition schmidt(const PureState& psi);
PureState schmidt_reconstruct(const SchmidtDecomposition& sd, std::size_t d1, std::size_t d2);

ComplexMatrix swap_operator(std::size_t d);
ComplexMatrix local_to_global(const LocalUnitary& w);
ComplexMatrix conjugate_by(const ComplexMatrix& m, const ComplexMatrix& u);

// JSON round trip: {"d1": .., "d2": .., "re": [[..]], "im": [[..]]}
std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);

}  // namespace lufid
