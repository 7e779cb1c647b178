#include "lufid/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "lufid/orbit_opt.hpp"

namespace lufid {

namespace {

void sort_descending(std::vector<double>& v) {
    std::sort(v.begin(), v.end(), std::greater<double>());
}

void check_probability_vector(const std::vector<double>& v, const char* who) {
    double sum = 0.0;
    for (double x : v) {
        if (x < -1e-12) throw BadSpectrum(std::string(who) + ": negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw BadSpectrum(std::string(who) + ": entries do not sum to 1");
}

}  // namespace

SchmidtSpectrum SchmidtSpectrum::from_values(std::vector<double> values) {
    check_probability_vector(values, "SchmidtSpectrum");
    sort_descending(values);
    return SchmidtSpectrum{std::move(values)};
}

SchmidtSpectrum SchmidtSpectrum::from_coefficients(const std::vector<double>& coeffs) {
    std::vector<double> values(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) values[i] = coeffs[i] * coeffs[i];
    return from_values(std::move(values));
}

SchmidtSpectrum SchmidtSpectrum::of_pure(const PureState& psi) {
    return from_coefficients(schmidt(psi).coefficients);
}

double gmax_pure_pure(const SchmidtSpectrum& a, const SchmidtSpectrum& b) {
    std::vector<double> av = a.values, bv = b.values;
    check_probability_vector(av, "gmax_pure_pure");
    check_probability_vector(bv, "gmax_pure_pure");
    // re-sort defensively and zero-pad the shorter spectrum
    sort_descending(av);
    sort_descending(bv);
    const std::size_t n = std::max(av.size(), bv.size());
    av.resize(n, 0.0);
    bv.resize(n, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::sqrt(std::max(av[i], 0.0) * std::max(bv[i], 0.0));
    return std::min(sum, 1.0 + 1e-15);
}

double gmin_pure_pure() { return 0.0; }

double gmax_werner_vs_pure_product(std::size_t d, double t) {
    if (d < 2) throw BadParameter("gmax_werner_vs_pure_product: d must be >= 2");
    if (t < -1.0 || t > 1.0) throw BadParameter("gmax_werner_vs_pure_product: t outside [-1, 1]");
    const double num = 1.0 + std::abs(std::min(t, 0.0));
    return std::sqrt(num / (d * (d - t)));
}

std::pair<double, double> iso_extrema_vs_pure_product(std::size_t d, double lam) {
    if (d < 2) throw BadParameter("iso_extrema_vs_pure_product: d must be >= 2");
    if (lam < 0.0 || lam > 1.0)
        throw BadParameter("iso_extrema_vs_pure_product: lam outside [0, 1]");
    const double dd = static_cast<double>(d);
    const double entangled_branch = std::sqrt((dd * lam + 1.0) / (dd * (dd + 1.0)));
    const double orthogonal_branch = std::sqrt((1.0 - lam) / (dd * dd - 1.0));
    return {std::max(entangled_branch, orthogonal_branch),
            std::min(entangled_branch, orthogonal_branch)};
}

std::pair<double, double> global_unitary_extrema(std::vector<double> rho_spec,
                                                 std::vector<double> sigma_spec) {
    check_probability_vector(rho_spec, "global_unitary_extrema");
    check_probability_vector(sigma_spec, "global_unitary_extrema");
    sort_descending(rho_spec);
    sort_descending(sigma_spec);
    const std::size_t n = std::max(rho_spec.size(), sigma_spec.size());
    rho_spec.resize(n, 0.0);
    sigma_spec.resize(n, 0.0);
    double fmax = 0.0, fmin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fmax += std::sqrt(std::max(rho_spec[i], 0.0) * std::max(sigma_spec[i], 0.0));
        fmin += std::sqrt(std::max(rho_spec[i], 0.0) * std::max(sigma_spec[n - 1 - i], 0.0));
    }
    return {std::min(fmax, 1.0 + 1e-15), std::min(fmin, 1.0 + 1e-15)};
}

double fef(const DensityMatrix& rho, const OptimizerConfig& cfg) {
    if (rho.d1 != rho.d2) throw DimensionMismatch("fef: requires d1 == d2");
    const PureState omega = max_entangled(rho.d1);
    const OptimizationReport rep = gmax(rho, projector(omega), cfg);
    return rep.value * rep.value;
}

}  // namespace lufid
