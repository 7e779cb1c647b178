#include "lufid/probes.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "lufid/fidelity.hpp"
#include "lufid/rng.hpp"

namespace lufid {

namespace {

constexpr double kFlagTol = 1e-9;

std::vector<std::size_t> digits(std::size_t value, std::size_t base, std::size_t count) {
    std::vector<std::size_t> out(count);
    for (std::size_t k = count; k-- > 0;) {
        out[k] = value % base;
        value /= base;
    }
    return out;
}

std::vector<std::size_t> positive_multiplicities(const ComplexMatrix& m) {
    std::vector<double> lam = herm_eig_values(m);  // descending
    std::vector<std::size_t> mult;
    std::size_t i = 0;
    while (i < lam.size() && lam[i] > 1e-10) {
        std::size_t j = i + 1;
        while (j < lam.size() && lam[i] - lam[j] < 1e-8) ++j;
        mult.push_back(j - i);
        i = j;
    }
    return mult;
}

struct LambdaEval {
    double value_sq = 0.0;
    LocalUnitary witness_unitary;
};

}  // namespace

DensityMatrix tensor_power_bipartite(const DensityMatrix& rho, std::size_t n) {
    if (n < 1) throw BadParameter("tensor_power_bipartite: n must be >= 1");
    if (n == 1) return rho;
    std::size_t big1 = 1, big2 = 1;
    for (std::size_t k = 0; k < n; ++k) {
        big1 *= rho.d1;
        big2 *= rho.d2;
        if (big1 * big2 > 4096) throw DimensionTooLarge("tensor_power_bipartite: > 4096");
    }
    const std::size_t dim = big1 * big2;
    ComplexMatrix out(dim, dim);
    for (std::size_t row = 0; row < dim; ++row) {
        const auto a = digits(row / big2, rho.d1, n);  // copy digits on side 1
        const auto b = digits(row % big2, rho.d2, n);  // copy digits on side 2
        for (std::size_t col = 0; col < dim; ++col) {
            const auto ap = digits(col / big2, rho.d1, n);
            const auto bp = digits(col % big2, rho.d2, n);
            cplx prod(1.0, 0.0);
            for (std::size_t k = 0; k < n && prod != cplx(0.0, 0.0); ++k)
                prod *= rho.mat(a[k] * rho.d2 + b[k], ap[k] * rho.d2 + bp[k]);
            out(row, col) = prod;
        }
    }
    return DensityMatrix{std::move(out), big1, big2};
}

DistillReport distill_probe(const DensityMatrix& rho, std::size_t n,
                            const OptimizerConfig& cfg) {
    if (n < 1) throw BadParameter("distill_probe: n must be >= 1");
    std::size_t dim_check = 1;
    for (std::size_t k = 0; k < n; ++k) {
        dim_check *= rho.d1 * rho.d2;
        if (dim_check > 256) throw DimensionTooLarge("distill_probe: total dimension > 256");
    }
    const DensityMatrix power = tensor_power_bipartite(rho, n);
    const std::size_t big1 = power.d1, big2 = power.d2;

    const ComplexMatrix gamma = partial_transpose(power.mat, big1, big2);
    const std::vector<double> pt_spec = herm_eig_values(gamma);
    const double min_eig = pt_spec.back();

    DistillReport report;
    report.n = n;
    report.min_pt_eigenvalue = min_eig;
    report.x_shift = (min_eig < 0.0) ? std::abs(min_eig) + 1e-9 : 1e-3;

    ComplexMatrix shifted = gamma;
    for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) += report.x_shift;

    const auto probe_ket = [&](double lam) {
        std::vector<cplx> ket(big1 * big2, cplx(0.0, 0.0));
        ket[0] = cplx(std::sqrt(lam), 0.0);            // |0,0>
        ket[big2 + 1] = cplx(std::sqrt(1.0 - lam), 0.0);  // |1,1>
        return ket;
    };
    const auto eval_lambda = [&](double lam, std::uint64_t stream) {
        OptimizerConfig point_cfg = cfg;
        std::mt19937_64 mix = substream(cfg.seed, 0xd157000ULL + stream);
        point_cfg.seed = mix();
        const std::vector<cplx> ket = probe_ket(lam);
        const OptimizationReport rep =
            gmin(outer(ket, ket), shifted, big1, big2, point_cfg);
        LambdaEval out;
        out.value_sq = rep.value * rep.value;
        out.witness_unitary = rep.local_unitary;
        return out;
    };

    // 21 interior grid points, then golden-section refinement around the best.
    const std::size_t grid_points = 21;
    report.lambda_grid.resize(grid_points);
    report.grid_values.resize(grid_points);
    std::vector<LambdaEval> evals(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k)
        report.lambda_grid[k] = static_cast<double>(k + 1) / (grid_points + 1);

    std::exception_ptr failure = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.exec == Exec::Parallel)
#endif
    for (long k = 0; k < static_cast<long>(grid_points); ++k) {
        try {
            evals[k] = eval_lambda(report.lambda_grid[k], static_cast<std::uint64_t>(k));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::size_t best_k = 0;
    for (std::size_t k = 0; k < grid_points; ++k) {
        report.grid_values[k] = evals[k].value_sq;
        if (evals[k].value_sq < evals[best_k].value_sq) best_k = k;
    }
    double best_lambda = report.lambda_grid[best_k];
    double best_value = evals[best_k].value_sq;
    LocalUnitary best_w = evals[best_k].witness_unitary;

    // golden-section never raises the running minimum: every probe value is
    // folded into the best-so-far.
    const double h = 1.0 / (grid_points + 1);
    double lo = std::max(best_lambda - h, 1e-6);
    double hi = std::min(best_lambda + h, 1.0 - 1e-6);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    std::uint64_t stream = grid_points;
    LambdaEval ec = eval_lambda(c, stream++);
    LambdaEval ed = eval_lambda(d, stream++);
    const auto fold = [&](double lam, const LambdaEval& e) {
        if (e.value_sq < best_value) {
            best_value = e.value_sq;
            best_lambda = lam;
            best_w = e.witness_unitary;
        }
    };
    fold(c, ec);
    fold(d, ed);
    while (hi - lo > 1e-3) {
        if (ec.value_sq <= ed.value_sq) {
            hi = d;
            d = c;
            ed = ec;
            c = hi - gr * (hi - lo);
            ec = eval_lambda(c, stream++);
            fold(c, ec);
        } else {
            lo = c;
            c = d;
            ec = ed;
            d = lo + gr * (hi - lo);
            ed = eval_lambda(d, stream++);
            fold(d, ed);
        }
    }

    report.best_lambda = best_lambda;
    report.witness_value = best_value;
    report.distillable_flag = best_value < report.x_shift - kFlagTol;

    // Witness ket |psi> = (U1 (x) U2)^dag |phi_lambda| and its direct
    // expectation on the partial transpose.
    const std::vector<cplx> phi = probe_ket(best_lambda);
    const ComplexMatrix wdag = kron(best_w.u1, best_w.u2).adjoint();
    report.witness = apply_matrix(wdag, phi);
    const std::vector<cplx> gpsi = apply_matrix(gamma, report.witness);
    report.witness_expectation = ket_inner(report.witness, gpsi).real();
    return report;
}

CommutativityReport commutativity_experiment(const DensityMatrix& rho,
                                             const DensityMatrix& sigma,
                                             const OptimizerConfig& cfg) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("commutativity_experiment: bipartite splits differ");
    CommutativityReport report;
    report.best = commutator_min(rho, sigma, cfg);
    report.best_norm = report.best.value;
    report.rho_multiplicities = positive_multiplicities(rho.mat);
    report.sigma_multiplicities = positive_multiplicities(sigma.mat);
    return report;
}

std::string distill_to_json(const DistillReport& report) {
    nlohmann::json j;
    j["n"] = report.n;
    j["x_shift"] = report.x_shift;
    j["best_lambda"] = report.best_lambda;
    j["witness_value"] = report.witness_value;
    j["distillable_flag"] = report.distillable_flag;
    j["min_pt_eigenvalue"] = report.min_pt_eigenvalue;
    j["witness_expectation"] = report.witness_expectation;
    j["lambda_grid"] = report.lambda_grid;
    j["grid_values"] = report.grid_values;
    std::vector<double> wre, wim;
    for (const cplx& z : report.witness) {
        wre.push_back(z.real());
        wim.push_back(z.imag());
    }
    j["witness_re"] = wre;
    j["witness_im"] = wim;
    return j.dump();
}

}  // namespace lufid
