#include "lufid/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "lufid/closed_form.hpp"
#include "lufid/fidelity.hpp"

namespace lufid {

namespace {

std::vector<double> state_spectrum(const ComplexMatrix& m) {
    std::vector<double> lam = herm_eig_values(m);
    for (double& x : lam) x = std::max(x, 0.0);
    return lam;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    std::vector<std::vector<double>> re(m.rows(), std::vector<double>(m.cols()));
    std::vector<std::vector<double>> im(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            re[i][j] = m(i, j).real();
            im[i][j] = m(i, j).imag();
        }
    return nlohmann::json{{"re", re}, {"im", im}};
}

}  // namespace

DensityMatrix complement_state(const DensityMatrix& sigma) {
    const std::size_t n = sigma.mat.rows();
    if (n < 2) throw BadParameter("complement_state: order must be >= 2");
    ComplexMatrix m(n, n);
    const double c = 1.0 / (static_cast<double>(n) - 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx v = -sigma.mat(i, j);
            if (i == j) v += 1.0;
            m(i, j) = v * c;
        }
    return make_density(std::move(m), sigma.d1, sigma.d2);
}

double trace_sqrt(const ComplexMatrix& psd) {
    const std::vector<double> lam = herm_eig_values(psd);
    // eigenvalues below eps * lam_max are numerically zero; without the
    // floor their square roots inject sqrt(eps)-level noise
    const double floor = 1e-14 * std::max(lam.front(), 0.0);
    double s = 0.0;
    for (double l : lam)
        if (l > floor) s += std::sqrt(l);
    return s;
}

std::size_t psd_rank(const ComplexMatrix& psd, double tol) {
    std::size_t r = 0;
    for (double lam : herm_eig_values(psd))
        if (lam > tol) ++r;
    return r;
}

BoundReport prop1_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                        double gmax_val, double gmin_val) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("prop1_check: bipartite splits differ");
    const double n = static_cast<double>(rho.d1 * rho.d2);
    const double middle = gmax_val * gmax_val + (n - 1.0) * gmin_val * gmin_val;
    const double rank = static_cast<double>(psd_rank(rho.mat));

    BoundReport r;
    r.name = "prop1_rank_sandwich";
    r.lower = 1.0;
    r.upper = rank;
    const double slack_left = rank - middle;
    const double slack_right = middle - 1.0;
    r.slack = std::min(slack_left, slack_right);
    r.satisfied = r.slack >= -1e-8;
    r.notes.push_back("middle=" + std::to_string(middle));
    r.notes.push_back("rank_minus_middle=" + std::to_string(slack_left));
    r.notes.push_back("middle_minus_one=" + std::to_string(slack_right));
    return r;
}

BoundReport prop2_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const OptimizationReport& gmax_report,
                        const OptimizationReport& gmin_report) {
    if (gmax_report.local_unitary.u1.rows() == 0 || gmin_report.local_unitary.u1.rows() == 0)
        throw MissingWitness("prop2_check: optimizer reports carry no local unitaries");
    const DensityMatrix sigmap = complement_state(sigma);
    const ComplexMatrix sig_hat =
        conjugate_by(sigma.mat, local_to_global(gmax_report.local_unitary));
    const ComplexMatrix sigp_hat =
        conjugate_by(sigmap.mat, local_to_global(gmin_report.local_unitary));
    const double f = fidelity(sig_hat, sigp_hat);
    const double gmx = gmax_report.value;
    const double gmn = gmin_report.value;

    const double s1 = std::sqrt(std::max(2.0 + 2.0 * f, 0.0)) - (gmx + gmn);
    const double root = std::sqrt(std::max(1.0 - f * f, 0.0));
    const double s2 = root - std::abs(gmx * gmx - gmn * gmn);
    const double s3 = root - std::abs(gmx - gmn);

    BoundReport r;
    r.name = "prop2_sum_difference";
    r.slack = std::min({s1, s2, s3});
    r.satisfied = r.slack >= -1e-8;
    r.notes.push_back("fidelity_sigma_hats=" + std::to_string(f));
    r.notes.push_back("sum_slack=" + std::to_string(s1));
    r.notes.push_back("square_diff_slack=" + std::to_string(s2));
    r.notes.push_back("diff_slack=" + std::to_string(s3));
    // the rho argument only fixes the context; recorded for the JSON trail
    r.notes.push_back("rho_rank=" + std::to_string(psd_rank(rho.mat)));
    return r;
}

BoundReport gmax_upper_bound(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("gmax_upper_bound: bipartite splits differ");
    const auto reduced = [](const DensityMatrix& s, int keep) {
        return partial_trace(s.mat, s.d1, s.d2, keep == 1 ? 2 : 1);
    };
    const double b1 = global_unitary_extrema(state_spectrum(reduced(rho, 1)),
                                             state_spectrum(reduced(sigma, 1)))
                          .first;
    const double b2 = global_unitary_extrema(state_spectrum(reduced(rho, 2)),
                                             state_spectrum(reduced(sigma, 2)))
                          .first;
    const double b12 =
        global_unitary_extrema(state_spectrum(rho.mat), state_spectrum(sigma.mat)).first;

    BoundReport r;
    r.name = "gmax_upper_monotonicity";
    r.upper = std::min({b1, b2, b12});
    r.notes.push_back("reduction1=" + std::to_string(b1));
    r.notes.push_back("reduction2=" + std::to_string(b2));
    r.notes.push_back("global=" + std::to_string(b12));
    return r;
}

BoundReport gmax_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                             std::optional<double> rel_entropy_min) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("gmax_lower_bound: bipartite splits differ");
    const double haar =
        trace_sqrt(rho.mat) * trace_sqrt(sigma.mat) / static_cast<double>(rho.d1 * rho.d2);
    BoundReport r;
    r.name = "gmax_lower_haar_relent";
    double best = haar;
    r.notes.push_back("haar_affine=" + std::to_string(haar));
    if (rel_entropy_min) {
        const double rel = std::exp(-0.5 * *rel_entropy_min);
        r.notes.push_back("rel_entropy=" + std::to_string(rel));
        best = std::max(best, rel);
    }
    r.lower = best;
    return r;
}

BoundReport gmin_upper_bound(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("gmin_upper_bound: bipartite splits differ");
    BoundReport r;
    r.name = "gmin_upper_haar";
    r.upper = std::min(trace_sqrt(rho.mat), trace_sqrt(sigma.mat)) /
              std::sqrt(static_cast<double>(rho.d1 * rho.d2));
    return r;
}

BoundReport gmin_lower_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                             std::optional<double> rel_entropy_max) {
    if (rho.d1 != sigma.d1 || rho.d2 != sigma.d2)
        throw DimensionMismatch("gmin_lower_bound: bipartite splits differ");
    const std::size_t n = rho.mat.rows();
    BoundReport r;
    r.name = "gmin_lower_fullrank";
    const bool full_rank = psd_rank(rho.mat) == n && psd_rank(sigma.mat) == n;
    if (!full_rank) {
        r.notes.push_back("spectral branches skipped: inputs not full rank");
    } else {
        const auto branch = [n](const ComplexMatrix& a, const ComplexMatrix& b) {
            std::vector<double> la = herm_eig_values(a);  // descending
            std::vector<double> lb = herm_eig_values(b);
            double expo = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                expo += la[j] * std::log(lb[n - 1 - j]);  // lb ascending pairing
            return trace_sqrt(a) * std::exp(0.5 * expo);
        };
        const double a = branch(rho.mat, sigma.mat);
        const double b = branch(sigma.mat, rho.mat);
        r.lower = std::max(a, b);
        r.notes.push_back("rho_sigma_branch=" + std::to_string(a));
        r.notes.push_back("sigma_rho_branch=" + std::to_string(b));
    }
    if (rel_entropy_max) {
        // A numerical maximum is a lower estimate of the true maximum, so the
        // implied bound could overshoot; report it without using it.
        r.notes.push_back("rel_entropy_informational_unsound_as_bound=" +
                          std::to_string(std::exp(-0.5 * *rel_entropy_max)));
    }
    return r;
}

std::pair<ComplexMatrix, double> find_affine_matching_unitary(const DensityMatrix& rho,
                                                              const DensityMatrix& sigma) {
    if (rho.mat.rows() != sigma.mat.rows())
        throw DimensionMismatch("find_affine_matching_unitary: orders differ");
    const std::size_t n = rho.mat.rows();
    const double f = fidelity(rho.mat, sigma.mat);
    const double g0 = affine_fidelity(rho.mat, sigma.mat);
    if (std::abs(g0 - f) < 1e-8) return {ComplexMatrix::identity(n), g0};

    // Affine-fidelity maximizer over global unitaries: align the eigenbases.
    const HermitianEig er = herm_eig(rho.mat);
    const HermitianEig es = herm_eig(sigma.mat);
    const ComplexMatrix ustar = matmul(er.eigenvectors, es.eigenvectors.adjoint());
    const UnitaryEig log_u = unitary_eig(ustar);

    const auto path_point = [&](double s) {
        ComplexMatrix u(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx ph = std::polar(1.0, s * log_u.angles[k]);
                    acc += log_u.vectors(i, k) * ph * std::conj(log_u.vectors(j, k));
                }
                u(i, j) = acc;
            }
        return u;
    };
    const auto g = [&](const ComplexMatrix& u) {
        return affine_fidelity(rho.mat, conjugate_by(sigma.mat, u));
    };

    double lo = 0.0, hi = 1.0;
    const double ghi = g(path_point(hi));
    if (std::abs(ghi - f) < 1e-8) return {path_point(hi), ghi};
    if (ghi < f)
        throw ConvergenceFailure(
            "find_affine_matching_unitary: aligned maximizer below fidelity");
    for (int step = 0; step < 200; ++step) {
        const double mid = 0.5 * (lo + hi);
        const ComplexMatrix u = path_point(mid);
        const double gm = g(u);
        if (std::abs(gm - f) < 1e-8) return {u, gm};
        if (gm < f)
            lo = mid;
        else
            hi = mid;
    }
    throw ConvergenceFailure("find_affine_matching_unitary: bisection did not settle");
}

void check_bound_against(BoundReport& report, double observed) {
    double slack = std::numeric_limits<double>::infinity();
    if (report.upper) slack = std::min(slack, *report.upper - observed);
    if (report.lower) slack = std::min(slack, observed - *report.lower);
    if (!report.upper && !report.lower) slack = 0.0;
    report.slack = slack;
    report.satisfied = slack >= -1e-8;
}

std::string bound_to_json(const BoundReport& report) {
    nlohmann::json j;
    j["name"] = report.name;
    j["lower"] = report.lower ? nlohmann::json(*report.lower) : nlohmann::json(nullptr);
    j["upper"] = report.upper ? nlohmann::json(*report.upper) : nlohmann::json(nullptr);
    j["satisfied"] = report.satisfied;
    j["slack"] = report.slack;
    j["notes"] = report.notes;
    if (report.witness) {
        j["witness"] = {{"u1", matrix_to_json(report.witness->u1)},
                        {"u2", matrix_to_json(report.witness->u2)}};
    }
    return j.dump();
}

}  // namespace lufid
