#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "lufid/fidelity.hpp"
#include "lufid/sdp.hpp"
#include "test_helpers.hpp"

using namespace lufid;
using namespace lufid::testing;

TEST_CASE("problem construction") {
    const DensityMatrix rho = random_density(1, 2, 2, 1);
    const DensityMatrix tau = random_density(1, 2, 2, 2);
    const SdpProblem p = build_problem(rho.mat, tau.mat);
    CHECK(p.order == 2);
    CHECK_FALSE(p.primal_candidate.has_value());
    CHECK_FALSE(p.dual_candidate.has_value());

    const ComplexMatrix half = ComplexMatrix::identity(2) * 0.5;
    CHECK(build_problem(half, half).order == 2);

    CHECK_THROWS_AS(build_problem(rho.mat, random_density(1, 3, 3, 3).mat), DimensionMismatch);
    ComplexMatrix neg(2, 2);
    neg(0, 0) = cplx(-1.0, 0.0);
    neg(1, 1) = cplx(2.0, 0.0);
    CHECK_THROWS_AS(build_problem(neg, half), NotPSD);
}

TEST_CASE("analytic primal certificate") {
    // rho = tau: X* = rho with objective 1
    const DensityMatrix rho = random_density(1, 3, 3, 5);
    const SdpProblem same = build_problem(rho.mat, rho.mat);
    const ComplexMatrix xs = optimal_primal(same);
    CHECK(max_abs_diff(xs, rho.mat) < 1e-9);
    CHECK(check_primal_feasible(same, xs).objective == doctest::Approx(1.0).epsilon(1e-9));

    // |0><0| against the maximally mixed qubit: objective 1/sqrt(2)
    ComplexMatrix zero(2, 2);
    zero(0, 0) = cplx(1.0, 0.0);
    const ComplexMatrix half = ComplexMatrix::identity(2) * 0.5;
    const SdpProblem p = build_problem(zero, half);
    const FeasibilityCheck fc = check_primal_feasible(p, optimal_primal(p));
    CHECK(fc.feasible);
    CHECK(fc.objective == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const std::size_t n = 2 + seed % 4;
        const ComplexMatrix a = random_psd(n, 100 + seed);
        const ComplexMatrix b = random_psd(n, 200 + seed);
        const SdpProblem q = build_problem(a, b);
        const FeasibilityCheck check = check_primal_feasible(q, optimal_primal(q));
        CHECK(check.feasible);
        CHECK(check.min_eigenvalue > -1e-9);
        CHECK(std::abs(check.objective - fidelity(a, b)) < 1e-9 * std::max(1.0, fidelity(a, b)));
    }
}

TEST_CASE("primal feasibility checks") {
    const DensityMatrix rho = random_density(2, 2, 4, 7);
    const DensityMatrix tau = random_density(2, 2, 4, 8);
    const SdpProblem p = build_problem(rho.mat, tau.mat);

    const FeasibilityCheck zero = check_primal_feasible(p, ComplexMatrix(4, 4));
    CHECK(zero.feasible);
    CHECK(zero.objective == doctest::Approx(0.0));

    const FeasibilityCheck opt = check_primal_feasible(p, optimal_primal(p));
    CHECK(opt.feasible);
    CHECK(opt.objective == doctest::Approx(fidelity(rho, tau)).epsilon(1e-9));

    // X = 10*identity with rho = tau = identity/4 is infeasible
    const ComplexMatrix quarter = ComplexMatrix::identity(4) * 0.25;
    const SdpProblem q = build_problem(quarter, quarter);
    const FeasibilityCheck big = check_primal_feasible(q, ComplexMatrix::identity(4) * 10.0);
    CHECK_FALSE(big.feasible);
    CHECK(big.min_eigenvalue < -1e-3);
}

TEST_CASE("dual feasibility and weak duality") {
    const DensityMatrix rho = random_density(1, 3, 3, 9);
    const DensityMatrix tau = random_density(1, 3, 2, 10);
    const SdpProblem p = build_problem(rho.mat, tau.mat);
    const ComplexMatrix eye = ComplexMatrix::identity(3);

    const FeasibilityCheck one = check_dual_feasible(p, eye, eye);
    CHECK(one.feasible);
    CHECK(one.objective == doctest::Approx(1.0).epsilon(1e-10));

    const FeasibilityCheck zero = check_dual_feasible(p, ComplexMatrix(3, 3), ComplexMatrix(3, 3));
    CHECK_FALSE(zero.feasible);

    // scaled pair Y = c, Z = 1/c stays feasible; the optimum over c is
    // sqrt(Tr rho Tr tau) >= F
    const double f = fidelity(rho, tau);
    double best = 1e9;
    for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const FeasibilityCheck fc = check_dual_feasible(p, eye * c, eye * (1.0 / c));
        CHECK(fc.feasible);
        CHECK(fc.objective >= f - 1e-9);  // weak duality
        best = std::min(best, fc.objective);
    }
    CHECK(best >= std::sqrt(rho.mat.trace().real() * tau.mat.trace().real()) - 1e-9);

    CHECK_THROWS_AS(check_dual_feasible(p, random_matrix(3, 3, 4), eye), NotHermitian);
}

TEST_CASE("real embedding preserves eigenvalues") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const ComplexMatrix h = random_hermitian(4, 300 + seed);
        const std::vector<double> lam = herm_eig_values(h);
        const std::vector<double> big = herm_eig_values(real_embedding(h));
        CHECK(std::abs(big.back() - lam.back()) < 1e-10);
        CHECK(std::abs(big.front() - lam.front()) < 1e-10);
        // every eigenvalue doubled
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(big[2 * i] - lam[i]) < 1e-10);
            CHECK(std::abs(big[2 * i + 1] - lam[i]) < 1e-10);
        }
    }
}

TEST_CASE("sdpa export round trip") {
    const DensityMatrix rho = random_density(2, 2, 3, 11);
    const DensityMatrix tau = random_density(2, 2, 4, 12);
    const SdpProblem p = build_problem(rho.mat, tau.mat);
    const std::string path = "test_export.dat-s";
    export_sdpa(p, path);

    const SdpProblem q = import_sdpa(path);
    CHECK(q.order == p.order);
    CHECK(max_abs_diff(q.rho, p.rho) < 1e-15);
    CHECK(max_abs_diff(q.tau, p.tau) < 1e-15);
    std::remove(path.c_str());

    CHECK_THROWS_AS(import_sdpa("does_not_exist.dat-s"), IoError);
}

TEST_CASE("certificate sandwich on seeded pairs") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const ComplexMatrix a = random_psd(n, 400 + seed) * (1.0 / static_cast<double>(n));
        const ComplexMatrix b = random_psd(n, 500 + seed) * (1.0 / static_cast<double>(n));
        const SdpProblem p = build_problem(a, b);
        const double primal = check_primal_feasible(p, optimal_primal(p)).objective;
        const ComplexMatrix eye = ComplexMatrix::identity(n);
        const double dual = check_dual_feasible(p, eye, eye).objective;
        const double f = fidelity(a, b);
        CHECK(primal <= f + 1e-9);
        CHECK(f <= dual + 1e-9);
    }
}
