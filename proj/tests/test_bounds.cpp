#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "lufid/bounds.hpp"
#include "lufid/closed_form.hpp"
#include "lufid/fidelity.hpp"
#include "test_helpers.hpp"

using namespace lufid;
using namespace lufid::testing;

namespace {

OptimizerConfig cfg_for(std::uint64_t seed, std::size_t restarts = 10) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = 300;
    cfg.seed = seed;
    return cfg;
}

DensityMatrix maximally_mixed_2x2() {
    return make_density(ComplexMatrix::identity(4) * 0.25, 2, 2);
}

DensityMatrix pure00() {
    std::vector<cplx> ket(4, cplx(0.0, 0.0));
    ket[0] = cplx(1.0, 0.0);
    return projector(PureState{std::move(ket), 2, 2});
}

}  // namespace

TEST_CASE("complement state") {
    const DensityMatrix sig = random_density(2, 2, 3, 1);
    const DensityMatrix sigp = complement_state(sig);
    CHECK(sigp.mat.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(herm_eig_values(sigp.mat).back() > -1e-12);
    // 1 = sigma + (d1 d2 - 1) sigma'
    const ComplexMatrix recon = sig.mat + sigp.mat * 3.0;
    CHECK(max_abs_diff(recon, ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("appendix spectral inequalities") {
    // sqrt(rank X * Tr X) >= Tr sqrt(X) >= sqrt(Tr X) on seeded PSD inputs
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (std::size_t n : {2, 4, 6, 9}) {
            const ComplexMatrix x = random_psd_rank(n, 1 + seed % n, 2000 + 17 * seed + n);
            const double rank = static_cast<double>(psd_rank(x));
            const double tr = x.trace().real();
            const double trs = trace_sqrt(x);
            REQUIRE(std::sqrt(rank * tr) >= trs - 1e-9);
            REQUIRE(trs >= std::sqrt(tr) - 1e-9);
            ++count;
        }
    }
    CHECK(count == 200);

    // equality cases: flat spectrum (left) and rank one (right)
    ComplexMatrix flat = ComplexMatrix::identity(3) * 1.7;
    CHECK(std::sqrt(3.0 * flat.trace().real()) ==
          doctest::Approx(trace_sqrt(flat)).epsilon(1e-12));
    const ComplexMatrix r1 = random_psd_rank(4, 1, 77);
    CHECK(trace_sqrt(r1) == doctest::Approx(std::sqrt(r1.trace().real())).epsilon(1e-9));
}

TEST_CASE("appendix fidelity inequalities") {
    // sqrt(rank(A^1/2 B^1/2) Tr(AB)) >= F(A,B) >= sqrt(Tr(AB))
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const ComplexMatrix a = random_psd(n, 3000 + seed);
        const ComplexMatrix b = random_psd_rank(n, 1 + seed % n, 3100 + seed);
        const double f = fidelity(a, b);
        const double trab = matmul_serial(a, b).trace().real();
        // rank(A^1/2 B^1/2) equals the rank of A^1/2 B A^1/2
        const std::size_t rank_ab =
            psd_rank(matmul_serial(matmul_serial(matrix_sqrt(a), b), matrix_sqrt(a)));
        CHECK(std::sqrt(static_cast<double>(rank_ab) * trab) >= f - 1e-9);
        CHECK(f >= std::sqrt(std::max(trab, 0.0)) - 1e-9);
    }
    // equality: both rank one on the same vector
    const ComplexMatrix p = random_psd_rank(3, 1, 91);
    const double f = fidelity(p, p * 2.0);
    CHECK(f == doctest::Approx(std::sqrt(matmul_serial(p, p * 2.0).trace().real()))
                   .epsilon(1e-9));
}

TEST_CASE("proposition 1") {
    // rho = sigma = |00><00|: middle exactly 1, rank 1
    const DensityMatrix p00 = pure00();
    const OptimizationReport gx = gmax(p00, p00, cfg_for(11, 8));
    const OptimizationReport gn = gmin(p00, complement_state(p00), cfg_for(12, 8));
    const BoundReport tight = prop1_check(p00, p00, gx.value, gn.value);
    CHECK(*tight.upper == 1.0);
    const double middle = gx.value * gx.value + 3.0 * gn.value * gn.value;
    CHECK(std::abs(middle - 1.0) < 2e-4);
    CHECK(tight.slack > -2e-4);

    // rho maximally mixed: rank 4 with room to spare
    const DensityMatrix mm = maximally_mixed_2x2();
    const DensityMatrix sig = random_density(2, 2, 2, 13);
    const OptimizationReport gx2 = gmax(mm, sig, cfg_for(14, 8));
    const OptimizationReport gn2 = gmin(mm, complement_state(sig), cfg_for(15, 8));
    const BoundReport loose = prop1_check(mm, sig, gx2.value, gn2.value);
    CHECK(*loose.upper == 4.0);
    CHECK(loose.slack > 0.1);
    CHECK(loose.satisfied);
}

TEST_CASE("proposition 2") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density(2, 2, 1 + seed % 4, 4000 + seed);
        const DensityMatrix sig = random_density(2, 2, 4 - seed % 3, 4100 + seed);
        const DensityMatrix sigp = complement_state(sig);
        const OptimizationReport gx = gmax(rho, sig, cfg_for(4200 + seed, 8));
        const OptimizationReport gn = gmin(rho, sigp, cfg_for(4300 + seed, 8));
        const BoundReport rep = prop2_check(rho, sig, gx, gn);
        CHECK(rep.slack > -1e-6);
    }

    // maximally mixed everything: all three inequalities tight or analytic
    const DensityMatrix mm = maximally_mixed_2x2();
    const OptimizationReport gx = gmax(mm, mm, cfg_for(21, 4));
    const OptimizationReport gn = gmin(mm, complement_state(mm), cfg_for(22, 4));
    const BoundReport rep = prop2_check(mm, mm, gx, gn);
    CHECK(rep.slack > -1e-9);

    OptimizationReport empty;
    CHECK_THROWS_AS(prop2_check(mm, mm, empty, gn), MissingWitness);
}

TEST_CASE("gmax bounds") {
    const DensityMatrix mm = maximally_mixed_2x2();
    BoundReport up_same = gmax_upper_bound(mm, mm);
    CHECK(*up_same.upper == doctest::Approx(1.0).epsilon(1e-12));

    // pure inputs: the global branch reproduces the Schmidt formula exactly
    const PureState a = random_pure(2, 2, 31);
    const PureState b = random_pure(2, 2, 32);
    const BoundReport up_pure = gmax_upper_bound(projector(a), projector(b));
    const double theorem =
        gmax_pure_pure(SchmidtSpectrum::of_pure(a), SchmidtSpectrum::of_pure(b));
    // reductions of pure states carry the Schmidt spectra, so branch (i)
    // equals the theorem value; the min cannot fall below it
    CHECK(*up_pure.upper >= theorem - 1e-10);

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const DensityMatrix rho = random_density(2, 2, 3, 5000 + seed);
        const DensityMatrix sig = random_density(2, 2, 3, 5100 + seed);
        const OptimizationReport gx = gmax(rho, sig, cfg_for(5200 + seed, 8));
        BoundReport up = gmax_upper_bound(rho, sig);
        check_bound_against(up, gx.value);
        CHECK(up.slack > -1e-8);

        BoundReport lo = gmax_lower_bound(rho, sig);
        check_bound_against(lo, gx.value);
        CHECK(lo.slack > -1e-8);
    }

    // Haar-affine bound is tight at the maximally mixed pair
    BoundReport lo_mm = gmax_lower_bound(mm, mm);
    CHECK(*lo_mm.lower == doctest::Approx(1.0).epsilon(1e-9));

    // relative-entropy branch: feasible-point estimate keeps the bound safe
    const DensityMatrix rho = random_density(2, 2, 4, 61);
    const DensityMatrix sig = random_density(2, 2, 4, 62);
    OptimizerConfig rel_cfg = cfg_for(63, 4);
    rel_cfg.mode = OptimizeMode::Minimize;
    const double rel = relative_entropy_extremum(rho, sig, rel_cfg).value;
    BoundReport lo2 = gmax_lower_bound(rho, sig, rel);
    const OptimizationReport gx = gmax(rho, sig, cfg_for(64, 10));
    check_bound_against(lo2, gx.value);
    CHECK(lo2.slack > -1e-8);
}

TEST_CASE("gmin bounds") {
    const DensityMatrix mm = maximally_mixed_2x2();
    BoundReport up_mm = gmin_upper_bound(mm, mm);
    CHECK(*up_mm.upper == doctest::Approx(1.0).epsilon(1e-12));
    BoundReport lo_mm = gmin_lower_bound(mm, mm);
    CHECK(*lo_mm.lower == doctest::Approx(1.0).epsilon(1e-12));

    const PureState a = random_pure(2, 2, 41);
    const PureState b = random_pure(2, 2, 42);
    BoundReport up_pure = gmin_upper_bound(projector(a), projector(b));
    CHECK(*up_pure.upper == doctest::Approx(0.5).epsilon(1e-10));  // 1/sqrt(4)

    // rank-deficient inputs skip the spectral branches
    BoundReport lo_skip = gmin_lower_bound(projector(a), mm);
    CHECK_FALSE(lo_skip.lower.has_value());
    CHECK(lo_skip.notes.size() >= 1);

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const DensityMatrix rho = random_density(2, 2, 4, 6000 + seed);
        const DensityMatrix sig = random_density(2, 2, 4, 6100 + seed);
        const OptimizationReport gn = gmin(rho, sig, cfg_for(6200 + seed, 8));
        BoundReport up = gmin_upper_bound(rho, sig);
        check_bound_against(up, gn.value);
        CHECK(up.slack > -1e-8);
        BoundReport lo = gmin_lower_bound(rho, sig);
        check_bound_against(lo, gn.value);
        CHECK(lo.slack > -1e-8);
    }
}

TEST_CASE("affine matching unitary") {
    // commuting states: the identity already matches
    ComplexMatrix da(3, 3), db(3, 3);
    const double wa[3] = {0.5, 0.3, 0.2};
    const double wb[3] = {0.2, 0.5, 0.3};
    for (std::size_t i = 0; i < 3; ++i) {
        da(i, i) = cplx(wa[i], 0.0);
        db(i, i) = cplx(wb[i], 0.0);
    }
    const auto [u_id, a_id] = find_affine_matching_unitary(DensityMatrix{da, 1, 3},
                                                           DensityMatrix{db, 1, 3});
    CHECK(max_abs_diff(u_id, ComplexMatrix::identity(3)) < 1e-12);
    CHECK(std::abs(a_id - fidelity(da, db)) < 1e-8);

    // |0><0| against |+><+|: F = 1/sqrt(2)
    ComplexMatrix zero(2, 2);
    zero(0, 0) = cplx(1.0, 0.0);
    ComplexMatrix plus(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) plus(i, j) = cplx(0.5, 0.0);
    const DensityMatrix z{zero, 1, 2}, p{plus, 1, 2};
    const auto [u0, achieved] = find_affine_matching_unitary(z, p);
    CHECK(std::abs(achieved - 1.0 / std::sqrt(2.0)) < 1e-8);
    CHECK(std::abs(affine_fidelity(zero, conjugate_by(plus, u0)) - fidelity(z, p)) < 1e-8);

    // seeded full-rank pairs, including qutrits
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const DensityMatrix rho = random_density(1, n, n, 7000 + seed);
        const DensityMatrix sig = random_density(1, n, n, 7100 + seed);
        const auto [u, got] = find_affine_matching_unitary(rho, sig);
        const double f = fidelity(rho, sig);
        CHECK(std::abs(got - f) < 1e-8);
        CHECK(u.is_unitary(1e-9));
        // Golden-Thompson side: the aligned maximizer dominates the fidelity
        std::vector<double> lr = herm_eig_values(rho.mat);
        std::vector<double> ls = herm_eig_values(sig.mat);
        double amax = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            amax += std::sqrt(std::max(lr[i], 0.0) * std::max(ls[i], 0.0));
        CHECK(amax >= f - 1e-10);
    }
}

TEST_CASE("bound report json") {
    BoundReport r;
    r.name = "demo";
    r.lower = 0.25;
    r.slack = 0.1;
    const nlohmann::json j = nlohmann::json::parse(bound_to_json(r));
    CHECK(j["name"] == "demo");
    CHECK(j["lower"] == doctest::Approx(0.25));
    CHECK(j["upper"].is_null());
    CHECK(j["satisfied"] == true);
}
