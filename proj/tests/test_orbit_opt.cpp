#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lufid/closed_form.hpp"
#include "lufid/fidelity.hpp"
#include "lufid/orbit_opt.hpp"
#include "test_helpers.hpp"

using namespace lufid;
using namespace lufid::testing;

namespace {

OptimizerConfig quick_cfg(std::uint64_t seed, std::size_t restarts = 10,
                          std::size_t iters = 300) {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = iters;
    cfg.seed = seed;
    return cfg;
}

DensityMatrix pure_product_00(std::size_t d) {
    std::vector<cplx> ket(d * d, cplx(0.0, 0.0));
    ket[0] = cplx(1.0, 0.0);
    return projector(PureState{std::move(ket), d, d});
}

bool reports_equal(const OptimizationReport& a, const OptimizationReport& b) {
    if (a.value != b.value || a.converged != b.converged) return false;
    if (a.per_restart_values != b.per_restart_values) return false;
    if (a.iterations_used != b.iterations_used) return false;
    return max_abs_diff(a.local_unitary.u1, b.local_unitary.u1) == 0.0 &&
           max_abs_diff(a.local_unitary.u2, b.local_unitary.u2) == 0.0;
}

}  // namespace

TEST_CASE("gmax of a state with itself is 1") {
    const DensityMatrix rho = random_density(2, 2, 3, 21);
    const OptimizationReport rep = gmax(rho, rho, quick_cfg(1, 6));
    CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.per_restart_values[0] == doctest::Approx(1.0).epsilon(1e-9));  // identity start
}

TEST_CASE("pure-pure gmax matches the Schmidt formula") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t d = 2 + seed % 2;
        const PureState phi = random_pure(d, d, 3000 + seed);
        const PureState psi = random_pure(d, d, 4000 + seed);
        const double expected =
            gmax_pure_pure(SchmidtSpectrum::of_pure(phi), SchmidtSpectrum::of_pure(psi));
        const OptimizationReport rep =
            gmax(projector(phi), projector(psi), quick_cfg(10 + seed, 8));
        CHECK(std::abs(rep.value - expected) < 1e-6);
    }
}

TEST_CASE("pure-pure gmin reaches zero") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const PureState phi = random_pure(2, 2, 5000 + seed);
        const PureState psi = random_pure(2, 2, 6000 + seed);
        const OptimizationReport rep =
            gmin(projector(phi), projector(psi), quick_cfg(20 + seed, 8));
        CHECK(rep.value < 1e-4);
    }
}

TEST_CASE("gmax against closed forms for named families") {
    // Werner(2, 1) vs |00><00|: sqrt(1/2)
    const OptimizationReport w = gmax(werner(2, 1.0), pure_product_00(2), quick_cfg(30, 12));
    CHECK(std::abs(w.value - std::sqrt(0.5)) < 1e-6);

    // isotropic gmin, d=2, lam=0.9
    const auto [_, iso_min] = iso_extrema_vs_pure_product(2, 0.9);
    const OptimizationReport im =
        gmin(isotropic(2, 0.9), pure_product_00(2), quick_cfg(31, 12));
    CHECK(std::abs(im.value - iso_min) < 1e-5);

    // orbit of the maximally mixed state is a single point
    const DensityMatrix mm = make_density(ComplexMatrix::identity(4) * 0.25, 2, 2);
    const OptimizationReport m = gmin(mm, mm, quick_cfg(32, 4));
    CHECK(m.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("reports are feasible and consistent") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho = random_density(2, 2, 3, 7000 + seed);
        const DensityMatrix sig = random_density(2, 2, 2, 8000 + seed);
        const OptimizationReport up = gmax(rho, sig, quick_cfg(40 + seed, 8));
        const OptimizationReport dn = gmin(rho, sig, quick_cfg(50 + seed, 8));

        for (const OptimizationReport* rep : {&up, &dn}) {
            CHECK(rep->local_unitary.u1.is_unitary(1e-10));
            CHECK(rep->local_unitary.u2.is_unitary(1e-10));
            CHECK(std::abs(orbit_fidelity(rho.mat, sig.mat, rep->local_unitary) - rep->value) <
                  1e-8);
        }
        // the report value is the extremum of the per-restart values
        CHECK(up.value == *std::max_element(up.per_restart_values.begin(),
                                            up.per_restart_values.end()));
        CHECK(dn.value == *std::min_element(dn.per_restart_values.begin(),
                                            dn.per_restart_values.end()));
        // identity sits inside the orbit
        const double f = fidelity(rho, sig);
        CHECK(dn.value <= f + 1e-8);
        CHECK(f <= up.value + 1e-8);

        // the local orbit is a subset of the global orbit
        std::vector<double> sr = herm_eig_values(rho.mat);
        std::vector<double> ss = herm_eig_values(sig.mat);
        for (double& x : sr) x = std::max(x, 0.0);
        for (double& x : ss) x = std::max(x, 0.0);
        const auto [fmax, fmin] = global_unitary_extrema(sr, ss);
        CHECK(up.value <= fmax + 1e-8);
        CHECK(dn.value >= fmin - 1e-8);

        // monotone nondecreasing in restarts
        OptimizerConfig more = quick_cfg(40 + seed, 12);
        CHECK(gmax(rho, sig, more).value >= up.value - 1e-12);
    }
}

TEST_CASE("identical seeds give bit-identical reports, serial or parallel") {
    const DensityMatrix rho = random_density(2, 3, 4, 91);
    const DensityMatrix sig = random_density(2, 3, 3, 92);
    OptimizerConfig cfg = quick_cfg(123, 8, 150);

    const OptimizationReport a = gmax(rho, sig, cfg);
    const OptimizationReport b = gmax(rho, sig, cfg);
    CHECK(reports_equal(a, b));

    cfg.exec = Exec::Serial;
    const OptimizationReport c = gmax(rho, sig, cfg);
    CHECK(reports_equal(a, c));
}

TEST_CASE("riemannian step at a known optimum has zero gradient") {
    // aligned Schmidt bases: identity is optimal when both states share them
    std::vector<cplx> phi(4, cplx(0.0, 0.0));
    phi[0] = cplx(std::sqrt(0.7), 0.0);
    phi[3] = cplx(std::sqrt(0.3), 0.0);
    std::vector<cplx> psi(4, cplx(0.0, 0.0));
    psi[0] = cplx(std::sqrt(0.6), 0.0);
    psi[3] = cplx(std::sqrt(0.4), 0.0);
    const ComplexMatrix rho = outer(phi, phi);
    const ComplexMatrix sig = outer(psi, psi);
    const LocalUnitary id{ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
    const RiemannianStep step = riemannian_step(rho, sig, 2, 2, id, OptimizeMode::Maximize);
    CHECK(step.grad_norm < 1e-8);
    CHECK(step.value_before ==
          doctest::Approx(std::sqrt(0.42) + std::sqrt(0.12)).epsilon(1e-10));
}

TEST_CASE("analytic directional derivative matches central differences") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::size_t d1 = 2 + seed % 2, d2 = 2 + (seed / 2) % 2;
        const ComplexMatrix rho = random_psd(d1 * d2, 9100 + seed);
        const ComplexMatrix sig = random_psd(d1 * d2, 9200 + seed);
        const LocalUnitary w{haar_unitary(d1, 9300 + seed), haar_unitary(d2, 9400 + seed)};
        const ComplexMatrix t1 = [&] {
            const ComplexMatrix g = random_matrix(d1, d1, 9500 + seed);
            ComplexMatrix s(d1, d1);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d1; ++j)
                    s(i, j) = (g(i, j) - std::conj(g(j, i))) / 2.0;
            return s;
        }();
        const ComplexMatrix t2 = [&] {
            const ComplexMatrix g = random_matrix(d2, d2, 9600 + seed);
            ComplexMatrix s(d2, d2);
            for (std::size_t i = 0; i < d2; ++i)
                for (std::size_t j = 0; j < d2; ++j)
                    s(i, j) = (g(i, j) - std::conj(g(j, i))) / 2.0;
            return s;
        }();

        const double analytic = orbit_directional_derivative(rho, sig, d1, d2, w, t1, t2);
        const double h = 1e-5;
        const LocalUnitary wp = cayley_retract(w, t1, t2, h);
        const LocalUnitary wm = cayley_retract(w, t1, t2, -h);
        const double fp = orbit_fidelity(rho, sig, wp);
        const double fm = orbit_fidelity(rho, sig, wm);
        const double numeric = (fp - fm) / (2.0 * h);
        CHECK(rel_error(analytic, numeric) < 1e-6);
    }
}

TEST_CASE("cayley retraction stays unitary over 1000 steps") {
    LocalUnitary w{ComplexMatrix::identity(3), ComplexMatrix::identity(2)};
    std::mt19937_64 rng = substream(4711, 0);
    std::uniform_real_distribution<double> unif(-0.05, 0.05);
    for (int step = 0; step < 1000; ++step) {
        ComplexMatrix s1(3, 3), s2(2, 2);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) s1(i, j) = cplx(unif(rng), unif(rng));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) s2(i, j) = cplx(unif(rng), unif(rng));
        // skew-symmetrize
        ComplexMatrix k1(3, 3), k2(2, 2);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) k1(i, j) = (s1(i, j) - std::conj(s1(j, i))) / 2.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) k2(i, j) = (s2(i, j) - std::conj(s2(j, i))) / 2.0;
        w = cayley_retract(w, k1, k2, 1.0);
    }
    const ComplexMatrix g1 = matmul_serial(w.u1.adjoint(), w.u1);
    const ComplexMatrix g2 = matmul_serial(w.u2.adjoint(), w.u2);
    CHECK(max_abs_diff(g1, ComplexMatrix::identity(3)) < 1e-12);
    CHECK(max_abs_diff(g2, ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("s1 norm") {
    OptimizerConfig cfg = quick_cfg(61, 8, 200);

    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const DensityMatrix w = werner(3, t);
        const double expected = (1.0 + std::abs(std::min(t, 0.0))) / (3.0 * (3.0 - t));
        CHECK(std::abs(s1_norm(w.mat, 3, 3, cfg) - expected) < 1e-8);
    }

    const ComplexMatrix mixed = ComplexMatrix::identity(6) * (1.0 / 6.0);
    CHECK(s1_norm(mixed, 2, 3, cfg) == doctest::Approx(1.0 / 6.0).epsilon(1e-10));

    const PureState omega = max_entangled(3);
    CHECK(std::abs(s1_norm(outer(omega.ket, omega.ket), 3, 3, cfg) - 1.0 / 3.0) < 1e-8);

    CHECK_THROWS_AS(s1_norm(random_matrix(4, 4, 1), 2, 2, cfg), NotHermitian);
}

TEST_CASE("hilbert-schmidt overlap extrema") {
    OptimizerConfig cfg = quick_cfg(71, 8, 200);

    const PureState phi = random_pure(2, 2, 777);
    const DensityMatrix p = projector(phi);
    const auto [mx, mn] = hs_overlap_extrema(p, p, cfg);
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(mn >= -1e-9);

    // orthogonal pure product states reach zero
    const auto [mx2, mn2] = hs_overlap_extrema(pure_product_00(2), pure_product_00(2), cfg);
    CHECK(mx2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mn2 < 1e-8);

    // max <= gmax(rho^2, sigma^2) on unnormalized squares
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const DensityMatrix a = random_density(2, 2, 3, 7100 + seed);
        const DensityMatrix b = random_density(2, 2, 3, 7200 + seed);
        const auto [hs_max, hs_min] = hs_overlap_extrema(a, b, cfg);
        CHECK(hs_min <= hs_max + 1e-10);
        const ComplexMatrix a2 = matmul_serial(a.mat, a.mat);
        const ComplexMatrix b2 = matmul_serial(b.mat, b.mat);
        const OptimizationReport g2 = gmax(a2, b2, 2, 2, quick_cfg(7300 + seed, 8));
        CHECK(hs_max <= g2.value + 1e-8);
    }
}

TEST_CASE("commutator minimization") {
    OptimizerConfig cfg = quick_cfg(81, 10, 250);

    // commuting diagonal states: zero at the identity
    ComplexMatrix da(4, 4), db(4, 4);
    const double wa[4] = {0.4, 0.3, 0.2, 0.1};
    const double wb[4] = {0.1, 0.2, 0.3, 0.4};
    for (std::size_t i = 0; i < 4; ++i) {
        da(i, i) = cplx(wa[i], 0.0);
        db(i, i) = cplx(wb[i], 0.0);
    }
    const DensityMatrix rho{da, 2, 2};
    const DensityMatrix sig{db, 2, 2};
    const OptimizationReport rep = commutator_min(rho, sig, cfg);
    CHECK(rep.value < 1e-9);
    CHECK(rep.per_restart_values[0] < 1e-12);  // identity start

    // planted solution: sigma diagonal after a known local rotation
    const LocalUnitary plant{haar_unitary(2, std::uint64_t{8101}),
                             haar_unitary(2, std::uint64_t{8102})};
    const DensityMatrix planted{conjugate_by(db, kron(plant.u1, plant.u2)), 2, 2};
    const OptimizationReport rep2 = commutator_min(rho, planted, quick_cfg(82, 16, 400));
    CHECK(rep2.value < 1e-6);
}

TEST_CASE("relative entropy extremum over the orbit") {
    OptimizerConfig cfg = quick_cfg(91, 6, 150);
    cfg.mode = OptimizeMode::Minimize;
    const DensityMatrix rho = random_density(2, 2, 4, 911);
    // global minimum of S(rho || W rho W^dag) is 0 at the identity
    const OptimizationReport rep = relative_entropy_extremum(rho, rho, cfg);
    CHECK(rep.value < 1e-9);

    const DensityMatrix sig = random_density(2, 2, 4, 912);
    const OptimizationReport rep2 = relative_entropy_extremum(rho, sig, cfg);
    CHECK(rep2.value <= relative_entropy(rho, sig) + 1e-9);

    CHECK_THROWS_AS(relative_entropy_extremum(rho, random_density(2, 2, 2, 913), cfg),
                    BadParameter);
}

TEST_CASE("config validation") {
    const DensityMatrix rho = random_density(2, 2, 2, 95);
    OptimizerConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(gmax(rho, rho, cfg), BadConfig);
    cfg = OptimizerConfig{};
    cfg.grad_tol = 0.0;
    CHECK_THROWS_AS(gmin(rho, rho, cfg), BadConfig);
    CHECK_THROWS_AS(gmax(rho.mat, rho.mat, 3, 2, OptimizerConfig{}), DimensionMismatch);

    ComplexMatrix indefinite(4, 4);
    indefinite(0, 0) = cplx(2.0, 0.0);
    indefinite(1, 1) = cplx(-1.0, 0.0);
    CHECK_THROWS_AS(gmax(indefinite, rho.mat, 2, 2, OptimizerConfig{}), NotPSD);
}
