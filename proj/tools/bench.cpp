// Times the OpenMP kernels against their serial reference paths: the
// multi-restart orbit optimizer and the dense matrix product.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lufid/orbit_opt.hpp"
#include "lufid/rng.hpp"

using namespace lufid;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng = substream(seed, 0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(unif(rng), unif(rng));
    return m;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif

    // multi-restart gmax, serial vs parallel restarts
    const DensityMatrix rho = random_density(3, 3, 9, 11);
    const DensityMatrix sigma = random_density(3, 3, 9, 12);
    OptimizerConfig cfg;
    cfg.restarts = 32;
    cfg.max_iters = 200;
    cfg.seed = 7;

    cfg.exec = Exec::Serial;
    auto t0 = clock_type::now();
    const OptimizationReport serial = gmax(rho, sigma, cfg);
    const double t_serial = seconds_since(t0);

    cfg.exec = Exec::Parallel;
    t0 = clock_type::now();
    const OptimizationReport parallel = gmax(rho, sigma, cfg);
    const double t_parallel = seconds_since(t0);

    std::printf("gmax 3x3, 32 restarts: serial %.3fs, parallel %.3fs, speedup %.2fx\n",
                t_serial, t_parallel, t_serial / t_parallel);
    std::printf("  values identical: %s (%.17g)\n",
                serial.value == parallel.value ? "yes" : "NO", serial.value);

    // dense matmul, serial vs OpenMP kernel
    for (std::size_t n : {64, 128, 256}) {
        const ComplexMatrix a = random_matrix(n, 21);
        const ComplexMatrix b = random_matrix(n, 22);
        t0 = clock_type::now();
        const ComplexMatrix cs = matmul_serial(a, b);
        const double ts = seconds_since(t0);
        t0 = clock_type::now();
        const ComplexMatrix cp = matmul(a, b);
        const double tp = seconds_since(t0);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) diff += std::abs(cs(i, j) - cp(i, j));
        std::printf("matmul %3zu: serial %.4fs, parallel %.4fs, speedup %.2fx, max|diff| sum %g\n",
                    n, ts, tp, ts / tp, diff);
    }
    return 0;
}
