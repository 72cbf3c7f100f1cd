// Benchmark: OpenMP det X grid sweep against the serial reference.

#include <chrono>
#include <cstdio>
#include <cmath>

#include <omp.h>

#include "mstab/spectra.hpp"
#include "mstab/wave.hpp"

using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int nl = 120, ns = 120;
    if (argc > 1) nl = ns = std::atoi(argv[1]);

    const auto p = mstab::family_T1();
    std::printf("det X grid %dx%d on [-3,3] x [0.05,1], T1 family\n", nl, ns);

    // warm-up
    (void)mstab::detx_grid_serial(p, -3.0, 3.0, 16, 0.05, 1.0, 16);

    auto t0 = clk::now();
    const auto serial = mstab::detx_grid_serial(p, -3.0, 3.0, nl, 0.05, 1.0, ns);
    const double ts = seconds_since(t0);

    t0 = clk::now();
    const auto parallel = mstab::detx_grid(p, -3.0, 3.0, nl, 0.05, 1.0, ns);
    const double tp = seconds_since(t0);

    double worst = 0.0;
    for (std::size_t i = 0; i < serial.size(); ++i)
        worst = std::max(worst, std::fabs(serial[i] - parallel[i]));

    std::printf("serial   : %8.3f s\n", ts);
    std::printf("openmp   : %8.3f s  (%d threads)\n", tp, omp_get_max_threads());
    std::printf("speedup  : %8.2fx\n", ts / tp);
    std::printf("max |serial - openmp| = %.3g (must be 0)\n", worst);
    return worst == 0.0 ? 0 : 1;
}
