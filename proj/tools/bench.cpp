/**
 * @file bench.cpp
 * @brief Timing comparison of the serial reference kernels against the
 *        OpenMP variants (porous column sweep and transport node sweep).
 */

#include <chrono>
#include <cstdio>
#include <vector>

#include "crocco/coefficients.hpp"
#include "crocco/driver.hpp"
#include "crocco/porous.hpp"
#include "crocco/scenario.hpp"
#include "crocco/transport.hpp"

using namespace crocco;

namespace {

double time_s(const std::function<void()>& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
               .count() /
           reps;
}

Slice initial_slice(const Scenario& s, const Grid& grid) {
    Slice w0;
    w0.t = 0.0;
    w0.w.assign(grid.n_nodes(), 0.0);
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j)
            for (int m = 0; m <= grid.nz(); ++m)
                w0.w[grid.index(i, j, m)] =
                    m == grid.nz() ? 0.0
                                   : s.W0(grid.x(i), grid.y(j), grid.zeta(m));
    return w0;
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
    if (argc > 1) threads = std::atoi(argv[1]);
    const ExecPolicy omp_pol = ExecPolicy::from_workers(threads);

    std::printf("kernel benchmark: serial reference vs OpenMP (%d threads)\n",
                omp_pol.threads);
    std::printf("%-26s %8s %12s %12s %9s\n", "kernel", "grid", "serial [ms]",
                "openmp [ms]", "speedup");

    for (int n : {16, 32, 48}) {
        const Scenario s = make_scenario("decel-outer");
        GridSpec spec{n, n, 2 * n, 1.0, 8};
        const Grid grid = build_grid(s.domain, spec);
        const BoundaryClassification cls = classify_boundary(s.domain, s.k.v);
        const CoefficientEvaluator ev(s, cls);
        const Slice w0 = initial_slice(s, grid);
        const double dt = spec.dt();

        PorousParams pp;
        const int reps = n <= 32 ? 3 : 1;
        const double ts = time_s(
            [&] { porous_advance_slice_serial(w0, grid, ev, dt, 2.0, pp); },
            reps);
        const double tp = time_s(
            [&] {
                porous_advance_slice_omp(w0, grid, ev, dt, 2.0, pp,
                                         omp_pol.threads);
            },
            reps);
        char label[64];
        std::snprintf(label, sizeof(label), "%dx%dx%d", n, n, 2 * n);
        std::printf("%-26s %8s %12.2f %12.2f %8.2fx\n", "porous sweep", label,
                    1e3 * ts, 1e3 * tp, ts / tp);

        TransportParams tpar;
        const double us = time_s(
            [&] { transport_advance_slice_serial(w0, grid, ev, dt, 2.0, tpar); },
            reps);
        const double up = time_s(
            [&] {
                transport_advance_slice_omp(w0, grid, ev, dt, 2.0, tpar,
                                            omp_pol.threads);
            },
            reps);
        std::printf("%-26s %8s %12.2f %12.2f %8.2fx\n", "transport sweep",
                    label, 1e3 * us, 1e3 * up, us / up);
    }
    return 0;
}
