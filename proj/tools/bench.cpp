// Benchmark of the OpenMP kernels against their serial reference.  The
// kernels write per-index slots only, so both paths are bitwise identical;
// this harness reports timings and cross-checks that equality.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "weyl/constraints.hpp"
#include "weyl/parallel.hpp"
#include "weyl/profile_curve.hpp"
#include "weyl/weyl_solution.hpp"

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double timed(F&& f, int reps) {
    const double t0 = now_s();
    for (int k = 0; k < reps; ++k) f();
    return (now_s() - t0) / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    weyl::WeylSolution rod(
        weyl::HarmonicField::from_measure(weyl::AxisMeasure::schwarzschild_rod(1.0)));
    auto curve = weyl::ProfileCurve::from_functions(
        129, [](double t) { return std::sqrt(12.0) * std::sin(t); },
        [](double t) { return 3.0 * std::cos(t); });

    // kernel 1: induced boundary data (per-node nu jet + lambda quadrature)
    weyl::InducedDataOptions serial_opts, omp_opts;
    serial_opts.parallel = false;
    omp_opts.parallel = true;
    weyl::BoundaryData ref, par;
    const double t_serial =
        timed([&] { ref = weyl::induced_boundary_data(rod, curve, serial_opts); }, 2);
    const double t_omp =
        timed([&] { par = weyl::induced_boundary_data(rod, curve, omp_opts); }, 2);
    bool same = true;
    for (int i = 0; i < ref.n; ++i)
        if (ref.alpha[i] != par.alpha[i] || ref.H[i] != par.H[i]) same = false;
    std::printf("boundary-data kernel  serial %8.3f s   omp %8.3f s   speedup %5.2fx   %s\n",
                t_serial, t_omp, t_serial / t_omp, same ? "bitwise-equal" : "MISMATCH");

    // kernel 2: surface jet assembly for the constraint identities
    weyl::JetOptions js, jp;
    js.parallel = false;
    jp.parallel = true;
    weyl::SurfaceJet jser, jpar;
    const double t_jser = timed([&] { jser = weyl::surface_jet(rod, curve, js); }, 2);
    const double t_jpar = timed([&] { jpar = weyl::surface_jet(rod, curve, jp); }, 2);
    same = true;
    for (int i = 0; i < jser.n; ++i)
        if (jser.H[i] != jpar.H[i] || jser.A_tt[i] != jpar.A_tt[i]) same = false;
    std::printf("surface-jet kernel    serial %8.3f s   omp %8.3f s   speedup %5.2fx   %s\n",
                t_jser, t_jpar, t_jser / t_jpar, same ? "bitwise-equal" : "MISMATCH");

    // kernel 3: lambda on a point grid (Curzon via quadrature route)
    weyl::WeylSolution cz(
        weyl::HarmonicField::from_measure(weyl::AxisMeasure::curzon(1.0)));
    std::vector<double> grid_lam(400);
    auto lam_grid = [&](bool parallel) {
        weyl::parallel_for(
            400,
            [&](int k) {
                const double r = 0.2 + 2.8 * (k % 20) / 19.0;
                const double z = 0.2 + 2.8 * (k / 20) / 19.0;
                grid_lam[k] =
                    cz.lambda_quadrature(r, z, weyl::WeylSolution::LambdaPath::horizontal).value;
            },
            parallel);
    };
    const double t_lser = timed([&] { lam_grid(false); }, 1);
    auto ref_lam = grid_lam;
    const double t_lpar = timed([&] { lam_grid(true); }, 1);
    same = (ref_lam == grid_lam);
    std::printf("lambda-grid kernel    serial %8.3f s   omp %8.3f s   speedup %5.2fx   %s\n",
                t_lser, t_lpar, t_lser / t_lpar, same ? "bitwise-equal" : "MISMATCH");
    return 0;
}
