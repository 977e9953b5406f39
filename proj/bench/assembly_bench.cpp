// Times the OpenMP element loops against the serial reference on structured
// and Voronoi meshes. Usage: vem2d_bench [n_structured_per_side] [n_voronoi].

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vem2d/assembly.hpp"
#include "vem2d/meshgen.hpp"
#include "vem2d/postproc.hpp"

using namespace vem2d;
using Clock = std::chrono::steady_clock;

namespace {

template <typename Fn>
double best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

void bench_mesh(const std::string& label, const Mesh& mesh) {
    const Material mat{1000.0, 0.3, PlaneMode::PlaneStress};
    const Stabilization stab = Stabilization::trace_scaled();
    const int reps = 3;

    const double t_serial =
        best_of(reps, [&] { assemble(mesh, mat, stab, 1.0, Execution::Serial); });
    const double t_parallel =
        best_of(reps, [&] { assemble(mesh, mat, stab, 1.0, Execution::Parallel); });

    const GlobalSystem system = assemble(mesh, mat, stab);
    const Eigen::VectorXd u = Eigen::VectorXd::Random(system.dof_count());
    const double r_serial =
        best_of(reps, [&] { recover_fields(mesh, mat, u, Execution::Serial); });
    const double r_parallel =
        best_of(reps, [&] { recover_fields(mesh, mat, u, Execution::Parallel); });

    std::printf("%-24s %8d elements\n", label.c_str(), mesh.element_count());
    std::printf("  assemble        serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n",
                1e3 * t_serial, 1e3 * t_parallel, t_serial / t_parallel);
    std::printf("  recover_fields  serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n",
                1e3 * r_serial, 1e3 * r_parallel, r_serial / r_parallel);
}

} // namespace

int main(int argc, char** argv) {
    const int n_side = argc > 1 ? std::atoi(argv[1]) : 120;
    const int n_voronoi = argc > 2 ? std::atoi(argv[2]) : 4000;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel path runs serially\n");
#endif

    bench_mesh("structured " + std::to_string(n_side) + "x" + std::to_string(n_side),
               generate_structured(1.0, 1.0, n_side, n_side));
    bench_mesh("voronoi " + std::to_string(n_voronoi),
               generate_voronoi(rectangle_domain(2.0, 1.0), n_voronoi, 10, 3));
    return 0;
}
