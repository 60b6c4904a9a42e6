// Timing comparison between the parallel kernels and their serial reference
// implementations. Run with OMP_NUM_THREADS set to taste.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ckl/grid.hpp"
#include "ckl/maximal.hpp"
#include "ckl/oscillatory.hpp"
#include "ckl/rng.hpp"
#include "ckl/tube_family.hpp"

using namespace ckl;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration_cast<std::chrono::microseconds>(clock_type::now() - t0).count() * 1e-6;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name, serial, parallel,
                serial / parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    {
        PhaseSpec p = PhaseSpec::bourgain_star();
        TubeFamily fam = build_family(p, 1.0 / 32, Separation::Direction, CentreRule::RandomSeeded, 1);
        auto t0 = clock_type::now();
        GridField a = rasterize_multiplicity(fam, fam.delta / 4.0);
        double tp = seconds_since(t0);
        t0 = clock_type::now();
        GridField b = reference::rasterize_multiplicity(fam, fam.delta / 4.0);
        double ts = seconds_since(t0);
        bool same = a.cells() == b.cells();
        for (std::int64_t i = 0; same && i < a.cells(); ++i) same = a.at_index(i) == b.at_index(i);
        report("rasterize_multiplicity", ts, tp);
        std::printf("  fields identical: %s\n", same ? "yes" : "NO");
    }

    {
        PhaseSpec p = PhaseSpec::const_coeff();
        double d = 1.0 / 16;
        double b = p.rho() + 2.0 * p.rho() * p.rho() + 4.0 * d;
        Box box;
        box.lo = Eigen::Vector3d(-p.rho(), -b, -b);
        box.hi = Eigen::Vector3d(p.rho(), b, b);
        GridField g(box, d / 2.0);
        Rng rng(2);
        for (auto& v : g.values()) v = static_cast<float>(rng.next_double());
        GridFieldView view(g);
        Box ball;
        ball.lo = Eigen::Vector2d(-p.rho(), -p.rho());
        ball.hi = Eigen::Vector2d(p.rho(), p.rho());
        auto ys = lattice_points(ball, d, [&](const Eigen::VectorXd& v) { return v.norm() <= p.rho(); });
        auto t0 = clock_type::now();
        auto kp = kakeya_maximal(p, d, view, ys, ys);
        double tp = seconds_since(t0);
        t0 = clock_type::now();
        auto ks = reference::kakeya_maximal(p, d, view, ys, ys);
        double ts = seconds_since(t0);
        double dev = 0.0;
        for (std::size_t i = 0; i < kp.size(); ++i) dev = std::max(dev, std::abs(kp[i] - ks[i]));
        report("kakeya_maximal", ts, tp);
        std::printf("  max deviation: %.3g\n", dev);
    }

    {
        PhaseSpec p = PhaseSpec::bourgain_star();
        auto t0 = clock_type::now();
        OscExperiment e =
            norm_scaling_experiment(p, 2.0, {8.0, 16.0, 32.0}, OscSuite::ConstantOne, OscMode::Hormander);
        double tl = seconds_since(t0);
        std::printf("%-28s lattice ladder %8.3f s   (slope %.3f)\n", "oscillatory ladder", tl,
                    e.fit.slope);
    }
    return 0;
}
