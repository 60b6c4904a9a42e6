#include "ckl/compression.hpp"

#include <cmath>

#include "ckl/curve.hpp"
#include "ckl/rng.hpp"

namespace ckl {

bool in_y_circ(const Eigen::VectorXd& y) {
    return y.size() == 2 && y[0] >= 0.5 && y[1] >= 0.5 && y.norm() <= 0.9;
}

Eigen::VectorXd counterexample_omega(const Eigen::VectorXd& y) {
    if (!in_y_circ(y)) throw DomainError("counterexample_omega requires y in Y_circ");
    Eigen::VectorXd w(2);
    w[0] = y[0] / y[1];
    w[1] = std::log(y[0] / y[1]);
    return w;
}

SurfaceContainmentReport verify_surface_containment(int samples, double tol, std::uint64_t seed) {
    PhaseSpec phase = PhaseSpec::counterexample();
    const double rho = phase.rho();
    SurfaceContainmentReport rep;
    rep.samples = samples;
    Rng rng(seed);
    int done = 0;
    while (done < samples) {
        Eigen::VectorXd y(2);
        y << rng.uniform(0.5, 0.9), rng.uniform(0.5, 0.9);
        if (!in_y_circ(y)) continue;
        double t = rng.uniform(-rho, rho);
        Eigen::VectorXd omega = counterexample_omega(y);
        CurvePoint cp = solve_psi(phase, omega, t, y, tol);
        double x1_exact = y[0] / y[1] - t * y[0];
        double x2_exact = std::log(x1_exact);
        rep.max_surface_deviation = std::max(rep.max_surface_deviation, std::abs(cp.x[1] - std::log(cp.x[0])));
        rep.max_closed_form_deviation =
            std::max({rep.max_closed_form_deviation, std::abs(cp.x[0] - x1_exact), std::abs(cp.x[1] - x2_exact)});
        ++done;
    }
    return rep;
}

double log_graph_distance(double a, double b) {
    // foot-point equation F(u) = u(u - a) + (log u - b) = 0 is strictly
    // increasing for 2u + 1/u > a, which holds throughout the boxes used here
    // (a < 2*sqrt(2)); bisect then polish with Newton
    double lo = 1e-8, hi = 64.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double F = mid * (mid - a) + (std::log(mid) - b);
        if (F < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        double F = u * (u - a) + (std::log(u) - b);
        double dF = 2.0 * u - a + 1.0 / u;
        double un = u - F / dF;
        if (un > 0.0) u = un;
    }
    return std::hypot(u - a, std::log(u) - b);
}

GridField log_surface_mask(const Box& planar_box, double delta, double h) {
    GridField mask(planar_box, h);
    const auto& dims = mask.dims();
    const int n1 = dims[0], n2 = dims[1];
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n1; ++i) {
        double a = mask.box().lo[0] + (i + 0.5) * h;
        for (int j = 0; j < n2; ++j) {
            double b = mask.box().lo[1] + (j + 0.5) * h;
            if (log_graph_distance(a, b) < delta)
                mask.at_index(static_cast<std::int64_t>(i) * n2 + j) = 1.0f;
        }
    }
    return mask;
}

ScalingFit compression_volume_scan(const std::vector<double>& deltas) {
    Box planar;
    planar.lo.resize(2);
    planar.hi.resize(2);
    planar.lo << 0.25, std::log(0.25) - 0.1;
    planar.hi << 2.0, std::log(2.0) + 0.1;
    std::vector<std::pair<double, double>> pts;
    for (double d : deltas) {
        GridField mask = log_surface_mask(planar, d, d / 4.0);
        pts.emplace_back(d, union_measure(mask) * 1.0); // t-extent [-1/2, 1/2]
    }
    return fit_scaling(pts);
}

namespace {

// fourth-order central difference of a map component
Eigen::VectorXd fd_partial(const OmegaMap& f, const Eigen::VectorXd& y, int var, double h) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(y.size());
    e[var] = 1.0;
    Eigen::VectorXd f1 = f(y + h * e), f2 = f(y - h * e), f3 = f(y + 2.0 * h * e), f4 = f(y - 2.0 * h * e);
    return (8.0 * (f1 - f2) - (f3 - f4)) / (12.0 * h);
}

} // namespace

JacobianCoefficients jacobian_coefficients(const OmegaMap& omega_map, const Eigen::VectorXd& y) {
    const double h = 1e-5;
    Eigen::VectorXd d1 = fd_partial(omega_map, y, 0, h);
    Eigen::VectorXd d2 = fd_partial(omega_map, y, 1, h);
    double jw = d1[0] * d2[1] - d2[0] * d1[1];
    JacobianCoefficients c;
    c.A = 1.0 + y[1] * d2[1];
    c.B = d1[0] + d2[1] + y[1] * jw;
    c.C = jw;
    return c;
}

double jacobian_companion_residual(const OmegaMap& omega_map, const Eigen::VectorXd& y, double t) {
    PhaseSpec phase = PhaseSpec::counterexample();
    auto Phi = [&](const Eigen::VectorXd& yy) -> Eigen::VectorXd {
        return omega_map(yy) - phase.grad_y_psi(t, yy);
    };
    const double h = 1e-5;
    Eigen::VectorXd d1 = fd_partial(Phi, y, 0, h);
    Eigen::VectorXd d2 = fd_partial(Phi, y, 1, h);
    double jphi = d1[0] * d2[1] - d2[0] * d1[1];
    JacobianCoefficients c = jacobian_coefficients(omega_map, y);
    double quad = c.A * t * t - c.B * t + c.C;
    return std::abs(jphi * (1.0 - t * y[1]) - quad);
}

double star_fan_witness(double ybar1, double c, double delta, int samples) {
    PhaseSpec phase = PhaseSpec::bourgain_star();
    const double rho = phase.rho();
    double worst = 0.0;
    int kmax = static_cast<int>(std::floor(rho / delta));
    for (int k = -kmax; k <= kmax; ++k) {
        Eigen::VectorXd y(2);
        y << ybar1, k * delta;
        if (y.norm() > rho) continue;
        Eigen::VectorXd omega(2);
        omega << 0.0, c;
        for (int i = 0; i < samples; ++i) {
            double t = -rho + 2.0 * rho * (i + 0.5) / samples;
            CurvePoint cp = solve_psi(phase, omega, t, y);
            double dev = std::abs(cp.x[1] - t * cp.x[0] - (c - t * ybar1));
            worst = std::max(worst, dev);
        }
    }
    return worst;
}

} // namespace ckl
