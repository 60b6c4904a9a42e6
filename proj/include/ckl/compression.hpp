#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "ckl/grid.hpp"
#include "ckl/maximal.hpp"
#include "ckl/phase.hpp"

namespace ckl {

// compact frequency region Y_circ = {y : y1, y2 >= 1/2, |y| <= 9/10}
bool in_y_circ(const Eigen::VectorXd& y);

// omega(y) = (y1/y2, log(y1/y2)) on Y_circ
Eigen::VectorXd counterexample_omega(const Eigen::VectorXd& y);

// max over samples of |x2 - log x1| along the curves with omega = omega(y),
// together with the deviation of the solver from the closed forms
// x1 = y1/y2 - t y1, x2 = log(x1)
struct SurfaceContainmentReport {
    double max_surface_deviation = 0.0;
    double max_closed_form_deviation = 0.0;
    int samples = 0;
};
SurfaceContainmentReport verify_surface_containment(int samples, double tol, std::uint64_t seed = 1);

// signed 2d distance from a point to the log graph {(u, log u)}, by damped
// Newton on the foot-point equation
double log_graph_distance(double a, double b);

// planar indicator grid for the delta-neighbourhood of the log graph over the
// given (x1, x2) box
GridField log_surface_mask(const Box& planar_box, double delta, double h);

// grid measures |N_delta M| over a delta ladder; expected slope 1
ScalingFit compression_volume_scan(const std::vector<double>& deltas);

// quadratic coefficients of the compressed-family Jacobian for an arbitrary
// smooth centre map, via Richardson-extrapolated central differences
struct JacobianCoefficients {
    double A = 0.0, B = 0.0, C = 0.0;
};
using OmegaMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
JacobianCoefficients jacobian_coefficients(const OmegaMap& omega_map, const Eigen::VectorXd& y);

// |JPhi(y,t)*(1 - t y2) - (A t^2 - B t + C)| with JPhi obtained by finite
// differences of Phi(y,t) = (omega(y) - grad_y psi(t;y), t) for the
// counterexample psi
double jacobian_companion_residual(const OmegaMap& omega_map, const Eigen::VectorXd& y, double t);

// max over curve samples of |x2 - t x1 - (c - t ybar1)| for the fan of
// BourgainStar tubes with directions (ybar1, y2), y2 on a delta lattice, and
// omega = (0, c); values at solver tolerance certify that the fan lies in a
// 2-surface
double star_fan_witness(double ybar1, double c, double delta, int samples);

} // namespace ckl
