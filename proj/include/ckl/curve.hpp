#pragma once

#include <Eigen/Dense>

#include "ckl/phase.hpp"

namespace ckl {

struct CurvePoint {
    Eigen::VectorXd x; // length n-1
    double t = 0.0;
    double residual = 0.0; // |grad_y phi(x,t;y) - omega|
};

// Solve grad_y phi(x,t;y) = omega for x. Translation-invariant phases use the
// exact closed form x = omega - grad_y psi(t;y); otherwise Newton from
// x0 = omega with step halving when the residual fails to decrease.
CurvePoint solve_psi(const PhaseSpec& phase, const Eigen::VectorXd& omega, double t,
                     const Eigen::VectorXd& y, double tol = 1e-10);

// Newton route regardless of kind; kept separate so tests can compare it
// against the closed form.
CurvePoint solve_psi_newton(const PhaseSpec& phase, const Eigen::VectorXd& omega, double t,
                            const Eigen::VectorXd& y, double tol = 1e-10);

// the graph point (gamma_{y,omega}(t), t) in R^n
Eigen::VectorXd curve_point(const PhaseSpec& phase, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& omega, double t);

// true iff |x - gamma_{y,omega}(t)| < delta for the point (x, t)
bool tube_membership(const PhaseSpec& phase, const Eigen::VectorXd& y, const Eigen::VectorXd& omega,
                     double delta, const Eigen::VectorXd& x, double t);

} // namespace ckl
