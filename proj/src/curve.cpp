#include "ckl/curve.hpp"

#include <cmath>

#include "ckl/errors.hpp"

namespace ckl {

CurvePoint solve_psi_newton(const PhaseSpec& phase, const Eigen::VectorXd& omega, double t,
                            const Eigen::VectorXd& y, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
    Eigen::VectorXd x = omega;
    Eigen::VectorXd res = phase.grad_y(x, t, y) - omega;
    double rnorm = res.norm();
    for (int it = 0; it < 50; ++it) {
        if (rnorm <= tol) {
            CurvePoint cp;
            cp.x = x;
            cp.t = t;
            cp.residual = rnorm;
            return cp;
        }
        Eigen::MatrixXd J = phase.hess_xy(x, t, y).transpose(); // d(grad_y phi)/dx
        if (std::abs(J.determinant()) < 1e-12)
            throw SingularJacobianError("solve_psi: |det hess_xy| < 1e-12");
        Eigen::VectorXd step = J.partialPivLu().solve(res);
        double scale = 1.0;
        while (scale >= 1.0 / 1024.0) {
            Eigen::VectorXd xn = x - scale * step;
            Eigen::VectorXd rn = phase.grad_y(xn, t, y) - omega;
            if (rn.norm() < rnorm) {
                x = xn;
                res = rn;
                rnorm = rn.norm();
                break;
            }
            scale *= 0.5;
        }
        if (scale < 1.0 / 1024.0) break;
    }
    if (rnorm <= tol) {
        CurvePoint cp;
        cp.x = x;
        cp.t = t;
        cp.residual = rnorm;
        return cp;
    }
    throw NoConvergenceError("solve_psi: Newton did not converge in 50 iterations");
}

CurvePoint solve_psi(const PhaseSpec& phase, const Eigen::VectorXd& omega, double t,
                     const Eigen::VectorXd& y, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
    if (phase.translation_invariant()) {
        CurvePoint cp;
        cp.x = omega - phase.grad_y_psi(t, y);
        cp.t = t;
        cp.residual = (phase.grad_y(cp.x, t, y) - omega).norm();
        return cp;
    }
    return solve_psi_newton(phase, omega, t, y, tol);
}

Eigen::VectorXd curve_point(const PhaseSpec& phase, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& omega, double t) {
    CurvePoint cp = solve_psi(phase, omega, t, y, 1e-10);
    Eigen::VectorXd p(phase.n());
    p.head(phase.n() - 1) = cp.x;
    p[phase.n() - 1] = t;
    return p;
}

bool tube_membership(const PhaseSpec& phase, const Eigen::VectorXd& y, const Eigen::VectorXd& omega,
                     double delta, const Eigen::VectorXd& x, double t) {
    CurvePoint cp = solve_psi(phase, omega, t, y, 1e-10);
    return (x - cp.x).norm() < delta;
}

} // namespace ckl
