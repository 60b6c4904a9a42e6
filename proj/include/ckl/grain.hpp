#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ckl/grid.hpp"
#include "ckl/maximal.hpp"
#include "ckl/polynomial.hpp"
#include "ckl/tube_family.hpp"

namespace ckl {

// one implicit surface P_j = 0 with its gradient; polynomial in the JSON
// interchange case, or a general smooth evaluator (the log-graph surface)
struct ImplicitSurface {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    // false when the evaluator's chart does not cover the point
    std::function<bool(const Eigen::VectorXd&)> in_chart;
};

ImplicitSurface surface_from_polynomial(const Polynomial& p);

// grain G = N_delta Z(P_1..P_m) \cap B(center, rho), codimension m
struct Grain {
    std::vector<ImplicitSurface> surfaces;
    std::vector<Polynomial> polys; // retained when polynomial-backed
    double delta = 0.0;
    double rho = 1.0;
    Eigen::VectorXd center;

    int codim() const { return static_cast<int>(surfaces.size()); }
};

Grain make_polynomial_grain(const std::vector<Polynomial>& polys, double delta, double rho,
                            const Eigen::VectorXd& center);

// grain around the t-invariant surface x2 = log x1 in R^3
Grain make_log_surface_grain(double delta, double rho, const Eigen::VectorXd& center);

// first-order membership proxy: in the rho-ball and, for each j,
// |P_j(x)| <= delta * max(|grad P_j(x)|, 1e-6); exact for hyperplanes and
// O(delta^2 * curvature) otherwise
bool grain_membership(const Grain& grain, const Eigen::VectorXd& point);

// sampled gradient Gram determinant floor on near-zero-set points; the
// transverse-complete-intersection spot check
double transversality_floor(const Grain& grain, const Box& box, int samples, std::uint64_t seed = 1);

// fraction of (t, cross-section) tube samples lying inside the grain
double tube_grain_fraction(const PhaseSpec& phase, const Tube& tube, const Grain& grain,
                           int t_samples = 64, int cross_samples = 16);

// #{T in family : tube_grain_fraction >= lambda}
int nonconcentration_count(const TubeFamily& family, const Grain& grain, double lambda,
                           int t_samples = 64, int cross_samples = 16);

// grid measure of the membership-proxy neighbourhood per delta, with the
// fitted slope to compare against the codimension
ScalingFit neighborhood_volume_fit(const std::vector<Polynomial>& polys,
                                   const std::vector<double>& deltas, const Box& box);

} // namespace ckl
