#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ckl/maximal.hpp"
#include "ckl/phase.hpp"

namespace ckl {

// smooth compactly supported cutoff, a product of 1d bumps (1 - (s/r)^2)^4
struct AmplitudeSpec {
    enum class Kind { TensorBump, CapRestricted };
    Kind kind = Kind::TensorBump;
    double support_radius = 0.5;   // matches the phase's rho
    Eigen::VectorXd cap_center;    // CapRestricted only
    double cap_radius = 0.125;

    double bump1(double s, double r) const {
        double u = s / r;
        double w = 1.0 - u * u;
        if (w <= 0.0) return 0.0;
        double w2 = w * w;
        return w2 * w2;
    }
    // x,t part of a(x,t;y); separates from the y part
    double xt_factor(const Eigen::VectorXd& x, double t) const {
        double v = bump1(t, support_radius);
        for (int i = 0; i < x.size(); ++i) v *= bump1(x[i], support_radius);
        return v;
    }
    double y_factor(const Eigen::VectorXd& y) const {
        double v = 1.0;
        if (kind == Kind::CapRestricted) {
            for (int i = 0; i < y.size(); ++i) v *= bump1(y[i] - cap_center[i], cap_radius);
        } else {
            for (int i = 0; i < y.size(); ++i) v *= bump1(y[i], support_radius);
        }
        return v;
    }
};

struct OscPoint {
    Eigen::VectorXd x;
    double t = 0.0;
};

struct OscField {
    std::vector<OscPoint> points;
    std::vector<std::complex<double>> values;
    std::vector<double> bounds; // per-point triangle-inequality bound
    double lambda = 1.0;
    double y_spacing = 0.0;
};

using YFunction = std::function<std::complex<double>(const Eigen::VectorXd&)>;

// trapezoid quadrature of int e^{i phi^lambda} a^lambda f dy at each point,
// phi^lambda(x,t;y) = lambda * phi(x/lambda, t/lambda; y)
OscField apply_extension(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda,
                         const YFunction& f, const std::vector<OscPoint>& spatial_points,
                         double y_spacing);

// the propagator form: the input is taken directly as fhat on the frequency
// grid, so the quadrature is identical to the extension operator
OscField apply_propagator(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda,
                          const YFunction& fhat, const std::vector<OscPoint>& spatial_points,
                          double y_spacing);

enum class OscSuite { ConstantOne, CapFunctions, RandomSigns };
enum class OscMode { Hormander, LocalSmoothing };

struct OscLadderRow {
    double lambda = 0.0;
    double q = 0.0;
    double ratio = 0.0;
};

struct OscExperiment {
    ScalingFit fit;
    std::vector<OscLadderRow> rows;
};

// Hormander mode: max over the suite of ||S^lambda f||_{L^q} / ||f||_{p_in}
// on the spacing-1/2 lattice over B(0,lambda) x [-lambda rho, lambda rho];
// LocalSmoothing mode: ||U^lambda f||_{L^q} / ||f||_{L^q}. A quadrature
// convergence gate (grid doubling) runs before the ladder.
OscExperiment norm_scaling_experiment(const PhaseSpec& phase, double q,
                                      const std::vector<double>& lambdas, OscSuite suite, OscMode mode,
                                      double p_in = 2.0, std::uint64_t seed = 1);

namespace reference {
// direct per-point quadrature, kept as the comparison oracle for the
// separated lattice evaluator
std::complex<double> oscillatory_sum(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda,
                                     const YFunction& f, const Eigen::VectorXd& x, double t,
                                     double y_spacing);
} // namespace reference

} // namespace ckl
