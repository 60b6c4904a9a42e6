#include "doctest.h"

#include <cmath>

#include "ckl/compression.hpp"
#include "ckl/grain.hpp"
#include "ckl/rng.hpp"

using namespace ckl;

namespace {

Polynomial sphere_poly(double r2) {
    // |x|^2 - r2 in three variables
    return Polynomial(3, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}, {{0, 0, 0}, -r2}});
}

Eigen::Vector3d v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

} // namespace

TEST_CASE("membership on the sphere grain") {
    Grain g = make_polynomial_grain({sphere_poly(0.25)}, 0.05, 1.0, Eigen::Vector3d::Zero());
    CHECK(grain_membership(g, v3(0.5, 0, 0)));   // on the zero set
    CHECK_FALSE(grain_membership(g, v3(0, 0, 0))); // |P| = 0.25 exceeds the proxy bound
    CHECK(grain_membership(g, v3(0.52, 0, 0)));
    CHECK_FALSE(grain_membership(g, v3(0.6, 0, 0)));
}

TEST_CASE("hyperplane membership is bit-for-bit the slab test") {
    Polynomial plane(3, {{{0, 0, 1}, 1.0}}); // x3
    Grain g = make_polynomial_grain({plane}, 0.03, 1.0, Eigen::Vector3d::Zero());
    Rng rng(8);
    for (int k = 0; k < 2000; ++k) {
        Eigen::Vector3d p(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7), rng.uniform(-0.1, 0.1));
        bool expect = (p.norm() <= 1.0) && (std::abs(p[2]) <= 0.03);
        CHECK(grain_membership(g, p) == expect);
    }
}

TEST_CASE("transversality floor is positive for the sphere") {
    Grain g = make_polynomial_grain({sphere_poly(0.25)}, 0.05, 1.0, Eigen::Vector3d::Zero());
    Box box;
    box.lo = Eigen::VectorXd::Constant(3, -0.7);
    box.hi = Eigen::VectorXd::Constant(3, 0.7);
    CHECK(transversality_floor(g, box, 100) > 1e-8);
}

TEST_CASE("tube grain fraction extremes") {
    PhaseSpec p = PhaseSpec::counterexample();
    double d = 1.0 / 32;
    Eigen::VectorXd y(2);
    y << 0.6, 0.6;
    Tube tube{y, counterexample_omega(y), d};

    // grain around the surface that carries the core curve
    Grain mg = make_log_surface_grain(2.0 * d, 1.0, v3(1.0, -0.1, 0.0));
    CHECK(tube_grain_fraction(p, tube, mg) >= 0.9);

    // far-away grain
    Grain far = make_polynomial_grain({sphere_poly(0.01)}, d, 0.2, v3(-0.9, 0.9, 0.0));
    CHECK(tube_grain_fraction(p, tube, far) == 0.0);
}

TEST_CASE("hyperplane crossing fraction matches the 1d crossing length") {
    // vertical tube of the const phase crossing the slab t = 0
    PhaseSpec p = PhaseSpec::const_coeff();
    double d = 1.0 / 32;
    Tube tube{Eigen::Vector2d(0, 0).eval(), Eigen::Vector2d(0, 0).eval(), d};
    Polynomial tplane(3, {{{0, 0, 1}, 1.0}});
    Grain g = make_polynomial_grain({tplane}, d, 1.0, Eigen::Vector3d::Zero());
    double frac = tube_grain_fraction(p, tube, g, 256, 16);
    double expect = 2.0 * d / (2.0 * p.rho());
    CHECK(frac >= 0.5 * expect);
    CHECK(frac <= 2.0 * expect);
}

TEST_CASE("nonconcentration counting") {
    PhaseSpec p = PhaseSpec::counterexample();
    double d = 1.0 / 16;
    TubeFamily fam = build_family(p, d, Separation::Direction, CentreRule::CounterexampleOmega);
    Grain mg = make_log_surface_grain(d, 1.0, v3(1.05, -0.25, 0.0));

    CHECK(nonconcentration_count(fam, mg, 1.5) == 0); // lambda > 1
    int at_half = nonconcentration_count(fam, mg, 0.5);
    CHECK(at_half == static_cast<int>(fam.tubes.size())); // total concentration

    // monotone decreasing in lambda
    int strict = nonconcentration_count(fam, mg, 0.95);
    CHECK(strict <= at_half);

    // monotone nondecreasing under grain delta-inflation
    Grain fat = make_log_surface_grain(2.0 * d, 1.0, v3(1.05, -0.25, 0.0));
    CHECK(nonconcentration_count(fam, fat, 0.5) >= at_half);
}

TEST_CASE("straight tubes avoid a generic hyperplane grain") {
    PhaseSpec p = PhaseSpec::const_coeff();
    double d = 1.0 / 64;
    TubeFamily fam = build_family(p, d, Separation::Direction, CentreRule::FixedZero);
    // generic tilted hyperplane through an offset
    Polynomial plane(3, {{{1, 0, 0}, 0.36}, {{0, 1, 0}, 0.48}, {{0, 0, 1}, 0.8}, {{0, 0, 0}, -0.05}});
    Grain g = make_polynomial_grain({plane}, d, 1.0, Eigen::Vector3d::Zero());
    int count = nonconcentration_count(fam, g, 0.5);
    CHECK(count <= static_cast<int>(0.1 * fam.tubes.size()));
}

TEST_CASE("wongkew slopes for sphere circle and full box") {
    Box box;
    box.lo = Eigen::VectorXd::Constant(3, -0.66);
    box.hi = Eigen::VectorXd::Constant(3, 0.66);
    std::vector<double> deltas = {1.0 / 8, 1.0 / 16, 1.0 / 32};

    ScalingFit sphere = neighborhood_volume_fit({sphere_poly(0.25)}, deltas, box);
    CHECK(sphere.slope == doctest::Approx(1.0).epsilon(0.1));
    // oracle: sphere area times slab height, 4 pi r^2 * 2 delta
    for (const auto& [d, m] : sphere.points)
        CHECK(m == doctest::Approx(4.0 * M_PI * 0.25 * 2.0 * d).epsilon(0.25));

    Polynomial circle(3, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 0}, -0.25}});
    Polynomial plane(3, {{{0, 0, 1}, 1.0}});
    ScalingFit circ = neighborhood_volume_fit({circle, plane}, deltas, box);
    CHECK(circ.slope == doctest::Approx(2.0).epsilon(0.075));

    ScalingFit full = neighborhood_volume_fit({}, deltas, box);
    CHECK(full.slope == doctest::Approx(0.0));
}
