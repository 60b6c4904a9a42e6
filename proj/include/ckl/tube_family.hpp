#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ckl/grid.hpp"
#include "ckl/phase.hpp"

namespace ckl {

struct Tube {
    Eigen::VectorXd y;     // direction
    Eigen::VectorXd omega; // centre
    double delta = 0.0;
};

enum class Separation { Direction, Centre, None };

enum class CentreRule { FixedZero, CounterexampleOmega, RandomSeeded };

struct TubeFamily {
    PhaseSpec phase;
    std::vector<Tube> tubes;
    Separation separation = Separation::None;
    double delta = 0.0;
};

// Directions (resp. centres) on a lattice of spacing 2*delta inside Y_phi
// (resp. Omega_phi); the free coordinate is assigned by the centre rule. The
// CounterexampleOmega rule restricts directions to the compact region
// Y_circ = {y1, y2 >= 1/2, |y| <= 9/10} and sets omega = (y1/y2, log(y1/y2)).
TubeFamily build_family(const PhaseSpec& phase, double delta, Separation separation, CentreRule rule,
                        std::uint64_t seed = 0);

// bounding box of the family's core curves padded by delta + h, axes ordered
// (t, x_1, .., x_{n-1})
Box family_bounding_box(const TubeFamily& family, double pad);

// multiplicity field: value at a cell = number of tubes whose core curve
// passes within delta of the cell centre at the cell's t. Parallel over
// t-slabs; slabs are disjoint so the merge is trivially deterministic.
GridField rasterize_multiplicity(const TubeFamily& family, double h);

namespace reference {
// single-threaded re-implementation kept as the comparison oracle
GridField rasterize_multiplicity(const TubeFamily& family, double h);
} // namespace reference

} // namespace ckl
