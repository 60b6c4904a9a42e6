#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ckl/grid.hpp"
#include "ckl/phase.hpp"

namespace ckl {

// log-log least-squares fit: value ~ C * scale^slope
struct ScalingFit {
    std::vector<std::pair<double, double>> points; // (scale, value)
    double slope = 0.0;
    double intercept = 0.0; // log C
    double max_residual = 0.0;
};

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& pairs);

// lattice of spacing `spacing` over the box, optionally filtered
std::vector<Eigen::VectorXd> lattice_points(const Box& box, double spacing,
                                            const std::function<bool(const Eigen::VectorXd&)>& filter = {});

struct TubeSampling {
    int t_samples = 64;
    int cross_samples = 16;
};

// grid average of |g| over the delta-tube with direction y and centre omega,
// via t-samples on I_phi and cross-section disc samples of radius <= 0.85 delta
double tube_average(const PhaseSpec& phase, const Eigen::VectorXd& y, const Eigen::VectorXd& omega,
                    double delta, const SampledField& g, const TubeSampling& sampling = {});

// K^delta g on the given direction lattice, sup over the centre lattice;
// parallel over directions
std::vector<double> kakeya_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                   const std::vector<Eigen::VectorXd>& y_points,
                                   const std::vector<Eigen::VectorXd>& omega_points,
                                   const TubeSampling& sampling = {});

// convenience form matching the operator definition: lattices of the given
// spacings over Y_phi and Omega_phi
std::vector<double> kakeya_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                   double y_grid_spacing, double omega_search_spacing,
                                   std::vector<Eigen::VectorXd>* y_points_out = nullptr);

// N^delta g on the given centre lattice, sup over the direction lattice
std::vector<double> nikodym_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                    const std::vector<Eigen::VectorXd>& omega_points,
                                    const std::vector<Eigen::VectorXd>& y_points,
                                    const TubeSampling& sampling = {});

std::vector<double> nikodym_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                    double omega_grid_spacing, double y_search_spacing,
                                    std::vector<Eigen::VectorXd>* omega_points_out = nullptr);

namespace reference {
// single-threaded re-implementation kept as the comparison oracle
std::vector<double> kakeya_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                   const std::vector<Eigen::VectorXd>& y_points,
                                   const std::vector<Eigen::VectorXd>& omega_points,
                                   const TubeSampling& sampling = {});
} // namespace reference

// discrete L^s norm of values on a lattice of the given spacing in dim d
double lattice_lp_norm(const std::vector<double>& values, double spacing, int dim, double p);

enum class TestSuite { NeighborhoodOfSurface, SingleTube, RandomFields };

// best ratio ||K^delta g||_{L^s} / ||g||_{L^p} over the suite; a certified
// lower bound for the discrete operator norm (the centre search may be
// restricted to a window around a known near-optimal centre)
double operator_norm_lower(const PhaseSpec& phase, double delta, double p, double s, TestSuite suite,
                           std::uint64_t seed = 1);

// Nikodym analogue
double nikodym_norm_lower(const PhaseSpec& phase, double delta, double p, double s, TestSuite suite,
                          std::uint64_t seed = 1);

} // namespace ckl
