#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ckl/hypothesis.hpp"
#include "ckl/maximal.hpp"

namespace ckl {

// grid sublevel measure: (cell volume) * #{|F| < sigma}
double sublevel_measure(const std::vector<double>& abs_values, double sigma, double cell_volume);

struct VdcReport {
    std::vector<std::pair<double, double>> sigma_measure;
    double worst_ratio = 0.0; // max measure / sigma^{1/k}
};

// van der Corput instance check for u with u^{(k)} >= 1 on [a, b]. Measures
// are computed by piecewise-monotone root isolation, so they stay exact down
// to sigma values far below any grid resolution.
VdcReport van_der_corput_check(const AnalyticFn& u, int k, double a, double b,
                               const std::vector<double>& sigmas);

// exact 1d measure of {t in [a,b] : |u(t)| < sigma} by root isolation
double sublevel_measure_1d(const std::function<double(double)>& u, double a, double b, double sigma);

struct DerivativeFloor {
    int k = 0;
    double floor = 0.0;
};

// min over [-1,1] of |P^{(k)}(t)|, maximised over k; the floor dominates
// c_d * (sum_i |P^{(i)}(s)|^2)^{1/2} for the recorded per-degree constants
DerivativeFloor poly_derivative_floor(const std::vector<double>& coeffs, double s);

// recorded lower bound for floor / coefficient-norm at each degree; computed
// by dense minimisation over seeded coefficient samples (see the calibration
// test)
double poly_floor_constant(int degree);

// least-squares adversary: mu minimising sum_t |f(t) - sum_j mu_j g_j(t)|^2
// over the grid, normal equations with ridge 1e-12
Eigen::VectorXd adversarial_mu(const Eigen::VectorXd& f_values, const Eigen::MatrixXd& g_values);

enum class SublevelMode { Averaged, Slice };

// analytic ensemble {f, g_1..g_m} on I x Y
struct Ensemble {
    std::string id;
    int y_dim = 1;
    Box y_box;                     // sampling box for y
    double t_half_width = 0.5;     // I = [-w, w]
    std::function<double(double, const Eigen::VectorXd&)> f;
    std::vector<std::function<double(double, const Eigen::VectorXd&)>> g;
    // optional batch evaluator filling all g_j at once
    std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)> g_all;
    std::size_t members() const { return g_all ? g_count : g.size(); }
    std::size_t g_count = 0; // used with g_all
};

// the paper-style worked ensembles and the phase-minor ensemble
Ensemble ensemble_t2_ty();         // f = t^2, g = t*y
Ensemble ensemble_t2_degenerate(); // f = t^2, g = t^2 y^2 + t y^3
Ensemble ensemble_phase_minors(const PhaseSpec& phase); // f = 1, g = Hessian minors

struct SublevelProfile {
    std::vector<double> sigmas;
    std::vector<double> measures;
    double fitted_kappa = 0.0;
    double fitted_C = 0.0;
    double fit_residual = 0.0;
    SublevelMode mode = SublevelMode::Averaged;
    bool power_law = false;
    bool saturated = false; // some slice reached the full interval
    std::string ensemble_id;
};

SublevelProfile kappa_experiment(const Ensemble& ensemble, SublevelMode mode,
                                 const std::vector<double>& sigmas, int y_samples = 512,
                                 int t_points = 32768, std::uint64_t seed = 1);

// default sigma ladder 2^{-2} .. 2^{-20}
std::vector<double> default_sigma_ladder();

} // namespace ckl
