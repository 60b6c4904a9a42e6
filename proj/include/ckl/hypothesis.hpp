#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ckl/phase.hpp"
#include "ckl/taylor.hpp"

namespace ckl {

// one member of an analytic family: produces Taylor jets at any centre, which
// carry both values and derivative stacks
struct AnalyticFn {
    std::function<TSeries(double s, std::size_t order)> jets;
    std::string label;

    double value(double t) const { return jets(t, 0).value(); }
    double derivative(double t, int k) const { return jets(t, static_cast<std::size_t>(k)).derivative(k); }
};

struct FunctionFamily {
    std::vector<AnalyticFn> members;
};

// determinant of the m x m derivative matrix (g_j^{(i)}(t))_{0<=i<m}
double wronskian(const FunctionFamily& funcs, double t);

// numerical rank of the (d+1) x m matrix b_{i,j}(s) = g_j^{(i)}(s)/i!
int taylor_rank(const FunctionFamily& funcs, double s, int d, double tol = 1e-8);

// minor-index pairs (alpha', beta') with 0 < |alpha'| = |beta'|, over subsets
// of the given row/column index sets
struct MinorIndex {
    std::vector<int> rows, cols;
};
std::vector<MinorIndex> minor_index_pairs(const std::vector<int>& alpha, const std::vector<int>& beta,
                                          bool proper_only);

// family of curve-evaluated Hessian minors g_{alpha',beta'}(t; omega; y); for
// Hypothesis I use omega = 0 (translation-invariant phases are x-free here).
// The first member is the full (alpha,beta) determinant.
FunctionFamily hessian_minor_family(const PhaseSpec& phase, const Eigen::VectorXd& omega,
                                    const Eigen::VectorXd& y);

enum class Hypothesis { KakeyaI, NikodymII, WeakI };
enum class Verdict { Holds, Fails, Inconclusive };

std::string to_string(Hypothesis h);
std::string to_string(Verdict v);

struct HypothesisReport {
    Hypothesis hypothesis = Hypothesis::KakeyaI;
    int samples = 0;
    double exceptional_fraction = 0.0;
    std::vector<double> per_sample_residuals;
    Verdict verdict = Verdict::Inconclusive;
    int rank = -1;             // constant rank when defined
    bool rank_constant = false;
    int cross_check_disagreements = 0;
    std::uint64_t seed = 0;
};

Verdict verdict_from_fraction(double fraction);

// least-squares coefficients of f against the columns of G on a grid, with a
// small ridge for conditioning
Eigen::VectorXd least_squares_mu(const Eigen::VectorXd& f, const Eigen::MatrixXd& G,
                                 double ridge = 1e-12);

// Kakeya non-compression: for sampled y, is det[hess_yy phi(0,.;y)] a linear
// combination of its proper minors on I_phi?
HypothesisReport check_hypothesis_I(const PhaseSpec& phase, int d = 12, int y_samples = 10000,
                                    int t_points = 257, double tol = 1e-8, std::uint64_t seed = 1);

// same dependence test at the single point y = 0
HypothesisReport check_weak_hypothesis_I(const PhaseSpec& phase, double tol = 1e-8);

// Nikodym non-compression: a) the constant 1 against degree-d Taylor
// truncations of the minors; b) constant rank of the D-row coefficient matrix
HypothesisReport check_hypothesis_II(const PhaseSpec& phase, int d = 6, int D = 12, int samples = 256,
                                     double tol = 1e-8, std::uint64_t seed = 1);

// part a) primitive, exposed for synthetic families: is the constant 1 in the
// span of the degree-d truncations at centre s?
bool constant_in_truncated_span(const FunctionFamily& funcs, double s, int d, double tol,
                                int t_points = 257, double half_width = 0.5);

} // namespace ckl
