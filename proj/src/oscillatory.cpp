#include "ckl/oscillatory.hpp"

#include <cmath>

#include "ckl/rng.hpp"

namespace ckl {

namespace {

struct Grid1D {
    std::vector<double> nodes;
    std::vector<double> weights; // trapezoid
    double dy = 0.0;
};

Grid1D make_grid(double r, double target_spacing) {
    Grid1D g;
    int K = std::max(8, static_cast<int>(std::ceil(2.0 * r / target_spacing)));
    g.dy = 2.0 * r / K;
    g.nodes.resize(K + 1);
    g.weights.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        g.nodes[k] = -r + k * g.dy;
        g.weights[k] = (k == 0 || k == K) ? 0.5 * g.dy : g.dy;
    }
    return g;
}

void check_pre(const PhaseSpec& phase, double lambda, double y_spacing) {
    if (!(lambda >= 4.0 && lambda <= 64.0)) throw PreconditionError("lambda must lie in [4, 64]");
    if (y_spacing > 1.0 / (8.0 * lambda) + 1e-15)
        throw NyquistError("y-grid spacing must be <= 1/(8 lambda)");
    if (phase.n() != 3 && !phase.translation_invariant())
        throw PreconditionError("oscillatory quadrature supports n = 3 and translation-invariant kinds");
}

} // namespace

namespace reference {

std::complex<double> oscillatory_sum(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda,
                                     const YFunction& f, const Eigen::VectorXd& x, double t,
                                     double y_spacing) {
    const int m = phase.n() - 1;
    Grid1D g = make_grid(amp.support_radius, y_spacing);
    const int K = static_cast<int>(g.nodes.size());
    std::vector<int> iv(m, 0);
    std::complex<double> acc(0.0, 0.0);
    Eigen::VectorXd y(m);
    const Eigen::VectorXd xs = x / lambda;
    const double ts = t / lambda;
    while (true) {
        double w = 1.0;
        for (int i = 0; i < m; ++i) {
            y[i] = g.nodes[iv[i]];
            w *= g.weights[iv[i]];
        }
        double af = amp.xt_factor(xs, ts) * amp.y_factor(y);
        if (af != 0.0) {
            double ph = lambda * phase.value(xs, ts, y);
            acc += w * af * f(y) * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        int i = m - 1;
        for (; i >= 0; --i) {
            if (++iv[i] < K) break;
            iv[i] = 0;
        }
        if (i < 0) break;
    }
    return acc;
}

} // namespace reference

OscField apply_extension(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda,
                         const YFunction& f, const std::vector<OscPoint>& spatial_points,
                         double y_spacing) {
    check_pre(phase, lambda, y_spacing);
    const int m = phase.n() - 1;
    OscField field;
    field.points = spatial_points;
    field.lambda = lambda;
    field.y_spacing = y_spacing;
    field.values.resize(spatial_points.size());
    field.bounds.resize(spatial_points.size());

    Grid1D g = make_grid(amp.support_radius, y_spacing);
    const int K = static_cast<int>(g.nodes.size());

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(spatial_points.size()); ++p) {
        const auto& pt = spatial_points[static_cast<std::size_t>(p)];
        std::complex<double> val =
            reference::oscillatory_sum(phase, amp, lambda, f, pt.x, pt.t, y_spacing);
        // triangle-inequality bound int |a f|
        std::vector<int> iv(m, 0);
        double bound = 0.0;
        Eigen::VectorXd y(m);
        const Eigen::VectorXd xs = pt.x / lambda;
        const double ts = pt.t / lambda;
        while (true) {
            double w = 1.0;
            for (int i = 0; i < m; ++i) {
                y[i] = g.nodes[iv[i]];
                w *= g.weights[iv[i]];
            }
            bound += w * std::abs(amp.xt_factor(xs, ts) * amp.y_factor(y) * f(y));
            int i = m - 1;
            for (; i >= 0; --i) {
                if (++iv[i] < K) break;
                iv[i] = 0;
            }
            if (i < 0) break;
        }
        field.values[static_cast<std::size_t>(p)] = val;
        field.bounds[static_cast<std::size_t>(p)] = bound;
        if (std::abs(val) > bound + 1e-9)
            throw Error("oscillatory value exceeded its triangle-inequality bound");
    }
    return field;
}

OscField apply_propagator(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda,
                          const YFunction& fhat, const std::vector<OscPoint>& spatial_points,
                          double y_spacing) {
    return apply_extension(phase, amp, lambda, fhat, spatial_points, y_spacing);
}

namespace {

// separated lattice evaluator for translation-invariant phases in n = 3:
// S(x,t) = a_xt(x/l, t/l) * sum_{k,l} E1(x1,k) A_t(k,l) E1(x2,l)
class LatticeEvaluator {
  public:
    LatticeEvaluator(const PhaseSpec& phase, const AmplitudeSpec& amp, double lambda, double y_spacing)
        : phase_(phase), amp_(amp), lambda_(lambda), grid_(make_grid(amp.support_radius, y_spacing)) {
        const double rho = phase.rho();
        x_nodes_ = axis_nodes(lambda);
        t_nodes_ = axis_nodes(lambda * rho);
        const int X = static_cast<int>(x_nodes_.size());
        const int K = static_cast<int>(grid_.nodes.size());
        E_.resize(X, K);
        for (int i = 0; i < X; ++i)
            for (int k = 0; k < K; ++k) {
                double ph = x_nodes_[i] * grid_.nodes[k];
                E_(i, k) = std::complex<double>(std::cos(ph), std::sin(ph));
            }
    }

    static std::vector<double> axis_nodes(double half_extent) {
        std::vector<double> v;
        int n = static_cast<int>(std::floor(half_extent / 0.5));
        for (int i = -n; i <= n; ++i) v.push_back(0.5 * i);
        return v;
    }

    // accumulate the L^q norm over the lattice restricted to |x| <= lambda,
    // and the max modulus; F(k,l) are the f-values on the y-grid
    void norms(const Eigen::MatrixXcd& F, double q, double* lq_out, double* max_out) const {
        const int X = static_cast<int>(x_nodes_.size());
        const int K = static_cast<int>(grid_.nodes.size());
        const int T = static_cast<int>(t_nodes_.size());
        std::vector<double> part_q(T, 0.0), part_max(T, 0.0);

        // weighted f with the y bump, fixed across slabs
        Eigen::MatrixXcd WF(K, K);
        Eigen::VectorXd y(2);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l) {
                y << grid_.nodes[k], grid_.nodes[l];
                WF(k, l) = grid_.weights[k] * grid_.weights[l] * amp_.y_factor(y) * F(k, l);
            }

#pragma omp parallel for schedule(dynamic)
        for (int it = 0; it < T; ++it) {
            double t = t_nodes_[it];
            double ts = t / lambda_;
            Eigen::MatrixXcd A(K, K);
            Eigen::VectorXd y2(2);
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < K; ++l) {
                    y2 << grid_.nodes[k], grid_.nodes[l];
                    double ph = lambda_ * phase_.psi(ts, y2);
                    A(k, l) = WF(k, l) * std::complex<double>(std::cos(ph), std::sin(ph));
                }
            Eigen::MatrixXcd S = E_ * A * E_.transpose();
            double at = amp_.bump1(ts, amp_.support_radius);
            double acc = 0.0, mx = 0.0;
            for (int i = 0; i < X; ++i) {
                double ax1 = amp_.bump1(x_nodes_[i] / lambda_, amp_.support_radius);
                for (int j = 0; j < X; ++j) {
                    if (x_nodes_[i] * x_nodes_[i] + x_nodes_[j] * x_nodes_[j] > lambda_ * lambda_)
                        continue;
                    double ax2 = amp_.bump1(x_nodes_[j] / lambda_, amp_.support_radius);
                    double v = std::abs(S(i, j)) * ax1 * ax2 * at;
                    acc += std::pow(v, q);
                    mx = std::max(mx, v);
                }
            }
            part_q[it] = acc;
            part_max[it] = mx;
        }
        double total = 0.0, mx = 0.0;
        for (int it = 0; it < T; ++it) {
            total += part_q[it];
            mx = std::max(mx, part_max[it]);
        }
        *lq_out = std::pow(total * 0.125, 1.0 / q); // cell volume (1/2)^3
        *max_out = mx;
    }

    const Grid1D& grid() const { return grid_; }

  private:
    const PhaseSpec& phase_;
    const AmplitudeSpec& amp_;
    double lambda_;
    Grid1D grid_;
    std::vector<double> x_nodes_, t_nodes_;
    Eigen::MatrixXcd E_;
};

double grid_function_norm(const Grid1D& g, const Eigen::MatrixXcd& F, double p) {
    const int K = static_cast<int>(g.nodes.size());
    if (std::isinf(p)) {
        double mx = 0.0;
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l) mx = std::max(mx, std::abs(F(k, l)));
        return mx;
    }
    double acc = 0.0;
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l)
            acc += g.weights[k] * g.weights[l] * std::pow(std::abs(F(k, l)), p);
    return std::pow(acc, 1.0 / p);
}

// deterministic per-node sign, independent of traversal order
double node_sign(std::uint64_t seed, int k, int l) {
    Rng rng(seed ^ (static_cast<std::uint64_t>(k) * 6151u + static_cast<std::uint64_t>(l) + 1u));
    return rng.sign();
}

} // namespace

OscExperiment norm_scaling_experiment(const PhaseSpec& phase, double q,
                                      const std::vector<double>& lambdas, OscSuite suite, OscMode mode,
                                      double p_in, std::uint64_t seed) {
    if (!(q >= 2.0 && q <= 6.0)) throw PreconditionError("q must lie in [2, 6]");
    for (double l : lambdas)
        if (!(l >= 8.0 && l <= 64.0)) throw PreconditionError("lambda ladder must lie in [8, 64]");
    if (!phase.translation_invariant())
        throw PreconditionError("ladder experiments require a translation-invariant phase");

    AmplitudeSpec amp;
    amp.support_radius = phase.rho();

    OscExperiment exp;
    std::vector<std::pair<double, double>> fit_pts;

    // quadrature convergence gate: grid doubling at the largest lambda <= 32
    {
        double lg = 8.0;
        for (double l : lambdas)
            if (l <= 32.0) lg = std::max(lg, l);
        double dy = 1.0 / (8.0 * lg);
        Halton seq(3, 11);
        auto f1 = [](const Eigen::VectorXd&) { return std::complex<double>(1.0, 0.0); };
        for (int s = 0; s < 16; ++s) {
            auto u = seq.next();
            Eigen::VectorXd x(2);
            x << lg * (2.0 * u[0] - 1.0) * 0.4, lg * (2.0 * u[1] - 1.0) * 0.4;
            double t = lg * phase.rho() * (2.0 * u[2] - 1.0) * 0.8;
            std::complex<double> a = reference::oscillatory_sum(phase, amp, lg, f1, x, t, dy);
            std::complex<double> b = reference::oscillatory_sum(phase, amp, lg, f1, x, t, dy / 2.0);
            double scale = std::max(1e-12, std::abs(b));
            if (std::abs(a - b) / scale > 1e-6)
                throw NyquistError("quadrature convergence gate failed: refine the y-grid");
        }
    }

    for (double lambda : lambdas) {
        double dy = 1.0 / (8.0 * lambda);
        LatticeEvaluator eval(phase, amp, lambda, dy);
        const Grid1D& g = eval.grid();
        const int K = static_cast<int>(g.nodes.size());

        std::vector<Eigen::MatrixXcd> fs;
        if (suite == OscSuite::ConstantOne) {
            fs.push_back(Eigen::MatrixXcd::Ones(K, K));
        } else if (suite == OscSuite::CapFunctions) {
            for (double scale : {1.0, 2.0}) {
                double r = scale / std::sqrt(lambda);
                Eigen::MatrixXcd F(K, K);
                AmplitudeSpec cap;
                for (int k = 0; k < K; ++k)
                    for (int l = 0; l < K; ++l) {
                        double b = cap.bump1(g.nodes[k], r) * cap.bump1(g.nodes[l], r);
                        F(k, l) = std::complex<double>(b, 0.0);
                    }
                fs.push_back(std::move(F));
            }
        } else {
            Eigen::MatrixXcd F(K, K);
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < K; ++l) F(k, l) = std::complex<double>(node_sign(seed, k, l), 0.0);
            fs.push_back(std::move(F));
        }

        double best = 0.0;
        for (const auto& F : fs) {
            double out_norm = 0.0, out_max = 0.0;
            double in_norm = 0.0;
            if (mode == OscMode::Hormander) {
                eval.norms(F, q, &out_norm, &out_max);
                in_norm = grid_function_norm(g, F, p_in);
            } else {
                // LocalSmoothing: the input is fhat; recover f on the y-grid
                // by the separated inverse transform and take its L^q norm
                eval.norms(F, q, &out_norm, &out_max);
                Eigen::MatrixXcd Einv(K, K);
                for (int k = 0; k < K; ++k)
                    for (int l = 0; l < K; ++l) {
                        double ph = g.nodes[k] * g.nodes[l];
                        Einv(k, l) = std::complex<double>(std::cos(ph), std::sin(ph));
                    }
                Eigen::MatrixXcd W = F;
                for (int k = 0; k < K; ++k)
                    for (int l = 0; l < K; ++l) W(k, l) *= g.weights[k] * g.weights[l];
                Eigen::MatrixXcd fv = Einv * W * Einv.transpose() / (4.0 * M_PI * M_PI);
                in_norm = grid_function_norm(g, fv, q);
            }
            if (in_norm <= 0.0) continue; // skip zero inputs
            best = std::max(best, out_norm / in_norm);
        }
        exp.rows.push_back({lambda, q, best});
        if (best > 0.0) fit_pts.emplace_back(lambda, best);
    }
    exp.fit = fit_scaling(fit_pts);
    return exp;
}

} // namespace ckl
