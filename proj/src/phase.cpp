#include "ckl/phase.hpp"

#include <cmath>

#include "ckl/rng.hpp"

namespace ckl {

namespace {

// sum_{j>=2} t^{j-1} y2^j / (j(j-1)) = [z + (1-z)log(1-z)]/t with z = t*y2.
// The closed form cancels catastrophically for small z, so we sum the series
// directly on |z| < 0.01 (16 terms reach ~1e-32 there); this also covers the
// removable singularity at t = 0.
double psi2_counterexample(double t, double y2) {
    const double z = t * y2;
    if (std::abs(z) < 0.01) {
        double acc = 0.0, zj = z * z; // z^j starting at j=2
        for (int j = 2; j <= 17; ++j) {
            acc += zj / (static_cast<double>(j) * (j - 1));
            zj *= z;
        }
        return (t == 0.0) ? 0.0 : acc / t;
    }
    return (z + (1.0 - z) * std::log1p(-z)) / t;
}

} // namespace

std::string to_string(PhaseKind k) {
    switch (k) {
        case PhaseKind::ConstCoeff: return "ConstCoeff";
        case PhaseKind::BourgainStar: return "BourgainStar";
        case PhaseKind::Counterexample: return "Counterexample";
        case PhaseKind::TranslationInvariantPoly: return "TranslationInvariantPoly";
        case PhaseKind::Custom: return "Custom";
    }
    return "?";
}

PhaseKind phase_kind_from_string(const std::string& s) {
    if (s == "ConstCoeff") return PhaseKind::ConstCoeff;
    if (s == "BourgainStar") return PhaseKind::BourgainStar;
    if (s == "Counterexample") return PhaseKind::Counterexample;
    if (s == "TranslationInvariantPoly") return PhaseKind::TranslationInvariantPoly;
    if (s == "Custom") return PhaseKind::Custom;
    throw ConfigError("unknown phase kind: " + s);
}

PhaseSpec PhaseSpec::const_coeff(int n, double rho) {
    if (n < 2 || n > 5) throw ConfigError("phase dimension must be in [2,5]");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0,1]");
    return PhaseSpec(PhaseKind::ConstCoeff, n, rho);
}

PhaseSpec PhaseSpec::bourgain_star(int n, double rho) {
    if (n < 3 || n > 5 || n % 2 == 0) throw ConfigError("BourgainStar requires odd n in [3,5]");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0,1]");
    return PhaseSpec(PhaseKind::BourgainStar, n, rho);
}

PhaseSpec PhaseSpec::counterexample(double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0,1]");
    return PhaseSpec(PhaseKind::Counterexample, 3, rho);
}

PhaseSpec PhaseSpec::translation_invariant_poly(int n, Polynomial psi, double rho) {
    if (n < 2 || n > 5) throw ConfigError("phase dimension must be in [2,5]");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0,1]");
    if (psi.vars() != n) throw ConfigError("psi must have n variables ordered (t, y_1..y_{n-1})");
    for (const auto& term : psi.terms())
        if (term.coef != 0.0 && term.exps[0] == 0)
            throw ConfigError("psi(0;y) must vanish: every term needs a positive power of t");
    PhaseSpec p(PhaseKind::TranslationInvariantPoly, n, rho);
    p.poly_ = std::move(psi);
    p.build_poly_caches();
    return p;
}

PhaseSpec PhaseSpec::custom(int n, Polynomial phi, double rho) {
    if (n < 2 || n > 5) throw ConfigError("phase dimension must be in [2,5]");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0,1]");
    if (phi.vars() != 2 * n - 1)
        throw ConfigError("custom phi must have 2n-1 variables ordered (x_1..x_{n-1}, t, y_1..y_{n-1})");
    PhaseSpec p(PhaseKind::Custom, n, rho);
    p.poly_ = std::move(phi);
    p.build_poly_caches();
    return p;
}

void PhaseSpec::build_poly_caches() {
    const int m = n_ - 1;
    if (kind_ == PhaseKind::TranslationInvariantPoly) {
        // variable order (t, y_1..y_m)
        Polynomial psi_t = poly_.derivative(0);
        dpsi_dy_.clear();
        dt_dpsi_dy_.clear();
        for (int i = 0; i < m; ++i) {
            dpsi_dy_.push_back(poly_.derivative(1 + i));
            dt_dpsi_dy_.push_back(dpsi_dy_.back().derivative(0));
        }
        hess_psi_.assign(m, std::vector<Polynomial>(m));
        hess_psi_t_.assign(m, std::vector<Polynomial>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                hess_psi_[i][j] = dpsi_dy_[i].derivative(1 + j);
                hess_psi_t_[i][j] = hess_psi_[i][j].derivative(0);
            }
    } else if (kind_ == PhaseKind::Custom) {
        // variable order (x_1..x_m, t, y_1..y_m)
        dphi_dy_.clear();
        dt_dphi_dy_.clear();
        for (int j = 0; j < m; ++j) {
            dphi_dy_.push_back(poly_.derivative(m + 1 + j));
            dt_dphi_dy_.push_back(dphi_dy_.back().derivative(m));
        }
        hess_xy_p_.assign(m, std::vector<Polynomial>(m));
        hess_yy_p_.assign(m, std::vector<Polynomial>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                hess_xy_p_[i][j] = dphi_dy_[j].derivative(i);
                hess_yy_p_[i][j] = dphi_dy_[j].derivative(m + 1 + i);
            }
        hess_yy_xt_.assign(m + 1, std::vector<std::vector<Polynomial>>(m, std::vector<Polynomial>(m)));
        for (int k = 0; k <= m; ++k) {
            Polynomial dk = poly_.derivative(k == m ? m : k); // d/dx_k or d/dt when k == m
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    hess_yy_xt_[k][i][j] = dk.derivative(m + 1 + i).derivative(m + 1 + j);
        }
    }
}

void PhaseSpec::check_domain(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const {
    if (x.size() != n_ - 1 || y.size() != n_ - 1) throw DomainError("x and y must have length n-1");
    // polynomial-type phases extend to all of R^{2n-1}; only the
    // counterexample series has a genuine domain wall
    if (kind_ == PhaseKind::Counterexample) {
        if (!(std::abs(t) < 1.0)) throw DomainError("t outside the unit interval");
        if (!(y.norm() < 1.0)) throw DomainError("y outside the unit ball");
        if (!(1.0 - t * y[1] > 0.0))
            throw SingularityError("counterexample phase singular: 1 - t*y2 <= 0");
    }
}

double PhaseSpec::psi(double t, const Eigen::VectorXd& y) const {
    switch (kind_) {
        case PhaseKind::ConstCoeff: return t * y.squaredNorm();
        case PhaseKind::BourgainStar: {
            double acc = 0.0;
            for (int k = 0; k + 1 < n_ - 1; k += 2)
                acc += t * y[k] * y[k + 1] + 0.5 * t * t * y[k + 1] * y[k + 1];
            return acc;
        }
        case PhaseKind::Counterexample: return 0.5 * t * y[0] * y[0] + psi2_counterexample(t, y[1]);
        case PhaseKind::TranslationInvariantPoly: {
            Eigen::VectorXd v(n_);
            v[0] = t;
            v.tail(n_ - 1) = y;
            return poly_.eval(v);
        }
        case PhaseKind::Custom: throw DomainError("psi undefined for Custom kind");
    }
    return 0.0;
}

double PhaseSpec::value(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const {
    check_domain(x, t, y);
    if (kind_ == PhaseKind::Custom) {
        Eigen::VectorXd v(2 * n_ - 1);
        v.head(n_ - 1) = x;
        v[n_ - 1] = t;
        v.tail(n_ - 1) = y;
        return poly_.eval(v);
    }
    return x.dot(y) + psi(t, y);
}

Eigen::VectorXd PhaseSpec::grad_y_psi(double t, const Eigen::VectorXd& y) const {
    const int m = n_ - 1;
    Eigen::VectorXd g(m);
    switch (kind_) {
        case PhaseKind::ConstCoeff: return 2.0 * t * y;
        case PhaseKind::BourgainStar:
            for (int k = 0; k + 1 < m; k += 2) {
                g[k] = t * y[k + 1];
                g[k + 1] = t * y[k] + t * t * y[k + 1];
            }
            return g;
        case PhaseKind::Counterexample:
            g[0] = t * y[0];
            g[1] = -std::log1p(-t * y[1]);
            return g;
        case PhaseKind::TranslationInvariantPoly: {
            Eigen::VectorXd v(n_);
            v[0] = t;
            v.tail(m) = y;
            for (int i = 0; i < m; ++i) g[i] = dpsi_dy_[i].eval(v);
            return g;
        }
        case PhaseKind::Custom: throw DomainError("grad_y_psi undefined for Custom kind");
    }
    return g;
}

Eigen::VectorXd PhaseSpec::grad_y(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const {
    check_domain(x, t, y);
    if (kind_ == PhaseKind::Custom) {
        Eigen::VectorXd v(2 * n_ - 1), g(n_ - 1);
        v.head(n_ - 1) = x;
        v[n_ - 1] = t;
        v.tail(n_ - 1) = y;
        for (int j = 0; j < n_ - 1; ++j) g[j] = dphi_dy_[j].eval(v);
        return g;
    }
    return x + grad_y_psi(t, y);
}

Eigen::MatrixXd PhaseSpec::hess_yy(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const {
    check_domain(x, t, y);
    const int m = n_ - 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    switch (kind_) {
        case PhaseKind::ConstCoeff: return 2.0 * t * Eigen::MatrixXd::Identity(m, m);
        case PhaseKind::BourgainStar:
            for (int k = 0; k + 1 < m; k += 2) {
                H(k, k + 1) = H(k + 1, k) = t;
                H(k + 1, k + 1) = t * t;
            }
            return H;
        case PhaseKind::Counterexample:
            H(0, 0) = t;
            H(1, 1) = t / (1.0 - t * y[1]);
            return H;
        case PhaseKind::TranslationInvariantPoly: {
            Eigen::VectorXd v(n_);
            v[0] = t;
            v.tail(m) = y;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) H(i, j) = hess_psi_[i][j].eval(v);
            return H;
        }
        case PhaseKind::Custom: {
            Eigen::VectorXd v(2 * n_ - 1);
            v.head(m) = x;
            v[m] = t;
            v.tail(m) = y;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) H(i, j) = hess_yy_p_[i][j].eval(v);
            return H;
        }
    }
    return H;
}

Eigen::MatrixXd PhaseSpec::hess_xy(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const {
    check_domain(x, t, y);
    const int m = n_ - 1;
    if (kind_ != PhaseKind::Custom) return Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd v(2 * n_ - 1);
    v.head(m) = x;
    v[m] = t;
    v.tail(m) = y;
    Eigen::MatrixXd H(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) H(i, j) = hess_xy_p_[i][j].eval(v);
    return H;
}

Eigen::VectorXd PhaseSpec::dt_grad_y(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const {
    check_domain(x, t, y);
    const int m = n_ - 1;
    Eigen::VectorXd g(m);
    switch (kind_) {
        case PhaseKind::ConstCoeff: return 2.0 * y;
        case PhaseKind::BourgainStar:
            for (int k = 0; k + 1 < m; k += 2) {
                g[k] = y[k + 1];
                g[k + 1] = y[k] + 2.0 * t * y[k + 1];
            }
            return g;
        case PhaseKind::Counterexample:
            g[0] = y[0];
            g[1] = y[1] / (1.0 - t * y[1]);
            return g;
        case PhaseKind::TranslationInvariantPoly: {
            Eigen::VectorXd v(n_);
            v[0] = t;
            v.tail(m) = y;
            for (int i = 0; i < m; ++i) g[i] = dt_dpsi_dy_[i].eval(v);
            return g;
        }
        case PhaseKind::Custom: {
            Eigen::VectorXd v(2 * n_ - 1);
            v.head(m) = x;
            v[m] = t;
            v.tail(m) = y;
            for (int i = 0; i < m; ++i) g[i] = dt_dphi_dy_[i].eval(v);
            return g;
        }
    }
    return g;
}

Eigen::MatrixXd PhaseSpec::hess_yy_of_xt_partial(const Eigen::VectorXd& x, double t,
                                                 const Eigen::VectorXd& y, int i) const {
    check_domain(x, t, y);
    const int m = n_ - 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    if (kind_ == PhaseKind::Custom) {
        Eigen::VectorXd v(2 * n_ - 1);
        v.head(m) = x;
        v[m] = t;
        v.tail(m) = y;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) H(a, b) = hess_yy_xt_[i][a][b].eval(v);
        return H;
    }
    // translation-invariant: d/dx_i phi = y_i has vanishing y-Hessian
    if (i < m) return H;
    switch (kind_) {
        case PhaseKind::ConstCoeff: return 2.0 * Eigen::MatrixXd::Identity(m, m);
        case PhaseKind::BourgainStar:
            for (int k = 0; k + 1 < m; k += 2) {
                H(k, k + 1) = H(k + 1, k) = 1.0;
                H(k + 1, k + 1) = 2.0 * t;
            }
            return H;
        case PhaseKind::Counterexample: {
            const double w = 1.0 - t * y[1];
            H(0, 0) = 1.0;
            H(1, 1) = 1.0 / (w * w);
            return H;
        }
        case PhaseKind::TranslationInvariantPoly: {
            Eigen::VectorXd v(n_);
            v[0] = t;
            v.tail(m) = y;
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) H(a, b) = hess_psi_t_[a][b].eval(v);
            return H;
        }
        default: return H;
    }
}

std::vector<std::vector<TSeries>> PhaseSpec::hess_yy_jets(const Eigen::VectorXd& omega,
                                                          const Eigen::VectorXd& y, double s,
                                                          std::size_t order) const {
    const int m = n_ - 1;
    std::vector<std::vector<TSeries>> H(m, std::vector<TSeries>(m, TSeries(order, 0.0)));
    const TSeries tj = TSeries::variable(order, s);
    switch (kind_) {
        case PhaseKind::ConstCoeff:
            for (int i = 0; i < m; ++i) H[i][i] = 2.0 * tj;
            return H;
        case PhaseKind::BourgainStar:
            for (int k = 0; k + 1 < m; k += 2) {
                H[k][k + 1] = H[k + 1][k] = tj;
                H[k + 1][k + 1] = tj * tj;
            }
            return H;
        case PhaseKind::Counterexample: {
            H[0][0] = tj;
            H[1][1] = tj / (1.0 - y[1] * tj);
            return H;
        }
        case PhaseKind::TranslationInvariantPoly: {
            std::vector<TSeries> args(n_, TSeries(order, 0.0));
            args[0] = tj;
            for (int i = 0; i < m; ++i) args[1 + i] = TSeries::constant(order, y[i]);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) H[i][j] = hess_psi_[i][j].eval_jet(args);
            return H;
        }
        case PhaseKind::Custom: {
            // x(t) = Psi(omega; t; y) as a jet: simplified Newton with the
            // scalar Jacobian at the centre gains at least one correct order
            // per sweep
            std::vector<TSeries> args(2 * n_ - 1, TSeries(order, 0.0));
            args[m] = tj;
            for (int i = 0; i < m; ++i) args[m + 1 + i] = TSeries::constant(order, y[i]);
            Eigen::MatrixXd J0 = hess_xy(omega, s, y);
            if (std::abs(J0.determinant()) < 1e-12)
                throw SingularJacobianError("hess_xy singular at jet expansion point");
            Eigen::MatrixXd J0inv = J0.inverse();
            std::vector<TSeries> xj(m, TSeries(order, 0.0));
            for (int i = 0; i < m; ++i) xj[i] = TSeries::constant(order, omega[i]);
            for (std::size_t sweep = 0; sweep <= order + 2; ++sweep) {
                for (int i = 0; i < m; ++i) args[i] = xj[i];
                std::vector<TSeries> F(m);
                for (int j = 0; j < m; ++j) F[j] = dphi_dy_[j].eval_jet(args) - omega[j];
                for (int i = 0; i < m; ++i) {
                    TSeries upd(order, 0.0);
                    for (int j = 0; j < m; ++j) upd = upd + J0inv(i, j) * F[j];
                    xj[i] = xj[i] - upd;
                }
            }
            for (int i = 0; i < m; ++i) args[i] = xj[i];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) H[i][j] = hess_yy_p_[i][j].eval_jet(args);
            return H;
        }
    }
    return H;
}

namespace {

// wedge of the rows of V ((n-1) x n) via alternating-sign maximal minors
Eigen::VectorXd wedge_rows(const Eigen::MatrixXd& V) {
    const int n = static_cast<int>(V.cols());
    Eigen::VectorXd w(n);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd M(n - 1, n - 1);
        for (int c = 0, cc = 0; c < n; ++c) {
            if (c == k) continue;
            M.col(cc++) = V.col(c);
        }
        w[k] = ((k % 2 == 0) ? 1.0 : -1.0) * M.determinant();
    }
    return w;
}

} // namespace

Eigen::VectorXd gauss_map(const PhaseSpec& phase, const Eigen::VectorXd& x, double t,
                          const Eigen::VectorXd& y) {
    const int m = phase.n() - 1;
    Eigen::MatrixXd V(m, m + 1);
    Eigen::MatrixXd Hxy = phase.hess_xy(x, t, y);
    Eigen::VectorXd dtg = phase.dt_grad_y(x, t, y);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) V(j, i) = Hxy(i, j);
        V(j, m) = dtg[j];
    }
    Eigen::VectorXd g0 = wedge_rows(V);
    const double norm = g0.norm();
    if (norm < 1e-12) throw DegenerateError("Gauss map degenerate: |G0| < 1e-12");
    Eigen::VectorXd g = g0 / norm;
    if (g[m] < 0.0) g = -g;
    return g;
}

Eigen::MatrixXd curvature_form(const PhaseSpec& phase, const Eigen::VectorXd& x, double t,
                               const Eigen::VectorXd& y0) {
    const int m = phase.n() - 1;
    Eigen::VectorXd G = gauss_map(phase, x, t, y0);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i <= m; ++i) {
        if (G[i] == 0.0) continue;
        C += G[i] * phase.hess_yy_of_xt_partial(x, t, y0, i);
    }
    return C;
}

PhaseJet eval_jet(const PhaseSpec& phase, const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) {
    PhaseJet jet;
    jet.value = phase.value(x, t, y);
    jet.grad_y = phase.grad_y(x, t, y);
    jet.hess_yy = phase.hess_yy(x, t, y);
    jet.hess_xy = phase.hess_xy(x, t, y);
    jet.gauss = gauss_map(phase, x, t, y);
    return jet;
}

NondegeneracyReport verify_nondegeneracy(const PhaseSpec& phase, int samples, std::uint64_t seed) {
    if (samples < 1) throw PreconditionError("samples must be >= 1");
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    NondegeneracyReport rep;
    rep.samples = samples;
    rep.min_abs_det_hess_xy = std::numeric_limits<double>::infinity();
    rep.min_abs_det_curvature = std::numeric_limits<double>::infinity();

    Halton seq(2 * m + 1, 1 + seed % 1024);
    auto ball_point = [&](const std::vector<double>& u, int off) {
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i) v[i] = 2.0 * u[off + i] - 1.0;
        // shrink the cube into the ball along rays, preserving determinism
        double nrm = v.norm();
        if (nrm > 1.0) v *= (0.999 / nrm);
        return Eigen::VectorXd(rho * v);
    };
    for (int k = 0; k < samples; ++k) {
        std::vector<double> u = seq.next();
        Eigen::VectorXd xs = ball_point(u, 0);
        double ts = rho * (2.0 * u[m] - 1.0);
        Eigen::VectorXd ys = ball_point(u, m + 1);
        double d1 = std::abs(phase.hess_xy(xs, ts, ys).determinant());
        double d2 = std::abs(curvature_form(phase, xs, ts, ys).determinant());
        rep.min_abs_det_hess_xy = std::min(rep.min_abs_det_hess_xy, d1);
        rep.min_abs_det_curvature = std::min(rep.min_abs_det_curvature, d2);
    }
    rep.H1_ok = rep.min_abs_det_hess_xy > 1e-8;
    rep.H2_ok = rep.min_abs_det_curvature > 1e-8;
    return rep;
}

ExponentTable::ExponentTable(int n) : n_(n) {
    if (n < 2) throw ConfigError("exponent table requires n >= 2");
}

double ExponentTable::beta(double p) const {
    if (p < 1.0) throw DomainError("beta requires p >= 1");
    if (p <= p_crit()) return static_cast<double>(n_) / p - 1.0;
    return 0.5 * (n_ - 1) / p;
}

double ExponentTable::s(double p) const {
    if (p < 1.0) throw DomainError("s requires p >= 1");
    if (p <= p_crit()) {
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return (n_ - 1) * p / (p - 1.0);
    }
    return 2.0 * p;
}

double ExponentTable::alpha_H(double q) const {
    if (q < 2.0) throw DomainError("alpha_H requires q >= 2");
    if (q <= q_crit()) return 0.5 - 0.5 * (n_ + 1) * (0.5 - 1.0 / q);
    return 0.0;
}

double ExponentTable::alpha_LS(double q) const {
    return alpha_H(q) + (n_ - 1) * (0.5 - 1.0 / q);
}

} // namespace ckl
