#include "doctest.h"

#include <cmath>

#include "ckl/phase.hpp"
#include "ckl/phase_json.hpp"
#include "ckl/rng.hpp"

using namespace ckl;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

// central-difference oracle
template <typename F>
double fd(F&& f, double v, double h = 1e-5) {
    return (f(v + h) - f(v - h)) / (2.0 * h);
}

std::vector<PhaseSpec> builtin_phases() {
    std::vector<PhaseSpec> ps;
    ps.push_back(PhaseSpec::const_coeff());
    ps.push_back(PhaseSpec::bourgain_star());
    ps.push_back(PhaseSpec::counterexample());
    // psi = t*y1^2*y2 + t^2*y1 (vars ordered t, y1, y2)
    ps.push_back(PhaseSpec::translation_invariant_poly(
        3, Polynomial(3, {{{1, 2, 1}, 1.0}, {{2, 1, 0}, 1.0}})));
    // custom phi = x1 y1 + x2 y2 + t y1^2 + t y2^2 + x1 t y2 (vars x1,x2,t,y1,y2)
    ps.push_back(PhaseSpec::custom(3, Polynomial(5, {{{1, 0, 0, 1, 0}, 1.0},
                                                     {{0, 1, 0, 0, 1}, 1.0},
                                                     {{0, 0, 1, 2, 0}, 1.0},
                                                     {{0, 0, 1, 0, 2}, 1.0},
                                                     {{1, 0, 1, 0, 1}, 1.0}})));
    return ps;
}

} // namespace

TEST_CASE("const coeff value by direct substitution") {
    PhaseSpec p = PhaseSpec::const_coeff();
    CHECK(p.value(vec2(1, 0), 0.5, vec2(1, 1)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("counterexample Hessian closed form") {
    PhaseSpec p = PhaseSpec::counterexample();
    Eigen::MatrixXd H = p.hess_yy(vec2(0, 0), 0.3, vec2(0.6, 0.6));
    CHECK(H(0, 0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(H(1, 1) == doctest::Approx(0.3 / (1.0 - 0.18)).epsilon(1e-13));
    CHECK(H(0, 1) == doctest::Approx(0.0));
    CHECK(H.determinant() == doctest::Approx(0.09 / 0.82).epsilon(1e-13));
}

TEST_CASE("star phase Hessian is A(t)") {
    // oracle: by-hand differentiation of (1/2)<A(t)y, y>
    PhaseSpec p = PhaseSpec::bourgain_star();
    Rng rng(7);
    for (int k = 0; k < 16; ++k) {
        double t = rng.uniform(-0.5, 0.5);
        Eigen::VectorXd x = vec2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        Eigen::VectorXd y = vec2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        Eigen::MatrixXd H = p.hess_yy(x, t, y);
        CHECK(H(0, 0) == doctest::Approx(0.0));
        CHECK(H(0, 1) == doctest::Approx(t));
        CHECK(H(1, 0) == doctest::Approx(t));
        CHECK(H(1, 1) == doctest::Approx(t * t));
        CHECK(H.determinant() == doctest::Approx(-t * t).epsilon(1e-12));
    }
}

TEST_CASE("analytic derivatives match central differences on random domain points") {
    for (const auto& phase : builtin_phases()) {
        Rng rng(42);
        const int m = phase.n() - 1;
        int checked = 0;
        while (checked < 1000) {
            Eigen::VectorXd x(m), y(m);
            for (int i = 0; i < m; ++i) {
                x[i] = rng.uniform(-0.4, 0.4);
                y[i] = rng.uniform(-0.4, 0.4);
            }
            double t = rng.uniform(-0.4, 0.4);
            if (x.norm() > 0.45 || y.norm() > 0.45) continue;
            ++checked;

            Eigen::VectorXd g = phase.grad_y(x, t, y);
            Eigen::MatrixXd Hyy = phase.hess_yy(x, t, y);
            Eigen::MatrixXd Hxy = phase.hess_xy(x, t, y);
            Eigen::VectorXd dtg = phase.dt_grad_y(x, t, y);
            for (int i = 0; i < m; ++i) {
                double gi = fd([&](double v) {
                    Eigen::VectorXd yy = y;
                    yy[i] = v;
                    return phase.value(x, t, yy);
                }, y[i]);
                CHECK(std::abs(g[i] - gi) <= 1e-6 * std::max(1.0, std::abs(gi)));
                for (int j = 0; j < m; ++j) {
                    double hij = fd([&](double v) {
                        Eigen::VectorXd yy = y;
                        yy[j] = v;
                        return phase.grad_y(x, t, yy)[i];
                    }, y[j]);
                    CHECK(std::abs(Hyy(i, j) - hij) <= 1e-6 * std::max(1.0, std::abs(hij)));
                    double xij = fd([&](double v) {
                        Eigen::VectorXd xx = x;
                        xx[i] = v;
                        return phase.grad_y(xx, t, y)[j];
                    }, x[i]);
                    CHECK(std::abs(Hxy(i, j) - xij) <= 1e-6 * std::max(1.0, std::abs(xij)));
                }
                double di = fd([&](double v) { return phase.grad_y(x, v, y)[i]; }, t);
                CHECK(std::abs(dtg[i] - di) <= 1e-6 * std::max(1.0, std::abs(di)));
            }
        }
    }
}

TEST_CASE("gauss map for the const phase") {
    // oracle: cross product of (1,0,2y1) and (0,1,2y2)
    PhaseSpec p = PhaseSpec::const_coeff();
    Eigen::VectorXd g0 = gauss_map(p, vec2(0, 0), 0.1, vec2(0, 0));
    CHECK(g0[0] == doctest::Approx(0.0));
    CHECK(g0[1] == doctest::Approx(0.0));
    CHECK(g0[2] == doctest::Approx(1.0));

    Eigen::VectorXd g1 = gauss_map(p, vec2(0, 0), 0.1, vec2(0.5, 0));
    CHECK(g1[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g1[1] == doctest::Approx(0.0));
    CHECK(g1[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("gauss map output is unit length for every kind") {
    for (const auto& phase : builtin_phases()) {
        Rng rng(3);
        const int m = phase.n() - 1;
        for (int k = 0; k < 200; ++k) {
            Eigen::VectorXd x(m), y(m);
            for (int i = 0; i < m; ++i) {
                x[i] = rng.uniform(-0.3, 0.3);
                y[i] = rng.uniform(-0.3, 0.3);
            }
            double t = rng.uniform(-0.3, 0.3);
            Eigen::VectorXd g = gauss_map(phase, x, t, y);
            CHECK(std::abs(g.norm() - 1.0) < 1e-12);
            CHECK(g[m] >= 0.0);
        }
    }
}

TEST_CASE("eval_jet assembles the full jet") {
    PhaseSpec p = PhaseSpec::counterexample();
    PhaseJet jet = eval_jet(p, vec2(0.1, -0.2), 0.25, vec2(0.3, 0.4));
    CHECK(jet.grad_y.size() == 2);
    CHECK(jet.hess_xy.isApprox(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(std::abs(jet.gauss.norm() - 1.0) < 1e-12);
    CHECK(jet.value == doctest::Approx(p.value(vec2(0.1, -0.2), 0.25, vec2(0.3, 0.4))));
    CHECK_THROWS_AS(eval_jet(p, vec2(0, 0), 0.9, vec2(0.3, 1.2)), DomainError);
}

TEST_CASE("nondegeneracy verdicts for the builtins") {
    NondegeneracyReport rc = verify_nondegeneracy(PhaseSpec::const_coeff(), 200, 1);
    CHECK(rc.H1_ok);
    CHECK(rc.H2_ok);
    CHECK(rc.min_abs_det_hess_xy == doctest::Approx(1.0));
    // curvature form at the centre: oracle = hand computation, det = 4
    Eigen::MatrixXd C = curvature_form(PhaseSpec::const_coeff(), vec2(0.1, 0.2), 0.1, vec2(0, 0));
    CHECK(C.determinant() == doctest::Approx(4.0).epsilon(1e-12));

    NondegeneracyReport rs = verify_nondegeneracy(PhaseSpec::bourgain_star(), 200, 1);
    CHECK(rs.H1_ok);
    CHECK(rs.min_abs_det_hess_xy == doctest::Approx(1.0));

    NondegeneracyReport rx = verify_nondegeneracy(PhaseSpec::counterexample(), 200, 1);
    CHECK(rx.H1_ok);
    CHECK(rx.H2_ok);
}

TEST_CASE("exponent tables at n = 3") {
    ExponentTable e(3);
    CHECK(e.p_crit() == doctest::Approx(2.0));
    CHECK(e.q_crit() == doctest::Approx(4.0));
    CHECK(e.beta(2.0) == doctest::Approx(0.5));
    CHECK(e.s(2.0) == doctest::Approx(4.0));
    CHECK(e.alpha_H(2.0) == doctest::Approx(0.5));
    CHECK(e.alpha_H(4.0) == doctest::Approx(0.0));
    CHECK(e.alpha_LS(4.0) == doctest::Approx(0.5));
    CHECK(e.d_crit() == 2);
    CHECK(e.m_crit() == 1);
    // branch arithmetic for 1 <= p <= p(n)
    CHECK(e.beta(1.5) == doctest::Approx(1.0));
    CHECK(e.s(1.5) == doctest::Approx(6.0));
}

TEST_CASE("exponent branch continuity") {
    for (int n = 2; n <= 5; ++n) {
        ExponentTable e(n);
        double eps = 1e-9;
        CHECK(std::abs(e.beta(e.p_crit() - eps) - e.beta(e.p_crit() + eps)) < 1e-8);
        CHECK(std::abs(e.alpha_H(e.q_crit() - eps) - e.alpha_H(e.q_crit() + eps)) < 1e-8);
        CHECK(e.m_crit() == n - e.d_crit());
    }
}

TEST_CASE("counterexample series tail agrees with the closed form") {
    // 200-term series oracle for psi2 = sum_{j>=2} t^{j-1} y2^j / (j(j-1))
    auto series = [](double t, double y2) {
        double acc = 0.0;
        for (int j = 201; j >= 2; --j)
            acc += std::pow(t, j - 1) * std::pow(y2, j) / (static_cast<double>(j) * (j - 1));
        return acc;
    };
    PhaseSpec p = PhaseSpec::counterexample();
    Rng rng(5);
    for (int k = 0; k < 500; ++k) {
        double t = rng.uniform(-0.95, 0.95);
        double y2 = rng.uniform(-0.94, 0.94);
        if (std::abs(t * y2) > 0.9 || std::abs(t) < 1e-6) continue;
        double via_phase = p.psi(t, vec2(0.0, y2)); // y1 = 0 isolates psi2
        double via_series = series(t, y2);
        CHECK(std::abs(via_phase - via_series) <= 1e-12 * std::max(1.0, std::abs(via_series)));
    }
}

TEST_CASE("hessian jets reproduce t-derivatives of the counterexample minors") {
    // oracle: d^k/dt^k [t/(1-t y2)] = k! y2^{k-1} / (1-t y2)^{k+1} for k >= 1
    PhaseSpec p = PhaseSpec::counterexample();
    double s = 0.2, y2 = 0.6;
    auto H = p.hess_yy_jets(vec2(0, 0), vec2(0.3, y2), s, 6);
    double w = 1.0 - s * y2;
    CHECK(H[1][1].value() == doctest::Approx(s / w).epsilon(1e-13));
    double fact = 1.0;
    for (int k = 1; k <= 5; ++k) {
        fact *= k;
        double expect = fact * std::pow(y2, k - 1) / std::pow(w, k + 1);
        CHECK(H[1][1].derivative(k) == doctest::Approx(expect).epsilon(1e-11));
    }
    CHECK(H[0][0].derivative(1) == doctest::Approx(1.0));
    CHECK(H[0][1].value() == doctest::Approx(0.0));
}

TEST_CASE("custom-kind jets solve the implicit curve") {
    PhaseSpec p = PhaseSpec::custom(3, Polynomial(5, {{{1, 0, 0, 1, 0}, 1.0},
                                                      {{0, 1, 0, 0, 1}, 1.0},
                                                      {{0, 0, 1, 2, 0}, 1.0},
                                                      {{0, 0, 1, 0, 2}, 1.0},
                                                      {{1, 0, 1, 0, 1}, 1.0}}));
    Eigen::VectorXd omega = vec2(0.05, -0.1), y = vec2(0.2, 0.1);
    auto H = p.hess_yy_jets(omega, y, 0.1, 4);
    // finite-difference oracle through a plain Newton solve
    auto entry = [&](double t) {
        Eigen::VectorXd x = omega;
        for (int it = 0; it < 40; ++it) {
            Eigen::VectorXd r = p.grad_y(x, t, y) - omega;
            x -= p.hess_xy(x, t, y).transpose().partialPivLu().solve(r).eval();
        }
        return p.hess_yy(x, t, y)(1, 1);
    };
    double h = 1e-4;
    double d1 = (entry(0.1 + h) - entry(0.1 - h)) / (2.0 * h);
    CHECK(H[1][1].value() == doctest::Approx(entry(0.1)).epsilon(1e-10));
    CHECK(H[1][1].derivative(1) == doctest::Approx(d1).epsilon(1e-6));
}

TEST_CASE("phase JSON round trip and rejection of unknown kinds") {
    nlohmann::json j = phase_to_json(PhaseSpec::counterexample());
    CHECK(j.at("kind") == "Counterexample");
    CHECK(j.at("n") == 3);
    CHECK(j.at("rho") == doctest::Approx(0.5));
    PhaseSpec p = phase_from_json(j);
    CHECK(p.kind() == PhaseKind::Counterexample);

    nlohmann::json bad = {{"kind", "Nope"}, {"n", 3}, {"params", nlohmann::json::object()}, {"rho", 0.5}};
    CHECK_THROWS_AS(phase_from_json(bad), ConfigError);
    nlohmann::json extra = phase_to_json(PhaseSpec::const_coeff());
    extra["junk"] = 1;
    CHECK_THROWS_AS(phase_from_json(extra), ConfigError);
}

TEST_CASE("translation-invariant poly validation") {
    // a term without t violates psi(0;y) = 0
    CHECK_THROWS_AS(PhaseSpec::translation_invariant_poly(3, Polynomial(3, {{{0, 2, 0}, 1.0}})),
                    ConfigError);
}
