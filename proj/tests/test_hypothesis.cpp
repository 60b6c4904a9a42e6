#include "doctest.h"

#include <cmath>

#include "ckl/hypothesis.hpp"
#include "ckl/rng.hpp"

using namespace ckl;

namespace {

AnalyticFn poly_fn(std::vector<double> coeffs, const std::string& label) {
    AnalyticFn f;
    f.label = label;
    f.jets = [coeffs](double s, std::size_t order) {
        TSeries t = TSeries::variable(order, s);
        TSeries acc(order, 0.0);
        TSeries power = TSeries::constant(order, 1.0);
        for (double c : coeffs) {
            acc = acc + c * power;
            power = power * t;
        }
        return acc;
    };
    return f;
}

AnalyticFn sin_fn() {
    AnalyticFn f;
    f.label = "sin";
    f.jets = [](double s, std::size_t order) { return ts_sin(TSeries::variable(order, s)); };
    return f;
}

AnalyticFn cos_fn() {
    AnalyticFn f;
    f.label = "cos";
    f.jets = [](double s, std::size_t order) { return ts_cos(TSeries::variable(order, s)); };
    return f;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("wronskian basics") {
    FunctionFamily fam;
    fam.members = {poly_fn({1}, "1"), poly_fn({0, 1}, "t"), poly_fn({0, 0, 1}, "t2")};
    for (double t : {-0.7, 0.0, 0.4}) CHECK(wronskian(fam, t) == doctest::Approx(2.0));

    FunctionFamily dep;
    dep.members = {poly_fn({0, 1}, "t"), poly_fn({0, 2}, "2t")};
    for (double t : {-0.5, 0.1, 0.8}) CHECK(wronskian(dep, t) == doctest::Approx(0.0));

    FunctionFamily trig;
    trig.members = {sin_fn(), cos_fn()};
    CHECK(wronskian(trig, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("taylor rank basics") {
    FunctionFamily fam;
    fam.members = {poly_fn({0, 1}, "t"), poly_fn({0, 0, 1}, "t2")};
    CHECK(taylor_rank(fam, 0.0, 2) == 2);

    FunctionFamily dep;
    dep.members = {poly_fn({0, 1}, "t"), poly_fn({0, 2}, "2t")};
    CHECK(taylor_rank(dep, 0.0, 3) == 1);

    FunctionFamily basis;
    basis.members = {poly_fn({1}, "1"), poly_fn({0, 1}, "t"), poly_fn({0, 0, 1}, "t2"),
                     poly_fn({0, 0, 0, 1}, "t3")};
    CHECK(taylor_rank(basis, 0.3, 5) == 4);
}

TEST_CASE("minor index pairs for the 2x2 case") {
    auto proper = minor_index_pairs({0, 1}, {0, 1}, true);
    CHECK(proper.size() == 4);
    auto all = minor_index_pairs({0, 1}, {0, 1}, false);
    CHECK(all.size() == 5);
}

TEST_CASE("hypothesis I verdicts for the builtins") {
    HypothesisReport hc = check_hypothesis_I(PhaseSpec::const_coeff(), 12, 800, 257, 1e-8, 1);
    CHECK(hc.verdict == Verdict::Holds);
    CHECK(hc.exceptional_fraction < 0.01);

    HypothesisReport hs = check_hypothesis_I(PhaseSpec::bourgain_star(), 12, 800, 257, 1e-8, 1);
    CHECK(hs.verdict == Verdict::Fails);
    CHECK(hs.exceptional_fraction > 0.99);

    HypothesisReport hx = check_hypothesis_I(PhaseSpec::counterexample(), 12, 800, 257, 1e-8, 1);
    CHECK(hx.verdict == Verdict::Fails);
}

TEST_CASE("counterexample dependence witness") {
    // det = (-1/y2) g11 + (1/y2) g22 identically in t
    PhaseSpec p = PhaseSpec::counterexample();
    Eigen::VectorXd y = vec2(0.3, 0.35);
    for (double t : {-0.4, -0.1, 0.2, 0.45}) {
        Eigen::MatrixXd H = p.hess_yy(Eigen::VectorXd::Zero(2), t, y);
        double lhs = H.determinant();
        double rhs = (-1.0 / y[1]) * H(0, 0) + (1.0 / y[1]) * H(1, 1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("weak hypothesis I verdicts") {
    CHECK(check_weak_hypothesis_I(PhaseSpec::counterexample()).verdict == Verdict::Holds);
    CHECK(check_weak_hypothesis_I(PhaseSpec::bourgain_star()).verdict == Verdict::Fails);
    CHECK(check_weak_hypothesis_I(PhaseSpec::const_coeff()).verdict == Verdict::Holds);
}

TEST_CASE("hypothesis II verdicts with constant rank 2") {
    HypothesisReport hs = check_hypothesis_II(PhaseSpec::bourgain_star(), 6, 12, 128, 1e-8, 1);
    CHECK(hs.verdict == Verdict::Holds);
    CHECK(hs.rank == 2);
    CHECK(hs.rank_constant);

    HypothesisReport hc = check_hypothesis_II(PhaseSpec::const_coeff(), 6, 12, 128, 1e-8, 1);
    CHECK(hc.verdict == Verdict::Holds);
    CHECK(hc.rank == 2);
    CHECK(hc.rank_constant);
}

TEST_CASE("injected constant defeats the span test") {
    FunctionFamily fam;
    fam.members = {poly_fn({1}, "1"), poly_fn({0, 1}, "t")};
    CHECK(constant_in_truncated_span(fam, 0.0, 4, 1e-8));
    FunctionFamily no_const;
    no_const.members = {poly_fn({0, 1}, "t"), poly_fn({0, 0, 1}, "t2")};
    CHECK_FALSE(constant_in_truncated_span(no_const, 0.0, 4, 1e-8));
}

TEST_CASE("Bocher consistency on seeded analytic families") {
    // dependent families: last member a combination of the others;
    // independent families: random polynomials plus a trig pair
    Rng rng(2024);
    int agreements = 0;
    const int total = 20;
    for (int trial = 0; trial < total; ++trial) {
        bool make_dependent = trial < 10;
        FunctionFamily fam;
        int m = 3;
        std::vector<std::vector<double>> coeffs;
        for (int j = 0; j < m - 1; ++j) {
            std::vector<double> c(5, 0.0);
            for (auto& v : c) v = rng.uniform(-2.0, 2.0);
            coeffs.push_back(c);
            fam.members.push_back(poly_fn(c, "p"));
        }
        if (make_dependent) {
            double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
            std::vector<double> c(5, 0.0);
            for (int i = 0; i < 5; ++i) c[i] = a * coeffs[0][i] + b * coeffs[1][i];
            fam.members.push_back(poly_fn(c, "combo"));
        } else {
            std::vector<double> c(7, 0.0);
            c[5] = 1.0 + rng.next_double();
            c[6] = rng.uniform(-1.0, 1.0);
            fam.members.push_back(poly_fn(c, "highdeg"));
        }

        // Wronskian-zero verdict on a sampled grid
        double wmax = 0.0;
        for (int i = 0; i <= 64; ++i) {
            double t = -0.9 + 1.8 * i / 64;
            wmax = std::max(wmax, std::abs(wronskian(fam, t)));
        }
        bool wron_dependent = wmax < 1e-8;
        // rank deficiency with d >= 2m
        bool rank_dependent = taylor_rank(fam, 0.1, 2 * m + 2) < m;
        if (wron_dependent == rank_dependent &&
            wron_dependent == make_dependent) ++agreements;
    }
    CHECK(agreements == total);
}

TEST_CASE("hypothesis I invariance under scaling and relabeling") {
    // star-like psi as an explicit polynomial: t y1 y2 + t^2/2 y2^2
    Polynomial psi(3, {{{1, 1, 1}, 1.0}, {{2, 0, 2}, 0.5}});
    Polynomial psi_scaled = psi.scaled(3.5);
    Polynomial psi_swapped(3, {{{1, 1, 1}, 1.0}, {{2, 2, 0}, 0.5}}); // y1 <-> y2
    auto verdict = [](const Polynomial& q) {
        return check_hypothesis_I(PhaseSpec::translation_invariant_poly(3, q), 12, 400, 257, 1e-8, 7)
            .verdict;
    };
    Verdict base = verdict(psi);
    CHECK(base == Verdict::Fails);
    CHECK(verdict(psi_scaled) == base);
    CHECK(verdict(psi_swapped) == base);

    // and for a phase where the hypothesis holds
    Polynomial good(3, {{{1, 2, 0}, 1.0}, {{1, 0, 2}, 1.0}});
    Polynomial good_scaled = good.scaled(0.25);
    CHECK(verdict(good) == Verdict::Holds);
    CHECK(verdict(good_scaled) == Verdict::Holds);
}

TEST_CASE("residual and rank dependence tests agree on builtins") {
    for (auto phase :
         {PhaseSpec::const_coeff(), PhaseSpec::bourgain_star(), PhaseSpec::counterexample()}) {
        HypothesisReport rep = check_hypothesis_I(phase, 12, 500, 257, 1e-8, 3);
        CHECK(rep.cross_check_disagreements == 0);
    }
}
