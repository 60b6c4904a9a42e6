#include "ckl/hypothesis.hpp"

#include <cmath>

#include "ckl/rng.hpp"

namespace ckl {

std::string to_string(Hypothesis h) {
    switch (h) {
        case Hypothesis::KakeyaI: return "KakeyaI";
        case Hypothesis::NikodymII: return "NikodymII";
        case Hypothesis::WeakI: return "WeakI";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Fails: return "Fails";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Verdict verdict_from_fraction(double fraction) {
    if (fraction < 0.01) return Verdict::Holds;
    if (fraction > 0.99) return Verdict::Fails;
    return Verdict::Inconclusive;
}

double wronskian(const FunctionFamily& funcs, double t) {
    const int m = static_cast<int>(funcs.members.size());
    Eigen::MatrixXd W(m, m);
    for (int j = 0; j < m; ++j) {
        TSeries jet = funcs.members[j].jets(t, static_cast<std::size_t>(m - 1));
        double fact = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i >= 2) fact *= static_cast<double>(i);
            W(i, j) = jet[static_cast<std::size_t>(i)] * fact; // g^{(i)} = i! * c_i
        }
    }
    return W.determinant();
}

int taylor_rank(const FunctionFamily& funcs, double s, int d, double tol) {
    const int m = static_cast<int>(funcs.members.size());
    Eigen::MatrixXd B(d + 1, m);
    for (int j = 0; j < m; ++j) {
        TSeries jet = funcs.members[j].jets(s, static_cast<std::size_t>(d));
        for (int i = 0; i <= d; ++i) B(i, j) = jet[static_cast<std::size_t>(i)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * sv[0]) ++r;
    return r;
}

std::vector<MinorIndex> minor_index_pairs(const std::vector<int>& alpha, const std::vector<int>& beta,
                                          bool proper_only) {
    const int ka = static_cast<int>(alpha.size());
    const int kb = static_cast<int>(beta.size());
    std::vector<MinorIndex> out;
    for (int ma = 1; ma < (1 << ka); ++ma)
        for (int mb = 1; mb < (1 << kb); ++mb) {
            if (__builtin_popcount(ma) != __builtin_popcount(mb)) continue;
            if (proper_only && ma == (1 << ka) - 1 && mb == (1 << kb) - 1) continue;
            MinorIndex mi;
            for (int i = 0; i < ka; ++i)
                if (ma & (1 << i)) mi.rows.push_back(alpha[i]);
            for (int i = 0; i < kb; ++i)
                if (mb & (1 << i)) mi.cols.push_back(beta[i]);
            out.push_back(std::move(mi));
        }
    return out;
}

namespace {

TSeries minor_det(const std::vector<std::vector<TSeries>>& H, const std::vector<int>& rows,
                  const std::vector<int>& cols) {
    const std::size_t k = rows.size();
    if (k == 1) return H[rows[0]][cols[0]];
    // Laplace expansion along the first row; sizes here are at most 4
    TSeries acc(H[0][0].order(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<int> sub_rows(rows.begin() + 1, rows.end());
        std::vector<int> sub_cols;
        for (std::size_t c = 0; c < k; ++c)
            if (c != j) sub_cols.push_back(cols[c]);
        TSeries cof = H[rows[0]][cols[j]] * minor_det(H, sub_rows, sub_cols);
        acc = (j % 2 == 0) ? acc + cof : acc - cof;
    }
    return acc;
}

std::vector<int> default_index_set(const PhaseSpec& phase) {
    const int dcrit = ExponentTable(phase.n()).d_crit();
    const int m = phase.n() - 1;
    std::vector<int> idx;
    for (int i = 0; i < std::min(dcrit, m); ++i) idx.push_back(i);
    return idx;
}

// Chebyshev nodes on [-w, w]
std::vector<double> chebyshev_grid(int count, double w) {
    std::vector<double> ts(count);
    for (int i = 0; i < count; ++i) ts[i] = w * std::cos(M_PI * (i + 0.5) / count);
    return ts;
}

struct DependenceResult {
    bool dependent = false;
    double residual = 0.0;
};

// projection residual of f onto the column span of G, via SVD so that exact
// dependences with huge coefficients are still recognised
double span_residual(const Eigen::VectorXd& f, const Eigen::MatrixXd& G) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd mu = svd.solve(f);
    return (f - G * mu).norm();
}

// least-squares residual of fitting f by the span of the g's on a t-grid,
// relative to ||f||
DependenceResult span_dependence(const PhaseSpec& phase, const Eigen::VectorXd& y, int t_points,
                                 double tol) {
    std::vector<int> idx = default_index_set(phase);
    auto pairs = minor_index_pairs(idx, idx, /*proper_only=*/true);
    auto ts = chebyshev_grid(t_points, phase.rho());
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(phase.n() - 1);

    Eigen::VectorXd f(t_points);
    Eigen::MatrixXd G(t_points, static_cast<int>(pairs.size()));
    for (int i = 0; i < t_points; ++i) {
        Eigen::MatrixXd H = phase.hess_yy(x0, ts[i], y);
        Eigen::MatrixXd Hfull(idx.size(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) Hfull(a, b) = H(idx[a], idx[b]);
        f[i] = Hfull.determinant();
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            Eigen::MatrixXd sub(pairs[k].rows.size(), pairs[k].cols.size());
            for (std::size_t a = 0; a < pairs[k].rows.size(); ++a)
                for (std::size_t b = 0; b < pairs[k].cols.size(); ++b)
                    sub(a, b) = H(pairs[k].rows[a], pairs[k].cols[b]);
            G(i, static_cast<int>(k)) = sub.determinant();
        }
    }
    double fnorm = f.norm();
    DependenceResult res;
    if (fnorm == 0.0) {
        res.dependent = true;
        return res;
    }
    res.residual = span_residual(f, G) / fnorm;
    res.dependent = res.residual < tol;
    return res;
}

} // namespace

FunctionFamily hessian_minor_family(const PhaseSpec& phase, const Eigen::VectorXd& omega,
                                    const Eigen::VectorXd& y) {
    std::vector<int> idx = default_index_set(phase);
    auto pairs = minor_index_pairs(idx, idx, /*proper_only=*/false);
    // put the full determinant first
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const MinorIndex& a, const MinorIndex& b) { return a.rows.size() > b.rows.size(); });
    FunctionFamily fam;
    for (const auto& mi : pairs) {
        AnalyticFn fn;
        fn.label = "minor";
        for (int r : mi.rows) fn.label += "_" + std::to_string(r + 1);
        fn.label += ":";
        for (int c : mi.cols) fn.label += "_" + std::to_string(c + 1);
        fn.jets = [phase, omega, y, mi](double s, std::size_t order) {
            auto H = phase.hess_yy_jets(omega, y, s, order);
            return minor_det(H, mi.rows, mi.cols);
        };
        fam.members.push_back(std::move(fn));
    }
    return fam;
}

Eigen::VectorXd least_squares_mu(const Eigen::VectorXd& f, const Eigen::MatrixXd& G, double ridge) {
    Eigen::MatrixXd N = G.transpose() * G;
    N.diagonal().array() += ridge;
    return N.ldlt().solve(G.transpose() * f);
}

HypothesisReport check_hypothesis_I(const PhaseSpec& phase, int d, int y_samples, int t_points,
                                    double tol, std::uint64_t seed) {
    if (!phase.translation_invariant())
        throw PreconditionError("Hypothesis I requires a translation-invariant phase");
    HypothesisReport rep;
    rep.hypothesis = Hypothesis::KakeyaI;
    rep.samples = y_samples;
    rep.seed = seed;
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    Rng rng(seed);
    int exceptional = 0;
    for (int k = 0; k < y_samples; ++k) {
        Eigen::VectorXd y(m);
        do {
            for (int i = 0; i < m; ++i) y[i] = rng.uniform(-rho, rho);
        } while (y.norm() > rho);
        DependenceResult res = span_dependence(phase, y, t_points, tol);
        rep.per_sample_residuals.push_back(res.residual);
        if (res.dependent) ++exceptional;

        // rank cross-check on a small deterministic subsample
        if (k % 97 == 0) {
            FunctionFamily all = hessian_minor_family(phase, Eigen::VectorXd::Zero(m), y);
            FunctionFamily minors_only;
            minors_only.members.assign(all.members.begin() + 1, all.members.end());
            int rg = taylor_rank(minors_only, 0.0, d, tol);
            int rfg = taylor_rank(all, 0.0, d, tol);
            bool rank_dependent = (rfg == rg);
            if (rank_dependent != res.dependent) ++rep.cross_check_disagreements;
        }
    }
    rep.exceptional_fraction = static_cast<double>(exceptional) / y_samples;
    rep.verdict = verdict_from_fraction(rep.exceptional_fraction);
    return rep;
}

HypothesisReport check_weak_hypothesis_I(const PhaseSpec& phase, double tol) {
    if (!phase.translation_invariant())
        throw PreconditionError("Hypothesis w-I requires a translation-invariant phase");
    HypothesisReport rep;
    rep.hypothesis = Hypothesis::WeakI;
    rep.samples = 1;
    DependenceResult res = span_dependence(phase, Eigen::VectorXd::Zero(phase.n() - 1), 257, tol);
    rep.per_sample_residuals.push_back(res.residual);
    rep.exceptional_fraction = res.dependent ? 1.0 : 0.0;
    rep.verdict = verdict_from_fraction(rep.exceptional_fraction);
    return rep;
}

bool constant_in_truncated_span(const FunctionFamily& funcs, double s, int d, double tol, int t_points,
                                double half_width) {
    auto ts = chebyshev_grid(t_points, half_width);
    const int m = static_cast<int>(funcs.members.size());
    Eigen::MatrixXd G(t_points, m);
    for (int j = 0; j < m; ++j) {
        TSeries jet = funcs.members[j].jets(s, static_cast<std::size_t>(d));
        for (int i = 0; i < t_points; ++i) {
            // degree-d truncation evaluated at distance (t - s)
            double u = ts[i] - s, acc = 0.0, up = 1.0;
            for (int q = 0; q <= d; ++q) {
                acc += jet[static_cast<std::size_t>(q)] * up;
                up *= u;
            }
            G(i, j) = acc;
        }
    }
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(t_points);
    double rel = span_residual(ones, G) / ones.norm();
    return rel < tol;
}

HypothesisReport check_hypothesis_II(const PhaseSpec& phase, int d, int D, int samples, double tol,
                                     std::uint64_t seed) {
    if (D < d || d < 2) throw PreconditionError("need D >= d >= 2");
    HypothesisReport rep;
    rep.hypothesis = Hypothesis::NikodymII;
    rep.samples = samples;
    rep.seed = seed;
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    Rng rng(seed);

    int exceptional = 0;
    bool first = true;
    int common_rank = -1;
    bool constant = true;
    for (int k = 0; k < samples; ++k) {
        Eigen::VectorXd omega(m), y(m);
        double s;
        if (k == 0) {
            // always include the centre point with s = 0
            omega.setZero();
            y.setZero();
            s = 0.0;
        } else {
            do {
                for (int i = 0; i < m; ++i) omega[i] = rng.uniform(-rho, rho);
            } while (omega.norm() > rho);
            do {
                for (int i = 0; i < m; ++i) y[i] = rng.uniform(-rho, rho);
            } while (y.norm() > rho);
            s = rng.uniform(-rho, rho);
        }
        FunctionFamily fam = hessian_minor_family(phase, omega, y);
        bool in_span = constant_in_truncated_span(fam, s, d, tol, 257, rho);
        rep.per_sample_residuals.push_back(in_span ? 0.0 : 1.0);
        if (in_span) ++exceptional;

        int r = taylor_rank(fam, s, D, tol);
        if (first) {
            common_rank = r;
            first = false;
        } else if (r != common_rank) {
            constant = false;
        }
    }
    rep.exceptional_fraction = static_cast<double>(exceptional) / samples;
    rep.rank = common_rank;
    rep.rank_constant = constant;
    if (exceptional == 0 && constant)
        rep.verdict = Verdict::Holds;
    else if (rep.exceptional_fraction > 0.99)
        rep.verdict = Verdict::Fails;
    else
        rep.verdict = Verdict::Inconclusive;
    return rep;
}

} // namespace ckl
