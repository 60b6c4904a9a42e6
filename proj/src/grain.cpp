#include "ckl/grain.hpp"

#include <cmath>

#include "ckl/curve.hpp"
#include "ckl/rng.hpp"

namespace ckl {

ImplicitSurface surface_from_polynomial(const Polynomial& p) {
    std::vector<Polynomial> partials;
    for (int i = 0; i < p.vars(); ++i) partials.push_back(p.derivative(i));
    ImplicitSurface s;
    s.value = [p](const Eigen::VectorXd& x) { return p.eval(x); };
    s.gradient = [partials](const Eigen::VectorXd& x) {
        Eigen::VectorXd g(partials.size());
        for (std::size_t i = 0; i < partials.size(); ++i) g[i] = partials[i].eval(x);
        return g;
    };
    s.in_chart = [](const Eigen::VectorXd&) { return true; };
    return s;
}

Grain make_polynomial_grain(const std::vector<Polynomial>& polys, double delta, double rho,
                            const Eigen::VectorXd& center) {
    if (!(delta > 0.0 && delta <= rho && rho <= 1.0))
        throw PreconditionError("grain requires 0 < delta <= rho <= 1");
    Grain g;
    for (const auto& p : polys) {
        if (p.zero()) throw ZeroPolynomialError("grain polynomial is identically zero");
        g.surfaces.push_back(surface_from_polynomial(p));
    }
    g.polys = polys;
    g.delta = delta;
    g.rho = rho;
    g.center = center;
    return g;
}

Grain make_log_surface_grain(double delta, double rho, const Eigen::VectorXd& center) {
    if (!(delta > 0.0 && delta <= rho && rho <= 1.0))
        throw PreconditionError("grain requires 0 < delta <= rho <= 1");
    Grain g;
    ImplicitSurface s;
    s.value = [](const Eigen::VectorXd& x) { return x[1] - std::log(x[0]); };
    s.gradient = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd gr(3);
        gr << -1.0 / x[0], 1.0, 0.0;
        return gr;
    };
    s.in_chart = [](const Eigen::VectorXd& x) { return x[0] > 1e-6; };
    g.surfaces.push_back(std::move(s));
    g.delta = delta;
    g.rho = rho;
    g.center = center;
    return g;
}

bool grain_membership(const Grain& grain, const Eigen::VectorXd& point) {
    if ((point - grain.center).norm() > grain.rho) return false;
    for (const auto& s : grain.surfaces) {
        if (!s.in_chart(point)) return false;
        double v = std::abs(s.value(point));
        double gnorm = s.gradient(point).norm();
        if (v > grain.delta * std::max(gnorm, 1e-6)) return false;
    }
    return true;
}

double transversality_floor(const Grain& grain, const Box& box, int samples, std::uint64_t seed) {
    const int m = grain.codim();
    const int n = box.dim();
    Rng rng(seed);
    double floor = std::numeric_limits<double>::infinity();
    int found = 0;
    for (int it = 0; it < samples * 200 && found < samples; ++it) {
        Eigen::VectorXd p(n);
        for (int i = 0; i < n; ++i) p[i] = rng.uniform(box.lo[i], box.hi[i]);
        if (!grain_membership(grain, p)) continue;
        ++found;
        Eigen::MatrixXd G(m, n);
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXd gr = grain.surfaces[j].gradient(p);
            if (gr.norm() < 1e-12) return 0.0;
            G.row(j) = gr / gr.norm();
        }
        floor = std::min(floor, (G * G.transpose()).determinant());
    }
    return found > 0 ? floor : 0.0;
}

double tube_grain_fraction(const PhaseSpec& phase, const Tube& tube, const Grain& grain, int t_samples,
                           int cross_samples) {
    if (t_samples < 64) throw PreconditionError("t_samples must be >= 64");
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    const double delta = tube.delta;

    // cross-section pattern: centre plus two rings, radius <= 0.85 delta
    std::vector<Eigen::VectorXd> offs;
    offs.push_back(Eigen::VectorXd::Zero(m));
    int inner = std::max(1, (cross_samples - 1) / 3);
    int outer = cross_samples - 1 - inner;
    for (int k = 0; k < inner; ++k) {
        double a = 2.0 * M_PI * k / inner;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        v[0] = 0.4 * delta * std::cos(a);
        if (m > 1) v[1] = 0.4 * delta * std::sin(a);
        offs.push_back(v);
    }
    for (int k = 0; k < outer; ++k) {
        double a = 2.0 * M_PI * (k + 0.5) / outer;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        v[0] = 0.85 * delta * std::cos(a);
        if (m > 1) v[1] = 0.85 * delta * std::sin(a);
        offs.push_back(v);
    }

    std::int64_t inside = 0, total = 0;
    Eigen::VectorXd p(m + 1);
    for (int i = 0; i < t_samples; ++i) {
        double t = -rho + 2.0 * rho * (i + 0.5) / t_samples;
        CurvePoint cp = solve_psi(phase, tube.omega, t, tube.y);
        for (const auto& off : offs) {
            p.head(m) = cp.x + off;
            p[m] = t;
            if (grain_membership(grain, p)) ++inside;
            ++total;
        }
    }
    return static_cast<double>(inside) / static_cast<double>(total);
}

int nonconcentration_count(const TubeFamily& family, const Grain& grain, double lambda, int t_samples,
                           int cross_samples) {
    if (lambda > 1.0) return 0;
    if (!(lambda >= family.delta && lambda <= grain.rho))
        throw PreconditionError("lambda must lie in [delta, rho]");
    std::vector<int> hits(family.tubes.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(family.tubes.size()); ++k) {
        double frac = tube_grain_fraction(family.phase, family.tubes[static_cast<std::size_t>(k)], grain,
                                          t_samples, cross_samples);
        hits[static_cast<std::size_t>(k)] = frac >= lambda ? 1 : 0;
    }
    int count = 0;
    for (int h : hits) count += h;
    return count;
}

ScalingFit neighborhood_volume_fit(const std::vector<Polynomial>& polys,
                                   const std::vector<double>& deltas, const Box& box) {
    std::vector<std::pair<double, double>> pts;
    const int n = box.dim();
    Eigen::VectorXd center = 0.5 * (box.lo + box.hi);
    for (double delta : deltas) {
        double measure;
        if (polys.empty()) {
            measure = box.volume(); // codimension 0: the whole box
        } else {
            Grain grain = make_polynomial_grain(polys, delta, 1.0, center);
            GridField field(box, delta / 2.0);
            const auto& dims = field.dims();
            std::int64_t slab = field.cells() / dims[0];
#pragma omp parallel for schedule(dynamic)
            for (int i0 = 0; i0 < dims[0]; ++i0) {
                std::vector<int> iv(n, 0);
                iv[0] = i0;
                for (std::int64_t r = 0; r < slab; ++r) {
                    Eigen::VectorXd c = field.cell_center(iv);
                    if (grain_membership(grain, c))
                        field.at_index(i0 * slab + r) = 1.0f;
                    for (int i = n - 1; i >= 1; --i) {
                        if (++iv[i] < dims[i]) break;
                        iv[i] = 0;
                    }
                }
            }
            measure = union_measure(field);
        }
        pts.emplace_back(delta, measure);
    }
    return fit_scaling(pts);
}

} // namespace ckl
