#include "ckl/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "ckl/compression.hpp"
#include "ckl/curve.hpp"
#include "ckl/rng.hpp"
#include "ckl/tube_family.hpp"

namespace ckl {

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw PreconditionError("fit_scaling needs at least 3 pairs");
    for (const auto& [s, v] : pairs)
        if (!(s > 0.0) || !(v > 0.0)) throw PreconditionError("fit_scaling needs positive scales and values");
    double s0 = pairs.front().first;
    bool all_equal = true;
    for (const auto& [s, v] : pairs)
        if (s != s0) all_equal = false;
    if (all_equal) throw DegenerateFitError("all scales equal");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pairs.size());
    for (const auto& [s, v] : pairs) {
        double lx = std::log(s), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    ScalingFit fit;
    fit.points = pairs;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    for (const auto& [s, v] : pairs)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(std::log(v) - (fit.slope * std::log(s) + fit.intercept)));
    return fit;
}

std::vector<Eigen::VectorXd> lattice_points(const Box& box, double spacing,
                                            const std::function<bool(const Eigen::VectorXd&)>& filter) {
    const int d = box.dim();
    std::vector<int> dims(d);
    for (int i = 0; i < d; ++i)
        dims[i] = std::max(1, static_cast<int>(std::floor((box.hi[i] - box.lo[i]) / spacing)) + 1);
    std::vector<Eigen::VectorXd> pts;
    std::vector<int> iv(d, 0);
    while (true) {
        Eigen::VectorXd p(d);
        for (int i = 0; i < d; ++i) p[i] = box.lo[i] + iv[i] * spacing;
        if (!filter || filter(p)) pts.push_back(p);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++iv[i] < dims[i]) break;
            iv[i] = 0;
        }
        if (i < 0) break;
    }
    return pts;
}

namespace {

// deterministic cross-section sample offsets, max radius 0.85*delta so grid
// lookups stay inside the tube
std::vector<Eigen::VectorXd> cross_section_offsets(int dim, double delta, int count) {
    std::vector<Eigen::VectorXd> offs;
    if (dim == 1) {
        for (int k = 0; k < count; ++k) {
            Eigen::VectorXd v(1);
            v[0] = (count == 1) ? 0.0 : -0.85 * delta + 1.7 * delta * k / (count - 1);
            offs.push_back(v);
        }
        return offs;
    }
    if (dim == 2) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
        offs.push_back(c);
        int inner = std::max(1, (count - 1) / 3);
        int outer = count - 1 - inner;
        for (int k = 0; k < inner; ++k) {
            double a = 2.0 * M_PI * k / inner;
            Eigen::VectorXd v(2);
            v << 0.4 * delta * std::cos(a), 0.4 * delta * std::sin(a);
            offs.push_back(v);
        }
        for (int k = 0; k < outer; ++k) {
            double a = 2.0 * M_PI * (k + 0.5) / outer;
            Eigen::VectorXd v(2);
            v << 0.85 * delta * std::cos(a), 0.85 * delta * std::sin(a);
            offs.push_back(v);
        }
        return offs;
    }
    Halton seq(dim, 7);
    while (static_cast<int>(offs.size()) < count) {
        auto u = seq.next();
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = 2.0 * u[i] - 1.0;
        if (v.norm() <= 1.0) offs.push_back(0.85 * delta * v);
    }
    return offs;
}

std::vector<double> t_sample_points(double rho, int count) {
    std::vector<double> ts(count);
    for (int i = 0; i < count; ++i) ts[i] = -rho + 2.0 * rho * (i + 0.5) / count;
    return ts;
}

struct TubeGeometry {
    std::vector<double> ts;
    std::vector<Eigen::VectorXd> offsets;
};

double average_over_tube(const PhaseSpec& phase, const Eigen::VectorXd& y, const Eigen::VectorXd& omega,
                         const SampledField& g, const TubeGeometry& geom,
                         const std::vector<Eigen::VectorXd>* base_curve) {
    double acc = 0.0;
    std::size_t count = 0;
    Eigen::VectorXd p(y.size());
    for (std::size_t i = 0; i < geom.ts.size(); ++i) {
        Eigen::VectorXd gamma;
        if (base_curve)
            gamma = (*base_curve)[i] + omega;
        else
            gamma = solve_psi(phase, omega, geom.ts[i], y).x;
        for (const auto& off : geom.offsets) {
            p = gamma + off;
            acc += std::abs(g.at(p, geom.ts[i]));
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

} // namespace

double tube_average(const PhaseSpec& phase, const Eigen::VectorXd& y, const Eigen::VectorXd& omega,
                    double delta, const SampledField& g, const TubeSampling& sampling) {
    TubeGeometry geom{t_sample_points(phase.rho(), sampling.t_samples),
                      cross_section_offsets(phase.n() - 1, delta, sampling.cross_samples)};
    return average_over_tube(phase, y, omega, g, geom, nullptr);
}

std::vector<double> kakeya_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                   const std::vector<Eigen::VectorXd>& y_points,
                                   const std::vector<Eigen::VectorXd>& omega_points,
                                   const TubeSampling& sampling) {
    TubeGeometry geom{t_sample_points(phase.rho(), sampling.t_samples),
                      cross_section_offsets(phase.n() - 1, delta, sampling.cross_samples)};
    std::vector<double> out(y_points.size(), 0.0);
    const bool ti = phase.translation_invariant();

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(y_points.size()); ++k) {
        const Eigen::VectorXd& y = y_points[static_cast<std::size_t>(k)];
        std::vector<Eigen::VectorXd> base;
        if (ti) {
            base.reserve(geom.ts.size());
            for (double t : geom.ts) base.push_back(-phase.grad_y_psi(t, y));
        }
        double best = 0.0;
        for (const auto& omega : omega_points)
            best = std::max(best, average_over_tube(phase, y, omega, g, geom, ti ? &base : nullptr));
        out[static_cast<std::size_t>(k)] = best;
    }
    return out;
}

std::vector<double> kakeya_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                   double y_grid_spacing, double omega_search_spacing,
                                   std::vector<Eigen::VectorXd>* y_points_out) {
    if (y_grid_spacing > delta || omega_search_spacing > delta)
        throw PreconditionError("lattice spacings must be <= delta");
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    Box ball;
    ball.lo = Eigen::VectorXd::Constant(m, -rho);
    ball.hi = Eigen::VectorXd::Constant(m, rho);
    auto in_ball = [rho](const Eigen::VectorXd& v) { return v.norm() <= rho; };
    auto ys = lattice_points(ball, y_grid_spacing, in_ball);
    auto oms = lattice_points(ball, omega_search_spacing, in_ball);
    if (y_points_out) *y_points_out = ys;
    return kakeya_maximal(phase, delta, g, ys, oms);
}

std::vector<double> nikodym_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                    const std::vector<Eigen::VectorXd>& omega_points,
                                    const std::vector<Eigen::VectorXd>& y_points,
                                    const TubeSampling& sampling) {
    TubeGeometry geom{t_sample_points(phase.rho(), sampling.t_samples),
                      cross_section_offsets(phase.n() - 1, delta, sampling.cross_samples)};
    std::vector<double> out(omega_points.size(), 0.0);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(omega_points.size()); ++k) {
        const Eigen::VectorXd& omega = omega_points[static_cast<std::size_t>(k)];
        double best = 0.0;
        for (const auto& y : y_points)
            best = std::max(best, average_over_tube(phase, y, omega, g, geom, nullptr));
        out[static_cast<std::size_t>(k)] = best;
    }
    return out;
}

std::vector<double> nikodym_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                    double omega_grid_spacing, double y_search_spacing,
                                    std::vector<Eigen::VectorXd>* omega_points_out) {
    if (omega_grid_spacing > delta || y_search_spacing > delta)
        throw PreconditionError("lattice spacings must be <= delta");
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    Box ball;
    ball.lo = Eigen::VectorXd::Constant(m, -rho);
    ball.hi = Eigen::VectorXd::Constant(m, rho);
    auto in_ball = [rho](const Eigen::VectorXd& v) { return v.norm() <= rho; };
    auto oms = lattice_points(ball, omega_grid_spacing, in_ball);
    auto ys = lattice_points(ball, y_search_spacing, in_ball);
    if (omega_points_out) *omega_points_out = oms;
    return nikodym_maximal(phase, delta, g, oms, ys);
}

namespace reference {

std::vector<double> kakeya_maximal(const PhaseSpec& phase, double delta, const SampledField& g,
                                   const std::vector<Eigen::VectorXd>& y_points,
                                   const std::vector<Eigen::VectorXd>& omega_points,
                                   const TubeSampling& sampling) {
    std::vector<double> out;
    out.reserve(y_points.size());
    for (const auto& y : y_points) {
        double best = 0.0;
        for (const auto& omega : omega_points)
            best = std::max(best, tube_average(phase, y, omega, delta, g, sampling));
        out.push_back(best);
    }
    return out;
}

} // namespace reference

double lattice_lp_norm(const std::vector<double>& values, double spacing, int dim, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double cell = std::pow(spacing, dim);
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v), p);
    return std::pow(cell * acc, 1.0 / p);
}

namespace {

// lattice window of half-width `halfw` around a centre point
std::vector<Eigen::VectorXd> window_points(const Eigen::VectorXd& c, double halfw, double spacing) {
    const int d = static_cast<int>(c.size());
    Box b;
    b.lo = c.array() - halfw;
    b.hi = c.array() + halfw + 0.5 * spacing;
    return lattice_points(b, spacing);
}

class TubeIndicator final : public SampledField {
  public:
    TubeIndicator(const PhaseSpec& phase, Eigen::VectorXd y, Eigen::VectorXd omega, double delta)
        : phase_(phase), y_(std::move(y)), omega_(std::move(omega)), delta_(delta) {}
    double at(const Eigen::VectorXd& x, double t) const override {
        if (std::abs(t) > phase_.rho()) return 0.0;
        Eigen::VectorXd gamma = omega_ - phase_.grad_y_psi(t, y_);
        return (x - gamma).norm() < delta_ ? 1.0 : 0.0;
    }

  private:
    const PhaseSpec& phase_;
    Eigen::VectorXd y_, omega_;
    double delta_;
};

} // namespace

double operator_norm_lower(const PhaseSpec& phase, double delta, double p, double s, TestSuite suite,
                           std::uint64_t seed) {
    const int m = phase.n() - 1;
    const double rho = phase.rho();

    if (suite == TestSuite::NeighborhoodOfSurface) {
        if (phase.kind() != PhaseKind::Counterexample)
            throw PreconditionError("NeighborhoodOfSurface suite requires the counterexample phase");
        // planar box covering the compressed curves, padded by a few delta
        Box planar;
        planar.lo.resize(2);
        planar.hi.resize(2);
        planar.lo << 0.25, std::log(0.25) - 4.0 * delta - 0.01;
        planar.hi << 2.0 + 4.0 * delta, std::log(2.0 + 4.0 * delta) + 0.01;
        GridField mask = log_surface_mask(planar, delta, delta / 4.0);
        ExtrudedField g(mask, -rho, rho);

        Box ybox;
        ybox.lo = Eigen::VectorXd::Constant(2, 0.5);
        ybox.hi = Eigen::VectorXd::Constant(2, 0.9);
        auto ys = lattice_points(ybox, delta, [](const Eigen::VectorXd& v) { return in_y_circ(v); });

        TubeGeometry geom{t_sample_points(rho, 64), cross_section_offsets(2, delta, 16)};
        std::vector<double> kvals(ys.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(ys.size()); ++k) {
            const Eigen::VectorXd& y = ys[static_cast<std::size_t>(k)];
            std::vector<Eigen::VectorXd> base;
            base.reserve(geom.ts.size());
            for (double t : geom.ts) base.push_back(-phase.grad_y_psi(t, y));
            double best = 0.0;
            for (const auto& omega : window_points(counterexample_omega(y), 2.0 * delta, delta / 2.0))
                best = std::max(best, average_over_tube(phase, y, omega, g, geom, &base));
            kvals[static_cast<std::size_t>(k)] = best;
        }
        double knorm = lattice_lp_norm(kvals, delta, 2, s);
        double gnorm = g.lp(p);
        return knorm / gnorm;
    }

    if (suite == TestSuite::SingleTube) {
        Eigen::VectorXd y0 = Eigen::VectorXd::Zero(m), om0 = Eigen::VectorXd::Zero(m);
        TubeIndicator g(phase, y0, om0, delta);

        TubeFamily fam{phase, {Tube{y0, om0, delta}}, Separation::None, delta};
        GridField raster = rasterize_multiplicity(fam, delta / 4.0);
        double gnorm = lp_norm(raster, p);

        Box ball;
        ball.lo = Eigen::VectorXd::Constant(m, -rho);
        ball.hi = Eigen::VectorXd::Constant(m, rho);
        auto ys = lattice_points(ball, delta, [rho](const Eigen::VectorXd& v) { return v.norm() <= rho; });
        TubeGeometry geom{t_sample_points(rho, 64), cross_section_offsets(m, delta, 16)};
        std::vector<double> kvals(ys.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(ys.size()); ++k) {
            const Eigen::VectorXd& y = ys[static_cast<std::size_t>(k)];
            std::vector<Eigen::VectorXd> base;
            base.reserve(geom.ts.size());
            for (double t : geom.ts) base.push_back(-phase.grad_y_psi(t, y));
            double best = 0.0;
            for (const auto& omega : window_points(om0, 2.0 * delta, delta / 2.0))
                best = std::max(best, average_over_tube(phase, y, omega, g, geom, &base));
            kvals[static_cast<std::size_t>(k)] = best;
        }
        return lattice_lp_norm(kvals, delta, m, s) / gnorm;
    }

    // RandomFields
    double best_ratio = 0.0;
    const double b = rho + 2.0 * rho * rho + 4.0 * delta;
    for (int trial = 0; trial < 3; ++trial) {
        Box box;
        box.lo.resize(m + 1);
        box.hi.resize(m + 1);
        box.lo[0] = -rho;
        box.hi[0] = rho;
        for (int i = 1; i <= m; ++i) {
            box.lo[i] = -b;
            box.hi[i] = b;
        }
        GridField g(box, delta / 2.0);
        Rng rng(seed + 17 * static_cast<std::uint64_t>(trial));
        for (auto& v : g.values()) v = static_cast<float>(rng.next_double());
        GridFieldView view(g);
        std::vector<double> kvals = kakeya_maximal(phase, delta, view, delta, delta);
        double knorm = lattice_lp_norm(kvals, delta, m, s);
        double gnorm = lp_norm(g, p);
        if (gnorm > 0.0) best_ratio = std::max(best_ratio, knorm / gnorm);
    }
    return best_ratio;
}

double nikodym_norm_lower(const PhaseSpec& phase, double delta, double p, double s, TestSuite suite,
                          std::uint64_t seed) {
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    if (suite == TestSuite::NeighborhoodOfSurface)
        throw PreconditionError("NeighborhoodOfSurface suite is Kakeya-specific");

    if (suite == TestSuite::SingleTube) {
        Eigen::VectorXd y0 = Eigen::VectorXd::Zero(m), om0 = Eigen::VectorXd::Zero(m);
        TubeIndicator g(phase, y0, om0, delta);
        TubeFamily fam{phase, {Tube{y0, om0, delta}}, Separation::None, delta};
        GridField raster = rasterize_multiplicity(fam, delta / 4.0);
        double gnorm = lp_norm(raster, p);

        Box ball;
        ball.lo = Eigen::VectorXd::Constant(m, -rho);
        ball.hi = Eigen::VectorXd::Constant(m, rho);
        auto oms = lattice_points(ball, delta, [rho](const Eigen::VectorXd& v) { return v.norm() <= rho; });
        TubeGeometry geom{t_sample_points(rho, 64), cross_section_offsets(m, delta, 16)};
        std::vector<double> nvals(oms.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(oms.size()); ++k) {
            const Eigen::VectorXd& omega = oms[static_cast<std::size_t>(k)];
            double best = 0.0;
            for (const auto& y : window_points(y0, 2.0 * delta, delta / 2.0))
                best = std::max(best, average_over_tube(phase, y, omega, g, geom, nullptr));
            nvals[static_cast<std::size_t>(k)] = best;
        }
        return lattice_lp_norm(nvals, delta, m, s) / gnorm;
    }

    double best_ratio = 0.0;
    const double b = rho + 2.0 * rho * rho + 4.0 * delta;
    for (int trial = 0; trial < 3; ++trial) {
        Box box;
        box.lo.resize(m + 1);
        box.hi.resize(m + 1);
        box.lo[0] = -rho;
        box.hi[0] = rho;
        for (int i = 1; i <= m; ++i) {
            box.lo[i] = -b;
            box.hi[i] = b;
        }
        GridField g(box, delta / 2.0);
        Rng rng(seed + 23 * static_cast<std::uint64_t>(trial));
        for (auto& v : g.values()) v = static_cast<float>(rng.next_double());
        GridFieldView view(g);
        std::vector<double> nvals = nikodym_maximal(phase, delta, view, delta, delta);
        double nnorm = lattice_lp_norm(nvals, delta, m, s);
        double gnorm = lp_norm(g, p);
        if (gnorm > 0.0) best_ratio = std::max(best_ratio, nnorm / gnorm);
    }
    return best_ratio;
}

} // namespace ckl
