#include "ckl/tube_family.hpp"

#include <cmath>

#include "ckl/compression.hpp"
#include "ckl/curve.hpp"
#include "ckl/rng.hpp"

namespace ckl {

namespace {

std::vector<Eigen::VectorXd> ball_lattice(int dim, double radius, double spacing) {
    std::vector<Eigen::VectorXd> pts;
    int kmax = static_cast<int>(std::floor(radius / spacing));
    std::vector<int> iv(dim, -kmax);
    while (true) {
        Eigen::VectorXd p(dim);
        for (int i = 0; i < dim; ++i) p[i] = iv[i] * spacing;
        if (p.norm() <= radius) pts.push_back(p);
        int i = dim - 1;
        for (; i >= 0; --i) {
            if (++iv[i] <= kmax) break;
            iv[i] = -kmax;
        }
        if (i < 0) break;
    }
    return pts;
}

} // namespace

TubeFamily build_family(const PhaseSpec& phase, double delta, Separation separation, CentreRule rule,
                        std::uint64_t seed) {
    if (!(delta > 0.0 && delta <= 0.25)) throw PreconditionError("delta must lie in (0, 1/4]");
    const int m = phase.n() - 1;
    const double rho = phase.rho();
    TubeFamily fam{phase, {}, separation, delta};
    Rng rng(seed);

    auto free_coordinate = [&](const Eigen::VectorXd& fixed, bool fixed_is_direction) -> Eigen::VectorXd {
        switch (rule) {
            case CentreRule::FixedZero: return Eigen::VectorXd::Zero(m);
            case CentreRule::CounterexampleOmega:
                if (!fixed_is_direction)
                    throw ConfigError("CounterexampleOmega assigns centres from directions only");
                return counterexample_omega(fixed);
            case CentreRule::RandomSeeded: {
                Eigen::VectorXd v(m);
                do {
                    for (int i = 0; i < m; ++i) v[i] = rng.uniform(-rho, rho);
                } while (v.norm() > rho);
                return v;
            }
        }
        return Eigen::VectorXd::Zero(m);
    };

    std::vector<Eigen::VectorXd> anchors;
    if (rule == CentreRule::CounterexampleOmega) {
        // lattice over the bounding square of Y_circ, filtered
        int k0 = static_cast<int>(std::ceil(0.5 / (2.0 * delta)));
        int k1 = static_cast<int>(std::floor(0.9 / (2.0 * delta)));
        for (int i = k0; i <= k1; ++i)
            for (int j = k0; j <= k1; ++j) {
                Eigen::VectorXd y(2);
                y << 2.0 * delta * i, 2.0 * delta * j;
                if (in_y_circ(y)) anchors.push_back(y);
            }
    } else {
        anchors = ball_lattice(m, rho, 2.0 * delta);
    }
    if (anchors.empty()) throw EmptyFamilyError("no lattice point fits in the domain at this delta");

    for (const auto& a : anchors) {
        Tube tube;
        tube.delta = delta;
        if (separation == Separation::Centre) {
            tube.omega = a;
            tube.y = free_coordinate(a, false);
        } else {
            tube.y = a;
            tube.omega = free_coordinate(a, true);
        }
        fam.tubes.push_back(std::move(tube));
    }

    const double cap = std::pow(delta, -static_cast<double>(m));
    if (static_cast<double>(fam.tubes.size()) > cap)
        throw Error("family size exceeds delta^{-(n-1)}");
    return fam;
}

Box family_bounding_box(const TubeFamily& family, double pad) {
    const int m = family.phase.n() - 1;
    const double rho = family.phase.rho();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, 1e300);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, -1e300);
    const int nt = 17;
    for (const auto& tube : family.tubes) {
        for (int k = 0; k < nt; ++k) {
            double t = -rho + 2.0 * rho * k / (nt - 1);
            CurvePoint cp = solve_psi(family.phase, tube.omega, t, tube.y);
            for (int i = 0; i < m; ++i) {
                lo[i] = std::min(lo[i], cp.x[i]);
                hi[i] = std::max(hi[i], cp.x[i]);
            }
        }
    }
    Box box;
    box.lo.resize(m + 1);
    box.hi.resize(m + 1);
    box.lo[0] = -rho;
    box.hi[0] = rho;
    for (int i = 0; i < m; ++i) {
        box.lo[i + 1] = lo[i] - pad;
        box.hi[i + 1] = hi[i] + pad;
    }
    return box;
}

namespace {

// mark cells of one t-slab within delta of each tube's curve point
void rasterize_slab(const TubeFamily& family, GridField& field, int it,
                    const std::vector<Eigen::VectorXd>& curves_at_slab) {
    const int m = family.phase.n() - 1;
    const double h = field.h();
    const double delta = family.delta;
    const auto& dims = field.dims();
    const Box& box = field.box();

    std::int64_t slab_stride = 1;
    for (int i = 1; i <= m; ++i) slab_stride *= dims[i];
    float* slab = &field.at_index(static_cast<std::int64_t>(it) * slab_stride);

    for (const auto& gamma : curves_at_slab) {
        // bounding index ranges of the disc |x - gamma| < delta
        std::vector<int> lo(m), hi(m);
        bool empty = false;
        for (int i = 0; i < m; ++i) {
            double a = (gamma[i] - delta - box.lo[i + 1]) / h - 0.5;
            double b = (gamma[i] + delta - box.lo[i + 1]) / h - 0.5;
            lo[i] = std::max(0, static_cast<int>(std::ceil(a)));
            hi[i] = std::min(dims[i + 1] - 1, static_cast<int>(std::floor(b)));
            if (lo[i] > hi[i]) empty = true;
        }
        if (empty) continue;
        std::vector<int> iv = lo;
        while (true) {
            double d2 = 0.0;
            std::int64_t f = 0;
            for (int i = 0; i < m; ++i) {
                double c = box.lo[i + 1] + (iv[i] + 0.5) * h;
                d2 += (c - gamma[i]) * (c - gamma[i]);
                f = f * dims[i + 1] + iv[i];
            }
            if (d2 < delta * delta) slab[f] += 1.0f;
            int i = m - 1;
            for (; i >= 0; --i) {
                if (++iv[i] <= hi[i]) break;
                iv[i] = lo[i];
            }
            if (i < 0) break;
        }
    }
}

} // namespace

GridField rasterize_multiplicity(const TubeFamily& family, double h) {
    if (!(h > 0.0 && h <= family.delta / 2.0))
        throw PreconditionError("grid spacing must satisfy h <= delta/2");
    Box box = family_bounding_box(family, family.delta + h);
    GridField field(box, h);
    const int nt = field.dims()[0];
    const int m = family.phase.n() - 1;

#pragma omp parallel for schedule(dynamic)
    for (int it = 0; it < nt; ++it) {
        double t = box.lo[0] + (it + 0.5) * h;
        std::vector<Eigen::VectorXd> curves;
        curves.reserve(family.tubes.size());
        for (const auto& tube : family.tubes) {
            CurvePoint cp = solve_psi(family.phase, tube.omega, t, tube.y);
            curves.push_back(cp.x);
        }
        (void)m;
        rasterize_slab(family, field, it, curves);
    }
    return field;
}

namespace reference {

GridField rasterize_multiplicity(const TubeFamily& family, double h) {
    if (!(h > 0.0 && h <= family.delta / 2.0))
        throw PreconditionError("grid spacing must satisfy h <= delta/2");
    Box box = family_bounding_box(family, family.delta + h);
    GridField field(box, h);
    const int m = family.phase.n() - 1;
    const auto& dims = field.dims();
    std::vector<int> iv(m + 1, 0);
    for (std::int64_t f = 0; f < field.cells(); ++f) {
        Eigen::VectorXd c = field.cell_center(iv);
        double t = c[0];
        Eigen::VectorXd x = c.tail(m);
        int count = 0;
        for (const auto& tube : family.tubes)
            if (tube_membership(family.phase, tube.y, tube.omega, family.delta, x, t)) ++count;
        field.at_index(f) = static_cast<float>(count);
        for (int i = m; i >= 0; --i) {
            if (++iv[i] < dims[i]) break;
            iv[i] = 0;
        }
    }
    return field;
}

} // namespace reference

} // namespace ckl
