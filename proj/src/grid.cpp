#include "ckl/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace ckl {

std::int64_t cell_budget() {
    static std::int64_t budget = [] {
        if (const char* env = std::getenv("CKL_CELL_BUDGET")) {
            long long v = std::atoll(env);
            if (v > 0) return static_cast<std::int64_t>(v);
        }
        return static_cast<std::int64_t>(200000000);
    }();
    return budget;
}

GridField::GridField(Box box, double h) : box_(std::move(box)), h_(h) {
    if (!(h > 0.0)) throw PreconditionError("grid spacing must be positive");
    const int d = box_.dim();
    dims_.resize(d);
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) {
        double extent = box_.hi[i] - box_.lo[i];
        if (!(extent > 0.0)) throw PreconditionError("box must have positive extent");
        dims_[i] = std::max(1, static_cast<int>(std::llround(extent / h)));
        box_.hi[i] = box_.lo[i] + dims_[i] * h; // snap so dims are recoverable from the header
        total *= dims_[i];
        if (total > cell_budget())
            throw MemoryBudgetError("lattice exceeds cell budget (" + std::to_string(cell_budget()) +
                                    " cells); raise CKL_CELL_BUDGET to override");
    }
    values_.assign(static_cast<std::size_t>(total), 0.0f);
}

double GridField::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= h_;
    return v;
}

std::int64_t GridField::flat_index(const std::vector<int>& iv) const {
    std::int64_t f = 0;
    for (int i = 0; i < dim(); ++i) f = f * dims_[i] + iv[i];
    return f;
}

Eigen::VectorXd GridField::cell_center(const std::vector<int>& iv) const {
    Eigen::VectorXd c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = box_.lo[i] + (iv[i] + 0.5) * h_;
    return c;
}

double GridField::value_at(const Eigen::VectorXd& p) const {
    std::int64_t f = 0;
    for (int i = 0; i < dim(); ++i) {
        double u = (p[i] - box_.lo[i]) / h_;
        if (u < 0.0) return 0.0;
        int k = static_cast<int>(u);
        if (k >= dims_[i]) return 0.0;
        f = f * dims_[i] + k;
    }
    return values_[static_cast<std::size_t>(f)];
}

double union_measure(const GridField& field) {
    std::int64_t count = 0;
    for (float v : field.values())
        if (v > 0.0f) ++count;
    return static_cast<double>(count) * field.cell_volume();
}

double lp_norm(const GridField& field, double p) {
    if (p < 1.0) throw PreconditionError("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (float v : field.values()) m = std::max(m, std::abs(static_cast<double>(v)));
        return m;
    }
    double acc = 0.0;
    for (float v : field.values()) acc += std::pow(std::abs(static_cast<double>(v)), p);
    return std::pow(field.cell_volume() * acc, 1.0 / p);
}

namespace {
void write_f64(std::ofstream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_i64(std::ofstream& out, std::int64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
double read_f64(std::ifstream& in) {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
std::int64_t read_i64(std::ifstream& in) {
    std::int64_t v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
} // namespace

void GridField::save_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_i64(out, dim());
    for (int i = 0; i < dim(); ++i) write_f64(out, box_.lo[i]);
    for (int i = 0; i < dim(); ++i) write_f64(out, box_.hi[i]);
    write_f64(out, h_);
    for (float v : values_) {
        std::uint32_t c = static_cast<std::uint32_t>(std::llround(static_cast<double>(v)));
        out.write(reinterpret_cast<const char*>(&c), 4);
    }
}

GridField GridField::load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::int64_t d = read_i64(in);
    Box box;
    box.lo.resize(d);
    box.hi.resize(d);
    for (std::int64_t i = 0; i < d; ++i) box.lo[i] = read_f64(in);
    for (std::int64_t i = 0; i < d; ++i) box.hi[i] = read_f64(in);
    double h = read_f64(in);
    GridField g(box, h);
    for (float& v : g.values_) {
        std::uint32_t c;
        in.read(reinterpret_cast<char*>(&c), 4);
        v = static_cast<float>(c);
    }
    if (!in) throw Error("truncated grid file " + path);
    return g;
}

void GridField::save_nonzero_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    const int d = dim();
    for (int i = 0; i < d; ++i) out << "c" << i << ",";
    out << "value\n";
    std::vector<int> iv(d, 0);
    char buf[64];
    for (std::int64_t f = 0; f < cells(); ++f) {
        if (values_[static_cast<std::size_t>(f)] > 0.0f) {
            Eigen::VectorXd c = cell_center(iv);
            for (int i = 0; i < d; ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g", c[i]);
                out << buf << ",";
            }
            std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(values_[static_cast<std::size_t>(f)]));
            out << buf << "\n";
        }
        for (int i = d - 1; i >= 0; --i) {
            if (++iv[i] < dims_[i]) break;
            iv[i] = 0;
        }
    }
}

double GridFieldView::at(const Eigen::VectorXd& x, double t) const {
    Eigen::VectorXd p(g_.dim());
    p[0] = t;
    p.tail(g_.dim() - 1) = x;
    return g_.value_at(p);
}

double ExtrudedField::lp(double p) const {
    if (std::isinf(p)) return lp_norm(g_, p);
    double planar = std::pow(lp_norm(g_, p), p); // integral of |g2|^p
    return std::pow(planar * (t1_ - t0_), 1.0 / p);
}

} // namespace ckl
