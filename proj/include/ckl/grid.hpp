#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ckl/errors.hpp"

namespace ckl {

struct Box {
    Eigen::VectorXd lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    bool contains(const Eigen::VectorXd& p) const {
        for (int i = 0; i < dim(); ++i)
            if (p[i] < lo[i] || p[i] >= hi[i]) return false;
        return true;
    }
};

// lattice cell cap; override with env CKL_CELL_BUDGET
std::int64_t cell_budget();

// Dense scalar field on a uniform lattice. Axis 0 is the slowest index in
// memory; tube rasterization orders axes (t, x_1, .., x_{n-1}) so a t-slab is
// one contiguous block. Values are float: multiplicity counts stay exact well
// past any family size this artifact reaches.
class GridField {
  public:
    GridField() = default;
    GridField(Box box, double h);

    const Box& box() const { return box_; }
    double h() const { return h_; }
    int dim() const { return box_.dim(); }
    const std::vector<int>& dims() const { return dims_; }
    std::int64_t cells() const { return static_cast<std::int64_t>(values_.size()); }
    double cell_volume() const;

    float& at_index(std::int64_t flat) { return values_[static_cast<std::size_t>(flat)]; }
    float at_index(std::int64_t flat) const { return values_[static_cast<std::size_t>(flat)]; }
    std::vector<float>& values() { return values_; }
    const std::vector<float>& values() const { return values_; }

    std::int64_t flat_index(const std::vector<int>& iv) const;
    Eigen::VectorXd cell_center(const std::vector<int>& iv) const;
    // nearest-cell lookup; 0 outside the box
    double value_at(const Eigen::VectorXd& p) const;

    void fill(float v) { std::fill(values_.begin(), values_.end(), v); }

    void save_binary(const std::string& path) const;
    static GridField load_binary(const std::string& path);
    void save_nonzero_csv(const std::string& path) const;

  private:
    Box box_;
    double h_ = 0.0;
    std::vector<int> dims_;
    std::vector<float> values_;
};

// measure of the strict superlevel set {value > 0}
double union_measure(const GridField& field);
// (h^n sum value^p)^{1/p}; max for p = infinity
double lp_norm(const GridField& field, double p);

// read-only point-sampled view of a scalar function on R^{n-1} x I
class SampledField {
  public:
    virtual ~SampledField() = default;
    virtual double at(const Eigen::VectorXd& x, double t) const = 0;
};

// adapts a GridField with axes (t, x_1..x_{n-1})
class GridFieldView final : public SampledField {
  public:
    explicit GridFieldView(const GridField& g) : g_(g) {}
    double at(const Eigen::VectorXd& x, double t) const override;

  private:
    const GridField& g_;
};

// field of the form g(x, t) = g2(x) * chi_{[t0,t1]}(t) for a planar grid g2;
// used for t-invariant test functions such as surface-neighbourhood
// indicators
class ExtrudedField final : public SampledField {
  public:
    ExtrudedField(const GridField& planar, double t0, double t1) : g_(planar), t0_(t0), t1_(t1) {}
    double at(const Eigen::VectorXd& x, double t) const override {
        if (t < t0_ || t > t1_) return 0.0;
        return g_.value_at(x);
    }
    double measure() const { return union_measure(g_) * (t1_ - t0_); }
    double lp(double p) const;

  private:
    const GridField& g_;
    double t0_, t1_;
};

class ConstantField final : public SampledField {
  public:
    explicit ConstantField(double v) : v_(v) {}
    double at(const Eigen::VectorXd&, double) const override { return v_; }

  private:
    double v_;
};

} // namespace ckl
