#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ckl/errors.hpp"

namespace ckl {

// Truncated Taylor series in one variable: c[0] + c[1] u + ... + c[K] u^K
// where u = t - s for an expansion point s. Arithmetic is exact on the
// retained coefficients, so derivative stacks of analytic expressions come
// out to machine precision without finite differencing.
class TSeries {
  public:
    TSeries() = default;
    TSeries(std::size_t order, double c0 = 0.0) : c_(order + 1, 0.0) { c_[0] = c0; }

    static TSeries constant(std::size_t order, double v) { return TSeries(order, v); }

    // the local coordinate t = s + u
    static TSeries variable(std::size_t order, double s) {
        TSeries r(order, s);
        if (order >= 1) r.c_[1] = 1.0;
        return r;
    }

    std::size_t order() const { return c_.size() - 1; }
    double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
    double& coeff(std::size_t i) { return c_[i]; }
    double value() const { return c_[0]; }

    // k-th derivative at the expansion point
    double derivative(std::size_t k) const {
        if (k >= c_.size()) return 0.0;
        double f = 1.0;
        for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
        return c_[k] * f;
    }

    TSeries operator-() const {
        TSeries r = *this;
        for (double& v : r.c_) v = -v;
        return r;
    }

    friend TSeries operator+(const TSeries& a, const TSeries& b) {
        TSeries r(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a[i] + b[i];
        return r;
    }
    friend TSeries operator-(const TSeries& a, const TSeries& b) {
        TSeries r(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a[i] - b[i];
        return r;
    }
    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        TSeries r(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < r.c_.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += a[j] * b[i - j];
            r.c_[i] = s;
        }
        return r;
    }
    friend TSeries operator*(double s, const TSeries& a) {
        TSeries r = a;
        for (double& v : r.c_) v *= s;
        return r;
    }
    friend TSeries operator*(const TSeries& a, double s) { return s * a; }
    friend TSeries operator+(const TSeries& a, double s) {
        TSeries r = a;
        r.c_[0] += s;
        return r;
    }
    friend TSeries operator+(double s, const TSeries& a) { return a + s; }
    friend TSeries operator-(const TSeries& a, double s) { return a + (-s); }
    friend TSeries operator-(double s, const TSeries& a) { return (-a) + s; }

    // a / b via the standard long-division recurrence; requires b(0) != 0
    friend TSeries operator/(const TSeries& a, const TSeries& b) {
        if (b[0] == 0.0) throw SingularityError("TSeries division by series with zero constant term");
        TSeries r(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < r.c_.size(); ++i) {
            double s = a[i];
            for (std::size_t j = 1; j <= i; ++j) s -= b[j] * r.c_[i - j];
            r.c_[i] = s / b[0];
        }
        return r;
    }

    TSeries pow_int(int k) const {
        TSeries r = constant(order(), 1.0);
        TSeries base = *this;
        int e = k;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

  private:
    std::vector<double> c_;
};

// log(a), a(0) > 0: (log a)' = a'/a integrated term by term
inline TSeries ts_log(const TSeries& a) {
    if (a[0] <= 0.0) throw SingularityError("TSeries log of non-positive leading term");
    std::size_t K = a.order();
    TSeries r(K, std::log(a[0]));
    // r' = a'/a: i*r[i] = i*a[i]/a[0] - sum_{j=1}^{i-1} j*r[j]*a[i-j]/a[0]
    for (std::size_t i = 1; i <= K; ++i) {
        double s = static_cast<double>(i) * a[i];
        for (std::size_t j = 1; j < i; ++j) s -= static_cast<double>(j) * r.coeff(j) * a[i - j];
        r.coeff(i) = s / (static_cast<double>(i) * a[0]);
    }
    return r;
}

inline TSeries ts_exp(const TSeries& a) {
    std::size_t K = a.order();
    TSeries r(K, std::exp(a[0]));
    for (std::size_t i = 1; i <= K; ++i) {
        double s = 0.0;
        for (std::size_t j = 1; j <= i; ++j) s += static_cast<double>(j) * a[j] * r[i - j];
        r.coeff(i) = s / static_cast<double>(i);
    }
    return r;
}

// sin and cos advance together through the coupled recurrence
inline void ts_sincos(const TSeries& a, TSeries& sin_out, TSeries& cos_out) {
    std::size_t K = a.order();
    TSeries s(K, std::sin(a[0])), c(K, std::cos(a[0]));
    for (std::size_t i = 1; i <= K; ++i) {
        double ss = 0.0, cc = 0.0;
        for (std::size_t j = 1; j <= i; ++j) {
            ss += static_cast<double>(j) * a[j] * c[i - j];
            cc -= static_cast<double>(j) * a[j] * s[i - j];
        }
        s.coeff(i) = ss / static_cast<double>(i);
        c.coeff(i) = cc / static_cast<double>(i);
    }
    sin_out = s;
    cos_out = c;
}

inline TSeries ts_sin(const TSeries& a) {
    TSeries s, c;
    ts_sincos(a, s, c);
    return s;
}

inline TSeries ts_cos(const TSeries& a) {
    TSeries s, c;
    ts_sincos(a, s, c);
    return c;
}

} // namespace ckl
