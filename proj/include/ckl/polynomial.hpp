#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ckl/errors.hpp"
#include "ckl/taylor.hpp"

namespace ckl {

// Sparse multivariate polynomial, sum of coef * prod_i x_i^exps[i].
// Matches the JSON coefficient-table interchange format
//   {"vars": n, "terms": [{"exps": [..], "coef": f}]}
class Polynomial {
  public:
    struct Term {
        std::vector<int> exps;
        double coef = 0.0;
    };

    Polynomial() = default;
    Polynomial(int vars, std::vector<Term> terms) : vars_(vars), terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (static_cast<int>(t.exps.size()) != vars_)
                throw ConfigError("polynomial term arity does not match vars");
    }

    int vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool zero() const {
        for (const auto& t : terms_)
            if (t.coef != 0.0) return false;
        return true;
    }
    int degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            if (t.coef == 0.0) continue;
            int s = 0;
            for (int e : t.exps) s += e;
            if (s > d) d = s;
        }
        return d;
    }

    double eval(const Eigen::VectorXd& x) const {
        double acc = 0.0;
        for (const auto& t : terms_) {
            double m = t.coef;
            for (int i = 0; i < vars_; ++i)
                for (int k = 0; k < t.exps[i]; ++k) m *= x[i];
            acc += m;
        }
        return acc;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(vars_);
        for (int i = 0; i < vars_; ++i) g[i] = derivative(i).eval(x);
        return g;
    }

    Polynomial derivative(int var) const {
        std::vector<Term> out;
        for (const auto& t : terms_) {
            if (t.exps[var] == 0) continue;
            Term d = t;
            d.coef *= t.exps[var];
            d.exps[var] -= 1;
            out.push_back(std::move(d));
        }
        return Polynomial(vars_, std::move(out));
    }

    // evaluate with variable `jet_var` replaced by a Taylor series and the
    // remaining variables held at fixed values
    TSeries eval_jet(const std::vector<TSeries>& args) const {
        if (terms_.empty()) return TSeries(args.empty() ? 0 : args[0].order(), 0.0);
        std::size_t K = args[0].order();
        TSeries acc(K, 0.0);
        for (const auto& t : terms_) {
            TSeries m = TSeries::constant(K, t.coef);
            for (int i = 0; i < vars_; ++i)
                if (t.exps[i] > 0) m = m * args[i].pow_int(t.exps[i]);
            acc = acc + m;
        }
        return acc;
    }

    Polynomial scaled(double c) const {
        Polynomial p = *this;
        for (auto& t : p.terms_) t.coef *= c;
        return p;
    }

  private:
    int vars_ = 0;
    std::vector<Term> terms_;
};

} // namespace ckl
