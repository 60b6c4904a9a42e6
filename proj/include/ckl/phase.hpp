#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ckl/errors.hpp"
#include "ckl/polynomial.hpp"
#include "ckl/taylor.hpp"

namespace ckl {

enum class PhaseKind {
    ConstCoeff,              // <x,y> + t|y|^2
    BourgainStar,            // <x,y> + (1/2)<A(t)y,y>, A(t) block-diag [[0,t],[t,t^2]]
    Counterexample,          // <x,y> + (1/2)t y1^2 + sum_{j>=2} t^{j-1} y2^j / (j(j-1))
    TranslationInvariantPoly,// <x,y> + psi(t;y), psi polynomial with psi(0;y)=0
    Custom                   // polynomial in (x, t, y), possibly not translation-invariant
};

std::string to_string(PhaseKind k);
PhaseKind phase_kind_from_string(const std::string& s);

// A phase function phi(x,t;y) on the unit polydisc, with working radius rho
// defining the boxes Omega_phi = Y_phi = {|.| <= rho} and I_phi = [-rho, rho].
// Evaluation is permitted on the whole polydisc (|t| < 1, |y| < 1; x free for
// translation-invariant kinds) so that experiments may range over compact
// regions larger than the working radius.
class PhaseSpec {
  public:
    static PhaseSpec const_coeff(int n = 3, double rho = 0.5);
    static PhaseSpec bourgain_star(int n = 3, double rho = 0.5);
    static PhaseSpec counterexample(double rho = 0.5);
    static PhaseSpec translation_invariant_poly(int n, Polynomial psi_t_y, double rho = 0.5);
    static PhaseSpec custom(int n, Polynomial phi_x_t_y, double rho = 0.5);

    PhaseKind kind() const { return kind_; }
    int n() const { return n_; }
    double rho() const { return rho_; }
    bool translation_invariant() const { return kind_ != PhaseKind::Custom; }
    const Polynomial& poly() const { return poly_; }

    double value(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const;
    // psi(t;y) = phi - <x,y> for translation-invariant kinds
    double psi(double t, const Eigen::VectorXd& y) const;
    Eigen::VectorXd grad_y_psi(double t, const Eigen::VectorXd& y) const;

    Eigen::VectorXd grad_y(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const;
    Eigen::MatrixXd hess_yy(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const;
    Eigen::MatrixXd hess_xy(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const;
    // d/dt of grad_y phi
    Eigen::VectorXd dt_grad_y(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const;
    // hess_yy of d/dx_i phi (i < n-1) or of d/dt phi (i == n-1); third-order data
    // feeding the curvature form
    Eigen::MatrixXd hess_yy_of_xt_partial(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y,
                                          int i) const;

    // entries of hess_yy phi along the curve t -> (Psi(omega;t;y), t; y), as
    // Taylor series centred at t = s
    std::vector<std::vector<TSeries>> hess_yy_jets(const Eigen::VectorXd& omega, const Eigen::VectorXd& y,
                                                   double s, std::size_t order) const;

    void check_domain(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y) const;

  private:
    PhaseSpec(PhaseKind k, int n, double rho) : kind_(k), n_(n), rho_(rho) {}

    PhaseKind kind_;
    int n_;
    double rho_;
    Polynomial poly_; // psi for TranslationInvariantPoly, phi for Custom

    // cached partial derivatives of poly_ (built lazily in factories)
    std::vector<Polynomial> dpsi_dy_;                // grad_y psi (TI poly)
    std::vector<std::vector<Polynomial>> hess_psi_;  // hess_yy psi
    std::vector<std::vector<Polynomial>> hess_psi_t_;// hess_yy of dpsi/dt
    std::vector<Polynomial> dt_dpsi_dy_;             // d/dt grad_y psi
    // Custom-kind caches
    std::vector<Polynomial> dphi_dy_;
    std::vector<std::vector<Polynomial>> hess_xy_p_, hess_yy_p_;
    std::vector<Polynomial> dt_dphi_dy_;
    std::vector<std::vector<std::vector<Polynomial>>> hess_yy_xt_; // index i over (x_1..x_{n-1}, t)

    void build_poly_caches();
};

struct PhaseJet {
    double value = 0.0;
    Eigen::VectorXd grad_y;
    Eigen::MatrixXd hess_yy;
    Eigen::MatrixXd hess_xy;
    Eigen::VectorXd gauss; // unit vector in R^n
};

PhaseJet eval_jet(const PhaseSpec& phase, const Eigen::VectorXd& x, double t, const Eigen::VectorXd& y);

// G = G0/|G0|, G0 the wedge of the vectors d_{y_j} d_{(x,t)} phi; the sign is
// fixed so the last coordinate is nonnegative when nonzero.
Eigen::VectorXd gauss_map(const PhaseSpec& phase, const Eigen::VectorXd& x, double t,
                          const Eigen::VectorXd& y);

// curvature form hess_yy <d_{(x,t)} phi(x,t;y), G(x,t;y0)>|_{y=y0}
Eigen::MatrixXd curvature_form(const PhaseSpec& phase, const Eigen::VectorXd& x, double t,
                               const Eigen::VectorXd& y0);

struct NondegeneracyReport {
    double min_abs_det_hess_xy = 0.0;
    double min_abs_det_curvature = 0.0;
    bool H1_ok = false;
    bool H2_ok = false;
    int samples = 0;
};

NondegeneracyReport verify_nondegeneracy(const PhaseSpec& phase, int samples, std::uint64_t seed);

// Closed-form exponent tables: Stein-Tomas and bush exponents, critical
// dimension/codimension.
class ExponentTable {
  public:
    explicit ExponentTable(int n);

    int n() const { return n_; }
    double p_crit() const { return 0.5 * (n_ + 1); }
    double q_crit() const { return 2.0 * (n_ + 1) / (n_ - 1); }
    int d_crit() const { return (n_ % 2 == 1) ? (n_ + 1) / 2 : (n_ + 2) / 2; }
    int m_crit() const { return n_ - d_crit(); }

    double beta(double p) const;    // value ~ delta^{-beta}
    double s(double p) const;
    double alpha_H(double q) const; // H-type growth exponent
    double alpha_LS(double q) const;

  private:
    int n_;
};

inline ExponentTable exponent_table(int n) { return ExponentTable(n); }

} // namespace ckl
