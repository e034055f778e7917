#pragma once

#include <memory>
#include <vector>

#include "qcurv/metric_jet.hpp"
#include "qcurv/tensor.hpp"

namespace qcurv {

// Sign conventions, fixed once for the whole engine:
//   R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im}G^m_{jk} - G^l_{jm}G^m_{ik}
//   R_{ijkl}  = g_{lm} R^m_{ijk};  Ric_{jk} = R^i_{ijk};  R(unit S^n) = +n(n-1)
//   Lap = g^{ij} nabla_i nabla_j  (negative spectrum on closed manifolds)
//   delta = -div on 1-forms and symmetric 2-tensors.

// Every pointwise curvature quantity at one chart point, extracted at value
// level from a jet of the metric. Fields beyond the jet order actually
// supplied are left in their default state; has_stage3/has_stage4 say what
// is populated.
struct CurvatureBundle {
    int dim = 0;
    int jet_order = 0;

    MetricAtPoint metric;
    Tensor3 christoffel;  // slot (k,i,j) = G^k_{ij}, symmetric in (i,j)
    Tensor4 riemann;      // all indices down
    Sym2 ricci;
    double scalar = 0;
    Sym2 schouten;
    double tr_schouten = 0;
    Tensor4 weyl;

    Tensor3 cotton;  // jet order >= 3; antisymmetric in first two slots

    Sym2 bach;                  // jet order >= 4; divergence-of-Cotton route
    double bach_route_gap = 0;  // max pairwise gap between the three routes
    double q = 0;               // Laplacian-of-R route
    double q_route_gap = 0;     // gap against the Schouten-trace route
    Sym2 t_tensor;
    Sym2 j_tensor;
    Sym2 j_traceless;

    bool has_sj = false;  // dim != 4 only
    Sym2 s_j;
    double sigma1_j = 0;
    double sigma2_j = 0;

    bool has_stage3() const { return jet_order >= 3; }
    bool has_stage4() const { return jet_order >= 4; }
};

// Jet-level curvature context at one point. Construction performs the full
// assembly the jet order allows; the operator methods (adjoints, Paneitz,
// Lichnerowicz, divergences) reuse the stored jets. Pure value object:
// safe to use from multiple threads once constructed.
class CurvatureJets {
public:
    explicit CurvatureJets(const MetricJet& g);  // requires g.order() >= 2
    ~CurvatureJets();
    CurvatureJets(CurvatureJets&&) noexcept;
    CurvatureJets& operator=(CurvatureJets&&) noexcept;
    CurvatureJets(const CurvatureJets&) = delete;
    CurvatureJets& operator=(const CurvatureJets&) = delete;

    int dim() const;
    int order() const;
    const CurvatureBundle& bundle() const;

    // Jet accessors. Orders: christoffel K-1; ricci/scalar/schouten/weyl
    // K-2; cotton K-3; q/j K-4, where K is the metric jet order.
    const Jet& christoffel_jet(int l, int i, int j) const;
    const Jet& ricci_jet(int i, int j) const;
    const Jet& scalar_jet() const;
    const Jet& schouten_jet(int i, int j) const;
    const Jet& weyl_jet(int i, int j, int k, int l) const;
    const Jet& cotton_jet(int i, int j, int k) const;
    Jet q_jet() const;
    MetricJet j_jets() const;

    // Scalar calculus at the point (f expanded at the same point).
    Sym2 hessian_values(const Jet& f) const;   // f.order >= 2
    double laplacian_value(const Jet& f) const;

    // Adjoints and operators.
    Sym2 gamma_star_scalar(const Jet& f) const;       // f.order >= 2
    Sym2 gamma_star_q(const Jet& f) const;            // f.order >= 4, K >= 4
    MetricJet gamma_star_q_jets(const Jet& f) const;  // order min(K, f.order) - 4
    Sym2 j_from_adjoint() const;                      // -1/2 gamma_star_q(1)
    double paneitz(const Jet& f) const;               // f.order >= 4, K >= 4
    Jet paneitz_jet(const Jet& f) const;
    MetricJet lichnerowicz(const MetricJet& h) const;  // h.order in [2, K]
    double gamma_linearized(const MetricJet& h) const; // closed-form DR.h; K >= 3

    // Divergences (need K >= 5 for the analytic path).
    std::vector<double> dq() const;     // components of dQ
    std::vector<double> div_j() const;  // (div J)_l = g^{ik} nabla_i J_{kl}
    std::vector<double> div_sym2_values(const MetricJet& t) const;  // t.order >= 1

    // Residual diagnostics (all relative to the natural scale of the data).
    double metric_compatibility_residual() const;  // max |nabla g|
    double weyl_trace_residual() const;
    double weyl_cotton_residual() const;  // |div W - (n-3) C|, K >= 3

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.
CurvatureBundle curvature_bundle(const MetricJet& g);

struct EinsteinQCheck {
    bool einstein = false;      // |Ric - (R/n) g| <= 1e-8 |Ric|
    double einstein_residual = 0;
    double q_residual = 0;      // |Q - (n+2)(n-2)/(8n(n-1)^2) R^2|, relative
};
EinsteinQCheck einstein_q_check(const CurvatureBundle& b);

// Directional linearizations at a point, by closed form and by central
// finite differences along t -> g + t h (one Richardson level).
struct GammaLinearization {
    double closed_form = 0;
    double fd = 0;
};
GammaLinearization linearize_scalar_direction(const MetricField& g,
                                              const Sym2Field& h,
                                              const double* x, double fd_step);
double linearize_q_direction(const MetricField& g, const Sym2Field& h,
                             const double* x, double fd_step);

}  // namespace qcurv
