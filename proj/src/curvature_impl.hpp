#pragma once

#include "qcurv/curvature.hpp"

namespace qcurv {

// Jet-level assembly shared by curvature.cpp (bundle construction) and
// adjoint.cpp (operators built on the stored jets). Index layouts: rank-3
// arrays are [a][b][c] row-major; rank-4 are [a][b][c][d] row-major.
struct CurvatureJets::Impl {
    int n;
    int K;  // metric jet order
    const JetTable& tab;

    MetricJet g;    // order K
    MetricJet gi;   // order K-1
    std::vector<Jet> gamma;  // [l][i][j] = G^l_{ij}, order K-1
    std::vector<Jet> rm;     // R_{ijkl} all down, order K-2
    MetricJet ric;           // order K-2
    Jet r;                   // order K-2
    MetricJet schouten;      // order K-2
    Jet tr_s;                // order K-2
    std::vector<Jet> weyl;   // order K-2
    std::vector<Jet> cotton; // [i][j][k], order K-3 (empty if K < 3)

    Jet q13, q22;                        // order K-4 (invalid if K < 4)
    MetricJet bach1, bach2, bach3;       // order K-4
    MetricJet tt, jt;                    // order K-4

    CurvatureBundle bundle;

    explicit Impl(const MetricJet& gin);

    int i3(int a, int b, int c) const { return (a * n + b) * n + c; }
    int i4(int a, int b, int c, int d) const {
        return ((a * n + b) * n + c) * n + d;
    }

    void require_order(int k, const char* what) const;

    // ---- jet-level differential operators (output truncated to `order`) --
    // gradient of a scalar: n jets
    std::vector<Jet> grad(const Jet& f, int order) const;
    // covariant Hessian of a scalar
    MetricJet hessian(const Jet& f, int order) const;
    Jet laplacian(const Jet& f, int order) const;
    // (nabla w)_{v,j} = d_v w_j - G^m_{vj} w_m : n*n jets, layout [v][j]
    std::vector<Jet> nabla_oneform(const std::vector<Jet>& w, int order) const;
    MetricJet sym_nabla_oneform(const std::vector<Jet>& w, int order) const;
    // g^{ij} nabla_i w_j  (note: this is -delta w)
    Jet div_oneform(const std::vector<Jet>& w, int order) const;
    // (nabla h)_{v,(jk)} : n * n(n+1)/2 jets, layout [v][sym(j,k)]
    std::vector<Jet> nabla_sym2(const MetricJet& h, int order) const;
    // (div h)_l = g^{ik} nabla_i h_{kl} : n jets
    std::vector<Jet> div_sym2(const MetricJet& h, int order) const;
    MetricJet laplacian_sym2(const MetricJet& h, int order) const;

    // ---- jet-level pointwise algebra --------------------------------
    Jet mj_trace(const MetricJet& h, int order) const;  // g^{jk} h_{jk}
    Jet mj_inner(const MetricJet& a, const MetricJet& b, int order) const;
    MetricJet mj_product(const MetricJet& a, const MetricJet& b,
                         int order) const;              // sym(a_j^i b_{ik})
    MetricJet rm_dot(const MetricJet& h, int order) const;  // R_{ijkl} h^{il}
    MetricJet scaled_g(const Jet& s, int order) const;       // s * g
    MetricJet lichnerowicz_at(const MetricJet& h, int order) const;

    MetricJet gamma_star_q_impl(const Jet& f) const;
    Jet paneitz_impl(const Jet& f) const;

    Sym2 values_of(const MetricJet& h) const;
};

}  // namespace qcurv
