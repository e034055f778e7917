#include "curvature_impl.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcurv {

namespace {

inline void acc_mul(Jet& acc, const Jet& a, const Jet& b) {
    jk::mul_acc(acc.table(), acc.order(), acc.data(), a.data(), a.ncoef(),
                b.data(), b.ncoef());
}

MetricJet mj_scale(const Jet& s, const MetricJet& h, int order) {
    MetricJet out(h.dim(), order);
    for (int k = 0; k < MetricJet::sym_count(h.dim()); ++k)
        out.comp(k) = jmul(s, h.comp(k), order);
    return out;
}

}  // namespace

// Formal adjoint of the linearized total scalar curvature:
//   (gamma* f)_{jk} = (nabla^2 f)_{jk} - g_{jk} Lap f - f Ric_{jk}.
Sym2 CurvatureJets::gamma_star_scalar(const Jet& f) const {
    auto& I = *impl_;
    if (f.order() < 2)
        throw std::invalid_argument("gamma_star_scalar: f jet order must be >= 2");
    Sym2 out = I.values_of(I.hessian(f, 0));
    double lap = I.laplacian(f, 0).value();
    double fv = f.value();
    for (int j = 0; j < I.n; ++j)
        for (int k = j; k < I.n; ++k)
            out.add(j, k, -lap * I.g.value(j, k) - fv * I.ric.value(j, k));
    return out;
}

// Formal adjoint of the linearized total Q-curvature, assembled from the
// three groups of the Q formula (Laplacian-of-scalar, |Ric|^2, R^2).
MetricJet CurvatureJets::Impl::gamma_star_q_impl(const Jet& f) const {
    require_order(4, "gamma_star_q");
    if (f.order() < 4)
        throw std::invalid_argument("gamma_star_q: f jet order must be >= 4");
    const int q = std::min(K, f.order()) - 4;
    const double An = -1.0 / (2.0 * (n - 1));
    const double Bn = -2.0 / double((n - 2) * (n - 2));
    const double Cn = (n * n * (n - 4) + 16.0 * (n - 1)) /
                      (8.0 * (n - 1) * (n - 1) * (n - 2) * (n - 2));

    // --- group A: adjoint of h -> D(Lap R).h --------------------------
    Jet lap_f = laplacian(f, q + 2);
    Jet lap2_f = laplacian(lap_f, q);
    MetricJet hess_lap_f = hessian(lap_f, q);

    std::vector<Jet> f_dr(n);  // f dR, one-form of order q+1
    for (int j = 0; j < n; ++j)
        f_dr[j] = jmul(f, jderiv(r, j, q + 1), q + 1);
    Jet div_fdr = div_oneform(f_dr, q);  // = -delta(f dR)
    MetricJet sym_n_fdr = sym_nabla_oneform(f_dr, q);

    MetricJet a = scaled_g(lap2_f, q);
    a *= -1.0;
    a += hess_lap_f;
    a -= mj_scale(lap_f, ric, q);
    a -= 0.5 * scaled_g(div_fdr, q);   // +1/2 g delta(f dR)
    a += sym_n_fdr;
    a -= mj_scale(f, hessian(r, q), q);

    // --- group B: adjoint of h -> D(|Ric|^2).h ------------------------
    MetricJet f_ric = mj_scale(f, ric, q + 2);
    MetricJet lap_f_ric = laplacian_sym2(f_ric, q);
    MetricJet f_rm_ric = mj_scale(f, rm_dot(ric, q), q);
    std::vector<Jet> div_f_ric = div_sym2(f_ric, q + 1);
    Jet divdiv = div_oneform(div_f_ric, q);  // = delta^2 (f Ric)
    MetricJet sym_n_div = sym_nabla_oneform(div_f_ric, q);

    MetricJet b = lap_f_ric;
    b += 2.0 * f_rm_ric;
    b += scaled_g(divdiv, q);
    b -= 2.0 * sym_n_div;  // +2 nabla delta(f Ric)

    // --- group C: adjoint of h -> D(R^2).h ----------------------------
    Jet f_r = jmul(f, r, q + 2);
    MetricJet c = scaled_g(laplacian(f_r, q), q);
    c -= hessian(f_r, q);
    c += mj_scale(f_r, ric, q);  // f R Ric

    a *= An;
    b *= Bn;
    c *= 2.0 * Cn;
    a -= b;
    a -= c;
    return a;
}

// Fourth-order conformally covariant scalar operator:
//   P f = Lap^2 f - div[(a_n R g + b_n Ric)(df, .)] + (n-4)/2 Q f.
Jet CurvatureJets::Impl::paneitz_impl(const Jet& f) const {
    require_order(4, "paneitz");
    if (f.order() < 4)
        throw std::invalid_argument("paneitz: f jet order must be >= 4");
    const int p = std::min(K, f.order()) - 4;
    const double an = (double((n - 2) * (n - 2)) + 4.0) /
                      (2.0 * (n - 1) * (n - 2));
    const double bn = -4.0 / (n - 2);

    Jet lap_f = laplacian(f, p + 2);
    Jet out = laplacian(lap_f, p);

    // w_j = (a_n R g_{jk} + b_n Ric_{jk}) (df)^k, order p+1
    std::vector<Jet> df_up(n);
    for (int k = 0; k < n; ++k) {
        Jet t(tab, p + 1);
        for (int l = 0; l < n; ++l)
            acc_mul(t, gi.at(k, l), jderiv(f, l, p + 1));
        df_up[k] = std::move(t);
    }
    std::vector<Jet> w(n);
    for (int j = 0; j < n; ++j) {
        Jet t(tab, p + 1);
        for (int k = 0; k < n; ++k) {
            Jet m = an * jmul(r, g.at(j, k), p + 1) +
                    bn * ric.at(j, k).truncated(p + 1);
            acc_mul(t, m, df_up[k]);
        }
        w[j] = std::move(t);
    }
    out -= div_oneform(w, p);
    out += (n - 4) / 2.0 * jmul(q13, f, p);
    return out;
}

Sym2 CurvatureJets::gamma_star_q(const Jet& f) const {
    return impl_->values_of(impl_->gamma_star_q_impl(f));
}

MetricJet CurvatureJets::gamma_star_q_jets(const Jet& f) const {
    return impl_->gamma_star_q_impl(f);
}

Sym2 CurvatureJets::j_from_adjoint() const {
    auto& I = *impl_;
    I.require_order(4, "j_from_adjoint");
    Jet one = Jet::constant(I.tab, I.K, 1.0);
    MetricJet gs = I.gamma_star_q_impl(one);
    gs *= -0.5;
    return I.values_of(gs);
}

double CurvatureJets::paneitz(const Jet& f) const {
    return impl_->paneitz_impl(f).value();
}

Jet CurvatureJets::paneitz_jet(const Jet& f) const {
    return impl_->paneitz_impl(f);
}

}  // namespace qcurv
