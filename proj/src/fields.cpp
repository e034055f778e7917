#include <cmath>
#include <stdexcept>

#include "qcurv/metrics.hpp"

namespace qcurv {

TrigPolyScalar::TrigPolyScalar(int n, std::vector<Term> terms)
    : n_(n), terms_(std::move(terms)) {
    for (const Term& t : terms_)
        if (static_cast<int>(t.wave.size()) != n)
            throw std::invalid_argument("TrigPolyScalar: wave vector size");
}

Jet TrigPolyScalar::jet(const double* x, int order) const {
    const JetTable& tab = JetTable::get(n_);
    Jet out(tab, order);
    for (const Term& t : terms_) {
        Jet arg = Jet::constant(tab, order, t.shift);
        for (int i = 0; i < n_; ++i)
            if (t.wave[i] != 0)
                arg += double(t.wave[i]) * Jet::variable(tab, order, i, x[i]);
        out += t.c * cos(arg);
    }
    return out;
}

SphereAmbientPoly::SphereAmbientPoly(int n, double r, std::vector<Term> terms)
    : n_(n), r_(r), terms_(std::move(terms)) {
    if (!(r > 0)) throw std::invalid_argument("SphereAmbientPoly: radius");
    for (const Term& t : terms_)
        if (static_cast<int>(t.pow.size()) != n + 1)
            throw std::invalid_argument("SphereAmbientPoly: exponent count");
}

Jet SphereAmbientPoly::jet(const double* x, int order) const {
    const JetTable& tab = JetTable::get(n_);
    // Direction cosines: u_0 = cos t1, u_k = sin t1 .. sin tk cos t(k+1),
    // u_n = sin t1 .. sin tn.
    std::vector<Jet> u(n_ + 1);
    Jet run = Jet::constant(tab, order, 1.0);
    for (int k = 0; k < n_; ++k) {
        Jet tk = Jet::variable(tab, order, k, x[k]);
        u[k] = jmul(run, cos(tk), order);
        run = jmul(run, sin(tk), order);
    }
    u[n_] = run;
    Jet out(tab, order);
    for (const Term& t : terms_) {
        Jet term = Jet::constant(tab, order, t.c);
        for (int k = 0; k <= n_; ++k)
            if (t.pow[k] > 0) term = jmul(term, ipow(u[k], t.pow[k]), order);
        out += term;
    }
    return out;
}

ScaledMetricField::ScaledMetricField(std::shared_ptr<const ScalarField> psi,
                                     std::shared_ptr<const MetricField> g)
    : psi_(std::move(psi)), g_(std::move(g)) {
    if (psi_->dim() != g_->dim())
        throw std::invalid_argument("ScaledMetricField: dimension mismatch");
}

int ScaledMetricField::dim() const { return g_->dim(); }

MetricJet ScaledMetricField::jet(const double* x, int order) const {
    MetricJet g = g_->jet(x, order);
    Jet psi = psi_->jet(x, order);
    for (int k = 0; k < MetricJet::sym_count(g.dim()); ++k)
        g.comp(k) = jmul(psi, g.comp(k), order);
    return g;
}

GradProductField::GradProductField(int n, std::vector<Term> terms)
    : n_(n), terms_(std::move(terms)) {
    for (const Term& t : terms_)
        if (!t.f || !t.phi || t.f->dim() != n || t.phi->dim() != n)
            throw std::invalid_argument("GradProductField: bad term");
}

MetricJet GradProductField::jet(const double* x, int order) const {
    MetricJet out(n_, order);
    for (const Term& t : terms_) {
        Jet fj = t.f->jet(x, order + 1);
        Jet pj = t.phi->jet(x, order + 1);
        std::vector<Jet> df(n_), dp(n_);
        for (int i = 0; i < n_; ++i) {
            df[i] = jderiv(fj, i, order);
            dp[i] = jderiv(pj, i, order);
        }
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                Jet s = jmul(df[i], dp[j], order) + jmul(df[j], dp[i], order);
                s *= 0.5 * t.c;
                out.at(i, j) += s;
            }
    }
    return out;
}

LieDerivativeField::LieDerivativeField(std::shared_ptr<const VectorField> x,
                                       std::shared_ptr<const MetricField> g)
    : x_(std::move(x)), g_(std::move(g)) {
    if (x_->dim() != g_->dim())
        throw std::invalid_argument("LieDerivativeField: dimension mismatch");
}

int LieDerivativeField::dim() const { return g_->dim(); }

MetricJet LieDerivativeField::jet(const double* x, int order) const {
    const int n = g_->dim();
    MetricJet g = g_->jet(x, order + 1);
    std::vector<Jet> X(n);
    x_->jets(x, order + 1, X.data());
    MetricJet out(n, order);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Jet s(g.table(), order);
            for (int k = 0; k < n; ++k) {
                s += jmul(X[k], jderiv(g.at(i, j), k, order), order);
                s += jmul(g.at(k, j).truncated(order), jderiv(X[k], i, order),
                          order);
                s += jmul(g.at(i, k).truncated(order), jderiv(X[k], j, order),
                          order);
            }
            out.at(i, j) = std::move(s);
        }
    return out;
}

GradientVectorField::GradientVectorField(std::shared_ptr<const ScalarField> f,
                                         std::shared_ptr<const MetricField> g)
    : f_(std::move(f)), g_(std::move(g)) {
    if (f_->dim() != g_->dim())
        throw std::invalid_argument("GradientVectorField: dimension mismatch");
}

int GradientVectorField::dim() const { return g_->dim(); }

void GradientVectorField::jets(const double* x, int order, Jet* out) const {
    const int n = g_->dim();
    MetricJet gi = g_->jet(x, order).inverse();
    Jet fj = f_->jet(x, order + 1);
    for (int i = 0; i < n; ++i) {
        Jet t(gi.table(), order);
        for (int j = 0; j < n; ++j) {
            Jet dj = jderiv(fj, j, order);
            jk::mul_acc(t.table(), order, t.data(), gi.at(i, j).data(),
                        gi.at(i, j).ncoef(), dj.data(), dj.ncoef());
        }
        out[i] = std::move(t);
    }
}

TrigPolyVector::TrigPolyVector(int n, std::vector<TrigPolyScalar> components)
    : n_(n), comps_(std::move(components)) {
    if (static_cast<int>(comps_.size()) != n)
        throw std::invalid_argument("TrigPolyVector: component count");
    for (const auto& c : comps_)
        if (c.dim() != n)
            throw std::invalid_argument("TrigPolyVector: dimension mismatch");
}

void TrigPolyVector::jets(const double* x, int order, Jet* out) const {
    for (int i = 0; i < n_; ++i) out[i] = comps_[i].jet(x, order);
}

}  // namespace qcurv
