#include "qcurv/jet.hpp"

namespace qcurv {

double Jet::partial(const MultiIndex& alpha) const {
    int idx = tab_->index_of(alpha);
    if (idx < 0 || idx >= n_)
        throw std::invalid_argument("Jet::partial: order exceeds jet order");
    return data()[idx] * tab_->factorial(idx);
}

Jet Jet::truncated(int order) const {
    if (order > order_)
        throw std::invalid_argument("Jet::truncated: cannot raise order");
    Jet r(*tab_, order);
    std::copy_n(data(), r.n_, r.data());
    return r;
}

Jet Jet::derivative(int v) const {
    if (order_ == 0)
        throw std::invalid_argument("Jet::derivative: order-0 jet");
    return jderiv(*this, v, order_ - 1);
}

Jet Jet::operator-() const {
    Jet r(*tab_, order_);
    const double* s = data();
    double* d = r.data();
    for (int i = 0; i < n_; ++i) d[i] = -s[i];
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_compat(o);
    if (o.order_ < order_) shrink_to(o.order_);
    jk::acc(data(), o.data(), n_);
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compat(o);
    if (o.order_ < order_) shrink_to(o.order_);
    jk::acc_scaled(data(), o.data(), -1.0, n_);
    return *this;
}

Jet& Jet::operator*=(double s) {
    double* d = data();
    for (int i = 0; i < n_; ++i) d[i] *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compat(b);
    return jmul(a, b, std::min(a.order_, b.order_));
}

Jet Jet::lifted(std::span<const double> derivs) const {
    if (static_cast<int>(derivs.size()) < order_ + 1)
        throw std::invalid_argument("Jet::lifted: not enough derivatives");
    // u = u0 + w with w nilpotent: f(u) = sum_k derivs[k] * w^k via Horner.
    Jet w = *this;
    w.coeff(0) = 0.0;
    Jet r = Jet::constant(*tab_, order_, derivs[order_]);
    for (int k = order_ - 1; k >= 0; --k) {
        r = r * w;
        r.coeff(0) += derivs[k];
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    a.check_compat(b);
    int order = std::min(a.order_, b.order_);
    Jet inv = 1.0 / (b.order_ == order ? b : b.truncated(order));
    return jmul(a, inv, order);
}

Jet operator/(double s, const Jet& b) {
    double u0 = b.value();
    if (u0 == 0.0)
        throw std::invalid_argument("Jet: division by jet with zero value");
    double d[kMaxJetOrder + 1];
    double p = 1.0 / u0;  // (1/u)^(k)/k! = (-1)^k / u0^{k+1}
    for (int k = 0; k <= b.order(); ++k) {
        d[k] = p;
        p *= -1.0 / u0;
    }
    Jet r = b.lifted({d, static_cast<std::size_t>(b.order() + 1)});
    r *= s;
    return r;
}

Jet exp(const Jet& u) {
    double e = std::exp(u.value());
    double d[kMaxJetOrder + 1];
    double f = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
        d[k] = e / f;
        f *= k + 1;
    }
    return u.lifted({d, static_cast<std::size_t>(u.order() + 1)});
}

Jet log(const Jet& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw std::invalid_argument("Jet: log of non-positive value");
    double d[kMaxJetOrder + 1];
    d[0] = std::log(u0);
    double p = 1.0 / u0;  // log^(k)/k! = (-1)^{k+1} / (k * u0^k)
    for (int k = 1; k <= u.order(); ++k) {
        d[k] = ((k % 2) ? p : -p) / k;
        p /= u0;
    }
    return u.lifted({d, static_cast<std::size_t>(u.order() + 1)});
}

Jet sin(const Jet& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    double cyc[4] = {s, c, -s, -c};
    double d[kMaxJetOrder + 1];
    double f = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
        d[k] = cyc[k % 4] / f;
        f *= k + 1;
    }
    return u.lifted({d, static_cast<std::size_t>(u.order() + 1)});
}

Jet cos(const Jet& u) {
    double s = std::sin(u.value()), c = std::cos(u.value());
    double cyc[4] = {c, -s, -c, s};
    double d[kMaxJetOrder + 1];
    double f = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
        d[k] = cyc[k % 4] / f;
        f *= k + 1;
    }
    return u.lifted({d, static_cast<std::size_t>(u.order() + 1)});
}

Jet pow(const Jet& u, double p) {
    double u0 = u.value();
    if (u0 <= 0.0)
        throw std::invalid_argument("Jet: pow of non-positive base");
    double d[kMaxJetOrder + 1];
    double coef = std::pow(u0, p);
    double f = 1.0;
    for (int k = 0; k <= u.order(); ++k) {
        d[k] = coef / f;          // p(p-1)...(p-k+1) u0^{p-k} / k!
        coef *= (p - k) / u0;
        f *= k + 1;
    }
    return u.lifted({d, static_cast<std::size_t>(u.order() + 1)});
}

Jet sqrt(const Jet& u) { return pow(u, 0.5); }

Jet ipow(Jet u, int k) {
    if (k < 0) return 1.0 / ipow(std::move(u), -k);
    Jet r = Jet::constant(u.table(), u.order(), 1.0);
    while (k > 0) {
        if (k & 1) r = r * u;
        k >>= 1;
        if (k) u = u * u;
    }
    return r;
}

}  // namespace qcurv
