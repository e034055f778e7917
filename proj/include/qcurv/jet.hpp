#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>

#include "qcurv/multi_index.hpp"

namespace qcurv {

// Raw kernels on coefficient arrays. Coefficients are Taylor coefficients
// (partial derivative / alpha!), stored dense in the table's graded-lex
// order; a jet of order m uses the first ncoef(m) slots. Hot loops in the
// curvature assembly call these directly on flat storage.
namespace jk {

inline void clear(double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] = 0.0;
}

inline void acc(double* out, const double* a, int n) {
    for (int i = 0; i < n; ++i) out[i] += a[i];
}

inline void acc_scaled(double* out, const double* a, double s, int n) {
    for (int i = 0; i < n; ++i) out[i] += s * a[i];
}

// out += a * b, truncated to `order_out`; na/nb are operand coefficient
// counts (operands of lower order simply contribute fewer pairs).
inline void mul_acc(const JetTable& t, int order_out, double* out,
                    const double* a, int na, const double* b, int nb) {
    for (const auto& e : t.mul_upto(order_out)) {
        if (e.a < static_cast<std::uint32_t>(na) &&
            e.b < static_cast<std::uint32_t>(nb))
            out[e.out] += a[e.a] * b[e.b];
    }
}

inline void mul_acc_scaled(const JetTable& t, int order_out, double* out,
                           double s, const double* a, int na, const double* b,
                           int nb) {
    for (const auto& e : t.mul_upto(order_out)) {
        if (e.a < static_cast<std::uint32_t>(na) &&
            e.b < static_cast<std::uint32_t>(nb))
            out[e.out] += s * a[e.a] * b[e.b];
    }
}

// out = d/dx_v src (formal derivative), for out of order `order_out`;
// src must have order >= order_out + 1.
inline void deriv(const JetTable& t, int order_out, double* out, int v,
                  const double* src) {
    int n = t.ncoef(order_out);
    for (int i = 0; i < n; ++i) {
        const auto& d = t.deriv(v, i);
        out[i] = d.factor * src[d.src];
    }
}

}  // namespace jk

// Truncated multivariate Taylor polynomial (a "jet"): value and all
// partial derivatives up to `order` at a point, propagated exactly through
// arithmetic. Division and the analytic lifts require the leading
// coefficient to be in the function's domain.
//
// Coefficients live in an inline buffer unless the jet is large; curvature
// assembly spends most of its time on jets of order <= 2, which must not
// pay for heap traffic.
class Jet {
    static constexpr int kInline = 36;

public:
    Jet() : sb_{} {}
    Jet(const JetTable& tab, int order) : tab_(&tab), order_(order) {
        check_order(tab, order);
        n_ = tab.ncoef(order);
        if (n_ > kInline) {
            hp_.reset(new double[n_]);
            cap_ = n_;
        }
        jk::clear(data(), n_);
    }

    Jet(const Jet& o) : tab_(o.tab_), order_(o.order_), n_(o.n_) {
        if (n_ > kInline) {
            hp_.reset(new double[n_]);
            cap_ = n_;
        }
        std::copy_n(o.data(), n_, data());
    }
    Jet(Jet&& o) noexcept
        : tab_(o.tab_), order_(o.order_), n_(o.n_), cap_(o.cap_),
          hp_(std::move(o.hp_)) {
        if (!hp_) std::copy_n(o.sb_, std::min(n_, kInline), sb_);
        o.n_ = 0;
        o.order_ = 0;
        o.cap_ = 0;
    }
    Jet& operator=(const Jet& o) {
        if (this != &o) {
            if (o.n_ > kInline && cap_ < o.n_) {
                hp_.reset(new double[o.n_]);
                cap_ = o.n_;
            }
            tab_ = o.tab_;
            order_ = o.order_;
            n_ = o.n_;
            std::copy_n(o.data(), n_, data());
        }
        return *this;
    }
    Jet& operator=(Jet&& o) noexcept {
        if (this != &o) {
            tab_ = o.tab_;
            order_ = o.order_;
            n_ = o.n_;
            if (o.hp_) {
                hp_ = std::move(o.hp_);
                cap_ = o.cap_;
            } else {
                std::copy_n(o.sb_, std::min(n_, kInline), sb_);
            }
            o.n_ = 0;
            o.order_ = 0;
            o.cap_ = 0;
        }
        return *this;
    }

    static Jet constant(const JetTable& tab, int order, double v) {
        Jet j(tab, order);
        j.coeff(0) = v;
        return j;
    }
    // The coordinate function x_v expanded at x_v = value.
    static Jet variable(const JetTable& tab, int order, int v, double value) {
        Jet j(tab, order);
        j.coeff(0) = value;
        if (order >= 1) j.coeff(tab.var_index(v)) = 1.0;
        return j;
    }

    const JetTable& table() const { return *tab_; }
    int dim() const { return tab_->dim(); }
    int order() const { return order_; }
    int ncoef() const { return n_; }
    bool valid() const { return tab_ != nullptr; }

    double value() const { return data()[0]; }
    double coeff(int idx) const { return data()[idx]; }
    double& coeff(int idx) { return data()[idx]; }
    const double* data() const { return n_ > kInline ? hp_.get() : sb_; }
    double* data() { return n_ > kInline ? hp_.get() : sb_; }

    // Partial derivative d^alpha (Taylor coefficient times alpha!).
    double partial(const MultiIndex& alpha) const;

    Jet truncated(int order) const;
    Jet derivative(int v) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator+=(double s) { coeff(0) += s; return *this; }
    Jet& operator-=(double s) { coeff(0) -= s; return *this; }
    Jet& operator*=(double s);

    friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
    friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
    friend Jet operator+(Jet a, double s) { a += s; return a; }
    friend Jet operator+(double s, Jet a) { a += s; return a; }
    friend Jet operator-(Jet a, double s) { a -= s; return a; }
    friend Jet operator-(double s, const Jet& a) { Jet r = -a; r += s; return r; }
    friend Jet operator*(Jet a, double s) { a *= s; return a; }
    friend Jet operator*(double s, Jet a) { a *= s; return a; }
    friend Jet operator/(Jet a, double s) { a *= 1.0 / s; return a; }

    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double s, const Jet& b);

    // f(u) for analytic f, via Horner on the nilpotent part of u. `derivs`
    // holds f^(k)(u_0)/k! for k = 0..order.
    Jet lifted(std::span<const double> derivs) const;

    friend Jet exp(const Jet& u);
    friend Jet log(const Jet& u);
    friend Jet sin(const Jet& u);
    friend Jet cos(const Jet& u);
    friend Jet sqrt(const Jet& u);
    friend Jet pow(const Jet& u, double p);
    // Integer power by repeated multiplication (no domain restriction).
    friend Jet ipow(Jet u, int k);

private:
    static void check_order(const JetTable& tab, int order) {
        if (order < 0 || order > tab.max_order())
            throw std::invalid_argument("Jet: order out of range");
    }
    void check_compat(const Jet& o) const {
        if (tab_ != o.tab_)
            throw std::invalid_argument("Jet: mixed dimensions");
    }
    void shrink_to(int order) {  // truncation never reallocates
        order_ = order;
        n_ = tab_->ncoef(order);
    }

    const JetTable* tab_ = nullptr;
    int order_ = 0;
    int n_ = 0;
    int cap_ = 0;
    std::unique_ptr<double[]> hp_;
    double sb_[kInline];
};

// Product / derivative with an explicit output order: avoids materializing
// high-order intermediates when only a truncation is needed.
inline Jet jmul(const Jet& a, const Jet& b, int order) {
    Jet r(a.table(), order);
    jk::mul_acc(a.table(), order, r.data(), a.data(), a.ncoef(), b.data(),
                b.ncoef());
    return r;
}

inline Jet jderiv(const Jet& a, int v, int order) {
    if (order > a.order() - 1)
        throw std::invalid_argument("jderiv: insufficient source order");
    Jet r(a.table(), order);
    jk::deriv(a.table(), order, r.data(), v, a.data());
    return r;
}

// Flat storage for `count` jets of uniform order sharing one table: one
// allocation, fixed stride. Used for tensor-of-jet intermediates.
class JetArray {
public:
    JetArray() = default;
    JetArray(const JetTable& tab, int order, int count)
        : tab_(&tab), order_(order), stride_(tab.ncoef(order)),
          data_(static_cast<std::size_t>(stride_) * count, 0.0) {}

    void reset(const JetTable& tab, int order, int count) {
        tab_ = &tab;
        order_ = order;
        stride_ = tab.ncoef(order);
        data_.assign(static_cast<std::size_t>(stride_) * count, 0.0);
    }

    const JetTable& table() const { return *tab_; }
    int order() const { return order_; }
    int stride() const { return stride_; }
    int count() const {
        return stride_ == 0 ? 0 : static_cast<int>(data_.size()) / stride_;
    }

    double* at(int i) { return data_.data() + static_cast<std::size_t>(i) * stride_; }
    const double* at(int i) const {
        return data_.data() + static_cast<std::size_t>(i) * stride_;
    }
    void zero() { std::fill(data_.begin(), data_.end(), 0.0); }

    Jet get(int i) const {
        Jet j(*tab_, order_);
        std::copy_n(at(i), stride_, j.data());
        return j;
    }
    void set(int i, const Jet& j) {
        int n = std::min(stride_, j.ncoef());
        double* p = at(i);
        jk::clear(p, stride_);
        std::copy_n(j.data(), n, p);
    }

private:
    const JetTable* tab_ = nullptr;
    int order_ = 0;
    int stride_ = 0;
    std::vector<double> data_;
};

}  // namespace qcurv
