#pragma once

#include <memory>
#include <vector>

#include "qcurv/jet.hpp"

namespace qcurv {

// Symmetric 2-tensor of jets at a point: one Jet per independent component,
// upper triangle row-major. Used for the metric itself, for metric
// perturbations, and for tensor-valued fields fed to the integral reports.
class MetricJet {
public:
    MetricJet() = default;
    MetricJet(int dim, int order);

    static int sym_count(int n) { return n * (n + 1) / 2; }
    static int sym_index(int n, int i, int j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i - 1) / 2 + (j - i);
    }

    int dim() const { return n_; }
    int order() const { return c_.empty() ? 0 : c_[0].order(); }
    const JetTable& table() const { return c_[0].table(); }

    Jet& at(int i, int j) { return c_[sym_index(n_, i, j)]; }
    const Jet& at(int i, int j) const { return c_[sym_index(n_, i, j)]; }
    Jet& comp(int k) { return c_[k]; }
    const Jet& comp(int k) const { return c_[k]; }

    double value(int i, int j) const { return at(i, j).value(); }

    MetricJet truncated(int order) const;
    // Pointwise matrix inverse propagated through jet arithmetic
    // (Gauss-Jordan with value-level partial pivoting). Requires the value
    // part to be invertible.
    MetricJet inverse() const;

    MetricJet& operator+=(const MetricJet& o);
    MetricJet& operator-=(const MetricJet& o);
    MetricJet& operator*=(double s);
    friend MetricJet operator+(MetricJet a, const MetricJet& b) {
        a += b;
        return a;
    }
    friend MetricJet operator-(MetricJet a, const MetricJet& b) {
        a -= b;
        return a;
    }
    friend MetricJet operator*(MetricJet a, double s) {
        a *= s;
        return a;
    }
    friend MetricJet operator*(double s, MetricJet a) {
        a *= s;
        return a;
    }

private:
    int n_ = 0;
    std::vector<Jet> c_;
};

// Per-axis chart bounds. Periodic axes are integrated with the trapezoid
// rule (spectrally accurate there) and may be sampled anywhere; open axes
// use Gauss-Legendre nodes, which stay strictly interior.
struct ChartBox {
    std::vector<double> lo, hi;
    std::vector<bool> periodic;

    int dim() const { return static_cast<int>(lo.size()); }
};

class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual int dim() const = 0;
    virtual Jet jet(const double* x, int order) const = 0;
};

class VectorField {
public:
    virtual ~VectorField() = default;
    virtual int dim() const = 0;
    // Writes dim() jets: the contravariant components X^i.
    virtual void jets(const double* x, int order, Jet* out) const = 0;
};

class Sym2Field {
public:
    virtual ~Sym2Field() = default;
    virtual int dim() const = 0;
    virtual MetricJet jet(const double* x, int order) const = 0;
};

// A Riemannian metric on a coordinate chart: jets of the components plus
// the chart extent. in_domain() is consulted before any evaluation that
// steps off a quadrature node (finite differencing, random sampling).
// closed_chart() reports whether the chart covers a closed manifold up to
// a measure-zero set, i.e. whether integration by parts over the box is
// exact (tori, full-sphere angle charts, products of those).
class MetricField : public Sym2Field {
public:
    virtual ChartBox box() const = 0;
    virtual bool in_domain(const double* x) const;
    virtual bool closed_chart() const { return false; }
};

}  // namespace qcurv
