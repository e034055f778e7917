#include "qcurv/fd.hpp"

#include <cmath>
#include <stdexcept>

namespace qcurv {

std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    if (n < m + 1)
        throw std::invalid_argument("fd_weights: need at least m+1 nodes");
    // Fornberg 1988, generation of all orders up to m; we keep column m.
    std::vector<double> C(static_cast<std::size_t>(n) * (m + 1), 0.0);
    auto at = [&](int i, int k) -> double& { return C[i * (m + 1) + k]; };
    double c1 = 1.0, c4 = x[0] - z;
    at(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
                at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
            at(j, 0) = c4 * at(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = at(i, m);
    return w;
}

double fd_default_step(int deg) {
    // Sized on unit-scale analytic fields so that the Richardson-corrected
    // truncation error and the h^-deg roundoff amplification balance out;
    // high orders sit far from the roundoff floor at these values.
    if (deg <= 2) return 2e-2;
    if (deg <= 4) return 4e-2;
    return 6e-2;
}

namespace {

// Symmetric stencil offsets {-p..p} with p = floor(m/2) + 2: accuracy
// >= 4 for every derivative order m in 1..5.
int halfwidth(int m) { return m / 2 + 2; }

struct AxisStencil {
    int axis;
    int p;
    std::vector<double> w;  // weights over offsets -p..p, divided by h^m
};

// One finite-difference pass at a fixed base step.
double fd_partial(const std::function<double(const double*)>& f, int dim,
                  const double* x0, const std::uint8_t* alpha, double h) {
    AxisStencil st[kMaxDim];
    int nact = 0;
    for (int v = 0; v < dim; ++v) {
        if (alpha[v] == 0) continue;
        int m = alpha[v], p = halfwidth(m);
        std::vector<double> nodes(2 * p + 1);
        for (int k = -p; k <= p; ++k) nodes[k + p] = k * h;
        st[nact++] = {v, p, fd_weights(0.0, nodes, m)};
    }
    std::vector<double> x(x0, x0 + dim);
    double acc = 0.0;
    // Iterate the tensor product of the active stencils.
    std::vector<int> off(nact, 0);
    for (int a = 0; a < nact; ++a) off[a] = -st[a].p;
    while (true) {
        double wprod = 1.0;
        for (int a = 0; a < nact; ++a) {
            x[st[a].axis] = x0[st[a].axis] + off[a] * h;
            wprod *= st[a].w[off[a] + st[a].p];
        }
        acc += wprod * f(x.data());
        int a = 0;
        while (a < nact) {
            if (++off[a] <= st[a].p) break;
            off[a] = -st[a].p;
            ++a;
        }
        if (a == nact) break;
    }
    return acc;
}

}  // namespace

Jet fd_jet(const std::function<double(const double*)>& f, int dim,
           const double* x0, int order, double step_scale,
           const std::function<bool(const double*)>* in_domain) {
    const JetTable& tab = JetTable::get(dim);
    if (order > tab.max_order())
        throw std::invalid_argument("fd_jet: order out of range");
    Jet r(tab, order);
    r.coeff(0) = f(x0);
    if (order == 0) return r;

    if (in_domain) {
        // Widest excursion: halfwidth(1)=2 ... halfwidth(5)=4 times the
        // largest step; probe the corners of that box.
        double hmax = fd_default_step(order) * step_scale * halfwidth(5);
        std::vector<double> x(x0, x0 + dim);
        for (int v = 0; v < dim; ++v) {
            x[v] = x0[v] + hmax;
            bool hi = (*in_domain)(x.data());
            x[v] = x0[v] - hmax;
            bool lo = (*in_domain)(x.data());
            x[v] = x0[v];
            if (!hi || !lo)
                throw std::domain_error("fd_jet: stencil leaves the chart domain");
        }
    }

    for (int i = 1; i < tab.ncoef(order); ++i) {
        const std::uint8_t* alpha = tab.exponents(i).data();
        double h = fd_default_step(tab.degree(i)) * step_scale;
        double d1 = fd_partial(f, dim, x0, alpha, h);
        double d2 = fd_partial(f, dim, x0, alpha, h / 2);
        r.coeff(i) = (16.0 * d2 - d1) / 15.0 / tab.factorial(i);
    }
    return r;
}

FdMetricField::FdMetricField(std::shared_ptr<const MetricField> base,
                             double step_scale)
    : base_(std::move(base)), scale_(step_scale) {
    if (scale_ <= 0) throw std::invalid_argument("FdMetricField: step scale");
}

MetricJet FdMetricField::jet(const double* x, int order) const {
    const int n = base_->dim();
    MetricJet out(n, order);
    std::function<bool(const double*)> dom = [this](const double* p) {
        return base_->in_domain(p);
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            auto comp = [&, i, j](const double* p) {
                return base_->jet(p, 0).value(i, j);
            };
            out.at(i, j) = fd_jet(comp, n, x, order, scale_, &dom);
        }
    return out;
}

}  // namespace qcurv
