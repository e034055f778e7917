#include "qcurv/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qcurv/tensor.hpp"

namespace qcurv {

double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

void gauss_legendre(int m, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: need >= 1 node");
    nodes.assign(m, 0.0);
    weights.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_m.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            if (m == 1) p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pm = (m == 1) ? x : p1;
            double pm1 = (m == 1) ? 1.0 : p0;
            dp = m * (x * pm - pm1) / (x * x - 1.0);
            double dx = pm / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
}

QuadratureGrid::QuadratureGrid(std::shared_ptr<const MetricField> field,
                               std::vector<int> resolution)
    : field_(std::move(field)), res_(std::move(resolution)) {
    if (!field_) throw std::invalid_argument("QuadratureGrid: null field");
    ChartBox box = field_->box();
    dim_ = box.dim();
    if (static_cast<int>(res_.size()) != dim_)
        throw std::invalid_argument("QuadratureGrid: resolution size mismatch");

    std::vector<std::vector<double>> ax_nodes(dim_), ax_w(dim_);
    for (int a = 0; a < dim_; ++a) {
        int m = res_[a];
        if (m < 1) throw std::invalid_argument("QuadratureGrid: resolution < 1");
        double lo = box.lo[a], hi = box.hi[a], len = hi - lo;
        if (!(len > 0))
            throw std::invalid_argument("QuadratureGrid: empty axis");
        if (box.periodic[a]) {
            for (int k = 0; k < m; ++k) {
                ax_nodes[a].push_back(lo + len * k / m);
                ax_w[a].push_back(len / m);
            }
        } else {
            std::vector<double> n01, w01;
            gauss_legendre(m, n01, w01);
            for (int k = 0; k < m; ++k) {
                ax_nodes[a].push_back(lo + 0.5 * len * (n01[k] + 1.0));
                ax_w[a].push_back(0.5 * len * w01[k]);
            }
        }
    }

    std::size_t total = 1;
    for (int a = 0; a < dim_; ++a) total *= ax_nodes[a].size();
    points_.reserve(total * dim_);
    chart_w_.reserve(total);
    measure_w_.reserve(total);

    std::vector<int> idx(dim_, 0);
    std::vector<double> x(dim_);
    for (std::size_t i = 0; i < total; ++i) {
        double w = 1.0;
        for (int a = 0; a < dim_; ++a) {
            x[a] = ax_nodes[a][idx[a]];
            w *= ax_w[a][idx[a]];
        }
        points_.insert(points_.end(), x.begin(), x.end());
        chart_w_.push_back(w);
        MetricJet g = field_->jet(x.data(), 0);
        Sym2 gv(dim_);
        for (int p = 0; p < dim_; ++p)
            for (int q = p; q < dim_; ++q) gv.set(p, q, g.value(p, q));
        measure_w_.push_back(w * MetricAtPoint::from_metric(gv).sqrt_det);
        for (int a = dim_ - 1; a >= 0; --a) {
            if (++idx[a] < static_cast<int>(ax_nodes[a].size())) break;
            idx[a] = 0;
        }
    }
    volume_ = pairwise_sum(measure_w_);
}

double QuadratureGrid::integrate(const std::vector<double>& pointwise) const {
    if (pointwise.size() != size())
        throw std::invalid_argument("integrate: sample count mismatch");
    std::vector<double> terms(pointwise.size());
    for (std::size_t i = 0; i < pointwise.size(); ++i) {
        if (!std::isfinite(pointwise[i]))
            throw std::invalid_argument("integrate: non-finite sample");
        terms[i] = measure_w_[i] * pointwise[i];
    }
    return pairwise_sum(terms);
}

double QuadratureGrid::average(const std::vector<double>& pointwise) const {
    return integrate(pointwise) / volume_;
}

QuadratureGrid QuadratureGrid::coarsened() const {
    std::vector<int> half(res_.size());
    for (std::size_t a = 0; a < res_.size(); ++a)
        half[a] = std::max(2, (res_[a] + 1) / 2);
    return QuadratureGrid(field_, half);
}

std::vector<double> random_interior_point(const ChartBox& box,
                                          std::mt19937_64& rng,
                                          double margin) {
    std::vector<double> x(box.dim());
    for (int a = 0; a < box.dim(); ++a) {
        double u = (rng() >> 11) * 0x1.0p-53;
        double lo = box.lo[a], hi = box.hi[a];
        if (!box.periodic[a]) {
            double m = margin * (hi - lo);
            lo += m;
            hi -= m;
        }
        x[a] = lo + (hi - lo) * u;
    }
    return x;
}

}  // namespace qcurv
