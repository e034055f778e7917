#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qcurv/metric_jet.hpp"

namespace qcurv {

// Finite-difference weights for the m-th derivative at z from arbitrary
// nodes x (Fornberg's recurrence).
std::vector<double> fd_weights(double z, const std::vector<double>& x, int m);

// Default step for a partial of total degree `deg`, before scaling:
// 2e-2 for deg <= 2, 4e-2 for 3-4, 6e-2 for 5.
double fd_default_step(int deg);

// Jet of a scalar function by central finite differences: per-axis stencils
// of at least 4th-order accuracy combined as tensor products, then one
// Richardson level (16 D(h/2) - D(h)) / 15.  `step_scale` multiplies the
// per-degree default steps.  Throws std::domain_error if a stencil point
// leaves `in_domain` (pass nullptr to skip the check).
Jet fd_jet(const std::function<double(const double*)>& f, int dim,
           const double* x0, int order, double step_scale = 1.0,
           const std::function<bool(const double*)>* in_domain = nullptr);

// Metric field whose jets are finite differences of another field's
// component values. Exercises the exact same downstream code paths as the
// analytic backend, so agreement between the two validates both.
class FdMetricField : public MetricField {
public:
    explicit FdMetricField(std::shared_ptr<const MetricField> base,
                           double step_scale = 1.0);

    int dim() const override { return base_->dim(); }
    MetricJet jet(const double* x, int order) const override;
    ChartBox box() const override { return base_->box(); }
    bool in_domain(const double* x) const override {
        return base_->in_domain(x);
    }
    bool closed_chart() const override { return base_->closed_chart(); }

private:
    std::shared_ptr<const MetricField> base_;
    double scale_;
};

}  // namespace qcurv
