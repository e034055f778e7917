#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <vector>

#include "qcurv/metric_jet.hpp"

namespace qcurv {

// Deterministic reduction used by every integral: fixed pairwise tree, so
// identical inputs give bit-identical sums regardless of accumulation
// order concerns.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

// Gauss-Legendre nodes/weights on (-1, 1); deterministic Newton iteration.
void gauss_legendre(int m, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Product quadrature over a chart box: Gauss-Legendre on open axes (nodes
// strictly interior, so integrable endpoint degeneracies like the sphere's
// sin-power caps need no special casing), trapezoid on periodic axes
// (spectrally accurate for smooth periodic integrands). The measure weight
// of each point folds in sqrt(det g) evaluated once at construction.
class QuadratureGrid {
public:
    QuadratureGrid(std::shared_ptr<const MetricField> field,
                   std::vector<int> resolution);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size() / dim_; }
    const double* point(std::size_t i) const { return &points_[i * dim_]; }
    double chart_weight(std::size_t i) const { return chart_w_[i]; }
    double measure_weight(std::size_t i) const { return measure_w_[i]; }

    const MetricField& field() const { return *field_; }
    std::shared_ptr<const MetricField> field_ptr() const { return field_; }
    const std::vector<int>& resolution() const { return res_; }

    double volume() const { return volume_; }
    // Integral of a pointwise-sampled scalar: sum_i w_i sqrt(det g_i) v_i.
    double integrate(const std::vector<double>& pointwise) const;
    double average(const std::vector<double>& pointwise) const;

    // Same field, every axis at half resolution: the cheap comparison grid
    // behind grid-error estimates.
    QuadratureGrid coarsened() const;

private:
    std::shared_ptr<const MetricField> field_;
    int dim_ = 0;
    std::vector<int> res_;
    std::vector<double> points_;   // size() * dim, row-major
    std::vector<double> chart_w_;  // product rule weight
    std::vector<double> measure_w_;
    double volume_ = 0;
};

// Uniform point in the box, keeping a 2% margin from non-periodic ends
// (periodic axes are sampled over the full period). Deterministic given
// the caller's engine state.
std::vector<double> random_interior_point(const ChartBox& box,
                                          std::mt19937_64& rng,
                                          double margin = 0.02);

}  // namespace qcurv
