#include "qcurv/curvature.hpp"

namespace qcurv {

namespace {

// Central difference with one Richardson level: (4 D(s/2) - D(s)) / 3.
template <typename F>
double richardson_derivative(F&& value_at, double s) {
    double d1 = (value_at(s) - value_at(-s)) / (2 * s);
    double d2 = (value_at(s / 2) - value_at(-s / 2)) / s;
    return (4 * d2 - d1) / 3;
}

}  // namespace

GammaLinearization linearize_scalar_direction(const MetricField& g,
                                              const Sym2Field& h,
                                              const double* x, double fd_step) {
    GammaLinearization out;
    MetricJet hj = h.jet(x, 2);
    out.closed_form = CurvatureJets(g.jet(x, 3)).gamma_linearized(hj);

    MetricJet g2 = g.jet(x, 2);
    out.fd = richardson_derivative(
        [&](double t) {
            MetricJet p = g2;
            MetricJet ht = hj;
            ht *= t;
            p += ht;
            return CurvatureJets(p).bundle().scalar;
        },
        fd_step);
    return out;
}

double linearize_q_direction(const MetricField& g, const Sym2Field& h,
                             const double* x, double fd_step) {
    MetricJet g4 = g.jet(x, 4);
    MetricJet h4 = h.jet(x, 4);
    return richardson_derivative(
        [&](double t) {
            MetricJet p = g4;
            MetricJet ht = h4;
            ht *= t;
            p += ht;
            return CurvatureJets(p).bundle().q;
        },
        fd_step);
}

}  // namespace qcurv
