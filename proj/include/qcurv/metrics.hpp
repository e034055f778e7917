#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcurv/metric_jet.hpp"

namespace qcurv {

// A named metric family instance: the field plus chart/topology metadata.
// euler_characteristic is recorded only for the closed 4-dimensional
// built-ins (sphere: 2, 4-torus: 0, product of 2-spheres: 4).
struct BuiltinMetric {
    std::string name;
    int dim = 0;
    std::map<std::string, double> params;
    std::shared_ptr<const MetricField> field;
    std::optional<int> euler_characteristic;
};

// Euclidean metric on an open box. Requires n >= 3.
BuiltinMetric make_flat(int n);

// Euclidean metric with every axis periodic of the given period.
BuiltinMetric make_flat_torus(int n, double period = 6.283185307179586476925287);

// Round sphere of radius r. chart: "spherical" (nested angles; polar axes
// are open intervals (0, pi), the last axis is periodic) or "stereographic"
// (conformally flat box chart around the south pole).
BuiltinMetric make_round_sphere(int n, double r,
                                const std::string& chart = "spherical");

// Hyperbolic space of curvature -1 on a Poincare-ball cap of radius rho < 1
// (box chart inscribed in the cap).
BuiltinMetric make_hyperbolic(int n, double cap_radius = 0.8);

// S^2(a) x S^2(b), dimension 4, coordinates (theta1, phi1, theta2, phi2).
BuiltinMetric make_product_spheres(double a, double b);

// g = e^{2 eps phi} * base. Validates |eps| <= conformal_eps_max(base name).
// eps == 0 returns the base field object itself (bit-identical jets).
BuiltinMetric make_conformal(const BuiltinMetric& base,
                             std::shared_ptr<const ScalarField> phi,
                             double eps);
double conformal_eps_max(const std::string& base_name);

// Canonical conformal profiles.
// On the spherical chart: cos(theta1), the restriction of the first ambient
// coordinate (a first spherical harmonic; Lap f = -n/r^2 f).
std::shared_ptr<const ScalarField> make_sphere_harmonic(int n);
// On the torus chart: cos(x1) cos(x2).
std::shared_ptr<const ScalarField> make_torus_bump(int n);
// exp(-|x - c|^2 / w^2) on any chart.
std::shared_ptr<const ScalarField> make_gaussian_bump(std::vector<double> center,
                                                      double width);

// Factory addressable from CLI configs. Known names: flat, torus, sphere,
// sphere-stereo, hyperbolic, product-spheres, conformal-sphere,
// conformal-torus. Unknown names or parameters throw invalid_argument.
BuiltinMetric make_builtin(const std::string& name,
                           const std::map<std::string, double>& params);
std::vector<std::string> builtin_names();

// ---------------------------------------------------------------------
// Composable test fields (smooth scalar / symmetric-2-tensor inputs for
// the adjointness and linearization checks).
// ---------------------------------------------------------------------

// Trig polynomial sum_k c_k cos(<w_k, x> + s_k); periodic, smooth on tori.
class TrigPolyScalar : public ScalarField {
public:
    struct Term {
        double c;
        std::vector<int> wave;
        double shift;
    };
    TrigPolyScalar(int n, std::vector<Term> terms);
    int dim() const override { return n_; }
    Jet jet(const double* x, int order) const override;

private:
    int n_;
    std::vector<Term> terms_;
};

// Polynomial in the unit ambient coordinates u_0..u_n of the nested-angle
// sphere chart (direction cosines), smooth across the poles. Terms are
// (coefficient, exponent per ambient coordinate).
class SphereAmbientPoly : public ScalarField {
public:
    struct Term {
        double c;
        std::vector<int> pow;  // size n+1
    };
    SphereAmbientPoly(int n, double r, std::vector<Term> terms);
    int dim() const override { return n_; }
    Jet jet(const double* x, int order) const override;

private:
    int n_;
    double r_;
    std::vector<Term> terms_;
};

// h = psi * g from a scalar field and a metric.
class ScaledMetricField : public Sym2Field {
public:
    ScaledMetricField(std::shared_ptr<const ScalarField> psi,
                      std::shared_ptr<const MetricField> g);
    int dim() const override;
    MetricJet jet(const double* x, int order) const override;

private:
    std::shared_ptr<const ScalarField> psi_;
    std::shared_ptr<const MetricField> g_;
};

// h = sum_k c_k df_k (sym) dphi_k, built from pairs of scalar fields.
class GradProductField : public Sym2Field {
public:
    struct Term {
        double c;
        std::shared_ptr<const ScalarField> f;
        std::shared_ptr<const ScalarField> phi;
    };
    GradProductField(int n, std::vector<Term> terms);
    int dim() const override { return n_; }
    MetricJet jet(const double* x, int order) const override;

private:
    int n_;
    std::vector<Term> terms_;
};

// Lie derivative (L_X g)_{ij} = X^k d_k g_{ij} + g_{kj} d_i X^k
//                              + g_{ik} d_j X^k.
class LieDerivativeField : public Sym2Field {
public:
    LieDerivativeField(std::shared_ptr<const VectorField> x,
                       std::shared_ptr<const MetricField> g);
    int dim() const override;
    MetricJet jet(const double* x, int order) const override;

private:
    std::shared_ptr<const VectorField> x_;
    std::shared_ptr<const MetricField> g_;
};

// Gradient vector fields X^i = g^{ij} d_j f for Lie-derivative directions.
class GradientVectorField : public VectorField {
public:
    GradientVectorField(std::shared_ptr<const ScalarField> f,
                        std::shared_ptr<const MetricField> g);
    int dim() const override;
    void jets(const double* x, int order, Jet* out) const override;

private:
    std::shared_ptr<const ScalarField> f_;
    std::shared_ptr<const MetricField> g_;
};

// Vector field with one trig-polynomial scalar per contravariant component.
// Unlike gradient fields this needs no extra jet orders, so Lie-derivative
// directions built from it stay within the order-5 cap.
class TrigPolyVector : public VectorField {
public:
    TrigPolyVector(int n, std::vector<TrigPolyScalar> components);
    int dim() const override { return n_; }
    void jets(const double* x, int order, Jet* out) const override;

private:
    int n_;
    std::vector<TrigPolyScalar> comps_;
};

}  // namespace qcurv
