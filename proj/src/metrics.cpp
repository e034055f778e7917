#include "qcurv/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcurv {

namespace {

constexpr double kPi = std::numbers::pi;

ChartBox open_box(int n, double lo, double hi) {
    ChartBox b;
    b.lo.assign(n, lo);
    b.hi.assign(n, hi);
    b.periodic.assign(n, false);
    return b;
}

class FlatField final : public MetricField {
public:
    explicit FlatField(int n) : n_(n) {}
    int dim() const override { return n_; }
    MetricJet jet(const double*, int order) const override {
        const JetTable& tab = JetTable::get(n_);
        MetricJet out(n_, order);
        for (int i = 0; i < n_; ++i)
            out.at(i, i) = Jet::constant(tab, order, 1.0);
        return out;
    }
    ChartBox box() const override { return open_box(n_, -1.0, 1.0); }

private:
    int n_;
};

class TorusField final : public MetricField {
public:
    TorusField(int n, double period) : n_(n), period_(period) {}
    int dim() const override { return n_; }
    MetricJet jet(const double*, int order) const override {
        const JetTable& tab = JetTable::get(n_);
        MetricJet out(n_, order);
        for (int i = 0; i < n_; ++i)
            out.at(i, i) = Jet::constant(tab, order, 1.0);
        return out;
    }
    ChartBox box() const override {
        ChartBox b = open_box(n_, 0.0, period_);
        b.periodic.assign(n_, true);
        return b;
    }
    bool in_domain(const double*) const override { return true; }
    bool closed_chart() const override { return true; }

private:
    int n_;
    double period_;
};

// Nested-angle chart: coordinates (t_1, ..., t_{n-1}, phi) with
// g = diag(r^2, r^2 sin^2 t_1, r^2 sin^2 t_1 sin^2 t_2, ...). The polar
// axes are the open interval (0, pi); quadrature nodes stay interior and
// the sin powers in sqrt(det g) vanish at the excluded endpoints.
class SphereNestedField final : public MetricField {
public:
    SphereNestedField(int n, double r) : n_(n), r_(r) {}
    int dim() const override { return n_; }
    MetricJet jet(const double* x, int order) const override {
        const JetTable& tab = JetTable::get(n_);
        MetricJet out(n_, order);
        Jet run = Jet::constant(tab, order, r_ * r_);
        out.at(0, 0) = run;
        for (int i = 1; i < n_; ++i) {
            Jet s = sin(Jet::variable(tab, order, i - 1, x[i - 1]));
            run = jmul(run, jmul(s, s, order), order);
            out.at(i, i) = run;
        }
        return out;
    }
    ChartBox box() const override {
        ChartBox b = open_box(n_, 0.0, kPi);
        b.lo[n_ - 1] = 0.0;
        b.hi[n_ - 1] = 2.0 * kPi;
        b.periodic[n_ - 1] = true;
        return b;
    }
    bool closed_chart() const override { return true; }

private:
    int n_;
    double r_;
};

// Conformally flat chart g = 4 r^4 / (r^2 + |x|^2)^2 delta on a box
// inscribed in the |x| <= 10 r cap (misses only a neighborhood of one pole).
class SphereStereoField final : public MetricField {
public:
    SphereStereoField(int n, double r) : n_(n), r_(r) {}
    int dim() const override { return n_; }
    MetricJet jet(const double* x, int order) const override {
        const JetTable& tab = JetTable::get(n_);
        Jet s = Jet::constant(tab, order, r_ * r_);
        for (int i = 0; i < n_; ++i) {
            Jet xi = Jet::variable(tab, order, i, x[i]);
            s += jmul(xi, xi, order);
        }
        Jet w = Jet::constant(tab, order, 2.0 * r_ * r_) / s;
        Jet conf = jmul(w, w, order);
        MetricJet out(n_, order);
        for (int i = 0; i < n_; ++i) out.at(i, i) = conf;
        return out;
    }
    ChartBox box() const override {
        double half = 10.0 * r_ / std::sqrt(double(n_));
        return open_box(n_, -half, half);
    }

private:
    int n_;
    double r_;
};

// Poincare ball g = 4 / (1 - |x|^2)^2 delta (sectional curvature -1) on a
// box inscribed in the ball of radius rho.
class HyperbolicField final : public MetricField {
public:
    HyperbolicField(int n, double rho) : n_(n), rho_(rho) {}
    int dim() const override { return n_; }
    MetricJet jet(const double* x, int order) const override {
        const JetTable& tab = JetTable::get(n_);
        Jet s = Jet::constant(tab, order, 1.0);
        for (int i = 0; i < n_; ++i) {
            Jet xi = Jet::variable(tab, order, i, x[i]);
            s -= jmul(xi, xi, order);
        }
        Jet w = Jet::constant(tab, order, 2.0) / s;
        Jet conf = jmul(w, w, order);
        MetricJet out(n_, order);
        for (int i = 0; i < n_; ++i) out.at(i, i) = conf;
        return out;
    }
    ChartBox box() const override {
        double half = rho_ / std::sqrt(double(n_));
        return open_box(n_, -half, half);
    }

private:
    int n_;
    double rho_;
};

// S^2(a) x S^2(b), coordinates (t1, p1, t2, p2).
class ProductSpheresField final : public MetricField {
public:
    ProductSpheresField(double a, double b) : a_(a), b_(b) {}
    int dim() const override { return 4; }
    MetricJet jet(const double* x, int order) const override {
        const JetTable& tab = JetTable::get(4);
        MetricJet out(4, order);
        Jet s1 = sin(Jet::variable(tab, order, 0, x[0]));
        Jet s2 = sin(Jet::variable(tab, order, 2, x[2]));
        out.at(0, 0) = Jet::constant(tab, order, a_ * a_);
        out.at(1, 1) = (a_ * a_) * jmul(s1, s1, order);
        out.at(2, 2) = Jet::constant(tab, order, b_ * b_);
        out.at(3, 3) = (b_ * b_) * jmul(s2, s2, order);
        return out;
    }
    ChartBox box() const override {
        ChartBox b;
        b.lo = {0.0, 0.0, 0.0, 0.0};
        b.hi = {kPi, 2.0 * kPi, kPi, 2.0 * kPi};
        b.periodic = {false, true, false, true};
        return b;
    }
    bool closed_chart() const override { return true; }

private:
    double a_, b_;
};

class ConformalField final : public MetricField {
public:
    ConformalField(std::shared_ptr<const MetricField> base,
                   std::shared_ptr<const ScalarField> phi, double eps)
        : base_(std::move(base)), phi_(std::move(phi)), eps_(eps) {}
    int dim() const override { return base_->dim(); }
    MetricJet jet(const double* x, int order) const override {
        MetricJet g = base_->jet(x, order);
        Jet conf = exp((2.0 * eps_) * phi_->jet(x, order));
        for (int k = 0; k < MetricJet::sym_count(g.dim()); ++k)
            g.comp(k) = jmul(conf, g.comp(k), order);
        return g;
    }
    ChartBox box() const override { return base_->box(); }
    bool in_domain(const double* x) const override {
        return base_->in_domain(x);
    }
    bool closed_chart() const override { return base_->closed_chart(); }

private:
    std::shared_ptr<const MetricField> base_;
    std::shared_ptr<const ScalarField> phi_;
    double eps_;
};

class SphereHarmonicField final : public ScalarField {
public:
    explicit SphereHarmonicField(int n) : n_(n) {}
    int dim() const override { return n_; }
    Jet jet(const double* x, int order) const override {
        return cos(Jet::variable(JetTable::get(n_), order, 0, x[0]));
    }

private:
    int n_;
};

class TorusBumpField final : public ScalarField {
public:
    explicit TorusBumpField(int n) : n_(n) {}
    int dim() const override { return n_; }
    Jet jet(const double* x, int order) const override {
        const JetTable& tab = JetTable::get(n_);
        Jet a = cos(Jet::variable(tab, order, 0, x[0]));
        Jet b = cos(Jet::variable(tab, order, 1, x[1]));
        return jmul(a, b, order);
    }

private:
    int n_;
};

class GaussianBumpField final : public ScalarField {
public:
    GaussianBumpField(std::vector<double> c, double w)
        : c_(std::move(c)), w_(w) {}
    int dim() const override { return static_cast<int>(c_.size()); }
    Jet jet(const double* x, int order) const override {
        const int n = dim();
        const JetTable& tab = JetTable::get(n);
        Jet s(tab, order);
        for (int i = 0; i < n; ++i) {
            Jet d = Jet::variable(tab, order, i, x[i]) - c_[i];
            s += jmul(d, d, order);
        }
        return exp(s * (-1.0 / (w_ * w_)));
    }

private:
    std::vector<double> c_;
    double w_;
};

double get_param(const std::map<std::string, double>& p, const std::string& k,
                 double fallback) {
    auto it = p.find(k);
    return it == p.end() ? fallback : it->second;
}

int get_int_param(const std::map<std::string, double>& p, const std::string& k,
                  int fallback) {
    double v = get_param(p, k, fallback);
    int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-12)
        throw std::invalid_argument("parameter '" + k + "' must be an integer");
    return i;
}

void check_keys(const std::map<std::string, double>& p,
                std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || (k == a);
        if (!ok) throw std::invalid_argument("unknown metric parameter '" + k + "'");
    }
}

}  // namespace

BuiltinMetric make_flat(int n) {
    if (n < 3) throw std::invalid_argument("flat: dimension must be >= 3");
    if (n > kMaxDim)
        throw std::invalid_argument("flat: dimension must be <= 8");
    BuiltinMetric m;
    m.name = "flat";
    m.dim = n;
    m.params = {{"n", double(n)}};
    m.field = std::make_shared<FlatField>(n);
    return m;
}

BuiltinMetric make_flat_torus(int n, double period) {
    if (n < 3) throw std::invalid_argument("torus: dimension must be >= 3");
    if (n > kMaxDim)
        throw std::invalid_argument("torus: dimension must be <= 8");
    if (!(period > 0)) throw std::invalid_argument("torus: period must be > 0");
    BuiltinMetric m;
    m.name = "torus";
    m.dim = n;
    m.params = {{"n", double(n)}, {"period", period}};
    m.field = std::make_shared<TorusField>(n, period);
    if (n == 4) m.euler_characteristic = 0;
    return m;
}

BuiltinMetric make_round_sphere(int n, double r, const std::string& chart) {
    if (n < 3) throw std::invalid_argument("sphere: dimension must be >= 3");
    if (n > kMaxDim)
        throw std::invalid_argument("sphere: dimension must be <= 8");
    if (!(r > 0)) throw std::invalid_argument("sphere: radius must be > 0");
    BuiltinMetric m;
    m.dim = n;
    m.params = {{"n", double(n)}, {"r", r}};
    if (chart == "spherical") {
        m.name = "sphere";
        m.field = std::make_shared<SphereNestedField>(n, r);
    } else if (chart == "stereographic") {
        m.name = "sphere-stereo";
        m.field = std::make_shared<SphereStereoField>(n, r);
    } else {
        throw std::invalid_argument("sphere: unknown chart '" + chart + "'");
    }
    if (n == 4 && chart == "spherical") m.euler_characteristic = 2;
    return m;
}

BuiltinMetric make_hyperbolic(int n, double cap_radius) {
    if (n < 3) throw std::invalid_argument("hyperbolic: dimension must be >= 3");
    if (n > kMaxDim)
        throw std::invalid_argument("hyperbolic: dimension must be <= 8");
    if (!(cap_radius > 0) || cap_radius >= 1)
        throw std::invalid_argument("hyperbolic: cap radius must be in (0, 1)");
    BuiltinMetric m;
    m.name = "hyperbolic";
    m.dim = n;
    m.params = {{"n", double(n)}, {"cap", cap_radius}};
    m.field = std::make_shared<HyperbolicField>(n, cap_radius);
    return m;
}

BuiltinMetric make_product_spheres(double a, double b) {
    if (!(a > 0) || !(b > 0))
        throw std::invalid_argument("product-spheres: radii must be > 0");
    BuiltinMetric m;
    m.name = "product-spheres";
    m.dim = 4;
    m.params = {{"a", a}, {"b", b}};
    m.field = std::make_shared<ProductSpheresField>(a, b);
    m.euler_characteristic = 4;
    return m;
}

double conformal_eps_max(const std::string& base_name) {
    // Conservative amplitudes for which the Ricci positivity scan stays
    // positive on the positive-curvature bases (checked by the test suite);
    // flat bases only need the metric to stay positive definite.
    if (base_name == "sphere" || base_name == "sphere-stereo" ||
        base_name == "hyperbolic" || base_name == "product-spheres")
        return 0.15;
    if (base_name == "flat" || base_name == "torus") return 0.25;
    return 0.1;
}

BuiltinMetric make_conformal(const BuiltinMetric& base,
                             std::shared_ptr<const ScalarField> phi,
                             double eps) {
    if (!base.field || !phi)
        throw std::invalid_argument("conformal: missing base or profile");
    if (phi->dim() != base.dim)
        throw std::invalid_argument("conformal: profile dimension mismatch");
    double cap = conformal_eps_max(base.name);
    if (!(std::abs(eps) <= cap))
        throw std::invalid_argument("conformal: |eps| exceeds the documented bound " +
                                    std::to_string(cap) + " for base '" +
                                    base.name + "'");
    BuiltinMetric m = base;
    m.name = "conformal-" + base.name;
    m.params["eps"] = eps;
    if (eps != 0.0)
        m.field = std::make_shared<ConformalField>(base.field, std::move(phi), eps);
    return m;
}

std::shared_ptr<const ScalarField> make_sphere_harmonic(int n) {
    return std::make_shared<SphereHarmonicField>(n);
}

std::shared_ptr<const ScalarField> make_torus_bump(int n) {
    if (n < 2) throw std::invalid_argument("torus bump: dimension must be >= 2");
    return std::make_shared<TorusBumpField>(n);
}

std::shared_ptr<const ScalarField> make_gaussian_bump(std::vector<double> center,
                                                      double width) {
    if (center.empty() || !(width > 0))
        throw std::invalid_argument("gaussian bump: bad parameters");
    return std::make_shared<GaussianBumpField>(std::move(center), width);
}

BuiltinMetric make_builtin(const std::string& name,
                           const std::map<std::string, double>& params) {
    if (name == "flat") {
        check_keys(params, {"n"});
        return make_flat(get_int_param(params, "n", 4));
    }
    if (name == "torus") {
        check_keys(params, {"n", "period"});
        return make_flat_torus(get_int_param(params, "n", 4),
                               get_param(params, "period", 2.0 * kPi));
    }
    if (name == "sphere") {
        check_keys(params, {"n", "r"});
        return make_round_sphere(get_int_param(params, "n", 4),
                                 get_param(params, "r", 1.0), "spherical");
    }
    if (name == "sphere-stereo") {
        check_keys(params, {"n", "r"});
        return make_round_sphere(get_int_param(params, "n", 4),
                                 get_param(params, "r", 1.0), "stereographic");
    }
    if (name == "hyperbolic") {
        check_keys(params, {"n", "cap"});
        return make_hyperbolic(get_int_param(params, "n", 3),
                               get_param(params, "cap", 0.8));
    }
    if (name == "product-spheres") {
        check_keys(params, {"a", "b"});
        return make_product_spheres(get_param(params, "a", 1.0),
                                    get_param(params, "b", 1.0));
    }
    if (name == "conformal-sphere") {
        check_keys(params, {"n", "r", "eps"});
        int n = get_int_param(params, "n", 4);
        BuiltinMetric base = make_round_sphere(n, get_param(params, "r", 1.0),
                                               "spherical");
        return make_conformal(base, make_sphere_harmonic(n),
                              get_param(params, "eps", 0.05));
    }
    if (name == "conformal-torus") {
        check_keys(params, {"n", "period", "eps"});
        int n = get_int_param(params, "n", 4);
        BuiltinMetric base =
            make_flat_torus(n, get_param(params, "period", 2.0 * kPi));
        return make_conformal(base, make_torus_bump(n),
                              get_param(params, "eps", 0.05));
    }
    throw std::invalid_argument("unknown metric '" + name + "'");
}

std::vector<std::string> builtin_names() {
    return {"flat",        "torus",          "sphere",
            "sphere-stereo", "hyperbolic",     "product-spheres",
            "conformal-sphere", "conformal-torus"};
}

}  // namespace qcurv
