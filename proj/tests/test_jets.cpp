#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "qcurv/fd.hpp"
#include "qcurv/jet.hpp"
#include "qcurv/metric_jet.hpp"

using namespace qcurv;

namespace {

// Independent oracle: exact multivariate polynomials as exponent->coefficient
// maps. Deliberately naive (map arithmetic, symbolic differentiation) so it
// shares no code with the jet kernels.
struct Poly {
    int dim;
    std::map<std::vector<int>, double> c;

    static Poly constant(int d, double v) {
        Poly p{d, {}};
        p.c[std::vector<int>(d, 0)] = v;
        return p;
    }
    static Poly var(int d, int v) {
        Poly p{d, {}};
        std::vector<int> e(d, 0);
        e[v] = 1;
        p.c[e] = 1.0;
        return p;
    }
    Poly operator+(const Poly& o) const {
        Poly r = *this;
        for (auto& [e, v] : o.c) r.c[e] += v;
        return r;
    }
    Poly operator-(const Poly& o) const {
        Poly r = *this;
        for (auto& [e, v] : o.c) r.c[e] -= v;
        return r;
    }
    Poly operator*(const Poly& o) const {
        Poly r{dim, {}};
        for (auto& [ea, va] : c)
            for (auto& [eb, vb] : o.c) {
                std::vector<int> e(dim);
                for (int i = 0; i < dim; ++i) e[i] = ea[i] + eb[i];
                r.c[e] += va * vb;
            }
        return r;
    }
    Poly scaled(double s) const {
        Poly r = *this;
        for (auto& [e, v] : r.c) v *= s;
        return r;
    }
    Poly diff(int v) const {
        Poly r{dim, {}};
        for (auto& [e, coef] : c) {
            if (e[v] == 0) continue;
            std::vector<int> d = e;
            d[v] -= 1;
            r.c[d] += coef * e[v];
        }
        return r;
    }
    double eval(const std::vector<double>& x) const {
        double s = 0;
        for (auto& [e, coef] : c) {
            double t = coef;
            for (int i = 0; i < dim; ++i)
                for (int k = 0; k < e[i]; ++k) t *= x[i];
            s += t;
        }
        return s;
    }
    // Taylor coefficient of this polynomial at x0 for multi-index alpha.
    double taylor_coeff(const std::vector<double>& x0,
                        const std::vector<int>& alpha) const {
        Poly d = *this;
        double fact = 1.0;
        for (int v = 0; v < dim; ++v)
            for (int k = 0; k < alpha[v]; ++k) {
                d = d.diff(v);
                fact *= k + 1;
            }
        return d.eval(x0) / fact;
    }
};

Jet jet_of(const Poly& p, const JetTable& tab, int order,
           const std::vector<double>& x0) {
    // Build the jet through Jet arithmetic mirroring the monomials.
    Jet r = Jet::constant(tab, order, 0.0);
    for (auto& [e, coef] : p.c) {
        Jet m = Jet::constant(tab, order, coef);
        for (int v = 0; v < p.dim; ++v)
            for (int k = 0; k < e[v]; ++k)
                m = m * Jet::variable(tab, order, v, x0[v]);
        r += m;
    }
    return r;
}

}  // namespace

TEST_CASE("multi-index table: counts, roundtrip, factorials") {
    for (int d : {1, 2, 3, 4, 6, 8}) {
        const JetTable& t = JetTable::get(d);
        CHECK(t.dim() == d);
        // ncoef(k) = C(d+k, k)
        long expect = 1;
        for (int k = 0; k <= t.max_order(); ++k) {
            if (k > 0) expect = expect * (d + k) / k;
            CHECK(t.ncoef(k) == expect);
        }
        for (int i = 0; i < t.size(); ++i) {
            CHECK(t.index_of(t.exponents(i)) == i);
            int deg = 0;
            unsigned long f = 1;
            for (int v = 0; v < d; ++v) {
                deg += t.exponents(i)[v];
                for (int k = 1; k <= t.exponents(i)[v]; ++k) f *= k;
            }
            CHECK(t.degree(i) == deg);
            CHECK(t.factorial(i) == doctest::Approx(double(f)));
        }
        for (int v = 0; v < d; ++v) {
            MultiIndex e{};
            e[v] = 1;
            CHECK(t.var_index(v) == t.index_of(e));
        }
    }
}

TEST_CASE("polynomial jets are exact to order 5") {
    const int d = 2;
    const JetTable& tab = JetTable::get(d);
    std::vector<double> x0{0.4, -1.2};

    Poly x = Poly::var(d, 0), y = Poly::var(d, 1);
    Poly p = (Poly::constant(d, 3) + x) * (y - (x * x).scaled(2.0)) *
                 (x * y + Poly::constant(d, 1)) +
             Poly::constant(d, 7) + (y * y * y) * (x * x);

    Jet j = jet_of(p, tab, 5, x0);
    for (int i = 0; i < tab.ncoef(5); ++i) {
        std::vector<int> alpha(d);
        for (int v = 0; v < d; ++v) alpha[v] = tab.exponents(i)[v];
        CHECK(j.coeff(i) ==
              doctest::Approx(p.taylor_coeff(x0, alpha)).epsilon(1e-12));
    }
}

TEST_CASE("three-variable polynomial jets and formal derivatives") {
    const int d = 3;
    const JetTable& tab = JetTable::get(d);
    std::vector<double> x0{0.3, -0.5, 1.1};

    Poly x = Poly::var(d, 0), y = Poly::var(d, 1), z = Poly::var(d, 2);
    Poly p = x * y * z + (z * z) * x.scaled(0.5) - y * (x * x * x) +
             Poly::constant(d, 2);

    Jet j = jet_of(p, tab, 4, x0);
    for (int v = 0; v < d; ++v) {
        Poly dp = p.diff(v);
        Jet dj = j.derivative(v);
        for (int i = 0; i < tab.ncoef(3); ++i) {
            std::vector<int> alpha(d);
            for (int w = 0; w < d; ++w) alpha[w] = tab.exponents(i)[w];
            CHECK(dj.coeff(i) ==
                  doctest::Approx(dp.taylor_coeff(x0, alpha)).epsilon(1e-12));
        }
    }

    // partial() returns derivative values (coefficient times alpha!).
    MultiIndex a{};
    a[0] = 2;
    a[1] = 1;
    Poly dd = p.diff(0).diff(0).diff(1);
    CHECK(j.partial(a) == doctest::Approx(dd.eval(x0)).epsilon(1e-12));
}

TEST_CASE("frozen series coefficients of analytic lifts at 0") {
    const JetTable& tab = JetTable::get(1);
    Jet x = Jet::variable(tab, 5, 0, 0.0);

    Jet e = exp(x);
    double efact[] = {1, 1, 0.5, 1.0 / 6, 1.0 / 24, 1.0 / 120};
    for (int k = 0; k <= 5; ++k) CHECK(e.coeff(k) == doctest::Approx(efact[k]));

    Jet s = sin(x);
    double sref[] = {0, 1, 0, -1.0 / 6, 0, 1.0 / 120};
    for (int k = 0; k <= 5; ++k)
        CHECK(s.coeff(k) == doctest::Approx(sref[k]).epsilon(1e-14));

    Jet l = log(1.0 + x);
    double lref[] = {0, 1, -0.5, 1.0 / 3, -0.25, 0.2};
    for (int k = 0; k <= 5; ++k) CHECK(l.coeff(k) == doctest::Approx(lref[k]));

    Jet r = pow(1.0 + x, 0.5);  // binomial(1/2, k)
    double rref[] = {1, 0.5, -1.0 / 8, 1.0 / 16, -5.0 / 128, 7.0 / 256};
    for (int k = 0; k <= 5; ++k) CHECK(r.coeff(k) == doctest::Approx(rref[k]));
}

TEST_CASE("chain rule holds exactly in truncated arithmetic") {
    const int d = 2;
    const JetTable& tab = JetTable::get(d);
    Jet x = Jet::variable(tab, 5, 0, 0.3);
    Jet y = Jet::variable(tab, 5, 1, -0.2);
    Jet u = 0.7 + x + 0.3 * (x * y) + y * y;

    Jet E = exp(u), L = log(u), S = sin(u), C = cos(u), P = pow(u, 1.7);
    for (int v = 0; v < d; ++v) {
        Jet du = u.derivative(v);
        auto close = [&](const Jet& a, const Jet& b) {
            for (int i = 0; i < a.ncoef(); ++i)
                CHECK(a.coeff(i) == doctest::Approx(b.coeff(i)).epsilon(1e-12));
        };
        close(E.derivative(v), E.truncated(4) * du);
        close(L.derivative(v), du / u.truncated(4));
        close(S.derivative(v), C.truncated(4) * du);
        close(C.derivative(v), -(S.truncated(4) * du));
        close(P.derivative(v), 1.7 * P.truncated(4) * du / u.truncated(4));
        Jet Q = sqrt(u);
        close(Q.derivative(v), 0.5 * du / Q.truncated(4));
    }
}

TEST_CASE("jet Taylor evaluation converges at 6th order") {
    const int d = 2;
    const JetTable& tab = JetTable::get(d);
    double x0 = 0.4, y0 = 0.9;
    auto f = [](double x, double y) {
        return std::exp(0.3 * x * y) * std::sin(x + 2 * y) / (1 + x * x);
    };
    Jet x = Jet::variable(tab, 5, 0, x0);
    Jet y = Jet::variable(tab, 5, 1, y0);
    Jet j = exp(0.3 * (x * y)) * sin(x + 2.0 * y) / (1.0 + x * x);
    CHECK(j.value() == doctest::Approx(f(x0, y0)).epsilon(1e-14));

    auto taylor_eval = [&](double dx, double dy) {
        double s = 0;
        for (int i = 0; i < j.ncoef(); ++i) {
            double t = j.coeff(i);
            for (int k = 0; k < tab.exponents(i)[0]; ++k) t *= dx;
            for (int k = 0; k < tab.exponents(i)[1]; ++k) t *= dy;
            s += t;
        }
        return s;
    };
    double e1 = std::abs(taylor_eval(0.1, 0.08) - f(x0 + 0.1, y0 + 0.08));
    double e2 = std::abs(taylor_eval(0.05, 0.04) - f(x0 + 0.05, y0 + 0.04));
    CHECK(e2 < e1 / 40);  // ~2^6 with slack
}

TEST_CASE("division, ipow, domain errors") {
    const JetTable& tab = JetTable::get(2);
    Jet x = Jet::variable(tab, 4, 0, 0.5);
    Jet y = Jet::variable(tab, 4, 1, 2.0);

    Jet q = (x * y + 1.0) / (y - x);
    Jet back = q * (y - x).truncated(4);
    Jet num = (x * y + 1.0).truncated(4);
    for (int i = 0; i < back.ncoef(); ++i)
        CHECK(back.coeff(i) == doctest::Approx(num.coeff(i)).epsilon(1e-12));

    Jet p5 = ipow(x + y, 5);
    Jet m5 = (x + y) * (x + y) * (x + y) * (x + y) * (x + y);
    for (int i = 0; i < p5.ncoef(); ++i)
        CHECK(p5.coeff(i) == doctest::Approx(m5.coeff(i)).epsilon(1e-12));
    Jet pm2 = ipow(y, -2);
    CHECK(pm2.value() == doctest::Approx(0.25));

    CHECK_THROWS_AS(log(x - 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)(1.0 / (x - 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(sqrt(-1.0 * y), std::invalid_argument);
    MultiIndex big{};
    big[0] = 5;
    CHECK_THROWS_AS((void)x.partial(big), std::invalid_argument);
    CHECK_THROWS_AS(Jet(tab, 6), std::invalid_argument);
}

TEST_CASE("mixed-order arithmetic truncates to the lower order") {
    const JetTable& tab = JetTable::get(2);
    Jet a = Jet::variable(tab, 5, 0, 1.0);
    Jet b = Jet::variable(tab, 3, 1, 2.0);
    Jet p = a * b;
    CHECK(p.order() == 3);
    Jet s = a + b;
    CHECK(s.order() == 3);
    CHECK(s.value() == doctest::Approx(3.0));
}

TEST_CASE("frozen central difference weights") {
    auto w1 = fd_weights(0.0, {-2, -1, 0, 1, 2}, 1);
    double r1[] = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i)
        CHECK(w1[i] == doctest::Approx(r1[i]).epsilon(1e-13));

    auto w2 = fd_weights(0.0, {-2, -1, 0, 1, 2}, 2);
    double r2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i)
        CHECK(w2[i] == doctest::Approx(r2[i]).epsilon(1e-13));

    auto w0 = fd_weights(0.5, {0, 1}, 0);  // linear interpolation
    CHECK(w0[0] == doctest::Approx(0.5));
    CHECK(w0[1] == doctest::Approx(0.5));

    CHECK_THROWS_AS(fd_weights(0.0, {0.0}, 1), std::invalid_argument);
}

TEST_CASE("finite-difference jet matches analytic jet to 1e-6") {
    const int d = 2;
    const JetTable& tab = JetTable::get(d);
    double x0[] = {0.4, 0.9};
    auto f = [](const double* p) {
        return std::exp(0.3 * p[0] * p[1]) * std::sin(p[0] + 2 * p[1]) /
               (1 + p[0] * p[0]);
    };
    Jet x = Jet::variable(tab, 5, 0, x0[0]);
    Jet y = Jet::variable(tab, 5, 1, x0[1]);
    Jet exact = exp(0.3 * (x * y)) * sin(x + 2.0 * y) / (1.0 + x * x);

    Jet fd = fd_jet(f, d, x0, 5);
    double worst4 = 0, worst5 = 0;
    for (int i = 0; i < tab.ncoef(5); ++i) {
        double e = std::abs(fd.coeff(i) - exact.coeff(i));
        (i < tab.ncoef(4) ? worst4 : worst5) = std::max(
            i < tab.ncoef(4) ? worst4 : worst5, e);
    }
    CHECK(worst4 < 1e-6);   // the orders the curvature pipeline consumes
    CHECK(worst5 < 3e-5);   // top order trades truncation for roundoff

    // Halving the step must cut the residual by at least 8x (the scheme is
    // 6th order after Richardson, so ~64x is typical). Checked at order 3
    // with enlarged steps so truncation, not roundoff, dominates.
    Jet e3 = exact.truncated(3);
    auto worst3 = [&](double scale) {
        Jet fd3 = fd_jet(f, d, x0, 3, scale);
        double w = 0;
        for (int i = 0; i < tab.ncoef(3); ++i)
            w = std::max(w, std::abs(fd3.coeff(i) - e3.coeff(i)));
        return w;
    };
    CHECK(worst3(2.0) < worst3(4.0) / 8);
}

TEST_CASE("constant metric has a constant jet and inverse") {
    const int n = 3;
    MetricJet g(n, 4);
    const JetTable& tab = JetTable::get(n);
    double diag[] = {2.0, 3.0, 5.0};
    for (int i = 0; i < n; ++i)
        g.at(i, i) = Jet::constant(tab, 4, diag[i]);

    MetricJet gi = g.inverse();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CHECK(gi.at(i, j).value() ==
                  doctest::Approx(i == j ? 1.0 / diag[i] : 0.0));
            for (int k = 1; k < tab.ncoef(4); ++k)
                CHECK(gi.at(i, j).coeff(k) == doctest::Approx(0.0));
        }
}

TEST_CASE("conformally flat metric jet: components and inverse") {
    // g = (1 + x0^2) * delta in dimension 2, expanded at (0.5, 0.3).
    const int n = 2;
    const JetTable& tab = JetTable::get(n);
    double x0 = 0.5;
    Jet u = 1.0 + ipow(Jet::variable(tab, 5, 0, x0), 2);
    MetricJet g(n, 5);
    g.at(0, 0) = u;
    g.at(1, 1) = u;

    CHECK(g.value(0, 0) == doctest::Approx(1.25));
    CHECK(g.at(0, 0).coeff(tab.var_index(0)) == doctest::Approx(2 * x0));
    MultiIndex a{};
    a[0] = 2;
    CHECK(g.at(0, 0).coeff(tab.index_of(a)) == doctest::Approx(1.0));

    MetricJet gi = g.inverse();
    CHECK(gi.value(0, 0) == doctest::Approx(0.8));
    // d/dx0 (1+x0^2)^-1 = -2 x0 / (1+x0^2)^2
    CHECK(gi.at(0, 0).coeff(tab.var_index(0)) ==
          doctest::Approx(-2 * x0 / (1.25 * 1.25)));
    CHECK(gi.value(0, 1) == doctest::Approx(0.0));

    Jet gi_ref = 1.0 / u;
    for (int k = 0; k < tab.ncoef(5); ++k)
        CHECK(gi.at(1, 1).coeff(k) ==
              doctest::Approx(gi_ref.coeff(k)).epsilon(1e-12));
}

TEST_CASE("metric jet inverse handles off-diagonal couplings") {
    const int n = 3;
    const JetTable& tab = JetTable::get(n);
    auto X = [&](int v) { return Jet::variable(tab, 3, v, 0.2 * (v + 1)); };
    MetricJet g(n, 3);
    g.at(0, 0) = 2.0 + ipow(X(0), 2);
    g.at(1, 1) = 3.0 + sin(X(1)) * 0.4;
    g.at(2, 2) = Jet::constant(tab, 3, 1.5);
    g.at(0, 1) = 0.3 * X(2);
    g.at(1, 2) = Jet::constant(tab, 3, 0.25);

    MetricJet gi = g.inverse();
    // g * g^-1 == identity, exactly in truncated arithmetic.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet s = Jet::constant(tab, 3, 0.0);
            for (int k = 0; k < n; ++k) s += g.at(i, k) * gi.at(k, j);
            CHECK(s.value() == doctest::Approx(i == j ? 1.0 : 0.0));
            for (int c = 1; c < tab.ncoef(3); ++c)
                CHECK(s.coeff(c) == doctest::Approx(0.0).epsilon(1e-12));
        }
}

TEST_CASE("FD metric field reproduces analytic jets and guards the domain") {
    struct ConfFlat : MetricField {
        int dim() const override { return 2; }
        MetricJet jet(const double* x, int order) const override {
            const JetTable& tab = JetTable::get(2);
            Jet u = exp(0.7 * Jet::variable(tab, order, 0, x[0])) +
                    ipow(Jet::variable(tab, order, 1, x[1]), 2);
            MetricJet g(2, order);
            g.at(0, 0) = u;
            g.at(1, 1) = u;
            return g;
        }
        ChartBox box() const override {
            return {{0.0, 0.0}, {1.0, 1.0}, {false, false}};
        }
    };
    auto base = std::make_shared<ConfFlat>();
    FdMetricField fd(base, 1.0);

    double x[] = {0.5, 0.45};
    MetricJet a = base->jet(x, 4);
    MetricJet b = fd.jet(x, 4);
    const JetTable& tab = JetTable::get(2);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            for (int k = 0; k < tab.ncoef(4); ++k)
                CHECK(b.at(i, j).coeff(k) ==
                      doctest::Approx(a.at(i, j).coeff(k)).epsilon(5e-7));

    double edge[] = {0.01, 0.5};
    CHECK_THROWS_AS(fd.jet(edge, 4), std::domain_error);
}

TEST_CASE("JetArray stores and recovers jets") {
    const JetTable& tab = JetTable::get(3);
    JetArray arr(tab, 2, 5);
    CHECK(arr.stride() == tab.ncoef(2));
    CHECK(arr.count() == 5);
    Jet x = Jet::variable(tab, 2, 1, 4.0);
    arr.set(3, x * x);
    Jet back = arr.get(3);
    CHECK(back.value() == doctest::Approx(16.0));
    CHECK(back.coeff(tab.var_index(1)) == doctest::Approx(8.0));
}
