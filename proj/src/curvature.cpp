#include "curvature_impl.hpp"

#include <cmath>
#include <stdexcept>

namespace qcurv {

namespace {

inline void acc_mul(Jet& acc, const Jet& a, const Jet& b) {
    jk::mul_acc(acc.table(), acc.order(), acc.data(), a.data(), a.ncoef(),
                b.data(), b.ncoef());
}

inline void acc_mul_scaled(Jet& acc, double s, const Jet& a, const Jet& b) {
    jk::mul_acc_scaled(acc.table(), acc.order(), acc.data(), s, a.data(),
                       a.ncoef(), b.data(), b.ncoef());
}

inline int sym_idx(int n, int i, int j) { return MetricJet::sym_index(n, i, j); }

double max_abs_coeff(const Jet& j) {
    double m = 0;
    for (int i = 0; i < j.ncoef(); ++i) m = std::max(m, std::abs(j.coeff(i)));
    return m;
}

MetricJet mj_scale(const Jet& s, const MetricJet& h, int order) {
    MetricJet out(h.dim(), order);
    for (int k = 0; k < MetricJet::sym_count(h.dim()); ++k)
        out.comp(k) = jmul(s, h.comp(k), order);
    return out;
}

}  // namespace

void CurvatureJets::Impl::require_order(int k, const char* what) const {
    if (K < k)
        throw std::invalid_argument(std::string(what) +
                                    ": requires metric jet order >= " +
                                    std::to_string(k));
}

// ---------------------------------------------------------------------
// differential operators on jets
// ---------------------------------------------------------------------

std::vector<Jet> CurvatureJets::Impl::grad(const Jet& f, int order) const {
    std::vector<Jet> out(n);
    for (int v = 0; v < n; ++v) out[v] = jderiv(f, v, order);
    return out;
}

MetricJet CurvatureJets::Impl::hessian(const Jet& f, int order) const {
    if (f.order() < order + 2)
        throw std::invalid_argument("hessian: insufficient scalar jet order");
    MetricJet out(n, order);
    std::vector<Jet> df = grad(f, order);
    for (int i = 0; i < n; ++i) {
        Jet dfi = jderiv(f, i, order + 1);
        for (int j = i; j < n; ++j) {
            Jet h = jderiv(dfi, j, order);
            for (int m = 0; m < n; ++m)
                acc_mul_scaled(h, -1.0, gamma[i3(m, i, j)], df[m]);
            out.at(i, j) = std::move(h);
        }
    }
    return out;
}

Jet CurvatureJets::Impl::laplacian(const Jet& f, int order) const {
    return mj_trace(hessian(f, order), order);
}

std::vector<Jet> CurvatureJets::Impl::nabla_oneform(const std::vector<Jet>& w,
                                                    int order) const {
    std::vector<Jet> out(static_cast<std::size_t>(n) * n);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < n; ++j) {
            Jet t = jderiv(w[j], v, order);
            for (int m = 0; m < n; ++m)
                acc_mul_scaled(t, -1.0, gamma[i3(m, v, j)], w[m]);
            out[v * n + j] = std::move(t);
        }
    return out;
}

MetricJet CurvatureJets::Impl::sym_nabla_oneform(const std::vector<Jet>& w,
                                                 int order) const {
    std::vector<Jet> nw = nabla_oneform(w, order);
    MetricJet out(n, order);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Jet s = nw[i * n + j] + nw[j * n + i];
            s *= 0.5;
            out.at(i, j) = std::move(s);
        }
    return out;
}

Jet CurvatureJets::Impl::div_oneform(const std::vector<Jet>& w,
                                     int order) const {
    std::vector<Jet> nw = nabla_oneform(w, order);
    Jet out(tab, order);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc_mul(out, gi.at(i, j), nw[i * n + j]);
    return out;
}

std::vector<Jet> CurvatureJets::Impl::nabla_sym2(const MetricJet& h,
                                                 int order) const {
    const int s2 = MetricJet::sym_count(n);
    std::vector<Jet> out(static_cast<std::size_t>(n) * s2);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet t = jderiv(h.at(j, k), v, order);
                for (int m = 0; m < n; ++m) {
                    acc_mul_scaled(t, -1.0, gamma[i3(m, v, j)], h.at(m, k));
                    acc_mul_scaled(t, -1.0, gamma[i3(m, v, k)], h.at(j, m));
                }
                out[v * s2 + sym_idx(n, j, k)] = std::move(t);
            }
    return out;
}

std::vector<Jet> CurvatureJets::Impl::div_sym2(const MetricJet& h,
                                               int order) const {
    const int s2 = MetricJet::sym_count(n);
    std::vector<Jet> nh = nabla_sym2(h, order);
    std::vector<Jet> out(n);
    for (int l = 0; l < n; ++l) {
        Jet t(tab, order);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                acc_mul(t, gi.at(i, k), nh[i * s2 + sym_idx(n, k, l)]);
        out[l] = std::move(t);
    }
    return out;
}

MetricJet CurvatureJets::Impl::laplacian_sym2(const MetricJet& h,
                                              int order) const {
    const int s2 = MetricJet::sym_count(n);
    std::vector<Jet> t = nabla_sym2(h, order + 1);
    MetricJet out(n, order);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            Jet acc(tab, order);
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v) {
                    Jet term = jderiv(t[v * s2 + sym_idx(n, j, k)], u, order);
                    for (int a = 0; a < n; ++a) {
                        acc_mul_scaled(term, -1.0, gamma[i3(a, u, v)],
                                       t[a * s2 + sym_idx(n, j, k)]);
                        acc_mul_scaled(term, -1.0, gamma[i3(a, u, j)],
                                       t[v * s2 + sym_idx(n, a, k)]);
                        acc_mul_scaled(term, -1.0, gamma[i3(a, u, k)],
                                       t[v * s2 + sym_idx(n, j, a)]);
                    }
                    acc_mul(acc, gi.at(u, v), term);
                }
            out.at(j, k) = std::move(acc);
        }
    return out;
}

// ---------------------------------------------------------------------
// pointwise jet algebra
// ---------------------------------------------------------------------

Jet CurvatureJets::Impl::mj_trace(const MetricJet& h, int order) const {
    Jet out(tab, order);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) acc_mul(out, gi.at(j, k), h.at(j, k));
    return out;
}

Jet CurvatureJets::Impl::mj_inner(const MetricJet& a, const MetricJet& b,
                                  int order) const {
    // tr(A B) with A = g^{-1} a, B = g^{-1} b.
    std::vector<Jet> A(static_cast<std::size_t>(n) * n),
        B(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet ta(tab, order), tb(tab, order);
            for (int p = 0; p < n; ++p) {
                acc_mul(ta, gi.at(i, p), a.at(p, j));
                acc_mul(tb, gi.at(i, p), b.at(p, j));
            }
            A[i * n + j] = std::move(ta);
            B[i * n + j] = std::move(tb);
        }
    Jet out(tab, order);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc_mul(out, A[i * n + j], B[j * n + i]);
    return out;
}

MetricJet CurvatureJets::Impl::mj_product(const MetricJet& a,
                                          const MetricJet& b,
                                          int order) const {
    std::vector<Jet> A(static_cast<std::size_t>(n) * n);  // a^i_j
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet t(tab, order);
            for (int p = 0; p < n; ++p) acc_mul(t, gi.at(i, p), a.at(p, j));
            A[i * n + j] = std::move(t);
        }
    MetricJet out(n, order);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            Jet t(tab, order);
            for (int i = 0; i < n; ++i) {
                acc_mul_scaled(t, 0.5, A[i * n + j], b.at(i, k));
                acc_mul_scaled(t, 0.5, A[i * n + k], b.at(i, j));
            }
            out.at(j, k) = std::move(t);
        }
    return out;
}

MetricJet CurvatureJets::Impl::rm_dot(const MetricJet& h, int order) const {
    // h with both indices raised.
    std::vector<Jet> up(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            Jet t(tab, order);
            for (int p = 0; p < n; ++p) {
                Jet m(tab, order);
                for (int q = 0; q < n; ++q) acc_mul(m, gi.at(l, q), h.at(p, q));
                acc_mul(t, gi.at(i, p), m);
            }
            up[i * n + l] = std::move(t);
        }
    MetricJet out(n, order);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            Jet t(tab, order);
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                    acc_mul(t, rm[i4(i, j, k, l)], up[i * n + l]);
            out.at(j, k) = std::move(t);
        }
    return out;
}

MetricJet CurvatureJets::Impl::scaled_g(const Jet& s, int order) const {
    return mj_scale(s, g, order);
}

MetricJet CurvatureJets::Impl::lichnerowicz_at(const MetricJet& h,
                                               int order) const {
    MetricJet out = laplacian_sym2(h, order);
    MetricJet a = rm_dot(h, order);
    a *= 2.0;
    MetricJet b = mj_product(ric, h, order);
    b *= 2.0;
    out += a;
    out -= b;
    return out;
}

Sym2 CurvatureJets::Impl::values_of(const MetricJet& h) const {
    Sym2 out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out.set(i, j, h.at(i, j).value());
    return out;
}

// ---------------------------------------------------------------------
// assembly
// ---------------------------------------------------------------------

CurvatureJets::Impl::Impl(const MetricJet& gin)
    : n(gin.dim()), K(gin.order()), tab(JetTable::get(gin.dim())), g(gin) {
    require_order(2, "curvature assembly");

    // Value-level metric first: rejects non-positive-definite input.
    {
        Sym2 gv(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) gv.set(i, j, g.value(i, j));
        bundle.metric = MetricAtPoint::from_metric(gv);
    }
    bundle.dim = n;
    bundle.jet_order = K;

    gi = g.truncated(K - 1).inverse();

    // Christoffel symbols, order K-1.
    {
        std::vector<Jet> dg(static_cast<std::size_t>(n) *
                            MetricJet::sym_count(n));
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    dg[v * MetricJet::sym_count(n) + sym_idx(n, i, j)] =
                        jderiv(g.at(i, j), v, K - 1);
        auto dgv = [&](int v, int i, int j) -> const Jet& {
            return dg[v * MetricJet::sym_count(n) + sym_idx(n, i, j)];
        };
        gamma.assign(static_cast<std::size_t>(n) * n * n, Jet());
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    Jet acc(tab, K - 1);
                    for (int m = 0; m < n; ++m) {
                        Jet t = dgv(i, j, m) + dgv(j, i, m) - dgv(m, i, j);
                        acc_mul_scaled(acc, 0.5, gi.at(l, m), t);
                    }
                    gamma[i3(l, i, j)] = acc;
                    if (i != j) gamma[i3(l, j, i)] = std::move(acc);
                }
            }
    }

    // Riemann (up), order K-2; antisymmetric in the first lower pair.
    std::vector<Jet> rm_up(static_cast<std::size_t>(n) * n * n * n);
    {
        Jet zero(tab, K - 2);
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) rm_up[i4(l, i, i, k)] = zero;
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        Jet t = jderiv(gamma[i3(l, j, k)], i, K - 2) -
                                jderiv(gamma[i3(l, i, k)], j, K - 2);
                        for (int m = 0; m < n; ++m) {
                            acc_mul(t, gamma[i3(l, i, m)], gamma[i3(m, j, k)]);
                            acc_mul_scaled(t, -1.0, gamma[i3(l, j, m)],
                                           gamma[i3(m, i, k)]);
                        }
                        rm_up[i4(l, j, i, k)] = -t;
                        rm_up[i4(l, i, j, k)] = std::move(t);
                    }
    }

    // Ricci, scalar.
    ric = MetricJet(n, K - 2);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            Jet t(tab, K - 2);
            for (int i = 0; i < n; ++i) {
                t += rm_up[i4(i, i, j, k)];
                t += rm_up[i4(i, i, k, j)];
            }
            t *= 0.5;
            ric.at(j, k) = std::move(t);
        }
    r = mj_trace(ric, K - 2);

    // Riemann all-down.
    rm.assign(static_cast<std::size_t>(n) * n * n * n, Jet());
    {
        Jet zero(tab, K - 2);
        for (auto& jj : rm) jj = zero;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        Jet t(tab, K - 2);
                        for (int m = 0; m < n; ++m)
                            acc_mul(t, g.at(l, m), rm_up[i4(m, i, j, k)]);
                        rm[i4(j, i, k, l)] = -t;
                        rm[i4(i, j, k, l)] = std::move(t);
                    }
    }

    if (n >= 3) {
        // Schouten and its trace.
        schouten = MetricJet(n, K - 2);
        {
            Jet rg = r * (1.0 / (2.0 * (n - 1)));
            MetricJet sub = scaled_g(rg, K - 2);
            for (int k = 0; k < MetricJet::sym_count(n); ++k) {
                Jet t = ric.comp(k) - sub.comp(k);
                t *= 1.0 / (n - 2);
                schouten.comp(k) = std::move(t);
            }
        }
        tr_s = mj_trace(schouten, K - 2);
        {
            double want = r.value() / (2.0 * (n - 1));
            double got = tr_s.value();
            if (std::abs(got - want) >
                1e-11 * std::max(1.0, std::abs(want)))
                throw std::logic_error(
                    "curvature assembly: tr S != R/(2(n-1)) beyond tolerance");
        }

        // Weyl = Rm - S kn g, order K-2.
        weyl.assign(static_cast<std::size_t>(n) * n * n * n, Jet());
        {
            Jet zero(tab, K - 2);
            for (auto& jj : weyl) jj = zero;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = k + 1; l < n; ++l) {
                            Jet kn(tab, K - 2);
                            acc_mul(kn, schouten.at(i, l), g.at(j, k));
                            acc_mul(kn, schouten.at(j, k), g.at(i, l));
                            acc_mul_scaled(kn, -1.0, schouten.at(i, k),
                                           g.at(j, l));
                            acc_mul_scaled(kn, -1.0, schouten.at(j, l),
                                           g.at(i, k));
                            Jet w = rm[i4(i, j, k, l)] - kn;
                            weyl[i4(j, i, k, l)] = -w;
                            weyl[i4(i, j, l, k)] = -w;
                            weyl[i4(j, i, l, k)] = w;
                            weyl[i4(i, j, k, l)] = std::move(w);
                        }
        }
    }

    if (n >= 3 && K >= 3) {
        // Cotton, order K-3.
        const int s2 = MetricJet::sym_count(n);
        std::vector<Jet> ns = nabla_sym2(schouten, K - 3);
        cotton.assign(static_cast<std::size_t>(n) * n * n, Jet());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    cotton[i3(i, j, k)] = ns[i * s2 + sym_idx(n, j, k)] -
                                          ns[j * s2 + sym_idx(n, i, k)];
    }

    if (n >= 3 && K >= 4) {
        const int q4 = K - 4;
        const double An = -1.0 / (2.0 * (n - 1));
        const double Bn = -2.0 / double((n - 2) * (n - 2));
        const double Cn = (n * n * (n - 4) + 16.0 * (n - 1)) /
                          (8.0 * (n - 1) * (n - 1) * (n - 2) * (n - 2));

        // Q: Laplacian-of-R route and Schouten route.
        Jet lap_r = laplacian(r, q4);
        Jet ric2 = mj_inner(ric, ric, q4);
        Jet r2 = jmul(r, r, q4);
        q13 = An * lap_r + Bn * ric2 + Cn * r2;

        Jet lap_trs = laplacian(tr_s, q4);
        Jet s_sq = mj_inner(schouten, schouten, q4);
        Jet trs2 = jmul(tr_s, tr_s, q4);
        q22 = -1.0 * lap_trs - 2.0 * s_sq + (n / 2.0) * trs2;

        // Shared stage-4 tensors.
        MetricJet hess_trs = hessian(tr_s, q4);
        MetricJet ss = mj_product(schouten, schouten, q4);
        MetricJet lap_s = laplacian_sym2(schouten, q4);
        MetricJet rms = rm_dot(schouten, q4);
        MetricJet s2g = scaled_g(s_sq, q4);
        MetricJet trs_s = mj_scale(tr_s, schouten, q4);

        // Bach, route 2: Delta S - hess tr S + 2 Rm.S - (n-4) SxS - |S|^2 g
        //                - 2 (tr S) S.
        bach2 = lap_s;
        bach2 -= hess_trs;
        bach2 += 2.0 * rms;
        bach2 -= double(n - 4) * ss;
        bach2 -= s2g;
        bach2 -= 2.0 * trs_s;

        // Bach, route 3: Lichnerowicz form.
        bach3 = lichnerowicz_at(schouten, q4);
        bach3 -= hess_trs;
        bach3 += double(n) * ss;
        bach3 -= s2g;

        // Bach, route 1 (definition): div C + W.S.
        {
            std::vector<Jet> sup(static_cast<std::size_t>(n) * n);  // S^{il}
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) {
                    Jet t(tab, q4);
                    for (int p = 0; p < n; ++p) {
                        Jet m(tab, q4);
                        for (int q = 0; q < n; ++q)
                            acc_mul(m, gi.at(l, q), schouten.at(p, q));
                        acc_mul(t, gi.at(i, p), m);
                    }
                    sup[i * n + l] = std::move(t);
                }
            std::vector<Jet> b1(static_cast<std::size_t>(n) * n);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Jet acc(tab, q4);
                    // g^{mi} nabla_m C_{ijk}
                    for (int m = 0; m < n; ++m)
                        for (int i = 0; i < n; ++i) {
                            Jet dc = jderiv(cotton[i3(i, j, k)], m, q4);
                            for (int a = 0; a < n; ++a) {
                                acc_mul_scaled(dc, -1.0, gamma[i3(a, m, i)],
                                               cotton[i3(a, j, k)]);
                                acc_mul_scaled(dc, -1.0, gamma[i3(a, m, j)],
                                               cotton[i3(i, a, k)]);
                                acc_mul_scaled(dc, -1.0, gamma[i3(a, m, k)],
                                               cotton[i3(i, j, a)]);
                            }
                            acc_mul(acc, gi.at(m, i), dc);
                        }
                    // W_{ijkl} S^{il}
                    for (int i = 0; i < n; ++i)
                        for (int l = 0; l < n; ++l)
                            acc_mul(acc, weyl[i4(i, j, k, l)], sup[i * n + l]);
                    b1[j * n + k] = std::move(acc);
                }
            bach1 = MetricJet(n, q4);
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    Jet s = b1[j * n + k] + b1[k * n + j];
                    s *= 0.5;
                    bach1.at(j, k) = std::move(s);
                }
        }

        // T tensor.
        {
            MetricJet sring = schouten.truncated(q4);
            sring -= scaled_g(tr_s * (1.0 / n), q4);
            tt = MetricJet(n, q4);
            MetricJet a = hess_trs;
            a -= scaled_g(lap_trs * (1.0 / n), q4);
            a *= double(n - 2);
            MetricJet b = ss;
            b -= scaled_g(s_sq * (1.0 / n), q4);
            b *= 4.0 * (n - 1);
            MetricJet c = mj_scale(tr_s, sring, q4);
            c *= double(n) * double(n);
            tt += a;
            tt += b;
            tt -= c;
        }

        // J tensor from the Bach/T decomposition.
        {
            jt = scaled_g(q13 * (1.0 / n), q4);
            MetricJet b = bach1;
            b *= 1.0 / (n - 2);
            MetricJet t = tt;
            t *= double(n - 4) / (4.0 * (n - 1) * (n - 2));
            jt -= b;
            jt -= t;
        }
    }

    // ---- value-level bundle ------------------------------------------
    bundle.christoffel = Tensor3(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                bundle.christoffel.at(l, i, j) = gamma[i3(l, i, j)].value();
    bundle.riemann = Tensor4(n);
    for (std::size_t i = 0; i < rm.size(); ++i)
        bundle.riemann.a[i] = rm[i].value();
    bundle.ricci = values_of(ric);
    bundle.scalar = r.value();
    if (n >= 3) {
        bundle.schouten = values_of(schouten);
        bundle.tr_schouten = tr_s.value();
        bundle.weyl = Tensor4(n);
        for (std::size_t i = 0; i < weyl.size(); ++i)
            bundle.weyl.a[i] = weyl[i].value();
    }
    if (n >= 3 && K >= 3) {
        bundle.cotton = Tensor3(n);
        for (std::size_t i = 0; i < cotton.size(); ++i)
            bundle.cotton.a[i] = cotton[i].value();
    }
    if (n >= 3 && K >= 4) {
        bundle.bach = values_of(bach1);
        Sym2 b2 = values_of(bach2), b3 = values_of(bach3);
        double gap = 0;
        Sym2 d12 = bundle.bach - b2, d13 = bundle.bach - b3, d23 = b2 - b3;
        gap = std::max({d12.max_abs(), d13.max_abs(), d23.max_abs()});
        bundle.bach_route_gap = gap;
        bundle.q = q13.value();
        bundle.q_route_gap = std::abs(q13.value() - q22.value());
        bundle.t_tensor = values_of(tt);
        bundle.j_tensor = values_of(jt);
        bundle.j_traceless = traceless_part(bundle.metric, bundle.j_tensor);
        if (n != 4) {
            Sym2 sj = bundle.j_tensor;
            sj -= (3.0 * bundle.q / (4.0 * (n - 1))) * bundle.metric.g;
            sj *= 1.0 / (n - 4);
            bundle.s_j = sj;
            bundle.sigma1_j = trace(bundle.metric.g_inv, sj);
            bundle.sigma2_j = 0.5 * (bundle.sigma1_j * bundle.sigma1_j -
                                     norm_sq(bundle.metric.g_inv, sj));
            bundle.has_sj = true;
        }
    }
}

// ---------------------------------------------------------------------
// public wrappers
// ---------------------------------------------------------------------

CurvatureJets::CurvatureJets(const MetricJet& g)
    : impl_(std::make_unique<Impl>(g)) {}
CurvatureJets::~CurvatureJets() = default;
CurvatureJets::CurvatureJets(CurvatureJets&&) noexcept = default;
CurvatureJets& CurvatureJets::operator=(CurvatureJets&&) noexcept = default;

int CurvatureJets::dim() const { return impl_->n; }
int CurvatureJets::order() const { return impl_->K; }
const CurvatureBundle& CurvatureJets::bundle() const { return impl_->bundle; }

const Jet& CurvatureJets::christoffel_jet(int l, int i, int j) const {
    return impl_->gamma[impl_->i3(l, i, j)];
}
const Jet& CurvatureJets::ricci_jet(int i, int j) const {
    return impl_->ric.at(i, j);
}
const Jet& CurvatureJets::scalar_jet() const { return impl_->r; }
const Jet& CurvatureJets::schouten_jet(int i, int j) const {
    if (impl_->n < 3)
        throw std::invalid_argument("schouten: requires dimension >= 3");
    return impl_->schouten.at(i, j);
}
const Jet& CurvatureJets::weyl_jet(int i, int j, int k, int l) const {
    if (impl_->n < 3)
        throw std::invalid_argument("weyl: requires dimension >= 3");
    return impl_->weyl[impl_->i4(i, j, k, l)];
}
const Jet& CurvatureJets::cotton_jet(int i, int j, int k) const {
    impl_->require_order(3, "cotton");
    return impl_->cotton[impl_->i3(i, j, k)];
}
Jet CurvatureJets::q_jet() const {
    impl_->require_order(4, "q_curvature");
    return impl_->q13;
}
MetricJet CurvatureJets::j_jets() const {
    impl_->require_order(4, "j_tensor");
    return impl_->jt;
}

Sym2 CurvatureJets::hessian_values(const Jet& f) const {
    return impl_->values_of(impl_->hessian(f, 0));
}
double CurvatureJets::laplacian_value(const Jet& f) const {
    return impl_->laplacian(f, 0).value();
}

MetricJet CurvatureJets::lichnerowicz(const MetricJet& h) const {
    if (h.order() < 2)
        throw std::invalid_argument("lichnerowicz: field jet order must be >= 2");
    if (h.order() > impl_->K)
        throw std::invalid_argument(
            "lichnerowicz: field jet order exceeds metric jet order");
    return impl_->lichnerowicz_at(h, h.order() - 2);
}

double CurvatureJets::gamma_linearized(const MetricJet& h) const {
    impl_->require_order(3, "gamma_linearized");
    if (h.order() < 2)
        throw std::invalid_argument("gamma_linearized: field order must be >= 2");
    // DR.h = -Lap tr h + div div h - <Ric, h>
    Jet trh = impl_->mj_trace(h, 2);
    double lap_trh = impl_->laplacian(trh, 0).value();
    double divdiv = impl_->div_oneform(impl_->div_sym2(h, 1), 0).value();
    double ric_h = impl_->mj_inner(impl_->ric, h, 0).value();
    return -lap_trh + divdiv - ric_h;
}

std::vector<double> CurvatureJets::dq() const {
    impl_->require_order(5, "dq");
    std::vector<double> out(impl_->n);
    for (int v = 0; v < impl_->n; ++v)
        out[v] = impl_->q13.coeff(impl_->tab.var_index(v));
    return out;
}

std::vector<double> CurvatureJets::div_j() const {
    impl_->require_order(5, "div_j");
    return div_sym2_values(impl_->jt);
}

std::vector<double> CurvatureJets::div_sym2_values(const MetricJet& t) const {
    if (t.order() < 1)
        throw std::invalid_argument("div_sym2: field jet order must be >= 1");
    std::vector<Jet> d = impl_->div_sym2(t, 0);
    std::vector<double> out(impl_->n);
    for (int l = 0; l < impl_->n; ++l) out[l] = d[l].value();
    return out;
}

double CurvatureJets::metric_compatibility_residual() const {
    auto& I = *impl_;
    std::vector<Jet> ng = I.nabla_sym2(I.g, I.K - 1);
    double worst = 0, scale = 0;
    for (int k = 0; k < MetricJet::sym_count(I.n); ++k)
        scale = std::max(scale, max_abs_coeff(I.g.comp(k)));
    for (const Jet& j : ng) worst = std::max(worst, max_abs_coeff(j));
    return worst / std::max(scale, 1e-300);
}

double CurvatureJets::weyl_trace_residual() const {
    auto& I = *impl_;
    if (I.n < 3)
        throw std::invalid_argument("weyl: requires dimension >= 3");
    const int n = I.n;
    double scale = 1e-300;
    for (const Jet& w : I.rm) scale = std::max(scale, std::abs(w.value()));
    double worst = 0;
    // Adjacent-pair traces: slots (1,2), (2,3), (3,4).
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double t12 = 0, t23 = 0, t34 = 0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    double w = I.gi.at(p, q).value();
                    t12 += w * I.weyl[I.i4(p, q, a, b)].value();
                    t23 += w * I.weyl[I.i4(a, p, q, b)].value();
                    t34 += w * I.weyl[I.i4(a, b, p, q)].value();
                }
            worst = std::max({worst, std::abs(t12), std::abs(t23),
                              std::abs(t34)});
        }
    return worst / scale;
}

double CurvatureJets::weyl_cotton_residual() const {
    auto& I = *impl_;
    I.require_order(3, "weyl_cotton_residual");
    if (I.n < 3)
        throw std::invalid_argument("weyl: requires dimension >= 3");
    const int n = I.n;
    // div W over the last slot: g^{ml} nabla_m W_{ijkl}.
    double worst = 0, scale = 1e-300;
    std::vector<Jet> ns = I.nabla_sym2(I.schouten, I.K - 3);
    for (const Jet& j : ns) scale = std::max(scale, std::abs(j.value()));
    scale = std::max(scale, 1e-4 * std::abs(I.tr_s.value()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double dw = 0;
                for (int m = 0; m < n; ++m)
                    for (int l = 0; l < n; ++l) {
                        // nabla_m W_{ijkl} at value level
                        double t =
                            I.weyl[I.i4(i, j, k, l)].coeff(I.tab.var_index(m));
                        for (int a = 0; a < n; ++a) {
                            t -= I.gamma[I.i3(a, m, i)].value() *
                                 I.weyl[I.i4(a, j, k, l)].value();
                            t -= I.gamma[I.i3(a, m, j)].value() *
                                 I.weyl[I.i4(i, a, k, l)].value();
                            t -= I.gamma[I.i3(a, m, k)].value() *
                                 I.weyl[I.i4(i, j, a, l)].value();
                            t -= I.gamma[I.i3(a, m, l)].value() *
                                 I.weyl[I.i4(i, j, k, a)].value();
                        }
                        dw += I.gi.at(m, l).value() * t;
                    }
                double want = (n - 3.0) * I.cotton[I.i3(i, j, k)].value();
                worst = std::max(worst, std::abs(dw - want));
            }
    return worst / scale;
}

CurvatureBundle curvature_bundle(const MetricJet& g) {
    return CurvatureJets(g).bundle();
}

EinsteinQCheck einstein_q_check(const CurvatureBundle& b) {
    EinsteinQCheck out;
    const int n = b.dim;
    Sym2 dev = b.ricci - (b.scalar / n) * b.metric.g;
    double ric_scale = std::max(b.ricci.max_abs(), 1e-300);
    out.einstein_residual = dev.max_abs() / ric_scale;
    out.einstein = out.einstein_residual <= 1e-8;
    double want = (n + 2.0) * (n - 2.0) / (8.0 * n * (n - 1.0) * (n - 1.0)) *
                  b.scalar * b.scalar;
    out.q_residual = std::abs(b.q - want) / std::max({std::abs(b.q),
                                                      std::abs(want), 1e-12});
    return out;
}

}  // namespace qcurv
