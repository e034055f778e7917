#include "qcurv/tensor.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace qcurv {

Sym2::Sym2(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 2) throw std::invalid_argument("Sym2: dimension must be >= 2");
}

Sym2::Sym2(int n, const double* rowmajor) : Sym2(n) {
    double maxabs = 0.0, asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            maxabs = std::max(maxabs, std::abs(rowmajor[i * n + j]));
            asym = std::max(asym,
                            std::abs(rowmajor[i * n + j] - rowmajor[j * n + i]));
        }
    if (asym > 1e-10 * std::max(maxabs, 1e-300))
        throw std::invalid_argument("Sym2: input asymmetry above 1e-10 relative");
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            set(i, j, 0.5 * (rowmajor[i * n + j] + rowmajor[j * n + i]));
}

Sym2 Sym2::identity(int n) {
    Sym2 s(n);
    for (int i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

Sym2 Sym2::diagonal(const std::vector<double>& d) {
    Sym2 s(static_cast<int>(d.size()));
    for (int i = 0; i < s.n_; ++i) s.set(i, i, d[i]);
    return s;
}

Sym2& Sym2::operator+=(const Sym2& o) {
    if (n_ != o.n_) throw std::invalid_argument("Sym2: dimension mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Sym2& Sym2::operator-=(const Sym2& o) {
    if (n_ != o.n_) throw std::invalid_argument("Sym2: dimension mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Sym2& Sym2::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

double Sym2::max_abs() const {
    double m = 0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

MetricAtPoint MetricAtPoint::from_metric(const Sym2& g) {
    const int n = g.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("MetricAtPoint: metric not positive-definite");
    double sqrt_det = 1.0;
    for (int i = 0; i < n; ++i) sqrt_det *= llt.matrixL()(i, i);
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));

    MetricAtPoint out;
    out.g = g;
    out.g_inv = Sym2(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            out.g_inv.set(i, j, 0.5 * (inv(i, j) + inv(j, i)));
    out.sqrt_det = sqrt_det;
    return out;
}

Tensor4 kulkarni_nomizu(const Sym2& alpha, const Sym2& beta) {
    const int n = alpha.dim();
    if (beta.dim() != n)
        throw std::invalid_argument("kulkarni_nomizu: dimension mismatch");
    // Compute each independent component once and mirror it, so the
    // antisymmetries and the pair-exchange symmetry hold bit-for-bit.
    Tensor4 t(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    if (std::make_pair(i, j) > std::make_pair(k, l)) continue;
                    double v = alpha(i, l) * beta(j, k) +
                               alpha(j, k) * beta(i, l) -
                               alpha(i, k) * beta(j, l) -
                               alpha(j, l) * beta(i, k);
                    t.at(i, j, k, l) = v;
                    t.at(j, i, k, l) = -v;
                    t.at(i, j, l, k) = -v;
                    t.at(j, i, l, k) = v;
                    t.at(k, l, i, j) = v;
                    t.at(l, k, i, j) = -v;
                    t.at(k, l, j, i) = -v;
                    t.at(l, k, j, i) = v;
                }
    return t;
}

void raise_slot(const Sym2& g_inv, std::vector<double>& t, int rank, int slot) {
    const int n = g_inv.dim();
    std::size_t inner = 1;  // stride of the raised slot
    for (int s = slot + 1; s < rank; ++s) inner *= n;
    std::size_t outer = t.size() / (inner * n);
    std::vector<double> row(n);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t in = 0; in < inner; ++in) {
            double* base = t.data() + o * inner * n + in;
            for (int a = 0; a < n; ++a) {
                double s = 0;
                for (int b = 0; b < n; ++b) s += g_inv(a, b) * base[b * inner];
                row[a] = s;
            }
            for (int a = 0; a < n; ++a) base[a * inner] = row[a];
        }
}

double trace(const Sym2& g_inv, const Sym2& h) {
    const int n = g_inv.dim();
    if (h.dim() != n) throw std::invalid_argument("trace: dimension mismatch");
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += g_inv(i, j) * h(i, j);
    return s;
}

Sym2 product(const Sym2& g_inv, const Sym2& a, const Sym2& b) {
    const int n = g_inv.dim();
    if (a.dim() != n || b.dim() != n)
        throw std::invalid_argument("product: dimension mismatch");
    // a with first slot raised: a^i_j
    std::vector<double> up(a.data(), a.data() + n * n);
    raise_slot(g_inv, up, 2, 0);
    Sym2 r(n);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                s += up[i * n + j] * b(i, k) + up[i * n + k] * b(i, j);
            r.set(j, k, 0.5 * s);
        }
    return r;
}

double inner(const Sym2& g_inv, const Sym2& a, const Sym2& b) {
    const int n = g_inv.dim();
    if (a.dim() != n || b.dim() != n)
        throw std::invalid_argument("inner: dimension mismatch");
    std::vector<double> up(a.data(), a.data() + n * n);
    raise_slot(g_inv, up, 2, 0);
    raise_slot(g_inv, up, 2, 1);
    double s = 0;
    for (int i = 0; i < n * n; ++i) s += up[i] * b.data()[i];
    return s;
}

double norm_sq(const Sym2& g_inv, const Sym2& h) {
    double s = inner(g_inv, h, h);
    return s < 0 && s > -1e-12 ? 0.0 : s;
}

double norm_sq_4(const Sym2& g_inv, const Tensor4& t) {
    const int n = g_inv.dim();
    if (t.n != n) throw std::invalid_argument("norm_sq_4: dimension mismatch");
    std::vector<double> up = t.a;
    for (int slot = 0; slot < 4; ++slot) raise_slot(g_inv, up, 4, slot);
    double s = 0;
    for (std::size_t i = 0; i < up.size(); ++i) s += up[i] * t.a[i];
    return s < 0 && s > -1e-12 ? 0.0 : s;
}

Sym2 traceless_part(const MetricAtPoint& m, const Sym2& h) {
    const int n = m.g.dim();
    if (h.dim() != n)
        throw std::invalid_argument("traceless_part: dimension mismatch");
    Sym2 r = h;
    r -= (trace(m.g_inv, h) / n) * m.g;
    return r;
}

double riemann_symmetry_residual(const Tensor4& t) {
    const int n = t.n;
    double maxabs = 1e-300, res = 0;
    for (double v : t.a) maxabs = std::max(maxabs, std::abs(v));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = t(i, j, k, l);
                    res = std::max(res, std::abs(v + t(j, i, k, l)));
                    res = std::max(res, std::abs(v + t(i, j, l, k)));
                    res = std::max(res, std::abs(v - t(k, l, i, j)));
                }
    return res / maxabs;
}

double first_bianchi_residual(const Tensor4& t) {
    const int n = t.n;
    double maxabs = 1e-300, res = 0;
    for (double v : t.a) maxabs = std::max(maxabs, std::abs(v));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    res = std::max(res, std::abs(t(i, j, k, l) + t(j, k, i, l) +
                                                 t(k, i, j, l)));
    return res / maxabs;
}

double min_generalized_eigenvalue(const Sym2& a, const Sym2& g) {
    const int n = a.dim();
    Eigen::MatrixXd ma(n, n), mg(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ma(i, j) = a(i, j);
            mg(i, j) = g(i, j);
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ma, mg);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("generalized eigenvalue solve failed");
    return es.eigenvalues().minCoeff();
}

}  // namespace qcurv
