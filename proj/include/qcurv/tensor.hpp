#pragma once

#include <vector>

namespace qcurv {

// Dense symmetric 2-tensor at a point. Storage is the full n x n matrix,
// kept exactly symmetric by construction: the raw-array constructor
// symmetrizes its input and rejects asymmetry above 1e-10 relative.
class Sym2 {
public:
    Sym2() = default;
    explicit Sym2(int n);
    Sym2(int n, const double* rowmajor);

    static Sym2 identity(int n);
    static Sym2 diagonal(const std::vector<double>& d);

    int dim() const { return n_; }
    double operator()(int i, int j) const { return a_[i * n_ + j]; }
    void set(int i, int j, double v) { a_[i * n_ + j] = a_[j * n_ + i] = v; }
    void add(int i, int j, double v) {
        a_[i * n_ + j] += v;
        if (i != j) a_[j * n_ + i] += v;
    }
    const double* data() const { return a_.data(); }

    Sym2& operator+=(const Sym2& o);
    Sym2& operator-=(const Sym2& o);
    Sym2& operator*=(double s);
    friend Sym2 operator+(Sym2 a, const Sym2& b) { a += b; return a; }
    friend Sym2 operator-(Sym2 a, const Sym2& b) { a -= b; return a; }
    friend Sym2 operator*(Sym2 a, double s) { a *= s; return a; }
    friend Sym2 operator*(double s, Sym2 a) { a *= s; return a; }

    double max_abs() const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

struct Tensor3 {
    int n = 0;
    std::vector<double> a;  // n^3 row-major

    Tensor3() = default;
    explicit Tensor3(int dim)
        : n(dim), a(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}
    double operator()(int i, int j, int k) const {
        return a[(i * n + j) * n + k];
    }
    double& at(int i, int j, int k) { return a[(i * n + j) * n + k]; }
};

struct Tensor4 {
    int n = 0;
    std::vector<double> a;  // n^4 row-major

    Tensor4() = default;
    explicit Tensor4(int dim)
        : n(dim), a(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}
    double operator()(int i, int j, int k, int l) const {
        return a[((i * n + j) * n + k) * n + l];
    }
    double& at(int i, int j, int k, int l) {
        return a[((i * n + j) * n + k) * n + l];
    }
};

// Metric value data at one point: components, inverse, volume density.
// Construction verifies positive-definiteness.
struct MetricAtPoint {
    Sym2 g;
    Sym2 g_inv;
    double sqrt_det = 0.0;

    static MetricAtPoint from_metric(const Sym2& g);
};

// (alpha kn beta)_{ijkl} = a_{il}b_{jk} + a_{jk}b_{il} - a_{ik}b_{jl} - a_{jl}b_{ik}
Tensor4 kulkarni_nomizu(const Sym2& alpha, const Sym2& beta);

// All index raising routes through this one routine: contracts g_inv into
// the given slot of a dense rank-`rank` tensor, in place.
void raise_slot(const Sym2& g_inv, std::vector<double>& t, int rank, int slot);

double trace(const Sym2& g_inv, const Sym2& h);                     // g^{jk} h_{jk}
Sym2 product(const Sym2& g_inv, const Sym2& a, const Sym2& b);      // sym(a_j^i b_{ik})
double inner(const Sym2& g_inv, const Sym2& a, const Sym2& b);      // g^{ik}g^{jl} a_{ij} b_{kl}
double norm_sq(const Sym2& g_inv, const Sym2& h);
double norm_sq_4(const Sym2& g_inv, const Tensor4& t);
Sym2 traceless_part(const MetricAtPoint& m, const Sym2& h);

// Largest relative violation of the Riemann symmetries (antisymmetry in
// each pair, pair exchange) and of the first Bianchi identity.
double riemann_symmetry_residual(const Tensor4& t);
double first_bianchi_residual(const Tensor4& t);

// Smallest lambda with a v = lambda g v (g positive definite); the Ricci
// positivity scans take a = Ric.
double min_generalized_eigenvalue(const Sym2& a, const Sym2& g);

}  // namespace qcurv
