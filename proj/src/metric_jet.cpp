#include "qcurv/metric_jet.hpp"

#include <cmath>
#include <stdexcept>

namespace qcurv {

MetricJet::MetricJet(int dim, int order) : n_(dim) {
    if (dim < 2 || dim > kMaxDim)
        throw std::invalid_argument("MetricJet: dimension out of range");
    const JetTable& tab = JetTable::get(dim);
    c_.assign(sym_count(dim), Jet(tab, order));
}

MetricJet MetricJet::truncated(int order) const {
    MetricJet r(n_, order);
    for (int k = 0; k < static_cast<int>(c_.size()); ++k)
        r.c_[k] = c_[k].truncated(order);
    return r;
}

MetricJet& MetricJet::operator+=(const MetricJet& o) {
    if (n_ != o.n_) throw std::invalid_argument("MetricJet: mixed dimensions");
    for (int k = 0; k < static_cast<int>(c_.size()); ++k) c_[k] += o.c_[k];
    return *this;
}

MetricJet& MetricJet::operator-=(const MetricJet& o) {
    if (n_ != o.n_) throw std::invalid_argument("MetricJet: mixed dimensions");
    for (int k = 0; k < static_cast<int>(c_.size()); ++k) c_[k] -= o.c_[k];
    return *this;
}

MetricJet& MetricJet::operator*=(double s) {
    for (auto& j : c_) j *= s;
    return *this;
}

MetricJet MetricJet::inverse() const {
    const int n = n_;
    const int ord = order();
    const JetTable& tab = table();

    // Augmented [A | I] as full (non-symmetric) working storage.
    std::vector<Jet> A(static_cast<std::size_t>(n) * n);
    std::vector<Jet> B(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A[i * n + j] = at(i, j);
            B[i * n + j] = Jet::constant(tab, ord, i == j ? 1.0 : 0.0);
        }

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col].value()) >
                std::abs(A[piv * n + col].value()))
                piv = r;
        if (A[piv * n + col].value() == 0.0)
            throw std::invalid_argument("MetricJet::inverse: singular value part");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(A[piv * n + j], A[col * n + j]);
                std::swap(B[piv * n + j], B[col * n + j]);
            }
        Jet inv_p = 1.0 / A[col * n + col];
        for (int j = 0; j < n; ++j) {
            A[col * n + j] = A[col * n + j] * inv_p;
            B[col * n + j] = B[col * n + j] * inv_p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Jet f = A[r * n + col];
            if (f.value() == 0.0) {
                bool zero = true;
                for (int k = 0; k < f.ncoef() && zero; ++k)
                    zero = (f.coeff(k) == 0.0);
                if (zero) continue;
            }
            for (int j = 0; j < n; ++j) {
                A[r * n + j] -= f * A[col * n + j];
                B[r * n + j] -= f * B[col * n + j];
            }
        }
    }

    // The inverse of a symmetric matrix is symmetric; averaging the halves
    // removes elimination roundoff asymmetry.
    MetricJet r(n, ord);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Jet s = B[i * n + j] + B[j * n + i];
            s *= 0.5;
            r.at(i, j) = s;
        }
    return r;
}

bool MetricField::in_domain(const double* x) const {
    ChartBox b = box();
    for (int i = 0; i < b.dim(); ++i)
        if (!b.periodic[i] && !(b.lo[i] < x[i] && x[i] < b.hi[i])) return false;
    return true;
}

}  // namespace qcurv
