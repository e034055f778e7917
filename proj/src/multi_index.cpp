#include "qcurv/multi_index.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qcurv {

int multi_index_degree(const MultiIndex& a) {
    int d = 0;
    for (int v = 0; v < kMaxDim; ++v) d += a[v];
    return d;
}

double multi_index_factorial(const MultiIndex& a) {
    double f = 1.0;
    for (int v = 0; v < kMaxDim; ++v)
        for (int k = 2; k <= a[v]; ++k) f *= k;
    return f;
}

namespace {

// All multi-indices of exactly `deg` in `dim` variables, lexicographic.
void enumerate_degree(int dim, int deg, int var, MultiIndex& cur,
                      std::vector<MultiIndex>& out) {
    if (var == dim - 1) {
        cur[var] = static_cast<std::uint8_t>(deg);
        out.push_back(cur);
        cur[var] = 0;
        return;
    }
    for (int e = deg; e >= 0; --e) {
        cur[var] = static_cast<std::uint8_t>(e);
        enumerate_degree(dim, deg - e, var + 1, cur, out);
    }
    cur[var] = 0;
}

}  // namespace

JetTable::JetTable(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("JetTable: dimension out of range");

    // Graded-lex enumeration to kMaxJetOrder.
    for (int d = 0; d <= kMaxJetOrder; ++d) {
        MultiIndex cur{};
        enumerate_degree(dim, d, 0, cur, alpha_);
        ncoef_[d] = static_cast<int>(alpha_.size());
    }
    std::map<MultiIndex, int> rank;
    for (int i = 0; i < size(); ++i) {
        degree_.push_back(multi_index_degree(alpha_[i]));
        factorial_.push_back(multi_index_factorial(alpha_[i]));
        rank[alpha_[i]] = i;
    }

    // Product table: every (a, b) with |a| + |b| <= max order, grouped by
    // output degree so truncated products walk a prefix.
    for (int i = 0; i < size(); ++i) {
        for (int j = 0; j < size(); ++j) {
            if (degree_[i] + degree_[j] > kMaxJetOrder) continue;
            MultiIndex sum{};
            for (int v = 0; v < dim; ++v)
                sum[v] = static_cast<std::uint8_t>(alpha_[i][v] + alpha_[j][v]);
            mul_.push_back({static_cast<std::uint32_t>(rank.at(sum)),
                            static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(j)});
        }
    }
    std::sort(mul_.begin(), mul_.end(), [&](const MulEntry& x, const MulEntry& y) {
        int dx = degree_[x.out], dy = degree_[y.out];
        if (dx != dy) return dx < dy;
        if (x.out != y.out) return x.out < y.out;
        return x.a < y.a;
    });
    {
        std::size_t pos = 0;
        for (int d = 0; d <= kMaxJetOrder; ++d) {
            while (pos < mul_.size() && degree_[mul_[pos].out] <= d) ++pos;
            mul_count_[d] = static_cast<std::int64_t>(pos);
        }
    }

    // Derivative maps. Taylor coefficients: (d/dx_v f)_beta = (beta_v + 1) *
    // f_{beta + e_v}.
    deriv_.resize(dim);
    for (int v = 0; v < dim; ++v) {
        deriv_[v].resize(size());
        for (int t = 0; t < size(); ++t) {
            MultiIndex src = alpha_[t];
            src[v] = static_cast<std::uint8_t>(src[v] + 1);
            auto it = rank.find(src);
            if (it == rank.end())
                deriv_[v][t] = {-1, 0.0};
            else
                deriv_[v][t] = {it->second, static_cast<double>(alpha_[t][v] + 1)};
        }
    }
}

int JetTable::index_of(const MultiIndex& a) const {
    if (multi_index_degree(a) > kMaxJetOrder) return -1;
    // Tables are small; linear scan within the degree band is fine for
    // construction-time and test-time lookups.
    int d = multi_index_degree(a);
    int lo = d == 0 ? 0 : ncoef_[d - 1];
    int hi = ncoef_[d];
    for (int i = lo; i < hi; ++i)
        if (alpha_[i] == a) return i;
    return -1;
}

const JetTable& JetTable::get(int dim) {
    static std::mutex mu;
    static std::array<std::unique_ptr<JetTable>, kMaxDim + 1> cache;
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("JetTable: dimension out of range");
    std::lock_guard<std::mutex> lock(mu);
    if (!cache[dim]) cache[dim].reset(new JetTable(dim));
    return *cache[dim];
}

}  // namespace qcurv
