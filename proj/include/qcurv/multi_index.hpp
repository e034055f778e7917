#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace qcurv {

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxJetOrder = 5;

// Exponent vector of a monomial x^alpha. Entries beyond the active
// dimension are zero.
using MultiIndex = std::array<std::uint8_t, kMaxDim>;

int multi_index_degree(const MultiIndex& a);
double multi_index_factorial(const MultiIndex& a);

// Precomputed structure shared by all truncated Taylor polynomials of a
// given dimension: the graded-lexicographic enumeration of multi-indices
// up to kMaxJetOrder, the coefficient-pair table for truncated products,
// and per-variable formal-derivative maps. Tables are interned per
// dimension and live for the whole process.
class JetTable {
public:
    struct MulEntry {
        std::uint32_t out, a, b;
    };
    struct DerivEntry {
        std::int32_t src;  // -1 when the source monomial exceeds the table
        double factor;
    };

    int dim() const { return dim_; }
    int max_order() const { return kMaxJetOrder; }

    // Number of multi-indices with |alpha| <= order.
    int ncoef(int order) const { return ncoef_[order]; }
    int size() const { return static_cast<int>(alpha_.size()); }

    const MultiIndex& exponents(int idx) const { return alpha_[idx]; }
    int degree(int idx) const { return degree_[idx]; }
    double factorial(int idx) const { return factorial_[idx]; }

    // Index of a multi-index in the enumeration, or -1 if |alpha| exceeds
    // max_order.
    int index_of(const MultiIndex& a) const;

    // Index of the degree-1 monomial e_v.
    int var_index(int v) const { return 1 + v; }

    // Product entries with degree(out) <= order, grouped by ascending
    // output degree.
    std::span<const MulEntry> mul_upto(int order) const {
        return {mul_.data(), static_cast<std::size_t>(mul_count_[order])};
    }

    // d/dx_v: coefficient `t` of the derivative comes from coefficient
    // deriv(v, t).src of the source, scaled by .factor.
    const DerivEntry& deriv(int v, int t) const { return deriv_[v][t]; }

    static const JetTable& get(int dim);

private:
    explicit JetTable(int dim);

    int dim_ = 0;
    std::vector<MultiIndex> alpha_;
    std::vector<int> degree_;
    std::vector<double> factorial_;
    std::array<int, kMaxJetOrder + 1> ncoef_{};
    std::vector<MulEntry> mul_;
    std::array<std::int64_t, kMaxJetOrder + 1> mul_count_{};
    std::vector<std::vector<DerivEntry>> deriv_;
};

}  // namespace qcurv
