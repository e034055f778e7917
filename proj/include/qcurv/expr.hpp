#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qcurv/metric_jet.hpp"

namespace qcurv {

// Compiled arithmetic expression in the chart coordinates x1..xn.
// Grammar: binary + - * / ^ (^ binds tightest, right-associative), unary
// minus, parentheses, functions sin cos exp log, numeric literals, and the
// constant pi. parse() throws std::invalid_argument with the offending
// offset on malformed input.
class Expr {
public:
    static Expr parse(const std::string& text, int dim);
    static Expr constant(int dim, double v);

    double eval(const double* x) const;
    int dim() const { return dim_; }
    const std::string& text() const { return text_; }

private:
    enum class Op { num, var, add, sub, mul, div, pow, neg, sin, cos, exp, log };
    struct Node {
        Op op;
        int a = -1, b = -1;  // child node indices
        double value = 0.0;  // literal (num) or variable index (var)
    };
    friend struct ExprParser;

    Expr() = default;
    double eval_node(int k, const double* x) const;

    int dim_ = 0;
    int root_ = -1;
    std::vector<Node> nodes_;
    std::string text_;
};

// Metric assembled from per-component expressions. Only component values
// are available (order-0 jets); derivatives must come from the
// finite-difference backend, so wrap this field in FdMetricField before
// handing it to the curvature layer. Components not supplied default to 0;
// every diagonal entry must be given. Positive-definiteness is checked at
// the chart-box midpoint on construction.
class ExprMetricField : public MetricField {
public:
    ExprMetricField(int n, ChartBox box,
                    std::vector<std::pair<std::pair<int, int>, Expr>> comps);

    int dim() const override { return n_; }
    // order must be 0; anything higher throws std::invalid_argument.
    MetricJet jet(const double* x, int order) const override;
    ChartBox box() const override { return box_; }

private:
    int n_;
    ChartBox box_;
    std::vector<Expr> comps_;  // upper triangle, MetricJet::sym_index order
};

}  // namespace qcurv
