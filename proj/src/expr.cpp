#include "qcurv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "qcurv/tensor.hpp"

namespace qcurv {

namespace {

struct Token {
    enum Kind { number, ident, op, lparen, rparen, end } kind;
    double value = 0.0;
    std::string name;
    char ch = 0;
    std::size_t pos = 0;
};

[[noreturn]] void fail(const std::string& text, std::size_t pos,
                       const std::string& what) {
    throw std::invalid_argument("expression \"" + text + "\": " + what +
                                " at offset " + std::to_string(pos));
}

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s.c_str() + i;
            char* endp = nullptr;
            double v = std::strtod(begin, &endp);
            if (endp == begin) fail(s, i, "bad numeric literal");
            out.push_back({Token::number, v, {}, 0, i});
            i += static_cast<std::size_t>(endp - begin);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) ||
                    s[j] == '_'))
                ++j;
            out.push_back({Token::ident, 0.0, s.substr(i, j - i), 0, i});
            i = j;
        } else if (c == '(') {
            out.push_back({Token::lparen, 0.0, {}, c, i});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::rparen, 0.0, {}, c, i});
            ++i;
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({Token::op, 0.0, {}, c, i});
            ++i;
        } else {
            fail(s, i, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::end, 0.0, {}, 0, s.size()});
    return out;
}

}  // namespace

// Recursive-descent parser building the flat node list inside an Expr.
struct ExprParser {
    const std::string& text;
    const std::vector<Token>& toks;
    std::size_t at = 0;
    int dim;
    std::vector<double>* scratch = nullptr;
    std::vector<Expr::Node>& nodes;

    ExprParser(const std::string& t, const std::vector<Token>& tk, int n,
               std::vector<Expr::Node>& nd)
        : text(t), toks(tk), dim(n), nodes(nd) {}

    const Token& peek() const { return toks[at]; }
    Token take() { return toks[at++]; }

    int push(Expr::Node n) {
        nodes.push_back(n);
        return static_cast<int>(nodes.size()) - 1;
    }

    int parse_sum() {
        int lhs = parse_product();
        while (peek().kind == Token::op &&
               (peek().ch == '+' || peek().ch == '-')) {
            char c = take().ch;
            int rhs = parse_product();
            nodes.push_back({c == '+' ? Expr::Op::add : Expr::Op::sub, lhs,
                             rhs, 0.0});
            lhs = static_cast<int>(nodes.size()) - 1;
        }
        return lhs;
    }

    int parse_product() {
        int lhs = parse_unary();
        while (peek().kind == Token::op &&
               (peek().ch == '*' || peek().ch == '/')) {
            char c = take().ch;
            int rhs = parse_unary();
            nodes.push_back({c == '*' ? Expr::Op::mul : Expr::Op::div, lhs,
                             rhs, 0.0});
            lhs = static_cast<int>(nodes.size()) - 1;
        }
        return lhs;
    }

    int parse_unary() {
        if (peek().kind == Token::op && peek().ch == '-') {
            std::size_t pos = take().pos;
            (void)pos;
            int a = parse_unary();
            return push({Expr::Op::neg, a, -1, 0.0});
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        if (peek().kind == Token::op && peek().ch == '^') {
            take();
            // Right-associative; the exponent may carry a unary minus.
            int e = parse_unary();
            return push({Expr::Op::pow, base, e, 0.0});
        }
        return base;
    }

    int parse_primary() {
        Token t = take();
        switch (t.kind) {
            case Token::number:
                return push({Expr::Op::num, -1, -1, t.value});
            case Token::lparen: {
                int e = parse_sum();
                if (peek().kind != Token::rparen)
                    fail(text, peek().pos, "expected ')'");
                take();
                return e;
            }
            case Token::ident:
                return parse_ident(t);
            default:
                fail(text, t.pos, "expected a value");
        }
    }

    int parse_ident(const Token& t) {
        if (peek().kind == Token::lparen) {
            Expr::Op f;
            if (t.name == "sin")
                f = Expr::Op::sin;
            else if (t.name == "cos")
                f = Expr::Op::cos;
            else if (t.name == "exp")
                f = Expr::Op::exp;
            else if (t.name == "log")
                f = Expr::Op::log;
            else
                fail(text, t.pos, "unknown function '" + t.name + "'");
            take();
            int a = parse_sum();
            if (peek().kind != Token::rparen)
                fail(text, peek().pos, "expected ')'");
            take();
            return push({f, a, -1, 0.0});
        }
        if (t.name == "pi")
            return push({Expr::Op::num, -1, -1, 3.14159265358979323846});
        if (t.name.size() >= 2 && t.name[0] == 'x') {
            char* endp = nullptr;
            long k = std::strtol(t.name.c_str() + 1, &endp, 10);
            if (*endp == 0 && k >= 1 && k <= dim)
                return push(
                    {Expr::Op::var, -1, -1, static_cast<double>(k - 1)});
        }
        fail(text, t.pos,
             "unknown name '" + t.name + "' (coordinates are x1..x" +
                 std::to_string(dim) + ")");
    }
};

Expr Expr::parse(const std::string& text, int dim) {
    if (dim < 1) throw std::invalid_argument("Expr: dim must be positive");
    Expr e;
    e.dim_ = dim;
    e.text_ = text;
    auto toks = tokenize(text);
    ExprParser p(text, toks, dim, e.nodes_);
    e.root_ = p.parse_sum();
    if (p.peek().kind != Token::end)
        fail(text, p.peek().pos, "trailing input");
    return e;
}

Expr Expr::constant(int dim, double v) {
    Expr e;
    e.dim_ = dim;
    e.text_ = std::to_string(v);
    e.nodes_.push_back({Op::num, -1, -1, v});
    e.root_ = 0;
    return e;
}

double Expr::eval_node(int k, const double* x) const {
    const Node& n = nodes_[static_cast<std::size_t>(k)];
    switch (n.op) {
        case Op::num:
            return n.value;
        case Op::var:
            return x[static_cast<int>(n.value)];
        case Op::add:
            return eval_node(n.a, x) + eval_node(n.b, x);
        case Op::sub:
            return eval_node(n.a, x) - eval_node(n.b, x);
        case Op::mul:
            return eval_node(n.a, x) * eval_node(n.b, x);
        case Op::div:
            return eval_node(n.a, x) / eval_node(n.b, x);
        case Op::pow:
            return std::pow(eval_node(n.a, x), eval_node(n.b, x));
        case Op::neg:
            return -eval_node(n.a, x);
        case Op::sin:
            return std::sin(eval_node(n.a, x));
        case Op::cos:
            return std::cos(eval_node(n.a, x));
        case Op::exp:
            return std::exp(eval_node(n.a, x));
        case Op::log:
            return std::log(eval_node(n.a, x));
    }
    return 0.0;  // unreachable
}

double Expr::eval(const double* x) const { return eval_node(root_, x); }

ExprMetricField::ExprMetricField(
    int n, ChartBox box,
    std::vector<std::pair<std::pair<int, int>, Expr>> comps)
    : n_(n), box_(std::move(box)) {
    if (n < 2) throw std::invalid_argument("ExprMetricField: dim must be >= 2");
    if (box_.dim() != n)
        throw std::invalid_argument("ExprMetricField: chart box dim mismatch");
    comps_.assign(static_cast<std::size_t>(MetricJet::sym_count(n)),
                  Expr::constant(n, 0.0));
    std::vector<bool> given(comps_.size(), false);
    for (auto& [ij, e] : comps) {
        auto [i, j] = ij;
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument(
                "ExprMetricField: component index out of range");
        std::size_t k =
            static_cast<std::size_t>(MetricJet::sym_index(n, i, j));
        if (given[k])
            throw std::invalid_argument(
                "ExprMetricField: duplicate component g_" +
                std::to_string(i + 1) + "_" + std::to_string(j + 1));
        comps_[k] = std::move(e);
        given[k] = true;
    }
    for (int i = 0; i < n; ++i)
        if (!given[static_cast<std::size_t>(MetricJet::sym_index(n, i, i))])
            throw std::invalid_argument(
                "ExprMetricField: missing diagonal component g_" +
                std::to_string(i + 1) + "_" + std::to_string(i + 1));

    // Reject metrics that are visibly degenerate where the grids sample.
    std::vector<double> mid(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        mid[static_cast<std::size_t>(a)] = 0.5 * (box_.lo[a] + box_.hi[a]);
    Sym2 g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            g.set(i, j,
                  comps_[static_cast<std::size_t>(MetricJet::sym_index(
                             n, i, j))]
                      .eval(mid.data()));
    MetricAtPoint::from_metric(g);  // throws if not positive-definite
}

MetricJet ExprMetricField::jet(const double* x, int order) const {
    if (order != 0)
        throw std::invalid_argument(
            "ExprMetricField: expression metrics provide values only; use "
            "the fd backend for derivatives");
    MetricJet m(n_, 0);
    const JetTable& tab = JetTable::get(n_);
    for (int k = 0; k < MetricJet::sym_count(n_); ++k)
        m.comp(k) = Jet::constant(
            tab, 0, comps_[static_cast<std::size_t>(k)].eval(x));
    return m;
}

}  // namespace qcurv
