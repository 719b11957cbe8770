#include "hardyforge/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace hardyforge {

struct Expr::Node {
    NodeKind kind;
    double value = 0.0;              // Constant
    std::string name;                // Parameter
    FuncKind fn = FuncKind::Log;     // Func
    std::shared_ptr<const Node> a;   // left / unary child
    std::shared_ptr<const Node> b;   // right child
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

const char* func_name(FuncKind f) {
    switch (f) {
        case FuncKind::Log: return "log";
        case FuncKind::Exp: return "exp";
        case FuncKind::Sqrt: return "sqrt";
        case FuncKind::Abs: return "abs";
        case FuncKind::Sinh: return "sinh";
        case FuncKind::Cosh: return "cosh";
        case FuncKind::Tanh: return "tanh";
        case FuncKind::Coth: return "coth";
    }
    return "?";
}

}  // namespace

Expr Expr::constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Parameter;
    n->name = std::move(name);
    return Expr(std::move(n));
}

namespace {
Expr make_binary(NodeKind k, const Expr& a, const Expr& b);
}

Expr Expr::pow(const Expr& base, const Expr& exponent) {
    return make_binary(NodeKind::Pow, base, exponent);
}

Expr Expr::apply(FuncKind f, const Expr& arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Func;
    n->fn = f;
    n->a = arg.node_;
    return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(double v) const {
    return node_->kind == NodeKind::Constant && node_->value == v;
}

namespace {

Expr wrap(NodePtr n) { return Expr(std::move(n)); }

NodePtr unwrap(const Expr& e) { return e.node(); }

Expr make_binary(NodeKind k, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = a.node();
    n->b = b.node();
    return wrap(std::move(n));
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return make_binary(NodeKind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return make_binary(NodeKind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return make_binary(NodeKind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return make_binary(NodeKind::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::constant(0.0) - a; }

Expr log(const Expr& e) { return Expr::apply(FuncKind::Log, e); }
Expr exp(const Expr& e) { return Expr::apply(FuncKind::Exp, e); }
Expr sqrt(const Expr& e) { return Expr::apply(FuncKind::Sqrt, e); }
Expr abs(const Expr& e) { return Expr::apply(FuncKind::Abs, e); }
Expr sinh(const Expr& e) { return Expr::apply(FuncKind::Sinh, e); }
Expr cosh(const Expr& e) { return Expr::apply(FuncKind::Cosh, e); }
Expr tanh(const Expr& e) { return Expr::apply(FuncKind::Tanh, e); }
Expr coth(const Expr& e) { return Expr::apply(FuncKind::Coth, e); }

namespace {

double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
}

double eval_node(const Expr::Node& n, double x, const ParamBindings& params) {
    switch (n.kind) {
        case NodeKind::Constant:
            return n.value;
        case NodeKind::Variable:
            return check_finite(x, "variable");
        case NodeKind::Parameter: {
            auto it = params.find(n.name);
            if (it == params.end()) throw EvalError("unbound parameter: " + n.name);
            return it->second;
        }
        case NodeKind::Add:
            return check_finite(eval_node(*n.a, x, params) + eval_node(*n.b, x, params), "+");
        case NodeKind::Sub:
            return check_finite(eval_node(*n.a, x, params) - eval_node(*n.b, x, params), "-");
        case NodeKind::Mul:
            return check_finite(eval_node(*n.a, x, params) * eval_node(*n.b, x, params), "*");
        case NodeKind::Div: {
            double num = eval_node(*n.a, x, params);
            double den = eval_node(*n.b, x, params);
            if (den == 0.0) throw EvalError("division by zero");
            return check_finite(num / den, "/");
        }
        case NodeKind::Pow: {
            double base = eval_node(*n.a, x, params);
            double ex = eval_node(*n.b, x, params);
            if (base == 0.0 && ex < 0.0) throw EvalError("zero raised to a negative power");
            double r = std::pow(base, ex);
            if (std::isnan(r)) throw EvalError("pow of negative base with non-integer exponent");
            return check_finite(r, "^");
        }
        case NodeKind::Func: {
            double u = eval_node(*n.a, x, params);
            switch (n.fn) {
                case FuncKind::Log:
                    if (u <= 0.0) throw EvalError("log of non-positive argument");
                    return check_finite(std::log(u), "log");
                case FuncKind::Exp:
                    return check_finite(std::exp(u), "exp");
                case FuncKind::Sqrt:
                    if (u < 0.0) throw EvalError("sqrt of negative argument");
                    return std::sqrt(u);
                case FuncKind::Abs:
                    return std::fabs(u);
                case FuncKind::Sinh:
                    return check_finite(std::sinh(u), "sinh");
                case FuncKind::Cosh:
                    return check_finite(std::cosh(u), "cosh");
                case FuncKind::Tanh:
                    return std::tanh(u);
                case FuncKind::Coth:
                    if (u == 0.0) throw EvalError("coth at zero");
                    return check_finite(std::cosh(u) / std::sinh(u), "coth");
            }
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

double Expr::eval(double x, const ParamBindings& params) const {
    return eval_node(*node_, x, params);
}

namespace {

Expr diff_node(const NodePtr& np) {
    const Expr::Node& n = *np;
    const Expr c0 = Expr::constant(0.0);
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Parameter:
            return c0;
        case NodeKind::Variable:
            return Expr::constant(1.0);
        case NodeKind::Add:
            return diff_node(n.a) + diff_node(n.b);
        case NodeKind::Sub:
            return diff_node(n.a) - diff_node(n.b);
        case NodeKind::Mul: {
            Expr a = wrap(n.a), b = wrap(n.b);
            return diff_node(n.a) * b + a * diff_node(n.b);
        }
        case NodeKind::Div: {
            Expr a = wrap(n.a), b = wrap(n.b);
            return (diff_node(n.a) * b - a * diff_node(n.b)) / (b * b);
        }
        case NodeKind::Pow: {
            Expr base = wrap(n.a), ex = wrap(n.b);
            Expr db = diff_node(n.a), de = diff_node(n.b);
            if (n.b->kind == NodeKind::Constant) {
                double c = n.b->value;
                if (c == 0.0) return c0;
                return Expr::constant(c) * Expr::pow(base, Expr::constant(c - 1.0)) * db;
            }
            // General exponent: d/dx b^e = b^e (e' log b + e b'/b), base > 0.
            return Expr::pow(base, ex) * (de * log(base) + ex * db / base);
        }
        case NodeKind::Func: {
            Expr u = wrap(n.a);
            Expr du = diff_node(n.a);
            switch (n.fn) {
                case FuncKind::Log: return du / u;
                case FuncKind::Exp: return exp(u) * du;
                case FuncKind::Sqrt: return du / (Expr::constant(2.0) * sqrt(u));
                case FuncKind::Abs: return (u / abs(u)) * du;
                case FuncKind::Sinh: return cosh(u) * du;
                case FuncKind::Cosh: return sinh(u) * du;
                case FuncKind::Tanh:
                    return (Expr::constant(1.0) - tanh(u) * tanh(u)) * du;
                case FuncKind::Coth:
                    return (Expr::constant(1.0) - coth(u) * coth(u)) * du;
            }
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

Expr Expr::derivative() const { return diff_node(node_).simplified(); }

namespace {

bool is_const(const NodePtr& n, double v) {
    return n->kind == NodeKind::Constant && n->value == v;
}

Expr simplify_node(const NodePtr& np) {
    const Expr::Node& n = *np;
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Variable:
        case NodeKind::Parameter:
            return wrap(np);
        case NodeKind::Func: {
            Expr a = simplify_node(n.a);
            Expr folded = Expr::apply(n.fn, a);
            if (a.kind() == NodeKind::Constant) {
                try {
                    return Expr::constant(folded.eval(0.0));
                } catch (const EvalError&) {
                    // leave unevaluable constants (e.g. log(-2)) intact
                }
            }
            return folded;
        }
        default:
            break;
    }
    Expr a = simplify_node(n.a);
    Expr b = simplify_node(n.b);
    NodePtr an = unwrap(a), bn = unwrap(b);
    if (an->kind == NodeKind::Constant && bn->kind == NodeKind::Constant) {
        try {
            return Expr::constant(make_binary(n.kind, a, b).eval(0.0));
        } catch (const EvalError&) {
        }
    }
    switch (n.kind) {
        case NodeKind::Add:
            if (is_const(an, 0.0)) return b;
            if (is_const(bn, 0.0)) return a;
            break;
        case NodeKind::Sub:
            if (is_const(bn, 0.0)) return a;
            break;
        case NodeKind::Mul:
            if (is_const(an, 0.0) || is_const(bn, 0.0)) return Expr::constant(0.0);
            if (is_const(an, 1.0)) return b;
            if (is_const(bn, 1.0)) return a;
            break;
        case NodeKind::Div:
            if (is_const(bn, 1.0)) return a;
            break;
        case NodeKind::Pow:
            if (is_const(bn, 0.0)) return Expr::constant(1.0);
            if (is_const(bn, 1.0)) return a;
            break;
        default:
            break;
    }
    return make_binary(n.kind, a, b);
}

}  // namespace

Expr Expr::simplified() const { return simplify_node(node_); }

namespace {

bool same_node(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Constant: return a->value == b->value;
        case NodeKind::Variable: return true;
        case NodeKind::Parameter: return a->name == b->name;
        case NodeKind::Func: return a->fn == b->fn && same_node(a->a, b->a);
        default: return same_node(a->a, b->a) && same_node(a->b, b->b);
    }
}

void render_node(const Expr::Node& n, std::string& out, std::string_view var) {
    switch (n.kind) {
        case NodeKind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            out += buf;
            return;
        }
        case NodeKind::Variable:
            out += var;
            return;
        case NodeKind::Parameter:
            out += n.name;
            return;
        case NodeKind::Func:
            out += func_name(n.fn);
            out += '(';
            render_node(*n.a, out, var);
            out += ')';
            return;
        default:
            break;
    }
    const char* op = n.kind == NodeKind::Add   ? " + "
                     : n.kind == NodeKind::Sub ? " - "
                     : n.kind == NodeKind::Mul ? " * "
                     : n.kind == NodeKind::Div ? " / "
                                               : " ^ ";
    out += '(';
    render_node(*n.a, out, var);
    out += op;
    render_node(*n.b, out, var);
    out += ')';
}

}  // namespace

std::string Expr::render() const {
    std::string out;
    render_node(*node_, out, "x");
    return out;
}

bool Expr::same_tree(const Expr& other) const { return same_node(node_, other.node_); }

namespace {

class Parser {
public:
    Parser(std::string_view text, std::string_view variable)
        : text_(text), var_(variable) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::string_view var_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (consume('+'))
                e = e + parse_term();
            else if (consume('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (consume('*'))
                e = e * parse_factor();
            else if (consume('/'))
                e = e / parse_factor();
            else
                return e;
        }
    }

    Expr parse_factor() {
        if (consume('-')) {
            Expr f = parse_factor();
            if (f.kind() == NodeKind::Constant) return Expr::constant(-f.eval(0.0));
            return Expr::constant(0.0) - f;
        }
        Expr atom = parse_atom();
        if (consume('^')) return Expr::pow(atom, parse_factor());
        return atom;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{}) throw ParseError("malformed number", pos_);
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return Expr::constant(v);
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        static const std::pair<std::string_view, FuncKind> funcs[] = {
            {"log", FuncKind::Log},   {"exp", FuncKind::Exp},   {"sqrt", FuncKind::Sqrt},
            {"abs", FuncKind::Abs},   {"sinh", FuncKind::Sinh}, {"cosh", FuncKind::Cosh},
            {"tanh", FuncKind::Tanh}, {"coth", FuncKind::Coth},
        };
        if (peek('(')) {
            for (auto& [fname, fk] : funcs) {
                if (name == fname) {
                    ++pos_;  // '('
                    Expr arg = parse_expr();
                    if (!consume(')')) throw ParseError("expected ')'", pos_);
                    return Expr::apply(fk, arg);
                }
            }
            throw ParseError("unknown function name: " + std::string(name), start);
        }
        for (auto& [fname, fk] : funcs) {
            (void)fk;
            if (name == fname)
                throw ParseError("expected '(' after function name: " + std::string(name), pos_);
        }
        if (name == var_) return Expr::variable();
        return Expr::parameter(std::string(name));
    }
};

}  // namespace

Expr parse(std::string_view text, std::string_view variable) {
    return Parser(text, variable).run();
}

}  // namespace hardyforge
