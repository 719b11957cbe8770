#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hardyforge {

/// Bindings for named parameters appearing in an expression. Evaluating an
/// expression with an unbound parameter is an error, never a silent default.
using ParamBindings = std::map<std::string, double, std::less<>>;

enum class NodeKind { Constant, Variable, Parameter, Add, Sub, Mul, Div, Pow, Func };

enum class FuncKind { Log, Exp, Sqrt, Abs, Sinh, Cosh, Tanh, Coth };

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Immutable symbolic expression over one free variable and named parameters.
/// All operations are pure; an Expr may be shared freely across threads.
class Expr {
public:
    Expr() : Expr(constant(0.0)) {}
    Expr(double v) : Expr(constant(v)) {}  // NOLINT: implicit by design

    static Expr constant(double v);
    static Expr variable();
    static Expr parameter(std::string name);
    static Expr pow(const Expr& base, const Expr& exponent);
    static Expr apply(FuncKind f, const Expr& arg);

    NodeKind kind() const;
    bool is_constant(double v) const;

    /// Evaluates at x with the given parameter bindings. Any non-finite
    /// intermediate (log of a non-positive number, division by zero,
    /// coth at zero, overflow) throws EvalError.
    double eval(double x, const ParamBindings& params = {}) const;

    /// Exact symbolic derivative with respect to the free variable.
    Expr derivative() const;

    /// Shallow best-effort simplification: constant folding and the usual
    /// identity eliminations. Preserves pointwise evaluation.
    Expr simplified() const;

    std::string render() const;

    bool same_tree(const Expr& other) const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

    // Opaque node handle; Node is defined in the implementation file only.
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    const std::shared_ptr<const Node>& node() const { return node_; }

private:
    std::shared_ptr<const Node> node_;
};

inline Expr differentiate(const Expr& e) { return e.derivative(); }
inline Expr simplify(const Expr& e) { return e.simplified(); }

Expr log(const Expr& e);
Expr exp(const Expr& e);
Expr sqrt(const Expr& e);
Expr abs(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);
Expr coth(const Expr& e);

/// Parses the expression grammar. `variable` names the single free variable;
/// every other identifier is a parameter or a known function name.
Expr parse(std::string_view text, std::string_view variable = "x");

}  // namespace hardyforge
