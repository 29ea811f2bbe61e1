#pragma once

// A small real-valued expression language for integrands given on the
// command line:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?          right-associative
//   unary  := '-' unary | atom
//   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// Identifiers are the variable x, the constants pi and e, named parameters
// bound at evaluation time, and the functions
//   sin cos tan atan exp log sqrt abs tanh cosh sinh sech erf   (one argument)
//   atan2 pow min max                                            (two arguments)
//
// There is no implicit multiplication. Note that unary minus binds tighter
// than '^', so "-x^2" is (-x)^2.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace levinquad {

using ParamMap = std::map<std::string, double, std::less<>>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message);
    /// Byte offset into the source where parsing failed.
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Thrown when an expression refers to a parameter with no bound value.
class UnboundParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExprNode {
    enum class Kind { number, variable, constant, parameter, negate, binary, call };

    Kind kind = Kind::number;
    double number = 0.0;        // literal, or the value of a named constant
    std::string name;           // constant, parameter or function name
    char op = 0;                // one of + - * / ^ for binary nodes
    std::vector<ExprNode> args;

    friend bool operator==(const ExprNode& lhs, const ExprNode& rhs);
};

class Expr {
public:
    /// Throws ParseError (syntax, unknown function, arity) on bad input.
    /// Identifiers that are not x, pi, e or a function become parameters.
    [[nodiscard]] static Expr parse(std::string_view source);

    /// As parse(), but every parameter must appear in allowed.
    [[nodiscard]] static Expr parse(std::string_view source, const std::vector<std::string>& allowed);

    /// Tree-walking evaluation. Throws UnboundParameter.
    [[nodiscard]] double eval(double x, const ParamMap& params = {}) const;

    /// Fully parenthesized source that parses back to an equal tree.
    [[nodiscard]] std::string to_string() const;

    /// Names of free parameters, sorted, without duplicates.
    [[nodiscard]] std::vector<std::string> parameters() const;

    [[nodiscard]] const ExprNode& root() const noexcept { return root_; }

    friend bool operator==(const Expr& lhs, const Expr& rhs) { return lhs.root_ == rhs.root_; }

private:
    explicit Expr(ExprNode root) : root_(std::move(root)) {}
    ExprNode root_;
};

[[nodiscard]] inline Expr parse(std::string_view source) { return Expr::parse(source); }
[[nodiscard]] inline double eval(const Expr& expr, double x, const ParamMap& params = {}) {
    return expr.eval(x, params);
}

/// Expression with parameters bound, flattened to a stack program for fast
/// repeated evaluation. Immutable and safe to call concurrently.
class CompiledExpr {
public:
    CompiledExpr() = default;
    /// Throws UnboundParameter if a parameter is missing from params.
    CompiledExpr(const Expr& expr, const ParamMap& params);

    [[nodiscard]] double operator()(double x) const;

private:
    struct Instr {
        enum class Op { constant, x, negate, add, sub, mul, div, pow, call1, call2 } op;
        double value = 0.0;
        double (*fn1)(double) = nullptr;
        double (*fn2)(double, double) = nullptr;
    };
    static constexpr std::size_t kMaxDepth = 64;

    std::vector<Instr> program_;
    std::size_t depth_ = 0;
    Expr fallback_ = Expr::parse("0");
    ParamMap params_;
    bool use_fallback_ = false;

    void emit(const ExprNode& node, const ParamMap& params, std::size_t& depth);
};

}  // namespace levinquad
