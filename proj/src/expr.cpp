#include "levinquad/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <set>

namespace levinquad {

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

bool operator==(const ExprNode& lhs, const ExprNode& rhs) {
    if (lhs.kind != rhs.kind || lhs.name != rhs.name || lhs.op != rhs.op || lhs.args != rhs.args) return false;
    // Literal values compare by bit pattern so that NaN literals are equal to themselves.
    return lhs.number == rhs.number || (std::isnan(lhs.number) && std::isnan(rhs.number));
}

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }
double fmin2(double a, double b) { return std::fmin(a, b); }
double fmax2(double a, double b) { return std::fmax(a, b); }

struct Function {
    std::string_view name;
    std::size_t arity;
    double (*fn1)(double);
    double (*fn2)(double, double);
};

const std::array<Function, 17>& functions() {
    static const std::array<Function, 17> table{{
        {"sin", 1, [](double v) { return std::sin(v); }, nullptr},
        {"cos", 1, [](double v) { return std::cos(v); }, nullptr},
        {"tan", 1, [](double v) { return std::tan(v); }, nullptr},
        {"atan", 1, [](double v) { return std::atan(v); }, nullptr},
        {"exp", 1, [](double v) { return std::exp(v); }, nullptr},
        {"log", 1, [](double v) { return std::log(v); }, nullptr},
        {"sqrt", 1, [](double v) { return std::sqrt(v); }, nullptr},
        {"abs", 1, [](double v) { return std::fabs(v); }, nullptr},
        {"tanh", 1, [](double v) { return std::tanh(v); }, nullptr},
        {"cosh", 1, [](double v) { return std::cosh(v); }, nullptr},
        {"sinh", 1, [](double v) { return std::sinh(v); }, nullptr},
        {"sech", 1, &sech, nullptr},
        {"erf", 1, [](double v) { return std::erf(v); }, nullptr},
        {"atan2", 2, nullptr, [](double y, double x) { return std::atan2(y, x); }},
        {"pow", 2, nullptr, [](double b, double p) { return std::pow(b, p); }},
        {"min", 2, nullptr, &fmin2},
        {"max", 2, nullptr, &fmax2},
    }};
    return table;
}

const Function* find_function(std::string_view name) {
    for (const auto& f : functions())
        if (f.name == name) return &f;
    return nullptr;
}

std::optional<double> named_constant(std::string_view name) {
    if (name == "pi") return std::numbers::pi;
    if (name == "e") return std::numbers::e;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprNode parse() {
        ExprNode root = expression();
        skip_space();
        if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return root;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprNode expression() {
        ExprNode lhs = term();
        for (;;) {
            skip_space();
            if (pos_ >= src_.size() || (src_[pos_] != '+' && src_[pos_] != '-')) return lhs;
            const char op = src_[pos_++];
            lhs = binary(op, std::move(lhs), term());
        }
    }

    ExprNode term() {
        ExprNode lhs = factor();
        for (;;) {
            skip_space();
            if (pos_ >= src_.size() || (src_[pos_] != '*' && src_[pos_] != '/')) return lhs;
            const char op = src_[pos_++];
            lhs = binary(op, std::move(lhs), factor());
        }
    }

    ExprNode factor() {
        ExprNode base = unary();
        if (consume('^')) return binary('^', std::move(base), factor());
        return base;
    }

    ExprNode unary() {
        if (consume('-')) {
            ExprNode n;
            n.kind = ExprNode::Kind::negate;
            n.args.push_back(unary());
            return n;
        }
        return atom();
    }

    ExprNode atom() {
        skip_space();
        if (pos_ >= src_.size()) fail("expected an expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprNode inner = expression();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    ExprNode number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
            return n;
        };
        std::size_t count = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;  // "2e" is the number 2 followed by e
        }
        ExprNode n;
        n.kind = ExprNode::Kind::number;
        n.number = std::strtod(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr);
        return n;
    }

    ExprNode identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));

        skip_space();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            const Function* fn = find_function(name);
            if (fn == nullptr) {
                pos_ = start;
                fail("unknown function '" + name + "'");
            }
            ++pos_;
            ExprNode call;
            call.kind = ExprNode::Kind::call;
            call.name = name;
            call.args.push_back(expression());
            while (consume(',')) call.args.push_back(expression());
            if (!consume(')')) fail("expected ')' or ','");
            if (call.args.size() != fn->arity) {
                pos_ = start;
                fail("function '" + name + "' takes " + std::to_string(fn->arity) + " argument(s), got " +
                     std::to_string(call.args.size()));
            }
            return call;
        }

        ExprNode n;
        if (name == "x") {
            n.kind = ExprNode::Kind::variable;
        } else if (auto value = named_constant(name)) {
            n.kind = ExprNode::Kind::constant;
            n.number = *value;
        } else if (find_function(name) != nullptr) {
            pos_ = start;
            fail("function '" + name + "' used without arguments");
        } else {
            n.kind = ExprNode::Kind::parameter;
        }
        if (n.kind != ExprNode::Kind::variable) n.name = name;
        return n;
    }

    static ExprNode binary(char op, ExprNode lhs, ExprNode rhs) {
        ExprNode n;
        n.kind = ExprNode::Kind::binary;
        n.op = op;
        n.args.push_back(std::move(lhs));
        n.args.push_back(std::move(rhs));
        return n;
    }
};

double apply_binary(char op, double l, double r) {
    switch (op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/': return l / r;
        default: return std::pow(l, r);
    }
}

double lookup(const ParamMap& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw UnboundParameter("unbound parameter '" + name + "'");
    return it->second;
}

double eval_node(const ExprNode& n, double x, const ParamMap& params) {
    switch (n.kind) {
        case ExprNode::Kind::number:
        case ExprNode::Kind::constant: return n.number;
        case ExprNode::Kind::variable: return x;
        case ExprNode::Kind::parameter: return lookup(params, n.name);
        case ExprNode::Kind::negate: return -eval_node(n.args[0], x, params);
        case ExprNode::Kind::binary:
            return apply_binary(n.op, eval_node(n.args[0], x, params), eval_node(n.args[1], x, params));
        case ExprNode::Kind::call: {
            const Function* fn = find_function(n.name);
            if (fn->arity == 1) return fn->fn1(eval_node(n.args[0], x, params));
            return fn->fn2(eval_node(n.args[0], x, params), eval_node(n.args[1], x, params));
        }
    }
    return std::nan("");
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprNode::Kind::number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            return;
        }
        case ExprNode::Kind::variable: out += 'x'; return;
        case ExprNode::Kind::constant:
        case ExprNode::Kind::parameter: out += n.name; return;
        case ExprNode::Kind::negate:
            out += "(-";
            print_node(n.args[0], out);
            out += ')';
            return;
        case ExprNode::Kind::binary:
            out += '(';
            print_node(n.args[0], out);
            out += n.op;
            print_node(n.args[1], out);
            out += ')';
            return;
        case ExprNode::Kind::call:
            out += n.name;
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i > 0) out += ',';
                print_node(n.args[i], out);
            }
            out += ')';
            return;
    }
}

void collect_parameters(const ExprNode& n, std::set<std::string>& names) {
    if (n.kind == ExprNode::Kind::parameter) names.insert(n.name);
    for (const auto& a : n.args) collect_parameters(a, names);
}

}  // namespace

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).parse()); }

Expr Expr::parse(std::string_view source, const std::vector<std::string>& allowed) {
    Expr e = parse(source);
    for (const auto& name : e.parameters()) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            const std::size_t at = source.find(name);
            throw ParseError(at == std::string_view::npos ? 0 : at, "unknown identifier '" + name + "'");
        }
    }
    return e;
}

double Expr::eval(double x, const ParamMap& params) const { return eval_node(root_, x, params); }

std::string Expr::to_string() const {
    std::string out;
    print_node(root_, out);
    return out;
}

std::vector<std::string> Expr::parameters() const {
    std::set<std::string> names;
    collect_parameters(root_, names);
    return {names.begin(), names.end()};
}

CompiledExpr::CompiledExpr(const Expr& expr, const ParamMap& params) {
    for (const auto& name : expr.parameters()) params_[name] = lookup(params, name);
    std::size_t depth = 0;
    emit(expr.root(), params, depth);
    if (depth_ > kMaxDepth) {
        use_fallback_ = true;
        fallback_ = expr;
        program_.clear();
    }
}

void CompiledExpr::emit(const ExprNode& n, const ParamMap& params, std::size_t& depth) {
    auto push = [&](Instr instr) {
        program_.push_back(instr);
        if (instr.op == Instr::Op::constant || instr.op == Instr::Op::x) {
            ++depth;
            depth_ = std::max(depth_, depth);
        }
    };
    switch (n.kind) {
        case ExprNode::Kind::number:
        case ExprNode::Kind::constant: push({Instr::Op::constant, n.number}); return;
        case ExprNode::Kind::parameter: push({Instr::Op::constant, lookup(params, n.name)}); return;
        case ExprNode::Kind::variable: push({Instr::Op::x}); return;
        case ExprNode::Kind::negate:
            emit(n.args[0], params, depth);
            push({Instr::Op::negate});
            return;
        case ExprNode::Kind::binary: {
            emit(n.args[0], params, depth);
            emit(n.args[1], params, depth);
            Instr::Op op = Instr::Op::pow;
            switch (n.op) {
                case '+': op = Instr::Op::add; break;
                case '-': op = Instr::Op::sub; break;
                case '*': op = Instr::Op::mul; break;
                case '/': op = Instr::Op::div; break;
                default: break;
            }
            push({op});
            --depth;
            return;
        }
        case ExprNode::Kind::call: {
            const Function* fn = find_function(n.name);
            for (const auto& a : n.args) emit(a, params, depth);
            if (fn->arity == 1) {
                push({Instr::Op::call1, 0.0, fn->fn1});
            } else {
                push({Instr::Op::call2, 0.0, nullptr, fn->fn2});
                --depth;
            }
            return;
        }
    }
}

double CompiledExpr::operator()(double x) const {
    if (use_fallback_) return fallback_.eval(x, params_);
    std::array<double, kMaxDepth> stack;
    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
            case Instr::Op::constant: stack[top++] = in.value; break;
            case Instr::Op::x: stack[top++] = x; break;
            case Instr::Op::negate: stack[top - 1] = -stack[top - 1]; break;
            case Instr::Op::add: --top; stack[top - 1] += stack[top]; break;
            case Instr::Op::sub: --top; stack[top - 1] -= stack[top]; break;
            case Instr::Op::mul: --top; stack[top - 1] *= stack[top]; break;
            case Instr::Op::div: --top; stack[top - 1] /= stack[top]; break;
            case Instr::Op::pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
            case Instr::Op::call1: stack[top - 1] = in.fn1(stack[top - 1]); break;
            case Instr::Op::call2: --top; stack[top - 1] = in.fn2(stack[top - 1], stack[top]); break;
        }
    }
    return top == 1 ? stack[0] : std::nan("");
}

}  // namespace levinquad
