#pragma once

// Expression language for forcing terms, weights and matrix entries.
//
// Grammar (no implicit multiplication, `t` is the only variable):
//
//   expr     := term   (('+' | '-') term)*
//   term     := unary  (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)*          left-associative
//   exponent := '-' exponent | primary
//   primary  := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func     := exp | log | sin | cos | sqrt | abs | sign
//
// Trees are immutable and shared; evaluation runs a flat postfix program
// compiled once per expression, so an Expr may be evaluated concurrently.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace forcelab {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Raised when an expression is evaluated outside its domain (log of a
/// non-positive value, division by zero, overflow to a non-finite value).
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, std::string node, double t)
        : std::runtime_error(what + " in `" + node + "` at t=" + format_t(t)),
          node_(std::move(node)), t_(t) {}
    [[nodiscard]] const std::string& node() const noexcept { return node_; }
    [[nodiscard]] double t() const noexcept { return t_; }

private:
    static std::string format_t(double t) {
        std::array<char, 32> buf{};
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), t);
        return std::string(buf.data(), res.ptr);
    }
    std::string node_;
    double t_;
};

enum class UnaryOp : std::uint8_t { Neg, Exp, Log, Sin, Cos, Sqrt, Abs, Sign };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind : std::uint8_t { Constant, Variable, Unary, Binary };
    Kind kind = Kind::Constant;
    double value = 0.0;
    UnaryOp unary = UnaryOp::Neg;
    BinaryOp binary = BinaryOp::Add;
    NodePtr lhs;  // operand of a unary node
    NodePtr rhs;
};

/// Sign and log-magnitude of a real number. Lets weights such as e^t be
/// compared at t = 10^4 without overflowing.
struct SignedLog {
    int sign = 0;  // -1, 0, +1
    double log_abs = -std::numeric_limits<double>::infinity();

    [[nodiscard]] double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    static SignedLog of(double x) {
        if (x == 0.0) return {};
        return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
    }
};

namespace detail {

inline const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Abs: return "abs";
        case UnaryOp::Sign: return "sign";
    }
    return "?";
}

inline char binary_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
        case BinaryOp::Pow: return '^';
    }
    return '?';
}

inline std::string format_number(double v) {
    std::array<char, 40> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

// Printing precedence: 1 additive, 2 multiplicative, 3 negation, 4 power, 5 atom.
inline int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Constant: return n.value < 0 || std::signbit(n.value) ? 3 : 5;
        case Node::Kind::Variable: return 5;
        case Node::Kind::Unary: return n.unary == UnaryOp::Neg ? 3 : 5;
        case Node::Kind::Binary:
            switch (n.binary) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

inline void print_node(const Node& n, std::string& out);

inline void print_child(const Node& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

inline void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Constant: out += format_number(n.value); return;
        case Node::Kind::Variable: out += 't'; return;
        case Node::Kind::Unary:
            if (n.unary == UnaryOp::Neg) {
                out += '-';
                print_child(*n.lhs, precedence(*n.lhs) < 3, out);
            } else {
                out += unary_name(n.unary);
                out += '(';
                print_node(*n.lhs, out);
                out += ')';
            }
            return;
        case Node::Kind::Binary: {
            const int p = precedence(n);
            if (n.binary == BinaryOp::Pow) {
                print_child(*n.lhs, precedence(*n.lhs) < 4, out);
                out += '^';
                print_child(*n.rhs, precedence(*n.rhs) < 5, out);
            } else {
                print_child(*n.lhs, precedence(*n.lhs) < p, out);
                out += binary_symbol(n.binary);
                print_child(*n.rhs, precedence(*n.rhs) <= p, out);
            }
            return;
        }
    }
}

inline std::string node_string(const Node& n) {
    std::string s;
    print_node(n, s);
    return s;
}

enum class OpCode : std::uint8_t {
    PushConst,
    PushVar,
    Neg, Exp, Log, Sin, Cos, Sqrt, Abs, Sign,
    Add, Sub, Mul, Div, Pow,
};

struct Instr {
    OpCode op;
    double value;
    const Node* node;  // for diagnostics
};

struct Program {
    std::vector<Instr> code;
    std::size_t max_stack = 0;
};

inline std::size_t compile(const Node& n, Program& p) {
    switch (n.kind) {
        case Node::Kind::Constant: p.code.push_back({OpCode::PushConst, n.value, &n}); return 1;
        case Node::Kind::Variable: p.code.push_back({OpCode::PushVar, 0.0, &n}); return 1;
        case Node::Kind::Unary: {
            const std::size_t d = compile(*n.lhs, p);
            p.code.push_back({static_cast<OpCode>(static_cast<int>(OpCode::Neg) + static_cast<int>(n.unary)), 0.0, &n});
            return d;
        }
        case Node::Kind::Binary: {
            const std::size_t dl = compile(*n.lhs, p);
            const std::size_t dr = compile(*n.rhs, p);
            p.code.push_back({static_cast<OpCode>(static_cast<int>(OpCode::Add) + static_cast<int>(n.binary)), 0.0, &n});
            return std::max(dl, dr + 1);
        }
    }
    return 1;
}

[[noreturn]] inline void domain_fail(const char* what, const Node* node, double t) {
    throw DomainError(what, node_string(*node), t);
}

inline bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

inline double apply_pow(double a, double b, const Node* node, double t) {
    if (a < 0.0 && !is_integer(b)) domain_fail("negative base with non-integer exponent", node, t);
    if (a == 0.0 && b < 0.0) domain_fail("zero base with negative exponent", node, t);
    return std::pow(a, b);
}

template <class Stack>
double run_program(const Program& prog, double t, Stack& st) {
    std::size_t sp = 0;
    for (const Instr& in : prog.code) {
        switch (in.op) {
            case OpCode::PushConst: st[sp++] = in.value; continue;
            case OpCode::PushVar: st[sp++] = t; continue;
            case OpCode::Neg: st[sp - 1] = -st[sp - 1]; continue;
            case OpCode::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
            case OpCode::Log:
                if (!(st[sp - 1] > 0.0)) domain_fail("log of non-positive value", in.node, t);
                st[sp - 1] = std::log(st[sp - 1]);
                continue;
            case OpCode::Sin: st[sp - 1] = std::sin(st[sp - 1]); continue;
            case OpCode::Cos: st[sp - 1] = std::cos(st[sp - 1]); continue;
            case OpCode::Sqrt:
                if (st[sp - 1] < 0.0) domain_fail("sqrt of negative value", in.node, t);
                st[sp - 1] = std::sqrt(st[sp - 1]);
                continue;
            case OpCode::Abs: st[sp - 1] = std::fabs(st[sp - 1]); continue;
            case OpCode::Sign: {
                const double v = st[sp - 1];
                st[sp - 1] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
                continue;
            }
            case OpCode::Add: --sp; st[sp - 1] += st[sp]; break;
            case OpCode::Sub: --sp; st[sp - 1] -= st[sp]; break;
            case OpCode::Mul: --sp; st[sp - 1] *= st[sp]; break;
            case OpCode::Div:
                --sp;
                if (st[sp] == 0.0) domain_fail("division by zero", in.node, t);
                st[sp - 1] /= st[sp];
                break;
            case OpCode::Pow:
                --sp;
                st[sp - 1] = apply_pow(st[sp - 1], st[sp], in.node, t);
                break;
        }
        if (!std::isfinite(st[sp - 1])) domain_fail("non-finite result", in.node, t);
    }
    return st[0];
}

inline SignedLog log_add(SignedLog a, SignedLog b, bool subtract) {
    if (subtract) b.sign = -b.sign;
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.log_abs < b.log_abs) std::swap(a, b);
    const double r = std::exp(b.log_abs - a.log_abs);
    if (a.sign == b.sign) return {a.sign, a.log_abs + std::log1p(r)};
    if (r == 1.0) return {};
    return {a.sign, a.log_abs + std::log1p(-r)};
}

inline SignedLog eval_log_node(const Node& n, double t) {
    auto finite_value = [&](SignedLog v, const Node& where) {
        const double x = v.value();
        if (!std::isfinite(x)) domain_fail("non-finite intermediate value", &where, t);
        return x;
    };
    switch (n.kind) {
        case Node::Kind::Constant: return SignedLog::of(n.value);
        case Node::Kind::Variable: return SignedLog::of(t);
        case Node::Kind::Unary: {
            const SignedLog u = eval_log_node(*n.lhs, t);
            switch (n.unary) {
                case UnaryOp::Neg: return {-u.sign, u.log_abs};
                case UnaryOp::Exp: {
                    const double x = finite_value(u, *n.lhs);
                    return {1, x};
                }
                case UnaryOp::Log:
                    if (u.sign <= 0) domain_fail("log of non-positive value", &n, t);
                    return SignedLog::of(u.log_abs);
                case UnaryOp::Sqrt:
                    if (u.sign < 0) domain_fail("sqrt of negative value", &n, t);
                    if (u.sign == 0) return {};
                    return {1, 0.5 * u.log_abs};
                case UnaryOp::Abs: return {u.sign == 0 ? 0 : 1, u.log_abs};
                case UnaryOp::Sign: return SignedLog::of(static_cast<double>(u.sign));
                case UnaryOp::Sin: return SignedLog::of(std::sin(finite_value(u, *n.lhs)));
                case UnaryOp::Cos: return SignedLog::of(std::cos(finite_value(u, *n.lhs)));
            }
            break;
        }
        case Node::Kind::Binary: {
            const SignedLog a = eval_log_node(*n.lhs, t);
            const SignedLog b = eval_log_node(*n.rhs, t);
            switch (n.binary) {
                case BinaryOp::Add: return log_add(a, b, false);
                case BinaryOp::Sub: return log_add(a, b, true);
                case BinaryOp::Mul:
                    if (a.sign == 0 || b.sign == 0) return {};
                    return {a.sign * b.sign, a.log_abs + b.log_abs};
                case BinaryOp::Div:
                    if (b.sign == 0) domain_fail("division by zero", &n, t);
                    if (a.sign == 0) return {};
                    return {a.sign * b.sign, a.log_abs - b.log_abs};
                case BinaryOp::Pow: {
                    const double e = finite_value(b, *n.rhs);
                    if (a.sign == 0) {
                        if (e < 0.0) domain_fail("zero base with negative exponent", &n, t);
                        return e == 0.0 ? SignedLog{1, 0.0} : SignedLog{};
                    }
                    if (a.sign < 0 && !is_integer(e)) domain_fail("negative base with non-integer exponent", &n, t);
                    int sign = 1;
                    if (a.sign < 0 && std::fmod(std::fabs(e), 2.0) == 1.0) sign = -1;
                    return {sign, e * a.log_abs};
                }
            }
            break;
        }
    }
    return {};
}

inline bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Constant: return a.value == b.value;
        case Node::Kind::Variable: return true;
        case Node::Kind::Unary: return a.unary == b.unary && equal_nodes(*a.lhs, *b.lhs);
        case Node::Kind::Binary:
            return a.binary == b.binary && equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    }
    return false;
}

}  // namespace detail

/// Immutable expression in the variable t.
class Expr {
public:
    Expr() : Expr(make_constant(0.0)) {}
    explicit Expr(NodePtr root) : root_(std::move(root)) {
        auto prog = std::make_shared<detail::Program>();
        prog->max_stack = detail::compile(*root_, *prog);
        program_ = std::move(prog);
    }

    static Expr constant(double v) { return Expr(make_constant(v)); }
    static Expr variable() {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Variable;
        return Expr(std::move(n));
    }
    static Expr unary(UnaryOp op, const Expr& arg) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Unary;
        n->unary = op;
        n->lhs = arg.root_;
        return Expr(std::move(n));
    }
    static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Binary;
        n->binary = op;
        n->lhs = lhs.root_;
        n->rhs = rhs.root_;
        return Expr(std::move(n));
    }

    [[nodiscard]] const Node& root() const noexcept { return *root_; }
    [[nodiscard]] const NodePtr& root_ptr() const noexcept { return root_; }

    /// Evaluates at t; throws DomainError naming the offending node.
    [[nodiscard]] double operator()(double t) const {
        const detail::Program& prog = *program_;
        if (prog.max_stack <= 64) {
            std::array<double, 64> st;  // NOLINT: filled before read
            return detail::run_program(prog, t, st);
        }
        std::vector<double> st(prog.max_stack);
        return detail::run_program(prog, t, st);
    }

    /// Evaluates sign and log-magnitude without forming intermediate
    /// exponentials, so exp(t) at t = 1e4 is representable.
    [[nodiscard]] SignedLog eval_log(double t) const { return detail::eval_log_node(*root_, t); }

    [[nodiscard]] std::string str() const { return detail::node_string(*root_); }

    [[nodiscard]] bool is_constant() const noexcept { return root_->kind == Node::Kind::Constant; }
    [[nodiscard]] bool is_constant(double v) const noexcept { return is_constant() && root_->value == v; }

    friend bool operator==(const Expr& a, const Expr& b) { return detail::equal_nodes(*a.root_, *b.root_); }

private:
    static NodePtr make_constant(double v) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Constant;
        n->value = v;
        return n;
    }

    NodePtr root_;
    std::shared_ptr<const detail::Program> program_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expr parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        Expr e = expr();
        skip_ws();
        if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) lhs = Expr::binary(BinaryOp::Add, lhs, term());
            else if (accept('-')) lhs = Expr::binary(BinaryOp::Sub, lhs, term());
            else return lhs;
        }
    }
    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = Expr::binary(BinaryOp::Mul, lhs, unary());
            else if (accept('/')) lhs = Expr::binary(BinaryOp::Div, lhs, unary());
            else return lhs;
        }
    }
    Expr unary() {
        if (accept('-')) return Expr::unary(UnaryOp::Neg, unary());
        return power();
    }
    Expr power() {
        Expr base = primary();
        while (accept('^')) base = Expr::binary(BinaryOp::Pow, base, exponent());
        return base;
    }
    Expr exponent() {
        if (accept('-')) return Expr::unary(UnaryOp::Neg, exponent());
        return primary();
    }
    Expr primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }
    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const char* first = s_.data() + start;
        const char* last = s_.data() + pos_;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) throw ParseError("malformed number", start);
        return Expr::constant(v);
    }
    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string_view name = s_.substr(start, pos_ - start);
        if (name == "t") return Expr::variable();
        if (name == "pi") return Expr::constant(std::numbers::pi);
        static constexpr std::array<std::pair<std::string_view, UnaryOp>, 7> funcs{{
            {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log}, {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos},
            {"sqrt", UnaryOp::Sqrt}, {"abs", UnaryOp::Abs}, {"sign", UnaryOp::Sign},
        }};
        for (const auto& [fname, op] : funcs) {
            if (name == fname) {
                expect('(');
                Expr arg = expr();
                expect(')');
                return Expr::unary(op, arg);
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

// Smart constructors used by differentiate; they fold the trivial identities
// so derivative trees stay readable ("2*t" rather than "2*t^1*1").
inline Expr add(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.root().value + b.root().value);
    return Expr::binary(BinaryOp::Add, a, b);
}
inline Expr neg(const Expr& a) {
    if (a.is_constant()) return Expr::constant(-a.root().value);
    if (a.root().kind == Node::Kind::Unary && a.root().unary == UnaryOp::Neg) return Expr(a.root().lhs);
    return Expr::unary(UnaryOp::Neg, a);
}
inline Expr sub(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return neg(b);
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.root().value - b.root().value);
    return Expr::binary(BinaryOp::Sub, a, b);
}
inline Expr mul(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.root().value * b.root().value);
    return Expr::binary(BinaryOp::Mul, a, b);
}
inline Expr div(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return Expr::constant(0.0);
    if (b.is_constant(1.0)) return a;
    return Expr::binary(BinaryOp::Div, a, b);
}
inline Expr pow(const Expr& a, const Expr& b) {
    if (b.is_constant(1.0)) return a;
    if (b.is_constant(0.0)) return Expr::constant(1.0);
    return Expr::binary(BinaryOp::Pow, a, b);
}

}  // namespace detail

[[nodiscard]] inline Expr parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

/// Symbolic derivative d/dt. abs'(u) is sign(u)·u', so the kink at u = 0
/// gets derivative 0.
[[nodiscard]] inline Expr differentiate(const Expr& f) {
    using namespace detail;
    const Node& n = f.root();
    switch (n.kind) {
        case Node::Kind::Constant: return Expr::constant(0.0);
        case Node::Kind::Variable: return Expr::constant(1.0);
        case Node::Kind::Unary: {
            const Expr u(n.lhs);
            const Expr du = differentiate(u);
            switch (n.unary) {
                case UnaryOp::Neg: return neg(du);
                case UnaryOp::Exp: return mul(f, du);
                case UnaryOp::Log: return div(du, u);
                case UnaryOp::Sin: return mul(Expr::unary(UnaryOp::Cos, u), du);
                case UnaryOp::Cos: return neg(mul(Expr::unary(UnaryOp::Sin, u), du));
                case UnaryOp::Sqrt: return div(du, mul(Expr::constant(2.0), f));
                case UnaryOp::Abs: return mul(Expr::unary(UnaryOp::Sign, u), du);
                case UnaryOp::Sign: return Expr::constant(0.0);
            }
            break;
        }
        case Node::Kind::Binary: {
            const Expr a(n.lhs);
            const Expr b(n.rhs);
            const Expr da = differentiate(a);
            const Expr db = differentiate(b);
            switch (n.binary) {
                case BinaryOp::Add: return add(da, db);
                case BinaryOp::Sub: return sub(da, db);
                case BinaryOp::Mul: return add(mul(da, b), mul(a, db));
                case BinaryOp::Div: return div(sub(mul(da, b), mul(a, db)), pow(b, Expr::constant(2.0)));
                case BinaryOp::Pow:
                    if (b.is_constant()) {
                        const double c = b.root().value;
                        return mul(mul(Expr::constant(c), pow(a, Expr::constant(c - 1.0))), da);
                    }
                    // d(a^b) = a^b (b' log a + b a'/a)
                    return mul(f, add(mul(db, Expr::unary(UnaryOp::Log, a)), div(mul(b, da), a)));
            }
            break;
        }
    }
    return Expr::constant(0.0);
}

/// A real function of t given by an expression, evaluable on [domain_start, ∞).
struct ScalarFunction {
    Expr expr;
    double domain_start = 0.0;
    std::string label;

    ScalarFunction() = default;
    explicit ScalarFunction(Expr e, std::string lbl = {}, double start = 0.0)
        : expr(std::move(e)), domain_start(start), label(std::move(lbl)) {
        if (label.empty()) label = expr.str();
    }
    static ScalarFunction parse(std::string_view text, double start = 0.0) {
        return ScalarFunction(parse_expr(text), std::string(text), start);
    }

    [[nodiscard]] double operator()(double t) const { return expr(t); }
};

}  // namespace forcelab
