#include "crocco/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace crocco {

struct Expr::Node {
    enum class Op {
        Const, Var,
        Add, Sub, Mul, Div, Pow, Neg,
        Fn1, Fn2
    };
    Op op = Op::Const;
    double value = 0.0;
    int var = 0;  // 0:t 1:x 2:y 3:z
    double (*fn1)(double) = nullptr;
    double (*fn2)(double, double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(double t, double x, double y, double z) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Var:
                return var == 0 ? t : var == 1 ? x : var == 2 ? y : z;
            case Op::Add: return a->eval(t, x, y, z) + b->eval(t, x, y, z);
            case Op::Sub: return a->eval(t, x, y, z) - b->eval(t, x, y, z);
            case Op::Mul: return a->eval(t, x, y, z) * b->eval(t, x, y, z);
            case Op::Div: return a->eval(t, x, y, z) / b->eval(t, x, y, z);
            case Op::Pow:
                return std::pow(a->eval(t, x, y, z), b->eval(t, x, y, z));
            case Op::Neg: return -a->eval(t, x, y, z);
            case Op::Fn1: return fn1(a->eval(t, x, y, z));
            case Op::Fn2:
                return fn2(a->eval(t, x, y, z), b->eval(t, x, y, z));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& src) : s(src) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression '" + s + "': " + msg + " at position " +
                          std::to_string(pos));
    }

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    NodePtr make(Expr::Node n) {
        return std::make_shared<const Expr::Node>(std::move(n));
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                Expr::Node n;
                n.op = Expr::Node::Op::Add;
                n.a = lhs;
                n.b = parse_term();
                lhs = make(std::move(n));
            } else if (eat('-')) {
                Expr::Node n;
                n.op = Expr::Node::Op::Sub;
                n.a = lhs;
                n.b = parse_term();
                lhs = make(std::move(n));
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (eat('*')) {
                Expr::Node n;
                n.op = Expr::Node::Op::Mul;
                n.a = lhs;
                n.b = parse_factor();
                lhs = make(std::move(n));
            } else if (eat('/')) {
                Expr::Node n;
                n.op = Expr::Node::Op::Div;
                n.a = lhs;
                n.b = parse_factor();
                lhs = make(std::move(n));
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() { return parse_unary(); }

    // negation binds looser than exponentiation: -x^2 = -(x^2)
    NodePtr parse_unary() {
        if (eat('-')) {
            Expr::Node n;
            n.op = Expr::Node::Op::Neg;
            n.a = parse_unary();
            return make(std::move(n));
        }
        (void)eat('+');
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (eat('^')) {
            Expr::Node n;
            n.op = Expr::Node::Op::Pow;
            n.a = base;
            n.b = parse_unary();  // right associative, allows 2^-3
            return make(std::move(n));
        }
        return base;
    }

    NodePtr parse_primary() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(s.substr(pos), &used);
            } catch (...) {
                fail("bad number");
            }
            pos += used;
            Expr::Node n;
            n.op = Expr::Node::Op::Const;
            n.value = v;
            return make(std::move(n));
        }
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t p = pos;
            while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) ||
                                    s[p] == '_'))
                ++p;
            const std::string name = s.substr(pos, p - pos);
            pos = p;
            if (peek() == '(') return parse_call(name);
            return parse_symbol(name);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_symbol(const std::string& name) {
        Expr::Node n;
        if (name == "t" || name == "x" || name == "y" || name == "z" ||
            name == "zeta" || name == "xi" || name == "eta") {
            n.op = Expr::Node::Op::Var;
            n.var = (name == "t")                      ? 0
                    : (name == "x" || name == "xi")    ? 1
                    : (name == "y" || name == "eta")   ? 2
                                                       : 3;
            return make(std::move(n));
        }
        if (name == "pi") {
            n.op = Expr::Node::Op::Const;
            n.value = 3.14159265358979323846;
            return make(std::move(n));
        }
        if (name == "e") {
            n.op = Expr::Node::Op::Const;
            n.value = 2.71828182845904523536;
            return make(std::move(n));
        }
        fail("unknown symbol '" + name + "'");
    }

    NodePtr parse_call(const std::string& name) {
        static const struct {
            const char* name;
            double (*fn)(double);
        } fns1[] = {{"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
                    {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
                    {"tanh", std::tanh}, {"abs", std::fabs},  {"sinh", std::sinh},
                    {"cosh", std::cosh}, {"atan", std::atan}};
        static const struct {
            const char* name;
            double (*fn)(double, double);
        } fns2[] = {{"pow", std::pow},
                    {"min", [](double a, double b) { return a < b ? a : b; }},
                    {"max", [](double a, double b) { return a > b ? a : b; }},
                    {"atan2", std::atan2}};

        if (!eat('(')) fail("expected '('");
        NodePtr a = parse_expr();
        if (eat(',')) {
            NodePtr b = parse_expr();
            if (!eat(')')) fail("missing ')'");
            for (const auto& f : fns2)
                if (name == f.name) {
                    Expr::Node n;
                    n.op = Expr::Node::Op::Fn2;
                    n.fn2 = f.fn;
                    n.a = a;
                    n.b = b;
                    return make(std::move(n));
                }
            fail("unknown two-argument function '" + name + "'");
        }
        if (!eat(')')) fail("missing ')'");
        for (const auto& f : fns1)
            if (name == f.name) {
                Expr::Node n;
                n.op = Expr::Node::Op::Fn1;
                n.fn1 = f.fn;
                n.a = a;
                return make(std::move(n));
            }
        fail("unknown function '" + name + "'");
    }
};

}  // namespace

Expr Expr::parse(const std::string& source) {
    Parser p(source);
    Expr e;
    e.root_ = p.parse_expr();
    p.skip();
    if (p.pos != source.size()) p.fail("trailing input");
    e.src_ = source;
    return e;
}

double Expr::eval(double t, double x, double y, double z) const {
    if (!root_) throw ConfigError("evaluating an empty expression");
    return root_->eval(t, x, y, z);
}

}  // namespace crocco
