#pragma once

// Small complex-valued expression parser used by the command line tools so
// problem data can be given as strings like "sin(pi*x/l)*exp(-t)".
//
// Grammar (standard precedence, '^' binds tightest and associates right):
//   expr   : term (('+'|'-') term)*
//   term   : factor (('*'|'/') factor)*
//   factor : ('+'|'-') factor | power
//   power  : atom ('^' factor)?
//   atom   : number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
// Names: variables x, t and parameters l, tau; constants pi, e, i.
// Functions: sin cos tan exp log sqrt sinh cosh abs pow re im conj.

#include <cctype>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlab {

class Expr {
  public:
    struct Env {
        double x = 0.0, t = 0.0, l = 1.0, tau = 1.0;
    };

    static Expr parse(const std::string& src) {
        Expr e;
        Parser p{src, 0, &e.nodes_};
        e.root_ = p.expr();
        p.skip_ws();
        if (p.pos != src.size()) p.fail("unexpected trailing input");
        return e;
    }

    std::complex<double> eval(const Env& env) const { return eval_node(root_, env); }
    std::complex<double> eval(double x, double t, double l = 1.0, double tau = 1.0) const {
        return eval(Env{x, t, l, tau});
    }

  private:
    enum class Kind { Const, Var, Unary, Binary, Call };
    struct Node {
        Kind kind{};
        std::complex<double> value{};  // Const
        char var{};                    // Var: 'x','t','l','T'
        char op{};                     // Unary/Binary
        int fn = -1;                   // Call
        std::vector<int> kids;
    };

    std::vector<Node> nodes_;
    int root_ = -1;

    static constexpr const char* kFnNames[] = {"sin",  "cos",  "tan",  "exp", "log",
                                               "sqrt", "sinh", "cosh", "abs", "pow",
                                               "re",   "im",   "conj"};

    struct Parser {
        const std::string& s;
        std::size_t pos;
        std::vector<Node>* out;

        [[noreturn]] void fail(const std::string& msg) const {
            throw std::invalid_argument("expression error at position " +
                                        std::to_string(pos) + ": " + msg);
        }
        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        int push(Node n) {
            out->push_back(std::move(n));
            return int(out->size()) - 1;
        }

        int expr() {
            int lhs = term();
            for (;;) {
                skip_ws();
                if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                    char op = s[pos++];
                    int rhs = term();
                    Node n;
                    n.kind = Kind::Binary;
                    n.op = op;
                    n.kids = {lhs, rhs};
                    lhs = push(std::move(n));
                } else {
                    return lhs;
                }
            }
        }
        int term() {
            int lhs = factor();
            for (;;) {
                skip_ws();
                if (pos < s.size() && (s[pos] == '*' || s[pos] == '/')) {
                    char op = s[pos++];
                    int rhs = factor();
                    Node n;
                    n.kind = Kind::Binary;
                    n.op = op;
                    n.kids = {lhs, rhs};
                    lhs = push(std::move(n));
                } else {
                    return lhs;
                }
            }
        }
        // A leading minus negates the whole power: -x^2 means -(x^2), while
        // the exponent may itself carry a sign: 2^-3.
        int factor() {
            skip_ws();
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                char op = s[pos++];
                int kid = factor();
                if (op == '+') return kid;
                Node n;
                n.kind = Kind::Unary;
                n.op = '-';
                n.kids = {kid};
                return push(std::move(n));
            }
            return power();
        }
        int power() {
            int base = atom();
            if (eat('^')) {
                int expn = factor();  // right associative
                Node n;
                n.kind = Kind::Binary;
                n.op = '^';
                n.kids = {base, expn};
                return push(std::move(n));
            }
            return base;
        }
        int atom() {
            skip_ws();
            if (pos >= s.size()) fail("expected value");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                int inner = expr();
                if (!eat(')')) fail("expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v = std::stod(s.substr(pos), &used);
                pos += used;
                Node n;
                n.kind = Kind::Const;
                n.value = v;
                return push(std::move(n));
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                          s[pos] == '_'))
                    ++pos;
                std::string name = s.substr(start, pos - start);
                if (eat('(')) {
                    int fn = -1;
                    for (int k = 0; k < int(std::size(kFnNames)); ++k)
                        if (name == kFnNames[k]) fn = k;
                    if (fn < 0) {
                        pos = start;
                        fail("unknown function '" + name + "'");
                    }
                    Node n;
                    n.kind = Kind::Call;
                    n.fn = fn;
                    n.kids.push_back(expr());
                    while (eat(',')) n.kids.push_back(expr());
                    if (!eat(')')) fail("expected ')'");
                    std::size_t want = (name == "pow") ? 2 : 1;
                    if (n.kids.size() != want) fail("wrong argument count for '" + name + "'");
                    return push(std::move(n));
                }
                Node n;
                if (name == "x" || name == "t" || name == "l") {
                    n.kind = Kind::Var;
                    n.var = name[0];
                } else if (name == "tau") {
                    n.kind = Kind::Var;
                    n.var = 'T';
                } else if (name == "pi") {
                    n.kind = Kind::Const;
                    n.value = M_PI;
                } else if (name == "e") {
                    n.kind = Kind::Const;
                    n.value = std::exp(1.0);
                } else if (name == "i") {
                    n.kind = Kind::Const;
                    n.value = {0.0, 1.0};
                } else {
                    pos = start;
                    fail("unknown name '" + name + "'");
                }
                return push(std::move(n));
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    std::complex<double> eval_node(int idx, const Env& env) const {
        using C = std::complex<double>;
        const Node& n = nodes_[idx];
        switch (n.kind) {
            case Kind::Const:
                return n.value;
            case Kind::Var:
                switch (n.var) {
                    case 'x': return C(env.x);
                    case 't': return C(env.t);
                    case 'l': return C(env.l);
                    default: return C(env.tau);
                }
            case Kind::Unary:
                return -eval_node(n.kids[0], env);
            case Kind::Binary: {
                C a = eval_node(n.kids[0], env);
                C b = eval_node(n.kids[1], env);
                switch (n.op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/': return a / b;
                    default: return std::pow(a, b);
                }
            }
            case Kind::Call: {
                C a = eval_node(n.kids[0], env);
                switch (n.fn) {
                    case 0: return std::sin(a);
                    case 1: return std::cos(a);
                    case 2: return std::tan(a);
                    case 3: return std::exp(a);
                    case 4: return std::log(a);
                    case 5: return std::sqrt(a);
                    case 6: return std::sinh(a);
                    case 7: return std::cosh(a);
                    case 8: return C(std::abs(a));
                    case 9: return std::pow(a, eval_node(n.kids[1], env));
                    case 10: return C(a.real());
                    case 11: return C(a.imag());
                    default: return std::conj(a);
                }
            }
        }
        return {};
    }
};

}  // namespace hlab
