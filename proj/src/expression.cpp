#include "orlicz/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

#include "orlicz/grid.hpp"

namespace orlicz {

struct Expression::Node {
    enum class Kind { number, var, unary_neg, binary, call } kind;
    double value = 0.0;          // number
    int var = 0;                 // 0..3 for x1..x4, -1 for the s/t slot
    char op = 0;                 // + - * / ^
    std::string func;            // log exp abs min max pow
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Token {
    enum class Kind { number, ident, op, lparen, rparen, comma, end } kind;
    std::string text;
    double value = 0.0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Token::Kind::end;
            cur_.text = "<end>";
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.'))
                ++end;
            if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
                std::size_t e = end + 1;
                if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
                if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
                    while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
                    end = e;
                }
            }
            cur_.kind = Token::Kind::number;
            cur_.text = src_.substr(pos_, end - pos_);
            try {
                cur_.value = std::stod(cur_.text);
            } catch (...) {
                throw ParseError("malformed number '" + cur_.text + "'", line_, col_);
            }
            col_ += static_cast<int>(end - pos_);
            pos_ = end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) ||
                                         src_[end] == '_'))
                ++end;
            cur_.kind = Token::Kind::ident;
            cur_.text = src_.substr(pos_, end - pos_);
            col_ += static_cast<int>(end - pos_);
            pos_ = end;
            return;
        }
        cur_.text = std::string(1, c);
        ++pos_;
        ++col_;
        switch (c) {
            case '(': cur_.kind = Token::Kind::lparen; return;
            case ')': cur_.kind = Token::Kind::rparen; return;
            case ',': cur_.kind = Token::Kind::comma; return;
            case '+':
            case '-':
            case '*':
            case '/':
            case '^': cur_.kind = Token::Kind::op; return;
            default: throw ParseError("unexpected character '" + cur_.text + "'", line_, col_ - 1);
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

NodePtr num(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    n->value = v;
    return n;
}

NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(Lexer& lex) : lex_(lex) {}

    NodePtr parse_expression() {
        NodePtr left = parse_term();
        while (lex_.peek().kind == Token::Kind::op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            const char op = lex_.take().text[0];
            left = binary(op, left, parse_term());
        }
        return left;
    }

    void expect_end() {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::end)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.col);
    }

private:
    NodePtr parse_term() {
        NodePtr left = parse_factor();
        while (lex_.peek().kind == Token::Kind::op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            const char op = lex_.take().text[0];
            left = binary(op, left, parse_factor());
        }
        return left;
    }

    NodePtr parse_factor() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::op && t.text == "-") {
            lex_.take();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::unary_neg;
            n->a = parse_factor();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (lex_.peek().kind == Token::Kind::op && lex_.peek().text == "^") {
            lex_.take();
            return binary('^', base, parse_factor());  // right associative
        }
        return base;
    }

    NodePtr parse_atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::number: return num(t.value);
            case Token::Kind::lparen: {
                NodePtr inner = parse_expression();
                const Token close = lex_.take();
                if (close.kind != Token::Kind::rparen)
                    throw ParseError("expected ')'", close.line, close.col);
                return inner;
            }
            case Token::Kind::ident: return parse_ident(t);
            default: throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
        }
    }

    NodePtr parse_ident(const Token& t) {
        const std::string& id = t.text;
        if (id == "s" || id == "t") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::var;
            n->var = -1;
            return n;
        }
        if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' &&
            id[1] <= static_cast<char>('0' + kMaxDim)) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::var;
            n->var = id[1] - '1';
            return n;
        }
        static const char* unary_fns[] = {"log", "exp", "abs"};
        static const char* binary_fns[] = {"min", "max", "pow"};
        const bool is_unary = std::find_if(std::begin(unary_fns), std::end(unary_fns),
                                           [&](const char* f) { return id == f; }) !=
                              std::end(unary_fns);
        const bool is_binary = std::find_if(std::begin(binary_fns), std::end(binary_fns),
                                            [&](const char* f) { return id == f; }) !=
                               std::end(binary_fns);
        if (!is_unary && !is_binary)
            throw ParseError("unknown identifier '" + id + "'", t.line, t.col);
        Token open = lex_.take();
        if (open.kind != Token::Kind::lparen)
            throw ParseError("expected '(' after function '" + id + "'", open.line, open.col);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->func = id;
        n->a = parse_expression();
        if (is_binary) {
            Token comma = lex_.take();
            if (comma.kind != Token::Kind::comma)
                throw ParseError("expected ',' in call to '" + id + "'", comma.line, comma.col);
            n->b = parse_expression();
        }
        Token close = lex_.take();
        if (close.kind != Token::Kind::rparen)
            throw ParseError("expected ')' closing call to '" + id + "'", close.line, close.col);
        return n;
    }

    Lexer& lex_;
};

double eval_node(const Node& n, const Point& x, double s) {
    switch (n.kind) {
        case Node::Kind::number: return n.value;
        case Node::Kind::var: return n.var < 0 ? s : x[n.var];
        case Node::Kind::unary_neg: return -eval_node(*n.a, x, s);
        case Node::Kind::binary: {
            const double a = eval_node(*n.a, x, s);
            const double b = eval_node(*n.b, x, s);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/':
                    if (b == 0.0) throw EvalError("division by zero");
                    return a / b;
                case '^': {
                    const double r = std::pow(a, b);
                    if (std::isnan(r)) throw EvalError("pow out of domain");
                    return r;
                }
            }
            throw EvalError("bad operator");
        }
        case Node::Kind::call: {
            const double a = eval_node(*n.a, x, s);
            if (n.func == "log") {
                if (a <= 0.0) throw EvalError("log of non-positive argument");
                return std::log(a);
            }
            if (n.func == "exp") return std::exp(a);
            if (n.func == "abs") return std::abs(a);
            const double b = eval_node(*n.b, x, s);
            if (n.func == "min") return std::min(a, b);
            if (n.func == "max") return std::max(a, b);
            if (n.func == "pow") {
                const double r = std::pow(a, b);
                if (std::isnan(r)) throw EvalError("pow out of domain");
                return r;
            }
            throw EvalError("bad call");
        }
    }
    throw EvalError("bad node");
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::number: out += format_double(n.value); return;
        case Node::Kind::var:
            out += n.var < 0 ? "s" : "x" + std::to_string(n.var + 1);
            return;
        case Node::Kind::unary_neg:
            out += "(-";
            print_node(*n.a, out);
            out += ")";
            return;
        case Node::Kind::binary:
            out += "(";
            print_node(*n.a, out);
            out += n.op;
            print_node(*n.b, out);
            out += ")";
            return;
        case Node::Kind::call:
            out += n.func;
            out += "(";
            print_node(*n.a, out);
            if (n.b) {
                out += ",";
                print_node(*n.b, out);
            }
            out += ")";
            return;
    }
}

bool node_uses_s(const Node& n) {
    switch (n.kind) {
        case Node::Kind::number: return false;
        case Node::Kind::var: return n.var < 0;
        case Node::Kind::unary_neg: return node_uses_s(*n.a);
        case Node::Kind::binary: return node_uses_s(*n.a) || node_uses_s(*n.b);
        case Node::Kind::call: return node_uses_s(*n.a) || (n.b && node_uses_s(*n.b));
    }
    return false;
}

}  // namespace

Expression Expression::parse(const std::string& src) {
    Lexer lex(src);
    Parser parser(lex);
    Expression e;
    e.root_ = parser.parse_expression();
    parser.expect_end();
    return e;
}

double Expression::eval(const Point& x, double s) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, x, s);
}

std::string Expression::str() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Expression::uses_second_arg() const { return root_ && node_uses_s(*root_); }

}  // namespace orlicz
