#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "orlicz/point.hpp"

namespace orlicz {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_),
          col(col_) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic expressions over x1..x4 and the scalar slot s (alias t):
// numbers, + - * / ^, unary -, and calls log, exp, abs, min, max, pow.
// Division and log are domain-guarded; out-of-domain evaluation throws.
class Expression {
public:
    struct Node;

    Expression() = default;

    static Expression parse(const std::string& src);

    double eval(const Point& x, double s = 0.0) const;
    std::string str() const;  // canonical parenthesized form; parse(str()) round-trips

    bool empty() const { return !root_; }
    bool uses_second_arg() const;

private:
    std::shared_ptr<const Node> root_;
};

}  // namespace orlicz
