#pragma once

/**
 * @file expr.hpp
 * @brief Tiny arithmetic expression evaluator for custom scenario fields.
 *
 * Grammar: + - * / ^ (right-assoc), parentheses, unary minus, the variables
 * t, x, y, z (z is the Crocco variable), constants pi and e, and the usual
 * single/double-argument functions.  Parsed once into an AST; evaluation is
 * reentrant and thread-safe.
 */

#include <memory>
#include <string>

#include "crocco/errors.hpp"

namespace crocco {

class Expr {
public:
    /// Throws ConfigError with position information on a syntax error.
    static Expr parse(const std::string& source);

    double eval(double t, double x, double y, double z) const;
    const std::string& source() const { return src_; }

    Expr() = default;
    explicit operator bool() const { return static_cast<bool>(root_); }

    struct Node;  // exposed for the parser implementation

private:
    std::shared_ptr<const Node> root_;
    std::string src_;
};

}  // namespace crocco
