#ifndef MOMSPACE_EXPR_HPP
#define MOMSPACE_EXPR_HPP

#include <functional>
#include <string>

#include "momspace/common.hpp"

namespace momspace {

// Tiny arithmetic expression grammar for potential functions of one variable:
//   literals, y, + - * /, ^ (right associative), unary minus, log(...),
//   exp(...), parentheses.
std::function<Real(Real)> parse_expression(const std::string& text);

}  // namespace momspace

#endif
