#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tracelab::exprparse {

// Tiny expression language for function specs on the command line:
// numbers, variables (x or x1..x9), exp/sinh/cosh, integer powers with ^,
// sums, differences, products, unary minus, parentheses.
struct ParsedExpr {
  std::function<double(const std::vector<double>&)> fn;
  int arity{0};  // highest variable index used (x counts as x1)

  double operator()(const std::vector<double>& vars) const { return fn(vars); }
  double operator()(double x) const { return fn({x}); }
};

ParsedExpr parse(const std::string& text);

}  // namespace tracelab::exprparse
