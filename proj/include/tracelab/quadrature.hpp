#pragma once

#include <functional>

namespace tracelab::quadrature {

// Step-halving composite Simpson.  With fixed_levels == 0 the rule doubles
// its panel count until the Richardson estimate |S2 - S1|/15 drops under
// tol * max(1, |S2|) or max_levels is hit; fixed_levels > 0 performs exactly
// that many doublings with no tolerance exit, which makes "halve the step"
// comparisons reproducible.
struct QuadSpec {
  double tol{1e-8};
  int max_levels{22};
  int init_panels{8};  // panel count of the coarsest rule, forced even
  int fixed_levels{0};
};

struct QuadResult {
  double value{0.0};
  double err_estimate{0.0};
  long long evals{0};
  int levels{0};
  bool converged{true};
};

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, const QuadSpec& spec = {});

}  // namespace tracelab::quadrature
