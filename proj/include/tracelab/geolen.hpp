#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracelab/diagram.hpp"

namespace tracelab::geolen {

// Coordinates on a diagram: one orthogeodesic bar length per bar and one
// algebraic simple-portion length per oriented label, the latter stored in
// canonical label order (1+),(1-),(2+),(2-),...  L must be positive; theta
// entries may be negative.
struct CoordPoint {
  std::vector<double> L;
  std::vector<double> theta;

  double theta_at(diagram::ThetaLabel q) const;
  double& theta_at(diagram::ThetaLabel q);
};

// Uniform sample with L in (0, 5] and theta in [-5, 5]; deterministic in the
// seed.
CoordPoint random_point(int r, std::uint64_t seed);

// y_lambda = sum of theta over the labels terminating on lambda.
std::map<std::string, double> y_lengths(const diagram::Diagram& d, const CoordPoint& p);

// Value carried as log|value| plus a sign so the huge-length regime stays
// finite; sign 0 encodes exact zero (log_abs = -inf).
struct SignedLog {
  double log_abs;
  int sign;
};

// cosh(ell/2) as the sum over sign patterns delta (product +1) along the
// traversal cycle through q0: each term multiplies cosh/sinh(theta_k/2) by
// cosh of half the alternating-signed bar-length sum.  2^(m-1) terms for a
// cycle of length m; refuses r > 8.  Values beyond the double range come
// back as inf; use expansion_signed_log there.
double cosh_half_expansion(const diagram::Diagram& d, const CoordPoint& p,
                           diagram::ThetaLabel q0 = {1, +1});
SignedLog expansion_signed_log(const diagram::Diagram& d, const CoordPoint& p,
                               diagram::ThetaLabel q0 = {1, +1});
long long expansion_term_count(const diagram::Diagram& d, diagram::ThetaLabel q0 = {1, +1});

// Independent oracle: half the trace of the ordered product of geodesic-flow
// and perpendicular moves along the same traversal, evaluated with factored
// exponents so no intermediate overflows.
double cosh_half_trace(const diagram::Diagram& d, const CoordPoint& p,
                       diagram::ThetaLabel q0 = {1, +1});
SignedLog trace_signed_log(const diagram::Diagram& d, const CoordPoint& p,
                           diagram::ThetaLabel q0 = {1, +1});

// Geodesic length of the cycle through q0; throws if the element is not
// hyperbolic (trace below 2).
double geodesic_length(const diagram::Diagram& d, const CoordPoint& p,
                       diagram::ThetaLabel q0 = {1, +1});

// Both sides of the density identity, returned as factors so callers can
// form the ratio: rhs over the diagram coordinates, lhs over the boundary
// lengths of the filled surface.
struct DensityValue {
  double rhs_density;  // 2^{#components} * prod sinh^2(y/2) * prod sinh(L_j)
  double lhs_factor;   // 2^{n_S} * prod sinh(x_j / 2)
};
DensityValue wp_density(const diagram::Diagram& d, const CoordPoint& p,
                        const std::vector<double>& x);

// Central finite difference of x3 -> L1 through the right-angled hexagon
// relation against the analytic ratio sinh(x3/2) / (2 sinh(L1) sinh(x1/2)
// sinh(x2/2)).
struct JacobianReport {
  double fd;
  double analytic;
  double rel_err;
};
JacobianReport jacobian_fd_check_r1(double x1, double x2, double x3, double step = 1e-4);

// Expansion-vs-trace sweep over random coordinate points, one comparison per
// traversal cycle.
struct OracleReport {
  std::string diagram_id;
  int samples{0};
  double max_rel_err{0.0};
  std::uint64_t seed{0};
};
OracleReport oracle_suite(const diagram::Diagram& d, const std::string& diagram_id,
                          int samples, std::uint64_t seed);
std::string to_json_text(const OracleReport& rep);

}  // namespace tracelab::geolen
