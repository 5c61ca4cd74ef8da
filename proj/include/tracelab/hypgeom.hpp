#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace tracelab::hypgeom {

// Row-major 2x2 real matrix.
struct Mat2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  double& operator()(int r, int c) { return m[2 * r + c]; }
  double operator()(int r, int c) const { return m[2 * r + c]; }
  double trace() const { return m[0] + m[3]; }
  double det() const { return m[0] * m[3] - m[1] * m[2]; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);

enum class MoveKind { geodesic_flow, perpendicular_flow, rotation };

// Unit-determinant one-parameter moves:
//   geodesic_flow t      -> diag(e^{t/2}, e^{-t/2})
//   perpendicular_flow t -> [[cosh(t/2), sinh(t/2)], [sinh(t/2), cosh(t/2)]]
//   rotation t           -> [[cos(t/2), sin(t/2)], [-sin(t/2), cos(t/2)]]
Mat2 move_matrix(MoveKind kind, double t);

// arccosh stable near 1: relative accuracy does not collapse as c -> 1+.
double arccosh_stable(double c);

// cosh and sinh of t/2; shared so every half-argument site agrees.
double cosh_half(double t);
double sinh_half(double t);

// Half translation length from |Tr|: ell = 2 arccosh(|Tr|/2).
// Rejects elliptic/parabolic input (|Tr| < 2 - 1e-12).
double trace_to_cosh_half_length(const Mat2& m);

// Right-angled hexagon side relation:
//   cosh L1 = (cosh(x1/2) cosh(x2/2) + cosh(x3/2)) / (sinh(x1/2) sinh(x2/2))
// All x_i > 0.
double hexagon_ortho_length(double x1, double x2, double x3);

// Loop with one self-crossing around boundaries x1, x2 of a pair of pants:
//   cosh(ell/2) = 2 cosh(x1/2) cosh(x2/2) + cosh(x3/2)
double eight_length(double x1, double x2, double x3);

// Domain bound for inverting the above in x3.
inline double domain_bound(double ell) { return 0.5 * (cosh_half(ell) - 1.0); }

// Solves eight_length(x1, x2, x3) = ell for x3 >= 0; requires
// cosh(x1/2) cosh(x2/2) <= domain_bound(ell) and reports the margin when
// violated.
double x3_of(double ell, double x1, double x2);

// Matrix carried as 2^exponent * mant with a bounded mantissa; used when
// plain products of moves would overflow double.
struct ScaledMat2 {
  Mat2 mant;
  double log_scale{0.0};  // natural log of the removed factor

  void renormalize();
  double log_abs_trace() const;  // log |Tr|, sign separately
  int trace_sign() const;
};

ScaledMat2 scaled_mul(const ScaledMat2& a, const Mat2& b);

}  // namespace tracelab::hypgeom
