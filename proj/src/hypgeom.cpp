#include "tracelab/hypgeom.hpp"

#include <cmath>
#include <limits>

namespace tracelab::hypgeom {

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 out;
  out.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
  out.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
  out.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
  out.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
  return out;
}

Mat2 move_matrix(MoveKind kind, double t) {
  if (!std::isfinite(t))
    throw std::invalid_argument("move_matrix: parameter must be finite");
  Mat2 out;
  switch (kind) {
    case MoveKind::geodesic_flow: {
      double e = std::exp(0.5 * t);
      out.m = {e, 0.0, 0.0, 1.0 / e};
      break;
    }
    case MoveKind::perpendicular_flow: {
      double c = std::cosh(0.5 * t), s = std::sinh(0.5 * t);
      out.m = {c, s, s, c};
      break;
    }
    case MoveKind::rotation: {
      double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
      out.m = {c, s, -s, c};
      break;
    }
  }
  return out;
}

double arccosh_stable(double c) {
  if (!(c >= 1.0))
    throw std::domain_error("arccosh_stable: argument " + std::to_string(c) +
                            " < 1");
  double u = c - 1.0;
  // log1p form keeps relative accuracy for c near 1, where
  // log(c + sqrt(c^2 - 1)) cancels.
  return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

double cosh_half(double t) { return std::cosh(0.5 * t); }
double sinh_half(double t) { return std::sinh(0.5 * t); }

double trace_to_cosh_half_length(const Mat2& m) {
  double half = 0.5 * std::abs(m.trace());
  if (half < 1.0 - 5e-13)
    throw std::domain_error(
        "trace_to_cosh_half_length: |Tr|/2 = " + std::to_string(half) +
        " < 1; element is not hyperbolic");
  return 2.0 * arccosh_stable(std::max(half, 1.0));
}

double hexagon_ortho_length(double x1, double x2, double x3) {
  if (!(x1 > 0.0) || !(x2 > 0.0) || !(x3 > 0.0))
    throw std::domain_error("hexagon_ortho_length: all sides must be > 0");
  double c = (cosh_half(x1) * cosh_half(x2) + cosh_half(x3)) /
             (sinh_half(x1) * sinh_half(x2));
  return arccosh_stable(c);
}

double eight_length(double x1, double x2, double x3) {
  if (!(x1 >= 0.0) || !(x2 >= 0.0) || !(x3 >= 0.0))
    throw std::domain_error("eight_length: boundary lengths must be >= 0");
  double c = 2.0 * cosh_half(x1) * cosh_half(x2) + cosh_half(x3);
  return 2.0 * arccosh_stable(c);
}

double x3_of(double ell, double x1, double x2) {
  double bound = domain_bound(ell);
  double prod = cosh_half(x1) * cosh_half(x2);
  if (prod > bound)
    throw std::domain_error(
        "x3_of: cosh(x1/2) cosh(x2/2) = " + std::to_string(prod) +
        " exceeds (cosh(ell/2) - 1)/2 = " + std::to_string(bound) +
        " by margin " + std::to_string(prod - bound));
  double c = cosh_half(ell) - 2.0 * prod;  // = cosh(x3/2) >= 1 on the domain
  return 2.0 * arccosh_stable(c);
}

void ScaledMat2::renormalize() {
  double mx = 0.0;
  for (double v : mant.m) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return;
  for (double& v : mant.m) v /= mx;
  log_scale += std::log(mx);
}

double ScaledMat2::log_abs_trace() const {
  double t = mant.trace();
  if (t == 0.0) return -std::numeric_limits<double>::infinity();
  return log_scale + std::log(std::abs(t));
}

int ScaledMat2::trace_sign() const {
  double t = mant.trace();
  return (t > 0.0) - (t < 0.0);
}

ScaledMat2 scaled_mul(const ScaledMat2& a, const Mat2& b) {
  ScaledMat2 out{a.mant * b, a.log_scale};
  out.renormalize();
  return out;
}

}  // namespace tracelab::hypgeom
