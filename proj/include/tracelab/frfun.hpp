#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace tracelab::frfun {

// Uniform sampling grid on [0, ell_max] with step h.
struct Grid {
  double h{1e-3};
  double ell_max{40.0};

  std::size_t points() const;
  double at(std::size_t i) const { return static_cast<double>(i) * h; }
  friend bool operator==(const Grid&, const Grid&) = default;
};

// f(ell) = p(ell) e^ell + r(ell): exact polynomial principal part plus a
// gridded remainder.  K bounds deg p strictly; N is the declared envelope
// power (ell+1)^{N-1} e^{ell/2} for the remainder.
struct FRFunction {
  Grid grid{};
  int K{1};
  int N{1};
  std::vector<double> principal;  // coefficients, constant first; empty = 0
  std::vector<double> remainder;  // samples on the grid; empty = 0

  double principal_at(double ell) const;
  double remainder_at(double ell) const;  // linear interpolation
  double eval(double ell) const;
  bool remainder_is_zero() const;

  static FRFunction zero(Grid g, int K, int N);
  static FRFunction from_principal(std::vector<double> coeffs, Grid g, int N);
  static FRFunction from_samples(const std::function<double(double)>& f, Grid g, int K, int N);
};

void check_valid(const FRFunction& f);

FRFunction add(const FRFunction& a, const FRFunction& b);
FRFunction scale(const FRFunction& f, double c);

// P f = integral of f from 0; principal handled in closed form (the constant
// of integration lands in the remainder), remainder integrated on the grid
// with a fourth-order cumulative rule.  L = Id - P lowers the principal
// degree by one.
FRFunction apply_P(const FRFunction& f);
FRFunction apply_L(const FRFunction& f);

// max principal coefficient plus the sup of |remainder| / ((ell+1)^{N-1}
// e^{ell/2}) over the grid; the weak variant takes the running integral of
// the remainder before the sup.
double fr_norm(const FRFunction& f);
double fr_norm(const FRFunction& f, int K, int N);
double weak_fr_norm(const FRFunction& f);
double weak_fr_norm(const FRFunction& f, int K, int N);

// Convolution f1 * f2 (ell) = int_0^ell f1(s) f2(ell-s) ds: principal x
// principal in closed form, the cross and remainder terms by discrete
// trapezoid on the shared grid.
FRFunction convolve(const FRFunction& f1, const FRFunction& f2);

// Membership probe: applies L K times, then regresses the log of the
// per-unit-interval envelope of |L^K f| e^{-ell/2} over [5, ell_max].
// Slopes at most +0.01 count as sub-e^{ell/2} growth.
struct CharFRReport {
  int K{0};
  int N{0};
  double slope{0.0};       // log-envelope regression over the whole fit window
  double tail_slope{0.0};  // same fit restricted to the later half of the window
  double sup_norm{0.0};    // envelope sup with the (ell+1)^{N-1} weight
  bool member{false};
};
CharFRReport check_charFR(const FRFunction& f, int K, int N);
std::string to_json_text(const CharFRReport& rep);

// Level-set integrals sum_{h(x)=ell} phi(x) prod f_i(x_i).  Arity 2 only:
// x1 is solved from (ell, x2) by bracketing and bisection and the slice is
// integrated over x2 with composite Simpson.
struct PseudoConvSpec {
  int n{2};
  std::function<double(const std::vector<double>&)> h;
  std::function<double(const std::vector<double>&)> phi;
  double a{1e-3};
};

std::vector<double> pseudo_convolve(const std::vector<FRFunction>& fs,
                                    const PseudoConvSpec& spec,
                                    const std::vector<double>& ells);
// Same values assembled on fs' grid as a remainder-only function declared
// (K, N).
FRFunction pseudo_convolve_fr(const std::vector<FRFunction>& fs, const PseudoConvSpec& spec,
                              int K, int N);

// Empirical sup of sum x_j - h(x) over boundary-anchored and random samples
// in [a, a+30]^n, clamped at 0.
double comparison_l0(const PseudoConvSpec& spec, int samples);

// For each multi-index alpha in {0,1}^n \ {0}: empirical sup over the box
// [a, a+30]^n of e^{alpha . x} |d^alpha phi| by central differences.
struct ClassEReport {
  struct Entry {
    std::vector<int> alpha;
    double sup{0.0};
  };
  std::vector<Entry> entries;
  double bound{0.0};
  bool pass{false};
};
ClassEReport class_E_check(const std::function<double(const std::vector<double>&)>& phi, int n,
                           double a, double bound);
std::string to_json_text(const ClassEReport& rep);

}  // namespace tracelab::frfun
