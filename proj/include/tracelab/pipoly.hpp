#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tracelab::pipoly {

using BigInt = boost::multiprecision::cpp_int;

// Exact coefficient (num/den) * pi^pi_power.  Invariants: den > 0,
// gcd(num, den) = 1, pi_power >= 0.
struct PiRational {
  BigInt num{0};
  BigInt den{1};
  int pi_power{0};

  PiRational() = default;
  PiRational(BigInt n, BigInt d, int pp);

  bool is_zero() const { return num == 0; }
  // High-precision numeric value; pi carried to 50 significant digits.
  double to_double() const;
};

PiRational operator*(const PiRational& a, const PiRational& b);

// Monomial key: exponent vector plus pi power.  Ordered lexicographically
// by alpha, then by pi_power, which fixes the canonical term order.
struct MonoKey {
  std::vector<int> alpha;
  int pi_power{0};

  friend bool operator<(const MonoKey& a, const MonoKey& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.pi_power < b.pi_power;
  }
  friend bool operator==(const MonoKey& a, const MonoKey& b) {
    return a.alpha == b.alpha && a.pi_power == b.pi_power;
  }
};

// Polynomial in n_vars variables with exact rational*pi^m coefficients.
// Coefficients of equal (alpha, pi_power) are always merged; zero terms are
// dropped, so equality of the term maps is equality of polynomials.
class PiPolynomial {
 public:
  explicit PiPolynomial(int n_vars = 0) : n_vars_(n_vars) {
    if (n_vars < 0) throw std::invalid_argument("PiPolynomial: n_vars < 0");
  }

  static PiPolynomial constant(int n_vars, const PiRational& c);
  static PiPolynomial variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  int total_degree() const;  // max over terms of sum(alpha); -1 if zero poly
  bool is_zero() const { return terms_.empty(); }
  const std::map<MonoKey, std::pair<BigInt, BigInt>>& terms() const {
    return terms_;
  }

  // coeff is exact; adds into any existing term with the same key.
  void add_term(const std::vector<int>& alpha, int pi_power, BigInt num,
                BigInt den);

  // Substitutes x (all entries finite and >= 0); pi expanded internally to
  // 50 significant digits before rounding the coefficient to double.
  double eval(const std::vector<double>& x) const;

  // Renames variable i of this polynomial to index_map[i] inside a larger
  // variable set of size n_total.  Used to assemble products over disjoint
  // boundary-label blocks.
  PiPolynomial remap_vars(int n_total, const std::vector<int>& index_map) const;

  friend PiPolynomial operator+(const PiPolynomial& a, const PiPolynomial& b);
  friend PiPolynomial operator*(const PiPolynomial& a, const PiPolynomial& b);
  friend bool operator==(const PiPolynomial& a, const PiPolynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  int n_vars_;
  // value part of a term is the reduced fraction (num, den), den > 0.
  std::map<MonoKey, std::pair<BigInt, BigInt>> terms_;
  mutable std::vector<std::pair<std::vector<int>, double>> eval_cache_;
  mutable bool cache_valid_{false};

  void normalize_term(const MonoKey& key);
  void build_cache() const;
};

enum class CombineOp { add, mul };
PiPolynomial combine(const PiPolynomial& p, const PiPolynomial& q,
                     CombineOp op);

// Marker for V_{0,2}(x, y) = (1/x) delta(x - y); never stored as a
// polynomial.
struct CylinderSentinel {};

struct TableKey {
  int g{0};
  int n{0};
  friend auto operator<=>(const TableKey&, const TableKey&) = default;
};

class VolumeTable {
 public:
  bool contains(int g, int n) const;
  const PiPolynomial& at(int g, int n) const;
  const std::string& source(int g, int n) const;
  void insert(int g, int n, PiPolynomial poly, std::string source);
  std::vector<TableKey> keys() const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  std::map<TableKey, PiPolynomial> entries_;
  std::map<TableKey, std::string> sources_;
  std::vector<std::string> warnings_;
};

// Parses and validates a volume table from its JSON text.  Hard errors:
// malformed JSON, n < 1, unstable (g, n), a stored (0, 2) entry, odd or
// negative exponents, alpha length != n, nonpositive denominator, total
// degree above 2(3g-3+n), duplicate (g, n) or duplicate term keys.
// The pi-grading rule pi_power = 2(3g-3+n) - deg(alpha) is checked as a
// warning only (recorded on the table, never fatal).
VolumeTable load_table_from_text(const std::string& json_text);
VolumeTable load_table(const std::string& path);

// Canonical serialization: entries sorted by (g, n), terms sorted by
// (alpha lex, pi_power); integers only, so output is byte-stable.
std::string serialize_table(const VolumeTable& table);

struct Lookup {
  enum class Kind { poly, cylinder, absent };
  Kind kind{Kind::absent};
  const PiPolynomial* poly{nullptr};
};

// (0,2) resolves to the cylinder sentinel; unstable signatures are errors;
// stable-but-missing entries report absent.
Lookup lookup(const VolumeTable& table, int g, int n);

}  // namespace tracelab::pipoly
