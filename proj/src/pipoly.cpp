#include "tracelab/pipoly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "json.hpp"

namespace tracelab::pipoly {

using Float50 = boost::multiprecision::cpp_bin_float_50;

namespace {

const Float50& pi50() {
  static const Float50 value(
      "3.1415926535897932384626433832795028841971693993751058209749445923078164"
      "0628620899862803482534211706798214808651");
  return value;
}

Float50 pi_pow(int m) {
  Float50 out(1);
  for (int i = 0; i < m; ++i) out *= pi50();
  return out;
}

void reduce(BigInt& num, BigInt& den) {
  if (den == 0) throw std::invalid_argument("PiRational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) {
    den = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
  num /= g;
  den /= g;
}

}  // namespace

PiRational::PiRational(BigInt n, BigInt d, int pp)
    : num(std::move(n)), den(std::move(d)), pi_power(pp) {
  if (pp < 0) throw std::invalid_argument("PiRational: negative pi power");
  reduce(num, den);
  if (num == 0) pi_power = 0;
}

double PiRational::to_double() const {
  Float50 v = Float50(num) / Float50(den) * pi_pow(pi_power);
  return static_cast<double>(v);
}

PiRational operator*(const PiRational& a, const PiRational& b) {
  return PiRational(a.num * b.num, a.den * b.den, a.pi_power + b.pi_power);
}

PiPolynomial PiPolynomial::constant(int n_vars, const PiRational& c) {
  PiPolynomial p(n_vars);
  if (!c.is_zero())
    p.add_term(std::vector<int>(n_vars, 0), c.pi_power, c.num, c.den);
  return p;
}

PiPolynomial PiPolynomial::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars)
    throw std::invalid_argument("PiPolynomial::variable: index out of range");
  PiPolynomial p(n_vars);
  std::vector<int> alpha(n_vars, 0);
  alpha[index] = 1;
  p.add_term(alpha, 0, 1, 1);
  return p;
}

int PiPolynomial::total_degree() const {
  int deg = -1;
  for (const auto& [key, val] : terms_) {
    int d = 0;
    for (int e : key.alpha) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

void PiPolynomial::add_term(const std::vector<int>& alpha, int pi_power,
                            BigInt num, BigInt den) {
  if (static_cast<int>(alpha.size()) != n_vars_)
    throw std::invalid_argument("PiPolynomial::add_term: alpha length");
  for (int e : alpha)
    if (e < 0)
      throw std::invalid_argument("PiPolynomial::add_term: negative exponent");
  if (pi_power < 0)
    throw std::invalid_argument("PiPolynomial::add_term: negative pi power");
  reduce(num, den);
  if (num == 0) return;
  cache_valid_ = false;
  MonoKey key{alpha, pi_power};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), std::make_pair(std::move(num), std::move(den)));
    return;
  }
  auto& [cnum, cden] = it->second;
  BigInt nnum = cnum * den + num * cden;
  BigInt nden = cden * den;
  reduce(nnum, nden);
  if (nnum == 0) {
    terms_.erase(it);
  } else {
    cnum = std::move(nnum);
    cden = std::move(nden);
  }
}

void PiPolynomial::build_cache() const {
  eval_cache_.clear();
  eval_cache_.reserve(terms_.size());
  for (const auto& [key, val] : terms_) {
    Float50 c = Float50(val.first) / Float50(val.second) * pi_pow(key.pi_power);
    eval_cache_.emplace_back(key.alpha, static_cast<double>(c));
  }
  cache_valid_ = true;
}

double PiPolynomial::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_vars_)
    throw std::invalid_argument("PiPolynomial::eval: argument count");
  for (double v : x) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::domain_error("PiPolynomial::eval: arguments must be finite and >= 0");
  }
  if (!cache_valid_) build_cache();
  double sum = 0.0;
  for (const auto& [alpha, coeff] : eval_cache_) {
    double mono = coeff;
    for (int i = 0; i < n_vars_; ++i) {
      for (int e = 0; e < alpha[i]; ++e) mono *= x[i];
    }
    sum += mono;
  }
  return sum;
}

PiPolynomial PiPolynomial::remap_vars(int n_total,
                                      const std::vector<int>& index_map) const {
  if (static_cast<int>(index_map.size()) != n_vars_)
    throw std::invalid_argument("remap_vars: index map length");
  PiPolynomial out(n_total);
  for (const auto& [key, val] : terms_) {
    std::vector<int> alpha(n_total, 0);
    for (int i = 0; i < n_vars_; ++i) {
      int j = index_map[i];
      if (j < 0 || j >= n_total)
        throw std::invalid_argument("remap_vars: target index out of range");
      if (key.alpha[i] != 0 && alpha[j] != 0)
        throw std::invalid_argument("remap_vars: index map not injective");
      alpha[j] += key.alpha[i];
    }
    out.add_term(alpha, key.pi_power, val.first, val.second);
  }
  return out;
}

PiPolynomial operator+(const PiPolynomial& a, const PiPolynomial& b) {
  if (a.n_vars_ != b.n_vars_)
    throw std::invalid_argument("PiPolynomial add: variable count mismatch");
  PiPolynomial out = a;
  out.cache_valid_ = false;
  for (const auto& [key, val] : b.terms_)
    out.add_term(key.alpha, key.pi_power, val.first, val.second);
  return out;
}

PiPolynomial operator*(const PiPolynomial& a, const PiPolynomial& b) {
  if (a.n_vars_ != b.n_vars_)
    throw std::invalid_argument("PiPolynomial mul: variable count mismatch");
  PiPolynomial out(a.n_vars_);
  for (const auto& [ka, va] : a.terms_) {
    for (const auto& [kb, vb] : b.terms_) {
      std::vector<int> alpha(a.n_vars_);
      for (int i = 0; i < a.n_vars_; ++i) alpha[i] = ka.alpha[i] + kb.alpha[i];
      out.add_term(alpha, ka.pi_power + kb.pi_power, va.first * vb.first,
                   va.second * vb.second);
    }
  }
  return out;
}

PiPolynomial combine(const PiPolynomial& p, const PiPolynomial& q,
                     CombineOp op) {
  return op == CombineOp::add ? p + q : p * q;
}

bool VolumeTable::contains(int g, int n) const {
  return entries_.count(TableKey{g, n}) > 0;
}

const PiPolynomial& VolumeTable::at(int g, int n) const {
  auto it = entries_.find(TableKey{g, n});
  if (it == entries_.end())
    throw std::out_of_range("VolumeTable: no entry for (" + std::to_string(g) +
                            ", " + std::to_string(n) + ")");
  return it->second;
}

const std::string& VolumeTable::source(int g, int n) const {
  auto it = sources_.find(TableKey{g, n});
  if (it == sources_.end())
    throw std::out_of_range("VolumeTable: no source for entry");
  return it->second;
}

void VolumeTable::insert(int g, int n, PiPolynomial poly, std::string source) {
  TableKey key{g, n};
  if (entries_.count(key))
    throw std::invalid_argument("VolumeTable: duplicate entry (" +
                                std::to_string(g) + ", " + std::to_string(n) +
                                ")");
  entries_.emplace(key, std::move(poly));
  sources_.emplace(key, std::move(source));
}

std::vector<TableKey> VolumeTable::keys() const {
  std::vector<TableKey> out;
  out.reserve(entries_.size());
  for (const auto& [key, val] : entries_) out.push_back(key);
  return out;
}

namespace {

int64_t get_int(const nlohmann::json& j, const char* field,
                const std::string& where) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw std::invalid_argument("volume table: missing integer field '" +
                                std::string(field) + "' in " + where);
  return j[field].get<int64_t>();
}

}  // namespace

VolumeTable load_table_from_text(const std::string& json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("volume table: bad JSON: ") +
                                e.what());
  }
  if (!root.is_array())
    throw std::invalid_argument("volume table: top level must be a list");

  VolumeTable table;
  for (const auto& entry : root) {
    int g = static_cast<int>(get_int(entry, "g", "entry"));
    int n = static_cast<int>(get_int(entry, "n", "entry"));
    std::string where = "entry (" + std::to_string(g) + ", " +
                        std::to_string(n) + ")";
    if (g < 0 || n < 1)
      throw std::invalid_argument("volume table: " + where +
                                  " needs g >= 0, n >= 1");
    if (g == 0 && n == 2)
      throw std::invalid_argument(
          "volume table: (0, 2) is the cylinder sentinel and is never stored");
    if (2 * g - 2 + n <= 0)
      throw std::invalid_argument("volume table: unstable signature in " +
                                  where);
    if (!entry.contains("terms") || !entry["terms"].is_array())
      throw std::invalid_argument("volume table: missing terms list in " +
                                  where);
    std::string source =
        entry.contains("source") ? entry["source"].get<std::string>() : "";

    const int dim2 = 2 * (3 * g - 3 + n);
    PiPolynomial poly(n);
    std::map<MonoKey, bool> seen;
    for (const auto& term : entry["terms"]) {
      if (!term.contains("alpha") || !term["alpha"].is_array() ||
          static_cast<int>(term["alpha"].size()) != n)
        throw std::invalid_argument("volume table: alpha must list " +
                                    std::to_string(n) + " exponents in " +
                                    where);
      std::vector<int> alpha;
      int deg = 0;
      for (const auto& e : term["alpha"]) {
        if (!e.is_number_integer())
          throw std::invalid_argument("volume table: non-integer exponent in " +
                                      where);
        int v = e.get<int>();
        if (v < 0 || v % 2 != 0)
          throw std::invalid_argument(
              "volume table: exponents must be even and >= 0 in " + where);
        alpha.push_back(v);
        deg += v;
      }
      if (deg > dim2)
        throw std::invalid_argument(
            "volume table: total degree " + std::to_string(deg) +
            " exceeds 2(3g-3+n) = " + std::to_string(dim2) + " in " + where);
      int pi_power = static_cast<int>(get_int(term, "pi_power", where));
      if (pi_power < 0)
        throw std::invalid_argument("volume table: negative pi_power in " +
                                    where);
      int64_t num = get_int(term, "num", where);
      int64_t den = get_int(term, "den", where);
      if (den <= 0)
        throw std::invalid_argument(
            "volume table: denominator must be positive in " + where);
      MonoKey key{alpha, pi_power};
      if (seen.count(key))
        throw std::invalid_argument("volume table: duplicate term key in " +
                                    where);
      seen.emplace(key, true);
      if (pi_power != dim2 - deg)
        table.add_warning(where + ": term with |alpha| = " +
                          std::to_string(deg) + " has pi_power " +
                          std::to_string(pi_power) + ", expected " +
                          std::to_string(dim2 - deg) + " by the grading rule");
      poly.add_term(alpha, pi_power, num, den);
    }
    table.insert(g, n, std::move(poly), std::move(source));
  }
  return table;
}

VolumeTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("volume table: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_table_from_text(buf.str());
}

std::string serialize_table(const VolumeTable& table) {
  nlohmann::json root = nlohmann::json::array();
  for (const TableKey& key : table.keys()) {
    nlohmann::json entry;
    entry["g"] = key.g;
    entry["n"] = key.n;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [mk, val] : table.at(key.g, key.n).terms()) {
      nlohmann::json t;
      t["alpha"] = mk.alpha;
      t["pi_power"] = mk.pi_power;
      // canonical form keeps file-range integers; anything larger is not a
      // serializable ingestion table
      if (val.first < std::numeric_limits<int64_t>::min() ||
          val.first > std::numeric_limits<int64_t>::max() ||
          val.second > std::numeric_limits<int64_t>::max())
        throw std::invalid_argument(
            "serialize_table: coefficient exceeds 64-bit file range");
      t["num"] = static_cast<int64_t>(val.first);
      t["den"] = static_cast<int64_t>(val.second);
      terms.push_back(std::move(t));
    }
    entry["terms"] = std::move(terms);
    entry["source"] = table.source(key.g, key.n);
    root.push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

Lookup lookup(const VolumeTable& table, int g, int n) {
  if (g < 0 || n < 1)
    throw std::invalid_argument("lookup: need g >= 0, n >= 1");
  if (g == 0 && n == 2) return Lookup{Lookup::Kind::cylinder, nullptr};
  if (2 * g - 2 + n <= 0)
    throw std::invalid_argument("lookup: unstable signature (" +
                                std::to_string(g) + ", " + std::to_string(n) +
                                ")");
  if (!table.contains(g, n)) return Lookup{Lookup::Kind::absent, nullptr};
  return Lookup{Lookup::Kind::poly, &table.at(g, n)};
}

}  // namespace tracelab::pipoly
