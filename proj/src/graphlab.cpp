#include "tracelab/graphlab.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace tracelab::graphlab {

namespace {

// Entries of the walk recursions are bounded by a few times d^l; trace sums add
// a factor n.  Stay on int64 only when that envelope clears 2^62 comfortably.
bool fits_int64(int n, int d, int ell) {
  double envelope = 4.0 * n * std::pow(static_cast<double>(d), static_cast<double>(ell));
  return envelope < 4.6e18;
}

// diag contributions of A^k e_v for k = 1..ell, one base vertex at a time
template <typename Int>
std::vector<Int> walk_traces(const RegularGraph& g, int ell) {
  auto nbr = neighbor_lists(g);
  std::vector<Int> trace(static_cast<std::size_t>(ell) + 1, Int(0));
  std::vector<Int> cur(static_cast<std::size_t>(g.n)), next(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    std::fill(cur.begin(), cur.end(), Int(0));
    cur[static_cast<std::size_t>(v)] = 1;
    for (int k = 1; k <= ell; ++k) {
      std::fill(next.begin(), next.end(), Int(0));
      for (int u = 0; u < g.n; ++u) {
        const Int& c = cur[static_cast<std::size_t>(u)];
        if (c == 0) continue;
        for (int w : nbr[static_cast<std::size_t>(u)]) next[static_cast<std::size_t>(w)] += c;
      }
      cur.swap(next);
      trace[static_cast<std::size_t>(k)] += cur[static_cast<std::size_t>(v)];
    }
  }
  return trace;
}

// diag of Q_l e_v with Q_0 = 2I, Q_1 = A, Q_l = A Q_{l-1} - (d-1) Q_{l-2};
// Tr(B^l) = Tr(Q_l) + (|E| - n)(1 + (-1)^l) counts cyclic non-backtracking loops
template <typename Int>
std::vector<Int> nb_traces(const RegularGraph& g, int ell_max) {
  auto nbr = neighbor_lists(g);
  const Int ring = Int(g.d - 1);
  std::vector<Int> trace(static_cast<std::size_t>(ell_max) + 1, Int(0));
  std::vector<Int> prev(static_cast<std::size_t>(g.n)), cur(static_cast<std::size_t>(g.n)),
      next(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    std::fill(prev.begin(), prev.end(), Int(0));
    prev[static_cast<std::size_t>(v)] = 2;
    std::fill(cur.begin(), cur.end(), Int(0));
    for (int w : nbr[static_cast<std::size_t>(v)]) cur[static_cast<std::size_t>(w)] = 1;
    if (ell_max >= 1) trace[1] += cur[static_cast<std::size_t>(v)];
    for (int k = 2; k <= ell_max; ++k) {
      std::fill(next.begin(), next.end(), Int(0));
      for (int u = 0; u < g.n; ++u) {
        const Int& c = cur[static_cast<std::size_t>(u)];
        if (c == 0) continue;
        for (int w : nbr[static_cast<std::size_t>(u)]) next[static_cast<std::size_t>(w)] += c;
      }
      for (int u = 0; u < g.n; ++u)
        next[static_cast<std::size_t>(u)] -= ring * prev[static_cast<std::size_t>(u)];
      prev.swap(cur);
      cur.swap(next);
      trace[static_cast<std::size_t>(k)] += cur[static_cast<std::size_t>(v)];
    }
  }
  return trace;
}

BigInt tail_correction(const RegularGraph& g, int ell) {
  BigInt edges = BigInt(g.n) * g.d / 2;
  return (edges - g.n) * (1 + (ell % 2 == 0 ? 1 : -1));
}

void check_oracle_size(const RegularGraph& g, int ell) {
  if (g.n > 12 || ell > 8)
    throw std::invalid_argument("enumeration oracle limited to n <= 12, l <= 8 (cost n d^l)");
}

double big_to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace

void ensure_valid(const RegularGraph& g) {
  if (g.n <= 0 || g.d <= 0) throw std::invalid_argument("graph needs positive n and d");
  if (g.adjacency.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("adjacency row count does not match n");
  for (int i = 0; i < g.n; ++i) {
    const auto& row = g.adjacency[static_cast<std::size_t>(i)];
    if (row.size() != static_cast<std::size_t>(g.n))
      throw std::invalid_argument("adjacency is not square");
    int sum = 0;
    for (int j = 0; j < g.n; ++j) {
      int a = row[static_cast<std::size_t>(j)];
      if (a != 0 && a != 1) throw std::invalid_argument("adjacency entries must be 0/1");
      if (a != g.adjacency[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
        throw std::invalid_argument("adjacency is not symmetric");
      sum += a;
    }
    if (row[static_cast<std::size_t>(i)] != 0) throw std::invalid_argument("self-loop at vertex " + std::to_string(i));
    if (sum != g.d)
      throw std::invalid_argument("vertex " + std::to_string(i) + " has degree " +
                                  std::to_string(sum) + ", expected " + std::to_string(g.d));
  }
}

RegularGraph from_adjacency(std::vector<std::vector<int>> adjacency) {
  RegularGraph g;
  g.n = static_cast<int>(adjacency.size());
  g.adjacency = std::move(adjacency);
  if (g.n == 0) throw std::invalid_argument("empty adjacency");
  g.d = std::accumulate(g.adjacency[0].begin(), g.adjacency[0].end(), 0);
  ensure_valid(g);
  return g;
}

RegularGraph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle graph needs n >= 3");
  std::vector<std::vector<int>> a(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
  }
  return from_adjacency(std::move(a));
}

std::vector<std::vector<int>> neighbor_lists(const RegularGraph& g) {
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    nbr[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(g.d));
    for (int j = 0; j < g.n; ++j)
      if (g.adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        nbr[static_cast<std::size_t>(i)].push_back(j);
  }
  return nbr;
}

bool is_connected(const RegularGraph& g) {
  auto nbr = neighbor_lists(g);
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : nbr[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == g.n;
}

bool is_bipartite(const RegularGraph& g) {
  auto nbr = neighbor_lists(g);
  std::vector<int> color(static_cast<std::size_t>(g.n), -1);
  for (int s = 0; s < g.n; ++s) {
    if (color[static_cast<std::size_t>(s)] != -1) continue;
    color[static_cast<std::size_t>(s)] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : nbr[static_cast<std::size_t>(u)]) {
        if (color[static_cast<std::size_t>(w)] == -1) {
          color[static_cast<std::size_t>(w)] = 1 - color[static_cast<std::size_t>(u)];
          q.push(w);
        } else if (color[static_cast<std::size_t>(w)] == color[static_cast<std::size_t>(u)]) {
          return false;
        }
      }
    }
  }
  return true;
}

RegularGraph random_regular(int n, int d, std::uint64_t seed) {
  if (n <= 0 || d <= 0) throw std::invalid_argument("random_regular needs positive n, d");
  if (d >= n) throw std::invalid_argument("random_regular needs d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("random_regular needs n*d even");

  std::mt19937_64 rng(seed);
  std::vector<int> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::iota(points.begin(), points.end(), 0);

  const int budget = 20000;
  for (int attempt = 0; attempt < budget; ++attempt) {
    std::shuffle(points.begin(), points.end(), rng);
    std::vector<std::vector<int>> a(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), 0));
    bool ok = true;
    for (std::size_t i = 0; ok && i + 1 < points.size(); i += 2) {
      int u = points[i] / d;
      int v = points[i + 1] / d;
      if (u == v || a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
        ok = false;
        break;
      }
      a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
      a[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    }
    if (!ok) continue;
    RegularGraph g;
    g.n = n;
    g.d = d;
    g.adjacency = std::move(a);
    ensure_valid(g);
    return g;
  }
  throw std::runtime_error("random_regular: rejection budget of " + std::to_string(budget) +
                           " pairings exhausted for n = " + std::to_string(n) +
                           ", d = " + std::to_string(d));
}

SpectrumReport spectrum(const RegularGraph& g) {
  ensure_valid(g);
  Eigen::MatrixXd m(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      m(i, j) = g.adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

  SpectrumReport rep;
  rep.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + g.n);
  std::reverse(rep.eigenvalues.begin(), rep.eigenvalues.end());
  if (g.n >= 2)
    rep.lambda_plus = std::max(rep.eigenvalues[1], -rep.eigenvalues.back());
  rep.connected = is_connected(g);
  rep.bipartite = is_bipartite(g);
  return rep;
}

BigInt closed_walk_count(const RegularGraph& g, int ell) {
  ensure_valid(g);
  if (ell < 1) throw std::invalid_argument("closed_walk_count needs l >= 1");
  if (fits_int64(g.n, g.d, ell)) {
    auto t = walk_traces<std::int64_t>(g, ell);
    return BigInt(t[static_cast<std::size_t>(ell)]);
  }
  auto t = walk_traces<BigInt>(g, ell);
  return t[static_cast<std::size_t>(ell)];
}

BigInt irreducible_loop_count(const RegularGraph& g, int ell) {
  ensure_valid(g);
  if (ell < 2) throw std::invalid_argument("irreducible_loop_count needs l >= 2");
  if (fits_int64(g.n, g.d, ell)) {
    auto t = nb_traces<std::int64_t>(g, ell);
    return BigInt(t[static_cast<std::size_t>(ell)]) + tail_correction(g, ell);
  }
  auto t = nb_traces<BigInt>(g, ell);
  return t[static_cast<std::size_t>(ell)] + tail_correction(g, ell);
}

BigInt closed_walk_count_oracle(const RegularGraph& g, int ell) {
  ensure_valid(g);
  if (ell < 1) throw std::invalid_argument("oracle needs l >= 1");
  check_oracle_size(g, ell);
  auto nbr = neighbor_lists(g);
  BigInt total = 0;
  std::vector<int> walk(static_cast<std::size_t>(ell) + 1, 0);
  for (int v = 0; v < g.n; ++v) {
    // iterative DFS over all l-step walks from v, counting returns
    std::vector<std::size_t> choice(static_cast<std::size_t>(ell) + 1, 0);
    walk[0] = v;
    int depth = 0;
    while (depth >= 0) {
      if (depth == ell) {
        if (walk[static_cast<std::size_t>(depth)] == v) ++total;
        --depth;
        continue;
      }
      auto& c = choice[static_cast<std::size_t>(depth)];
      const auto& out = nbr[static_cast<std::size_t>(walk[static_cast<std::size_t>(depth)])];
      if (c >= out.size()) {
        c = 0;
        --depth;
        continue;
      }
      walk[static_cast<std::size_t>(depth) + 1] = out[c++];
      ++depth;
    }
  }
  return total;
}

BigInt irreducible_loop_count_oracle(const RegularGraph& g, int ell) {
  ensure_valid(g);
  if (ell < 2) throw std::invalid_argument("oracle needs l >= 2");
  check_oracle_size(g, ell);
  auto nbr = neighbor_lists(g);
  BigInt total = 0;
  std::vector<int> walk(static_cast<std::size_t>(ell) + 1, 0);
  for (int v = 0; v < g.n; ++v) {
    std::vector<std::size_t> choice(static_cast<std::size_t>(ell) + 1, 0);
    walk[0] = v;
    int depth = 0;
    while (depth >= 0) {
      if (depth == ell) {
        // cyclic condition: the closing step must not reverse the first step
        if (walk[static_cast<std::size_t>(depth)] == v &&
            walk[static_cast<std::size_t>(depth) - 1] != walk[1])
          ++total;
        --depth;
        continue;
      }
      auto& c = choice[static_cast<std::size_t>(depth)];
      const auto& out = nbr[static_cast<std::size_t>(walk[static_cast<std::size_t>(depth)])];
      if (c >= out.size()) {
        c = 0;
        --depth;
        continue;
      }
      int next = out[c++];
      if (depth >= 1 && next == walk[static_cast<std::size_t>(depth) - 1]) continue;
      walk[static_cast<std::size_t>(depth) + 1] = next;
      ++depth;
    }
  }
  return total;
}

BoundReport spectral_bound_check(const RegularGraph& g, int ell) {
  if (ell < 1) throw std::invalid_argument("spectral_bound_check needs l >= 1");
  auto spec = spectrum(g);
  BoundReport rep;
  rep.ell = ell;
  rep.walks = closed_walk_count(g, ell);
  rep.d_pow = 1;
  for (int k = 0; k < ell; ++k) rep.d_pow *= g.d;
  rep.deviation = std::fabs(big_to_double(rep.walks - rep.d_pow));
  rep.bound = g.n * std::pow(spec.lambda_plus, ell);
  rep.slack = rep.bound - rep.deviation;
  rep.holds = rep.deviation <= rep.bound * (1.0 + 1e-12) + 1e-9;
  rep.bipartite = spec.bipartite;
  rep.connected = spec.connected;
  return rep;
}

RamanujanReport ramanujan_residual(const std::map<int, double>& counts, int d, int p_degree) {
  if (d < 2) throw std::invalid_argument("ramanujan_residual needs d >= 2");
  if (p_degree < 0) throw std::invalid_argument("ramanujan_residual needs degree >= 0");
  if (static_cast<int>(counts.size()) < p_degree + 3)
    throw std::invalid_argument("ramanujan_residual needs at least degree + 3 samples");

  const double q = d - 1;
  const std::size_t rows = counts.size();
  const std::size_t cols = static_cast<std::size_t>(p_degree) + 1;
  // fit p(l) against counts / (d-1)^l so the design matrix is a plain Vandermonde
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  std::vector<int> ells;
  ells.reserve(rows);
  {
    std::size_t r = 0;
    for (const auto& [ell, value] : counts) {
      double down = std::pow(q, -ell);
      double p = 1.0;
      for (std::size_t c = 0; c < cols; ++c) {
        X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = p;
        p *= ell;
      }
      y(static_cast<Eigen::Index>(r)) = value * down;
      ells.push_back(ell);
      ++r;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  RamanujanReport rep;
  rep.degree = p_degree;
  rep.condition = sv(0) / sv(sv.size() - 1);
  rep.ill_conditioned = !(rep.condition < 1e12);
  Eigen::VectorXd beta = svd.solve(y);
  rep.coefficients.assign(beta.data(), beta.data() + beta.size());

  // residuals on the (d-1)^{l/2} scale
  double scale = 0.0;
  for (const auto& [ell, value] : counts)
    scale = std::max(scale, std::fabs(value) * std::pow(q, -ell));
  std::vector<double> ts, zs;
  for (std::size_t r = 0; r < rows; ++r) {
    int ell = ells[r];
    double fit = 0.0, p = 1.0;
    for (std::size_t c = 0; c < cols; ++c) {
      fit += rep.coefficients[c] * p;
      p *= ell;
    }
    double resid = (y(static_cast<Eigen::Index>(r)) - fit) * std::pow(q, ell / 2.0);
    rep.max_normalized_residual = std::max(rep.max_normalized_residual, std::fabs(resid));
    ts.push_back(ell);
    zs.push_back(std::log(std::fabs(resid) + 1e-12 * std::max(scale, 1.0)));
  }
  double tm = std::accumulate(ts.begin(), ts.end(), 0.0) / static_cast<double>(rows);
  double zm = std::accumulate(zs.begin(), zs.end(), 0.0) / static_cast<double>(rows);
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    num += (ts[r] - tm) * (zs[r] - zm);
    den += (ts[r] - tm) * (ts[r] - tm);
  }
  rep.residual_slope = num / den;
  // bounded: residuals are either at fit-noise level or not growing with l
  rep.bounded = rep.max_normalized_residual <= 1e-6 * std::max(scale, 1.0) ||
                rep.residual_slope <= 0.05 * std::log(q);
  return rep;
}

McReport mc_expected_irreducible(int n, int d, int ell_max, int trials, std::uint64_t seed,
                                 int jobs) {
  if (trials < 1) throw std::invalid_argument("mc_expected_irreducible needs trials >= 1");
  if (ell_max < 2) throw std::invalid_argument("mc_expected_irreducible needs l_max >= 2");
  if (jobs < 1) jobs = 1;

  // per-trial counts, trial-indexed so any job split merges identically
  std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(trials));
  auto run_trial = [&](int t) {
    // splitmix step keeps per-trial streams decorrelated
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1);
    RegularGraph g = random_regular(n, d, s);
    auto traces = fits_int64(n, d, ell_max) ? [&] {
      auto t64 = nb_traces<std::int64_t>(g, ell_max);
      return std::vector<BigInt>(t64.begin(), t64.end());
    }()
                                            : nb_traces<BigInt>(g, ell_max);
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(ell_max) - 1);
    for (int ell = 2; ell <= ell_max; ++ell)
      row.push_back(big_to_double(traces[static_cast<std::size_t>(ell)] + tail_correction(g, ell)));
    per_trial[static_cast<std::size_t>(t)] = std::move(row);
  };

  if (jobs == 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        try {
          for (int t = j; t < trials; t += jobs) run_trial(t);
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  McReport rep;
  rep.n = n;
  rep.d = d;
  rep.trials = trials;
  rep.seed = seed;
  for (int ell = 2; ell <= ell_max; ++ell) {
    std::size_t idx = static_cast<std::size_t>(ell - 2);
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) mean += per_trial[static_cast<std::size_t>(t)][idx];
    mean /= trials;
    double var = 0.0;
    for (int t = 0; t < trials; ++t) {
      double dev = per_trial[static_cast<std::size_t>(t)][idx] - mean;
      var += dev * dev;
    }
    var = trials > 1 ? var / (trials - 1) : 0.0;
    rep.rows.push_back({ell, mean, std::sqrt(var / trials)});
  }

  // growth slope of log-means over the upper half of the l range
  std::vector<double> ts, zs;
  for (const auto& row : rep.rows)
    if (row.ell >= (ell_max + 2) / 2 && row.mean > 0.0) {
      ts.push_back(row.ell);
      zs.push_back(std::log(row.mean));
    }
  if (ts.size() >= 2) {
    double tm = std::accumulate(ts.begin(), ts.end(), 0.0) / static_cast<double>(ts.size());
    double zm = std::accumulate(zs.begin(), zs.end(), 0.0) / static_cast<double>(zs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      num += (ts[i] - tm) * (zs[i] - zm);
      den += (ts[i] - tm) * (ts[i] - tm);
    }
    rep.growth_slope = num / den;
  }
  return rep;
}

std::string edge_list_text(const RegularGraph& g) {
  std::string out;
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        out += std::to_string(i) + " " + std::to_string(j) + "\n";
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv_text(const McReport& rep) {
  std::string out = "ell,mean_count,stderr,n,d,trials,seed\n";
  for (const auto& row : rep.rows)
    out += std::to_string(row.ell) + "," + fmt(row.mean) + "," + fmt(row.stderr_mean) + "," +
           std::to_string(rep.n) + "," + std::to_string(rep.d) + "," + std::to_string(rep.trials) +
           "," + std::to_string(rep.seed) + "\n";
  return out;
}

std::string to_json_text(const SpectrumReport& rep) {
  nlohmann::ordered_json j;
  j["eigenvalues"] = rep.eigenvalues;
  j["lambda_plus"] = rep.lambda_plus;
  j["bipartite"] = rep.bipartite;
  j["connected"] = rep.connected;
  return j.dump(2) + "\n";
}

std::string to_json_text(const BoundReport& rep) {
  nlohmann::ordered_json j;
  j["ell"] = rep.ell;
  j["walks"] = rep.walks.str();
  j["d_pow"] = rep.d_pow.str();
  j["deviation"] = rep.deviation;
  j["bound"] = rep.bound;
  j["slack"] = rep.slack;
  j["holds"] = rep.holds;
  j["bipartite"] = rep.bipartite;
  j["connected"] = rep.connected;
  return j.dump(2) + "\n";
}

std::string to_json_text(const RamanujanReport& rep) {
  nlohmann::ordered_json j;
  j["degree"] = rep.degree;
  j["coefficients"] = rep.coefficients;
  j["max_normalized_residual"] = rep.max_normalized_residual;
  j["residual_slope"] = rep.residual_slope;
  j["condition"] = rep.condition;
  j["ill_conditioned"] = rep.ill_conditioned;
  j["bounded"] = rep.bounded;
  return j.dump(2) + "\n";
}

std::string to_json_text(const McReport& rep) {
  nlohmann::ordered_json j;
  j["n"] = rep.n;
  j["d"] = rep.d;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  j["growth_slope"] = rep.growth_slope;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json r;
    r["ell"] = row.ell;
    r["mean"] = row.mean;
    r["stderr"] = row.stderr_mean;
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace tracelab::graphlab
