#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tracelab::graphlab {

using BigInt = boost::multiprecision::cpp_int;

// Simple d-regular graph: symmetric 0/1 adjacency, zero diagonal, row sums d.
struct RegularGraph {
  int n{0};
  int d{0};
  std::vector<std::vector<int>> adjacency;
};

void ensure_valid(const RegularGraph& g);
RegularGraph from_adjacency(std::vector<std::vector<int>> adjacency);
RegularGraph cycle_graph(int n);
std::vector<std::vector<int>> neighbor_lists(const RegularGraph& g);
bool is_connected(const RegularGraph& g);
bool is_bipartite(const RegularGraph& g);

// Pairing model with whole-configuration rejection of loops and multi-edges.
// Deterministic per seed; the generator state carries across rejected draws.
RegularGraph random_regular(int n, int d, std::uint64_t seed);

struct SpectrumReport {
  std::vector<double> eigenvalues;  // descending
  double lambda_plus{0.0};          // max(second largest, -smallest)
  bool bipartite{false};
  bool connected{false};
};
SpectrumReport spectrum(const RegularGraph& g);

// Tr(A^l): closed walks of length l over all base points, exact integers.
BigInt closed_walk_count(const RegularGraph& g, int ell);
// Closed non-backtracking walks of length l, cyclically: the step returning to
// the base must not reverse the first step.  Exact integers.
BigInt irreducible_loop_count(const RegularGraph& g, int ell);

// Exhaustive enumerations, usable for n <= 12, l <= 8 (cost n * d^l).
BigInt closed_walk_count_oracle(const RegularGraph& g, int ell);
BigInt irreducible_loop_count_oracle(const RegularGraph& g, int ell);

struct BoundReport {
  int ell{0};
  BigInt walks;
  BigInt d_pow;
  double deviation{0.0};  // |Tr(A^l) - d^l|
  double bound{0.0};      // n * lambda_plus^l
  double slack{0.0};      // bound - deviation
  bool holds{false};
  bool bipartite{false};
  bool connected{false};
};
// |Tr(A^l) - d^l| <= n lambda_+^l with the measured slack.
BoundReport spectral_bound_check(const RegularGraph& g, int ell);

struct RamanujanReport {
  int degree{0};
  std::vector<double> coefficients;  // fitted p, ascending powers of l
  double max_normalized_residual{0.0};
  double residual_slope{0.0};  // log-residual growth per unit l
  double condition{0.0};
  bool ill_conditioned{false};
  bool bounded{false};
};
// Least-squares fit counts(l) ~ p(l) (d-1)^l; residuals are reported on the
// (d-1)^{l/2} scale, the boundedness scale of a d-Ramanujan function.
RamanujanReport ramanujan_residual(const std::map<int, double>& counts, int d, int p_degree);

struct McRow {
  int ell{0};
  double mean{0.0};
  double stderr_mean{0.0};
};
struct McReport {
  int n{0};
  int d{0};
  int trials{0};
  std::uint64_t seed{0};
  std::vector<McRow> rows;  // ell = 2 .. ell_max
  double growth_slope{0.0};  // log-mean slope per step over the upper half
};
// Mean of irreducible_loop_count over independent draws; per-trial seeds are
// derived from the base seed, so the merge is deterministic for any job count.
McReport mc_expected_irreducible(int n, int d, int ell_max, int trials, std::uint64_t seed,
                                 int jobs = 1);

std::string edge_list_text(const RegularGraph& g);
std::string to_csv_text(const McReport& rep);
std::string to_json_text(const SpectrumReport& rep);
std::string to_json_text(const BoundReport& rep);
std::string to_json_text(const RamanujanReport& rep);
std::string to_json_text(const McReport& rep);

}  // namespace tracelab::graphlab
