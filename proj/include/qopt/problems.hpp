#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qopt/formulation.hpp"

namespace qopt {

class Rng;

// ---------------------------------------------------------------------------
// Multi-dimensional knapsack
// ---------------------------------------------------------------------------

struct MdkpInstance {
  std::size_t items = 0;       // n
  std::size_t dimensions = 0;  // m
  std::vector<double> profits;                // p_i
  std::vector<std::vector<double>> weights;   // w[j][i], one row per dimension
  std::vector<double> capacities;             // c_j
  std::string name;
  std::optional<double> known_optimum;

  void validate() const;
};

IlpModel mdkp_to_ilp(const MdkpInstance& inst);

// alpha_j = c_j / sum_i w_ij; +inf for an all-zero dimension (vacuous row).
std::vector<double> tightness_ratios(const MdkpInstance& inst);

// Text format: "n m optimum", n profits, m rows of n weights, m capacities;
// whitespace-separated, line breaks arbitrary. optimum 0 means unknown.
MdkpInstance parse_mdkp(std::istream& in, const std::string& filename);
MdkpInstance parse_mdkp_file(const std::string& path);
void write_mdkp(std::ostream& out, const MdkpInstance& inst);

// Random instance; capacities c_j = alpha * sum_i w_ij (rounded down to an
// integer when integral_capacities is set, never below 1).
MdkpInstance random_mdkp(std::size_t items, std::size_t dimensions, double alpha, Rng& rng,
                         bool integral_capacities = false);

// ---------------------------------------------------------------------------
// Maximum independent set
// ---------------------------------------------------------------------------

struct MisGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // u < v, sorted, deduplicated
  std::string name;
  std::optional<int> known_mis_size;

  void normalize();  // sort/dedup, drop self-loops, check ranges
  std::vector<std::vector<int>> adjacency() const;
  bool is_independent(std::span<const int> set) const;
};

IlpModel mis_to_ilp(const MisGraph& graph);

// Direct n-variable QUBO: minimize -sum x_i + penalty * sum_{(u,v) in E} x_u x_v.
// This is the form whose variable count equals the vertex count.
QuboModel mis_to_qubo(const MisGraph& graph, double penalty = 10.0);

// Vertices whose neighborhood induces a clique (isolated vertices included).
std::vector<int> find_simplicial(const MisGraph& graph);

struct PreprocessStep {
  int fixed_vertex;
  std::vector<int> deleted_neighbors;
};

struct PreprocessResult {
  MisGraph reduced;                      // compact vertex ids
  std::vector<int> reduced_to_original;  // reduced id -> original id
  std::vector<int> fixed;                // original ids added to the set
  std::vector<PreprocessStep> steps;
};

// Repeatedly fix the lowest-numbered simplicial vertex and delete it with its
// neighborhood, until no simplicial vertex remains.
PreprocessResult preprocess_mis(const MisGraph& graph);

// Union of the fixed set and a solution of the reduced graph (original ids);
// throws IndependenceViolation if the union is not independent in `graph`.
std::vector<int> reconstruct_mis(const MisGraph& graph, std::span<const int> fixed,
                                 std::span<const int> reduced_solution);

// Edge-list format: optional "p <nvertices>" header, one "u v" pair per line,
// 1-based ids; '#' and 'c' lines are comments. Duplicate edges and self-loops
// are dropped with a warning.
MisGraph parse_mis(std::istream& in, const std::string& filename,
                   std::vector<std::string>* warnings = nullptr);
MisGraph parse_mis_file(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_mis(std::ostream& out, const MisGraph& graph);

// Challenge graphs from single-error-correcting code constructions over
// length-`bits` binary words: two words conflict when their single-move balls
// intersect. Moves: 1dc = delete one bit, 1tc = swap one adjacent unequal
// pair, 1et = same including the end-around pair.
enum class ChallengeFamily { one_dc, one_tc, one_et };
MisGraph generate_challenge_graph(ChallengeFamily family, int bits);

MisGraph random_graph(int vertices, int max_edges, Rng& rng);

// ---------------------------------------------------------------------------
// Quadratic assignment
// ---------------------------------------------------------------------------

struct QapInstance {
  std::size_t size = 0;  // n facilities = n locations
  std::vector<double> flow;      // n*n row-major
  std::vector<double> distance;  // n*n row-major
  std::string name;
  std::optional<double> known_optimum;

  void validate() const;
  double assignment_cost(std::span<const int> perm) const;  // trace(F P D P^T)
};

// n^2 binary variables x_(i,k) = facility i at location k, row/column
// one-hot penalties. Default penalty: 2 * max|f| * max|d| * n.
QuboModel qap_to_qubo(const QapInstance& inst, double penalty);
double default_qap_penalty(const QapInstance& inst);

// QAPLIB format: n, then the n*n flow matrix, then the n*n distance matrix.
QapInstance parse_qap(std::istream& in, const std::string& filename);
QapInstance parse_qap_file(const std::string& path);
void write_qap(std::ostream& out, const QapInstance& inst);

// ---------------------------------------------------------------------------
// Market share
// ---------------------------------------------------------------------------

struct MspInstance {
  std::size_t retailers = 0;  // m
  std::size_t products = 0;   // n
  std::vector<std::vector<long long>> demand;  // a[i][j], m rows of n
  std::vector<long long> targets;              // b_i
  std::uint64_t seed = 0;
  long long spread = 0;  // D parameter used at generation time
  std::string name;
  std::optional<double> known_optimum;

  void validate() const;
};

// n = 10(m-1), a_ij ~ U{0..99}; b_i = floor(sum_j a_ij / 2), or drawn from
// the D-interval [ (S-D)/2, (S-D)/2 + D - 1 ] when interval_targets is set.
MspInstance generate_msp(std::size_t retailers, long long spread, std::uint64_t seed,
                         bool interval_targets = false);

// minimize sum(s+ + s-) s.t. sum_j a_ij x_j + s_i+ - s_i- = b_i, with both
// slack signs bounded by max(|b_i|, |b_i - sum_j a_ij|).
IlpModel msp_to_ilp(const MspInstance& inst);

long long msp_slack_bound(const MspInstance& inst, std::size_t retailer);

// Key-value text with matrix block: msp / m / n / D / seed / a / b sections.
MspInstance parse_msp(std::istream& in, const std::string& filename);
MspInstance parse_msp_file(const std::string& path);
void write_msp(std::ostream& out, const MspInstance& inst);

}  // namespace qopt
