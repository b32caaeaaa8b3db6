#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qopt/errors.hpp"

namespace qopt {

enum class Sense { minimize, maximize };

using Bits = std::vector<std::uint8_t>;

// Integer linear program: linear objective over bounded integer variables,
// equality rows A_eq x = b_eq and inequality rows A_ineq x <= b_ineq.
// Binary variables are the U_i = 1 special case.
struct IlpModel {
  std::vector<double> objective;
  Sense sense = Sense::minimize;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<std::vector<double>> a_ineq;
  std::vector<double> b_ineq;
  std::vector<long long> upper_bounds;  // U_i >= 0, 1 for binary vars
  std::vector<std::string> var_names;

  std::size_t num_vars() const { return objective.size(); }
  void validate() const;  // throws DimensionMismatch
};

// Binary expansion of one integer quantity: value = sum weights[k] * bits[k].
struct BitGroup {
  std::vector<std::size_t> bits;     // QUBO indices
  std::vector<long long> weights;    // 2^0 .. 2^(K-1)
};

// Maps QUBO bits back to ILP variables and slack values. Every QUBO index
// belongs to exactly one group.
struct VariableMap {
  std::vector<BitGroup> vars;          // one per ILP variable
  std::vector<BitGroup> slacks;        // one per inequality constraint
  std::vector<long long> slack_bounds; // S_i used when sizing each slack
  std::size_t total_bits() const;
};

struct PenaltyConfig {
  double lambda_eq = 1.0;
  double lambda_ineq = 1.0;
};

// minimize x^T Q x + linear^T x + offset over binary x.
struct QuboModel {
  std::size_t n = 0;
  std::vector<double> q;       // n*n, symmetric, row-major
  std::vector<double> linear;
  double offset = 0.0;
  VariableMap var_map;
  std::vector<std::string> warnings;

  double& at(std::size_t i, std::size_t j) { return q[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return q[i * n + j]; }
  void validate() const;  // symmetry within 1e-12
};

// Spin model over s in {-1,+1}^n: energy = s^T J s + h^T s + constant,
// with J symmetric and zero on the diagonal.
struct IsingModel {
  std::size_t n = 0;
  std::vector<double> j;
  std::vector<double> h;
  double constant = 0.0;

  double coupling(std::size_t a, std::size_t b) const { return j[a * n + b]; }
  double energy(std::span<const int> spins) const;
};

struct BinaryEncoding {
  int bit_count = 0;
  std::vector<long long> weights;
};

struct DecodedSolution {
  std::vector<long long> values;  // per ILP variable
  std::vector<long long> slacks;  // per inequality constraint
};

// K = ceil(log2(U+1)) bits with weights 1, 2, ..., 2^(K-1). U = 0 yields an
// empty encoding (the variable is pinned to zero).
BinaryEncoding plan_binary_encoding(long long upper_bound);

// lambda_eq = lambda_ineq = eta * max(1, max_i |c_i|). eta defaults to 10.
PenaltyConfig default_penalties(const IlpModel& ilp, double eta = 10.0);

// Binary-encode variables, add one slack group per inequality (bound
// S_i = max(0, b_i - min achievable LHS over the variable box)), and emit
// the penalized quadratic. Maximization objectives are negated first.
// A constraint that can never be satisfied is kept with zero slack bits and
// noted in QuboModel::warnings.
QuboModel ilp_to_qubo(const IlpModel& ilp, const PenaltyConfig& penalties);

double evaluate(const QuboModel& qubo, std::span<const std::uint8_t> x);

// Adds lambda * (sum coeff_b z_b + constant)^2 to an existing QUBO.
void add_squared_penalty(QuboModel& qubo,
                         const std::vector<std::pair<std::size_t, double>>& terms,
                         double constant, double lambda);

// Substitution x = (1+s)/2; exact on every assignment.
IsingModel qubo_to_ising(const QuboModel& qubo);

DecodedSolution decode_solution(const VariableMap& map, std::span<const std::uint8_t> bits);

// Canonical QUBO exchange format: first line "N offset", then one
// "i j coeff" line per nonzero term with i <= j, ascending (i, j).
// Diagonal rows carry the combined linear coefficient.
void write_qubo(std::ostream& out, const QuboModel& qubo);
void write_qubo_file(const std::string& path, const QuboModel& qubo);
QuboModel read_qubo(std::istream& in, const std::string& filename = "<stream>");
QuboModel read_qubo_file(const std::string& path);

}  // namespace qopt
