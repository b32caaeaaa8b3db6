#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qopt/formulation.hpp"
#include "qopt/problems.hpp"
#include "qopt/simulator.hpp"

namespace qopt {

struct BruteForceResult {
  Bits bits;
  double value = 0.0;
};

// Global minimum over all 2^N assignments via Gray-code deltas; exact ties
// resolve to the lexicographically smallest bitstring. N <= 26.
BruteForceResult brute_force_qubo(const QuboModel& qubo);

// Brute force over the ILP variable box (product of [0, U_i]); returns the
// optimum in the model's own sense.
struct IlpBruteForceResult {
  std::vector<long long> assignment;
  double objective = 0.0;
  bool feasible_found = false;
};
IlpBruteForceResult brute_force_ilp(const IlpModel& ilp);

struct MisResult {
  std::vector<int> set;
  int size = 0;
  bool optimal = true;  // false when the node budget ran out
};

// Branch and bound with a greedy clique-cover upper bound.
MisResult exact_mis(const MisGraph& graph, long long node_budget = 50'000'000);

// Percent shortfall relative to best_known; non-negative for valid feasible
// solutions. Throws ZeroBaseline when best_known == 0.
double optimality_gap(double best_known, double obtained, Sense sense);

// obtained / best_known * 100; best_known must be positive.
double rsq(double obtained, double best_known);

struct Feasibility {
  bool feasible = true;
  int violated = 0;
  double magnitude = 0.0;
};

Feasibility check_feasibility(const MdkpInstance& inst, std::span<const long long> x);
Feasibility check_feasibility(const MisGraph& graph, std::span<const long long> x);
Feasibility check_feasibility(const QapInstance& inst, std::span<const long long> x);
// MSP checks the residual of each balance equation given decoded slack pairs
// (s+ and s- interleaved per retailer, as produced by msp_to_ilp).
Feasibility check_feasibility(const MspInstance& inst, std::span<const long long> x_and_slacks);

enum class RunStatus { ok, infeasible, failed, timeout };

const char* run_status_name(RunStatus s);

struct BenchmarkRecord {
  std::string instance;
  std::string method;
  RunStatus status = RunStatus::ok;
  bool feasible = false;
  double objective = 0.0;
  std::optional<double> objective_pre_postprocess;
  std::optional<double> best_known;
  std::optional<double> gap_percent;
  std::optional<double> rsq_percent;
  int violations = 0;
  double violation_magnitude = 0.0;
  int qubits = 0;
  ResourceSummary resources;
  std::uint64_t seed = 0;
  double optimize_seconds = 0.0;
  double postprocess_seconds = 0.0;
  Bits solution_bits;       // QUBO-level assignment
  std::string detail;       // free-form (e.g. failure reason)

  std::string to_json() const;               // single line
  static BenchmarkRecord from_json(const std::string& line);
};

void write_records(std::ostream& out, const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_records(std::istream& in);

}  // namespace qopt
