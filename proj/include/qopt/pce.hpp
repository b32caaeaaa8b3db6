#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qopt/formulation.hpp"
#include "qopt/metrics.hpp"
#include "qopt/neldermead.hpp"
#include "qopt/simulator.hpp"

namespace qopt {

// ---------------------------------------------------------------------------
// Correlation encoding
// ---------------------------------------------------------------------------

// m binary variables encoded as signs of m weight-k Pauli correlators on n
// qubits. Only k = 2 is supported: capacity 3 * n(n-1)/2.
struct PceEncoding {
  int num_vars = 0;
  int qubits = 0;
  int weight = 2;
  std::vector<PauliString> strings;
};

// Smallest n with 3 * n(n-1)/2 >= m.
int required_qubits(int num_vars, int weight = 2);

// Deterministic assignment: qubit pairs (a, b), a < b, in lexicographic
// order; X, Y, Z per pair; first m strings.
PceEncoding build_encoding(int num_vars, int qubits, int weight = 2);

std::vector<double> measure_correlators(const StateVector& state, const PceEncoding& enc);

// Shot-based estimate: per string, rotate into the Z basis and average the
// two-bit parity over seeded samples.
std::vector<double> estimate_correlators(const StateVector& state, const PceEncoding& enc,
                                         int shots, std::uint64_t seed);

// sgn with ties to +1; x_i = (1 + s_i) / 2.
std::vector<int> decode_bits(std::span<const double> correlators);
Bits spins_to_binary(std::span<const int> spins);

// ---------------------------------------------------------------------------
// Ansatz
// ---------------------------------------------------------------------------

// 16 all-pairs RXX rounds with single-qubit rotation layers (axes X, Y, Z,
// X) before rounds 1, 5, 9 and 13. Every gate has its own parameter:
// 4n + 8n(n-1) = 4n(2n-1) parameters, 8n(n-1) two-qubit gates.
struct BrickworkConfig {
  int qubits = 0;
  int rxx_rounds = 16;
  int rotation_layers = 4;
  double init_low = -3.14159265358979323846;
  double init_high = 3.14159265358979323846;
};

Circuit build_brickwork(const BrickworkConfig& config);
Circuit build_brickwork(int qubits);

// ---------------------------------------------------------------------------
// Loss functions
// ---------------------------------------------------------------------------

enum class LossMode { ising_consistent, paper_literal };

struct LossConfig {
  double alpha = 1.0;    // tanh steepness
  double beta = 0.5;     // regularization weight
  double c_scale = 1.0;  // Frobenius-norm multiplier for nu
  LossMode mode = LossMode::ising_consistent;
};

struct WeightedEdge {
  int u, v;
  double weight;
};

struct WeightedGraph {
  int vertices = 0;
  std::vector<WeightedEdge> edges;
};

// nu = w(G)/2 + w(T_min)/4. Disconnected input: minimum spanning forest,
// component weights summed.
double poljak_turzik_bound(const WeightedGraph& graph);

// ising_consistent: t^T J t + h^T t + beta*nu*[(1/m) sum t_i^2]^2 with
// t_i = tanh(alpha * c_i) and nu = c_scale * ||J||_F. Saturated correlators
// make this the spin energy minus its constant.
double qubo_pce_loss(const IsingModel& ising, std::span<const double> correlators,
                     const LossConfig& cfg);

// paper_literal: sum_{i<j} (pair coefficient) t_i t_j + sum_i c_i t_i^2 +
// regularizer, with nu from ||Q||_F; kept for fidelity experiments (the
// squared linear term is blind to the sign decoding).
double qubo_pce_loss_literal(const QuboModel& qubo, std::span<const double> correlators,
                             const LossConfig& cfg);

// sum_{(i,j) in E} W_ij t_i t_j + regularizer with nu from the
// Poljak-Turzik bound of the weighted graph.
double maxcut_pce_loss(const WeightedGraph& graph, std::span<const double> correlators,
                       const LossConfig& cfg);

// ---------------------------------------------------------------------------
// Multi-step re-optimization with dynamic perturbations
// ---------------------------------------------------------------------------

struct ReoptOptions {
  double perturbation = 0.1;        // P
  double exploration = 2.0;         // E, amplifies P every third round
  double decay = 0.9;               // delta, shrinks P on improvement
  int restart_threshold = 6;        // f_restart
  int max_rounds = 10;
  int max_no_improvement_rounds = 10;
  double early_stop_threshold = 1e-6;  // relative improvement
  int early_stop_rounds = 5;
  double blend_step = 0.5;          // weighted_blend = theta* + blend_step*P*sgn(T)
  long long local_budget = 3000;    // Nelder-Mead evaluations per round
  std::function<bool()> should_stop;

  static ReoptOptions single_step() {
    ReoptOptions o;
    o.max_rounds = 1;
    return o;
  }
};

// Optimizer state across rounds: current start point, perturbation factor,
// failure count, trend vector and incumbent.
struct ReoptState {
  std::vector<double> theta;
  double perturbation = 0.1;
  int failures = 0;
  std::vector<double> trend;
  std::vector<double> best_theta;
  double best_cost = 0.0;
  int round = 0;
};

struct RoundRecord {
  int round = 0;
  double perturbation = 0.0;  // P' used this round
  int failures = 0;           // after the update
  double cost = 0.0;          // q, decoded QUBO cost of the round optimum
  double best = 0.0;          // Q*
  std::string branch;         // improve | restart | blend | perturb

  std::string to_json() const;
};

// Everything a loss evaluation needs: theta -> state -> correlators -> loss,
// plus the decoded QUBO cost used for incumbent updates.
struct PceContext {
  const QuboModel* qubo = nullptr;
  IsingModel ising;
  PceEncoding encoding;
  Circuit ansatz;
  LossConfig loss;
  bool shot_mode = false;
  int shots = 4000;
  std::uint64_t shot_seed = 0;

  std::vector<double> correlators(std::span<const double> theta) const;
  double loss_value(std::span<const double> theta) const;
  double decoded_cost(std::span<const double> theta, Bits* bits = nullptr) const;
};

PceContext make_pce_context(const QuboModel& qubo, const LossConfig& loss,
                            int qubit_cap = kDefaultQubitCap);

struct MultiStepResult {
  std::vector<double> best_theta;
  double best_cost = 0.0;
  Bits bits;  // decoded from the incumbent
  std::vector<RoundRecord> rounds;
  OptStatus status = OptStatus::converged;
};

MultiStepResult multi_step_optimize(const PceContext& ctx, const ReoptOptions& options,
                                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Bit-swap post-processing
// ---------------------------------------------------------------------------

struct SwapResult {
  Bits bits;
  double value = 0.0;
  long long evaluations = 0;
  bool budget_exhausted = false;
};

// Best-improvement local search: single-bit flips first, then bit pairs,
// until no flip of width <= max_k improves. Never worse than the input and
// idempotent.
SwapResult bit_swap_search(const Bits& start, const QuboModel& qubo, int max_k = 2,
                           long long budget = 10'000'000);

// ---------------------------------------------------------------------------
// End-to-end solve
// ---------------------------------------------------------------------------

struct PceOptions {
  LossConfig loss;
  ReoptOptions reopt;
  int max_swap_k = 2;
  long long swap_budget = 10'000'000;
  bool shot_mode = false;
  int shots = 4000;
  int qubit_cap = kDefaultQubitCap;
};

// qubo -> ising -> encoding -> brickwork -> multi-step optimize -> decode ->
// bit swap. The record carries pre- and post-swap objectives and the
// optimization/post-processing time split.
BenchmarkRecord solve_pce(const QuboModel& qubo, const PceOptions& options, std::uint64_t seed,
                          MultiStepResult* round_log = nullptr);

}  // namespace qopt
