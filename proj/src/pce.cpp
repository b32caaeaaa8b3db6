#include "qopt/pce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "qopt/rng.hpp"

namespace qopt {

int required_qubits(int num_vars, int weight) {
  if (weight != 2) throw CapacityExceeded("required_qubits: only weight-2 encodings supported");
  if (num_vars < 1) throw DimensionMismatch("required_qubits: need at least one variable");
  int n = 1;
  while (3LL * n * (n - 1) / 2 < num_vars) ++n;
  return n;
}

PceEncoding build_encoding(int num_vars, int qubits, int weight) {
  if (weight != 2) throw CapacityExceeded("build_encoding: only weight-2 encodings supported");
  if (3LL * qubits * (qubits - 1) / 2 < num_vars)
    throw CapacityExceeded("build_encoding: " + std::to_string(qubits) +
                           " qubits cannot host " + std::to_string(num_vars) + " correlators");
  PceEncoding enc;
  enc.num_vars = num_vars;
  enc.qubits = qubits;
  enc.weight = weight;
  enc.strings.reserve(static_cast<std::size_t>(num_vars));
  static constexpr char kBases[3] = {'X', 'Y', 'Z'};
  for (int a = 0; a < qubits && static_cast<int>(enc.strings.size()) < num_vars; ++a)
    for (int b = a + 1; b < qubits && static_cast<int>(enc.strings.size()) < num_vars; ++b)
      for (char basis : kBases) {
        if (static_cast<int>(enc.strings.size()) == num_vars) break;
        enc.strings.push_back(PauliString{{{a, basis}, {b, basis}}});
      }
  return enc;
}

std::vector<double> measure_correlators(const StateVector& state, const PceEncoding& enc) {
  std::vector<double> out;
  out.reserve(enc.strings.size());
  for (const PauliString& p : enc.strings) out.push_back(pauli_expectation(state, p));
  return out;
}

std::vector<double> estimate_correlators(const StateVector& state, const PceEncoding& enc,
                                         int shots, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(enc.strings.size());
  constexpr double kHalfPi = 1.57079632679489661923;
  for (std::size_t i = 0; i < enc.strings.size(); ++i) {
    StateVector rotated = state;
    for (const PauliTerm& t : enc.strings[i].terms) {
      if (t.basis == 'X') rotated.apply_ry(t.qubit, -kHalfPi);
      if (t.basis == 'Y') rotated.apply_rx(t.qubit, kHalfPi);
    }
    const auto samples = sample_basis_indices(rotated, shots, seed + i);
    long long parity_sum = 0;
    for (std::uint64_t z : samples) {
      int parity = 1;
      for (const PauliTerm& t : enc.strings[i].terms)
        if ((z >> t.qubit) & 1) parity = -parity;
      parity_sum += parity;
    }
    out.push_back(static_cast<double>(parity_sum) / static_cast<double>(shots));
  }
  return out;
}

std::vector<int> decode_bits(std::span<const double> correlators) {
  std::vector<int> spins(correlators.size());
  for (std::size_t i = 0; i < correlators.size(); ++i)
    spins[i] = correlators[i] < 0.0 ? -1 : 1;  // exact zero decodes to +1
  return spins;
}

Bits spins_to_binary(std::span<const int> spins) {
  Bits bits(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i)
    bits[i] = static_cast<std::uint8_t>(spins[i] > 0 ? 1 : 0);
  return bits;
}

Circuit build_brickwork(const BrickworkConfig& config) {
  const int n = config.qubits;
  if (n < 2) throw DimensionMismatch("build_brickwork: need at least 2 qubits");
  Circuit circ;
  circ.qubits = n;
  const int interval =
      std::max(1, config.rxx_rounds / std::max(1, config.rotation_layers));
  int rotations_placed = 0;
  static constexpr GateKind kAxes[3] = {GateKind::rx, GateKind::ry, GateKind::rz};
  for (int round = 0; round < config.rxx_rounds; ++round) {
    if (rotations_placed < config.rotation_layers && round % interval == 0) {
      const GateKind axis = kAxes[rotations_placed % 3];
      for (int q = 0; q < n; ++q) {
        const int slot = circ.add_param();
        switch (axis) {
          case GateKind::rx: circ.push_rx(q, slot); break;
          case GateKind::ry: circ.push_ry(q, slot); break;
          default: circ.push_rz(q, slot); break;
        }
      }
      ++rotations_placed;
    }
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) circ.push_rxx(a, b, circ.add_param());
  }
  return circ;
}

Circuit build_brickwork(int qubits) {
  BrickworkConfig config;
  config.qubits = qubits;
  return build_brickwork(config);
}

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

double tanh_vector(std::span<const double> correlators, double alpha, std::vector<double>& t) {
  t.resize(correlators.size());
  double sumsq = 0.0;
  for (std::size_t i = 0; i < correlators.size(); ++i) {
    t[i] = std::tanh(alpha * correlators[i]);
    sumsq += t[i] * t[i];
  }
  return sumsq;
}

double regularizer(double beta, double nu, double sumsq, std::size_t m) {
  if (m == 0) return 0.0;
  const double mean = sumsq / static_cast<double>(m);
  return beta * nu * mean * mean;
}

}  // namespace

double poljak_turzik_bound(const WeightedGraph& graph) {
  double total = 0.0;
  for (const WeightedEdge& e : graph.edges) total += e.weight;

  std::vector<WeightedEdge> sorted = graph.edges;
  std::sort(sorted.begin(), sorted.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  DisjointSet ds(graph.vertices);
  double tree = 0.0;
  for (const WeightedEdge& e : sorted)
    if (ds.unite(e.u, e.v)) tree += e.weight;

  return total / 2.0 + tree / 4.0;
}

double qubo_pce_loss(const IsingModel& ising, std::span<const double> correlators,
                     const LossConfig& cfg) {
  if (correlators.size() != ising.n)
    throw DimensionMismatch("qubo_pce_loss: correlator count != spin count");
  std::vector<double> t;
  const double sumsq = tanh_vector(correlators, cfg.alpha, t);

  double frob_sq = 0.0;
  double loss = 0.0;
  for (std::size_t a = 0; a < ising.n; ++a) {
    loss += ising.h[a] * t[a];
    for (std::size_t b = a + 1; b < ising.n; ++b) {
      const double j = ising.coupling(a, b);
      loss += 2.0 * j * t[a] * t[b];
      frob_sq += 2.0 * j * j;
    }
  }
  const double nu = cfg.c_scale * std::sqrt(frob_sq);
  return loss + regularizer(cfg.beta, nu, sumsq, ising.n);
}

double qubo_pce_loss_literal(const QuboModel& qubo, std::span<const double> correlators,
                             const LossConfig& cfg) {
  if (correlators.size() != qubo.n)
    throw DimensionMismatch("qubo_pce_loss_literal: correlator count != variable count");
  std::vector<double> t;
  const double sumsq = tanh_vector(correlators, cfg.alpha, t);

  double frob_sq = 0.0;
  double loss = 0.0;
  for (std::size_t a = 0; a < qubo.n; ++a) {
    loss += (qubo.linear[a] + qubo.at(a, a)) * t[a] * t[a];
    for (std::size_t b = a + 1; b < qubo.n; ++b) {
      const double w = qubo.at(a, b) + qubo.at(b, a);
      loss += w * t[a] * t[b];
      frob_sq += 2.0 * qubo.at(a, b) * qubo.at(a, b);
    }
    frob_sq += qubo.at(a, a) * qubo.at(a, a);
  }
  const double nu = cfg.c_scale * std::sqrt(frob_sq);
  return loss + regularizer(cfg.beta, nu, sumsq, qubo.n);
}

double maxcut_pce_loss(const WeightedGraph& graph, std::span<const double> correlators,
                       const LossConfig& cfg) {
  if (static_cast<int>(correlators.size()) != graph.vertices)
    throw DimensionMismatch("maxcut_pce_loss: correlator count != vertex count");
  std::vector<double> t;
  const double sumsq = tanh_vector(correlators, cfg.alpha, t);
  double loss = 0.0;
  for (const WeightedEdge& e : graph.edges)
    loss += e.weight * t[static_cast<std::size_t>(e.u)] * t[static_cast<std::size_t>(e.v)];
  const double nu = cfg.c_scale * poljak_turzik_bound(graph);
  return loss + regularizer(cfg.beta, nu, sumsq, static_cast<std::size_t>(graph.vertices));
}

std::vector<double> PceContext::correlators(std::span<const double> theta) const {
  const StateVector state = run_circuit(ansatz, theta);
  if (shot_mode) {
    // Derive a fresh stream per evaluation from the parameter values so
    // repeated calls stay reproducible.
    std::uint64_t h = shot_seed;
    for (double v : theta) {
      std::uint64_t bits;
      static_assert(sizeof bits == sizeof v);
      std::memcpy(&bits, &v, sizeof bits);
      h = h * 0x100000001b3ULL + bits;
    }
    return estimate_correlators(state, encoding, shots, h);
  }
  return measure_correlators(state, encoding);
}

double PceContext::loss_value(std::span<const double> theta) const {
  const std::vector<double> c = correlators(theta);
  if (loss.mode == LossMode::paper_literal) return qubo_pce_loss_literal(*qubo, c, loss);
  return qubo_pce_loss(ising, c, loss);
}

double PceContext::decoded_cost(std::span<const double> theta, Bits* bits_out) const {
  const std::vector<double> c = correlators(theta);
  const std::vector<int> spins = decode_bits(c);
  Bits bits = spins_to_binary(spins);
  const double value = evaluate(*qubo, bits);
  if (bits_out) *bits_out = std::move(bits);
  return value;
}

PceContext make_pce_context(const QuboModel& qubo, const LossConfig& loss, int qubit_cap) {
  PceContext ctx;
  ctx.qubo = &qubo;
  ctx.ising = qubo_to_ising(qubo);
  const int n = required_qubits(static_cast<int>(qubo.n));
  if (n > qubit_cap)
    throw QubitCapExceeded("pce: " + std::to_string(qubo.n) + " variables need " +
                           std::to_string(n) + " qubits, cap is " + std::to_string(qubit_cap));
  ctx.encoding = build_encoding(static_cast<int>(qubo.n), n);
  BrickworkConfig config;
  config.qubits = n;
  ctx.ansatz = build_brickwork(config);
  ctx.loss = loss;
  return ctx;
}

std::string RoundRecord::to_json() const {
  nlohmann::json j;
  j["round"] = round;
  j["perturbation"] = perturbation;
  j["failures"] = failures;
  j["cost"] = cost;
  j["best"] = best;
  j["branch"] = branch;
  return j.dump();
}

MultiStepResult multi_step_optimize(const PceContext& ctx, const ReoptOptions& options,
                                    std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t dim = static_cast<std::size_t>(ctx.ansatz.param_count);
  constexpr double kPi = 3.14159265358979323846;

  ReoptState state;
  state.theta.resize(dim);
  for (double& v : state.theta) v = rng.uniform(-kPi, kPi);
  state.perturbation = options.perturbation;
  state.trend.assign(dim, 0.0);
  state.best_cost = std::numeric_limits<double>::infinity();

  MultiStepResult result;
  result.best_cost = state.best_cost;

  auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  const Objective loss = [&ctx](std::span<const double> theta) {
    return ctx.loss_value(theta);
  };

  int sub_threshold_streak = 0;
  bool stopped = false;
  while (state.round < options.max_rounds &&
         state.failures < options.max_no_improvement_rounds) {
    if (options.should_stop && options.should_stop()) {
      stopped = true;
      break;
    }
    ++state.round;
    const double p_round = state.round % 3 == 0 ? options.exploration * state.perturbation
                                                : state.perturbation;

    // Candidate start: random perturbation scaled by the failure count plus a
    // directional pull along the trend.
    std::vector<double> candidate(dim);
    const double sigma = p_round * (1.0 + static_cast<double>(state.failures) / 5.0);
    for (std::size_t i = 0; i < dim; ++i)
      candidate[i] = state.theta[i] + rng.normal(0.0, sigma) + p_round * sgn(state.trend[i]);

    NelderMeadOptions nm;
    nm.max_evaluations = options.local_budget;
    nm.should_stop = options.should_stop;
    const NelderMeadResult local = local_optimize(loss, candidate, nm);
    const double cost = ctx.decoded_cost(local.point);

    const double previous_best = state.best_cost;
    RoundRecord record;
    record.round = state.round;
    record.perturbation = p_round;
    record.cost = cost;

    if (cost < state.best_cost) {
      state.best_theta = local.point;
      state.best_cost = cost;
      state.failures = 0;
      state.perturbation *= options.decay;
      record.branch = "improve";
    } else {
      ++state.failures;
      if (state.failures >= options.restart_threshold) {
        for (double& v : state.theta) v = rng.uniform(-kPi, kPi);
        record.branch = "restart";
      } else if (state.failures % 2 == 0) {
        for (std::size_t i = 0; i < dim; ++i)
          state.theta[i] = state.best_theta[i] +
                           options.blend_step * state.perturbation * sgn(state.trend[i]);
        record.branch = "blend";
      } else {
        const double strong = 2.0 * state.perturbation;
        const double s2 = strong * (1.0 + static_cast<double>(state.failures) / 5.0);
        for (std::size_t i = 0; i < dim; ++i)
          state.theta[i] = state.best_theta[i] + rng.normal(0.0, s2) + strong * sgn(state.trend[i]);
        record.branch = "perturb";
      }
    }

    // Trend points from the pre-update theta toward the round optimum and is
    // weighted by the cost gap; zero right after an improvement.
    const double gap = std::abs(state.best_cost - cost);
    for (std::size_t i = 0; i < dim; ++i)
      state.trend[i] = sgn(local.point[i] - state.theta[i]) * gap;
    if (record.branch == "improve") state.theta = local.point;

    record.failures = state.failures;
    record.best = state.best_cost;
    result.rounds.push_back(record);

    const bool sub_threshold =
        !std::isinf(previous_best) &&
        previous_best - state.best_cost <=
            options.early_stop_threshold * std::max(1.0, std::abs(previous_best));
    sub_threshold_streak = sub_threshold ? sub_threshold_streak + 1 : 0;
    if (sub_threshold_streak >= options.early_stop_rounds) break;
  }

  if (state.best_theta.empty()) {
    // No round completed (zero budget); fall back to the initial point.
    state.best_theta = state.theta;
    state.best_cost = ctx.decoded_cost(state.theta);
  }
  result.best_theta = state.best_theta;
  result.best_cost = state.best_cost;
  ctx.decoded_cost(result.best_theta, &result.bits);
  result.status = stopped ? OptStatus::stopped : OptStatus::converged;
  return result;
}

SwapResult bit_swap_search(const Bits& start, const QuboModel& qubo, int max_k,
                           long long budget) {
  if (start.size() != qubo.n) throw DimensionMismatch("bit_swap_search: bitstring length");
  if (max_k < 1 || max_k > 2) throw DimensionMismatch("bit_swap_search: max_k must be 1 or 2");

  SwapResult result;
  result.bits = start;
  const std::size_t n = qubo.n;

  std::vector<double> rowsum(n, 0.0);  // sum_{j != k} Q_kj x_j
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      if (j != k && result.bits[j]) rowsum[k] += qubo.at(k, j);
  result.value = evaluate(qubo, result.bits);

  auto flip_delta = [&](std::size_t k) {
    const double base = qubo.linear[k] + qubo.at(k, k) + 2.0 * rowsum[k];
    return result.bits[k] ? -base : base;
  };
  auto apply_flip = [&](std::size_t k) {
    const double sign = result.bits[k] ? -1.0 : 1.0;
    result.bits[k] ^= 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) rowsum[j] += sign * qubo.at(j, k);
  };

  constexpr double kImprove = -1e-12;
  for (;;) {
    double best_delta = 0.0;
    std::size_t best_i = n, best_j = n;

    for (std::size_t k = 0; k < n; ++k) {
      if (++result.evaluations > budget) {
        result.budget_exhausted = true;
        return result;
      }
      const double d = flip_delta(k);
      if (d < best_delta + kImprove && d < kImprove && d < best_delta) {
        best_delta = d;
        best_i = k;
        best_j = n;
      }
    }

    if (best_i == n && max_k >= 2) {
      for (std::size_t a = 0; a < n; ++a) {
        const double da = flip_delta(a);
        const double sa = result.bits[a] ? -1.0 : 1.0;
        for (std::size_t b = a + 1; b < n; ++b) {
          if (++result.evaluations > budget) {
            result.budget_exhausted = true;
            return result;
          }
          const double sb = result.bits[b] ? -1.0 : 1.0;
          const double d = da + flip_delta(b) + 2.0 * sa * sb * qubo.at(a, b);
          if (d < kImprove && d < best_delta) {
            best_delta = d;
            best_i = a;
            best_j = b;
          }
        }
      }
    }

    if (best_i == n) break;
    apply_flip(best_i);
    if (best_j < n) apply_flip(best_j);
    result.value += best_delta;
  }

  // Recompute once to shed accumulated increments.
  result.value = evaluate(qubo, result.bits);
  return result;
}

BenchmarkRecord solve_pce(const QuboModel& qubo, const PceOptions& options, std::uint64_t seed,
                          MultiStepResult* round_log) {
  using clock = std::chrono::steady_clock;

  PceContext ctx = make_pce_context(qubo, options.loss, options.qubit_cap);
  ctx.shot_mode = options.shot_mode;
  ctx.shots = options.shots;
  ctx.shot_seed = seed;

  ReoptOptions reopt = options.reopt;

  const auto t0 = clock::now();
  MultiStepResult steps = multi_step_optimize(ctx, reopt, seed);
  const auto t1 = clock::now();
  SwapResult swap = bit_swap_search(steps.bits, qubo, options.max_swap_k, options.swap_budget);
  const auto t2 = clock::now();

  BenchmarkRecord record;
  record.method = "pce";
  record.status = steps.status == OptStatus::stopped ? RunStatus::timeout : RunStatus::ok;
  record.objective = swap.value;
  record.objective_pre_postprocess = steps.best_cost;
  record.qubits = ctx.encoding.qubits;
  record.resources = resource_summary(ctx.ansatz);
  record.seed = seed;
  record.optimize_seconds = std::chrono::duration<double>(t1 - t0).count();
  record.postprocess_seconds = std::chrono::duration<double>(t2 - t1).count();
  record.solution_bits = swap.bits;
  if (round_log) *round_log = std::move(steps);
  return record;
}

}  // namespace qopt
