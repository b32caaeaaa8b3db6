#include "qopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace qopt {

BruteForceResult brute_force_qubo(const QuboModel& qubo) {
  const std::size_t n = qubo.n;
  if (n > 26) throw TooLarge("brute_force_qubo: dimension " + std::to_string(n) + " > 26");
  if (n == 0) return BruteForceResult{{}, qubo.offset};

  // Gray-code walk; flip deltas tracked through per-bit row sums.
  Bits x(n, 0);
  std::vector<double> rowsum(n, 0.0);  // sum_j Q_kj x_j
  double value = qubo.offset;
  Bits best = x;
  double best_value = value;

  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    const std::uint64_t next_gray = step ^ (step >> 1);
    const std::uint64_t changed = gray ^ next_gray;
    gray = next_gray;
    std::size_t k = 0;
    while (!((changed >> k) & 1)) ++k;

    const double delta = qubo.linear[k] + qubo.at(k, k) + 2.0 * rowsum[k];
    if (x[k]) {
      value -= delta;
      x[k] = 0;
      for (std::size_t j = 0; j < n; ++j) rowsum[j] -= qubo.at(j, k);
      rowsum[k] += qubo.at(k, k);  // row sums exclude the flipped bit itself
    } else {
      x[k] = 1;
      value += delta;
      for (std::size_t j = 0; j < n; ++j) rowsum[j] += qubo.at(j, k);
      rowsum[k] -= qubo.at(k, k);
    }

    if (value < best_value ||
        (value == best_value && std::lexicographical_compare(x.begin(), x.end(),
                                                             best.begin(), best.end()))) {
      best_value = value;
      best = x;
    }
  }
  return BruteForceResult{std::move(best), best_value};
}

IlpBruteForceResult brute_force_ilp(const IlpModel& ilp) {
  ilp.validate();
  const std::size_t n = ilp.num_vars();
  IlpBruteForceResult result;
  std::vector<long long> x(n, 0);
  const double sign = ilp.sense == Sense::maximize ? -1.0 : 1.0;
  double best = std::numeric_limits<double>::infinity();

  auto feasible = [&]() {
    for (std::size_t r = 0; r < ilp.a_eq.size(); ++r) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < n; ++i) lhs += ilp.a_eq[r][i] * static_cast<double>(x[i]);
      if (std::abs(lhs - ilp.b_eq[r]) > 1e-9) return false;
    }
    for (std::size_t r = 0; r < ilp.a_ineq.size(); ++r) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < n; ++i) lhs += ilp.a_ineq[r][i] * static_cast<double>(x[i]);
      if (lhs > ilp.b_ineq[r] + 1e-9) return false;
    }
    return true;
  };

  for (;;) {
    if (feasible()) {
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i) obj += ilp.objective[i] * static_cast<double>(x[i]);
      if (sign * obj < best) {
        best = sign * obj;
        result.assignment = x;
        result.objective = obj;
        result.feasible_found = true;
      }
    }
    // Odometer over the variable box.
    std::size_t i = 0;
    while (i < n && x[i] == ilp.upper_bounds[i]) x[i++] = 0;
    if (i == n) break;
    ++x[i];
  }
  return result;
}

namespace {

// Greedy clique cover of the candidate set: an independent set takes at most
// one vertex from each clique.
int clique_cover_bound(const std::vector<std::vector<char>>& adj,
                       const std::vector<int>& candidates) {
  int cliques = 0;
  std::vector<char> used(adj.size(), 0);
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    const int v = candidates[a];
    if (used[static_cast<std::size_t>(v)]) continue;
    used[static_cast<std::size_t>(v)] = 1;
    ++cliques;
    std::vector<int> clique{v};
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const int u = candidates[b];
      if (used[static_cast<std::size_t>(u)]) continue;
      bool joins = true;
      for (int w : clique)
        if (!adj[static_cast<std::size_t>(w)][static_cast<std::size_t>(u)]) {
          joins = false;
          break;
        }
      if (joins) {
        clique.push_back(u);
        used[static_cast<std::size_t>(u)] = 1;
      }
    }
  }
  return cliques;
}

struct MisSearch {
  const std::vector<std::vector<char>>& adj;
  const std::vector<std::vector<int>>& neighbors;
  long long budget;
  long long nodes = 0;
  bool exhausted = false;
  std::vector<int> best;
  std::vector<int> current;

  void run(std::vector<int> candidates) {
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    if (candidates.empty()) {
      if (current.size() > best.size()) best = current;
      return;
    }
    if (current.size() + static_cast<std::size_t>(clique_cover_bound(adj, candidates)) <=
        best.size())
      return;

    // Branch on the candidate with the most candidate neighbors.
    int pick = candidates[0];
    int pick_degree = -1;
    std::vector<char> in_cand(adj.size(), 0);
    for (int v : candidates) in_cand[static_cast<std::size_t>(v)] = 1;
    for (int v : candidates) {
      int d = 0;
      for (int u : neighbors[static_cast<std::size_t>(v)])
        if (in_cand[static_cast<std::size_t>(u)]) ++d;
      if (d > pick_degree) {
        pick_degree = d;
        pick = v;
      }
    }

    // Include pick.
    std::vector<int> next;
    next.reserve(candidates.size());
    for (int v : candidates)
      if (v != pick && !adj[static_cast<std::size_t>(pick)][static_cast<std::size_t>(v)])
        next.push_back(v);
    current.push_back(pick);
    run(std::move(next));
    current.pop_back();
    if (exhausted) return;

    // Exclude pick.
    std::vector<int> rest;
    rest.reserve(candidates.size());
    for (int v : candidates)
      if (v != pick) rest.push_back(v);
    run(std::move(rest));
  }
};

}  // namespace

MisResult exact_mis(const MisGraph& graph, long long node_budget) {
  const std::size_t n = static_cast<std::size_t>(graph.vertices);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [u, v] : graph.edges) {
    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
  }
  const auto neighbors = graph.adjacency();
  MisSearch search{adj, neighbors, node_budget};
  std::vector<int> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = static_cast<int>(v);
  search.run(std::move(all));

  MisResult result;
  result.set = search.best;
  std::sort(result.set.begin(), result.set.end());
  result.size = static_cast<int>(result.set.size());
  result.optimal = !search.exhausted;
  return result;
}

double optimality_gap(double best_known, double obtained, Sense sense) {
  if (best_known == 0.0) throw ZeroBaseline("optimality_gap: best_known is zero");
  const double diff = sense == Sense::maximize ? best_known - obtained : obtained - best_known;
  return diff / best_known * 100.0;
}

double rsq(double obtained, double best_known) {
  if (best_known <= 0.0) throw ZeroBaseline("rsq: best_known must be positive");
  return obtained / best_known * 100.0;
}

Feasibility check_feasibility(const MdkpInstance& inst, std::span<const long long> x) {
  if (x.size() < inst.items) throw DimensionMismatch("mdkp feasibility: assignment too short");
  Feasibility f;
  for (std::size_t j = 0; j < inst.dimensions; ++j) {
    double load = 0.0;
    for (std::size_t i = 0; i < inst.items; ++i)
      load += inst.weights[j][i] * static_cast<double>(x[i]);
    const double excess = load - inst.capacities[j];
    if (excess > 1e-9) {
      ++f.violated;
      f.magnitude += excess;
    }
  }
  f.feasible = f.violated == 0;
  return f;
}

Feasibility check_feasibility(const MisGraph& graph, std::span<const long long> x) {
  if (x.size() < static_cast<std::size_t>(graph.vertices))
    throw DimensionMismatch("mis feasibility: assignment too short");
  Feasibility f;
  for (auto [u, v] : graph.edges)
    if (x[static_cast<std::size_t>(u)] && x[static_cast<std::size_t>(v)]) {
      ++f.violated;
      f.magnitude += 1.0;
    }
  f.feasible = f.violated == 0;
  return f;
}

Feasibility check_feasibility(const QapInstance& inst, std::span<const long long> x) {
  const std::size_t n = inst.size;
  if (x.size() < n * n) throw DimensionMismatch("qap feasibility: assignment too short");
  Feasibility f;
  for (std::size_t i = 0; i < n; ++i) {
    long long row = 0;
    for (std::size_t k = 0; k < n; ++k) row += x[i * n + k];
    if (row != 1) {
      ++f.violated;
      f.magnitude += std::abs(static_cast<double>(row) - 1.0);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    long long col = 0;
    for (std::size_t i = 0; i < n; ++i) col += x[i * n + k];
    if (col != 1) {
      ++f.violated;
      f.magnitude += std::abs(static_cast<double>(col) - 1.0);
    }
  }
  f.feasible = f.violated == 0;
  return f;
}

Feasibility check_feasibility(const MspInstance& inst, std::span<const long long> x_and_slacks) {
  const std::size_t n = inst.products, m = inst.retailers;
  if (x_and_slacks.size() < n + 2 * m)
    throw DimensionMismatch("msp feasibility: assignment too short");
  Feasibility f;
  for (std::size_t i = 0; i < m; ++i) {
    long long lhs = 0;
    for (std::size_t j = 0; j < n; ++j) lhs += inst.demand[i][j] * x_and_slacks[j];
    lhs += x_and_slacks[n + 2 * i];
    lhs -= x_and_slacks[n + 2 * i + 1];
    const long long residual = lhs - inst.targets[i];
    if (residual != 0) {
      ++f.violated;
      f.magnitude += std::abs(static_cast<double>(residual));
    }
  }
  f.feasible = f.violated == 0;
  return f;
}

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::infeasible: return "infeasible";
    case RunStatus::failed: return "failed";
    case RunStatus::timeout: return "timeout";
  }
  return "?";
}

std::string BenchmarkRecord::to_json() const {
  nlohmann::json j;
  j["instance"] = instance;
  j["method"] = method;
  j["status"] = run_status_name(status);
  j["feasible"] = feasible;
  j["objective"] = objective;
  if (objective_pre_postprocess) j["objective_pre_postprocess"] = *objective_pre_postprocess;
  if (best_known) j["best_known"] = *best_known;
  if (gap_percent) j["gap_percent"] = *gap_percent;
  if (rsq_percent) j["rsq_percent"] = *rsq_percent;
  j["violations"] = violations;
  j["violation_magnitude"] = violation_magnitude;
  j["qubits"] = qubits;
  j["depth"] = resources.depth;
  j["gate_count"] = resources.gate_count;
  j["two_qubit_gates"] = resources.two_qubit_gates;
  j["parameters"] = resources.parameter_count;
  j["seed"] = seed;
  j["optimize_seconds"] = optimize_seconds;
  j["postprocess_seconds"] = postprocess_seconds;
  std::string bits;
  bits.reserve(solution_bits.size());
  for (auto b : solution_bits) bits += b ? '1' : '0';
  j["solution"] = bits;
  if (!detail.empty()) j["detail"] = detail;
  return j.dump();
}

BenchmarkRecord BenchmarkRecord::from_json(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  BenchmarkRecord r;
  r.instance = j.at("instance").get<std::string>();
  r.method = j.at("method").get<std::string>();
  const std::string status = j.at("status").get<std::string>();
  if (status == "ok") r.status = RunStatus::ok;
  else if (status == "infeasible") r.status = RunStatus::infeasible;
  else if (status == "failed") r.status = RunStatus::failed;
  else if (status == "timeout") r.status = RunStatus::timeout;
  r.feasible = j.at("feasible").get<bool>();
  r.objective = j.at("objective").get<double>();
  if (j.contains("objective_pre_postprocess"))
    r.objective_pre_postprocess = j["objective_pre_postprocess"].get<double>();
  if (j.contains("best_known")) r.best_known = j["best_known"].get<double>();
  if (j.contains("gap_percent")) r.gap_percent = j["gap_percent"].get<double>();
  if (j.contains("rsq_percent")) r.rsq_percent = j["rsq_percent"].get<double>();
  r.violations = j.at("violations").get<int>();
  r.violation_magnitude = j.at("violation_magnitude").get<double>();
  r.qubits = j.at("qubits").get<int>();
  r.resources.qubits = r.qubits;
  r.resources.depth = j.at("depth").get<int>();
  r.resources.gate_count = j.at("gate_count").get<int>();
  r.resources.two_qubit_gates = j.at("two_qubit_gates").get<int>();
  r.resources.parameter_count = j.at("parameters").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.optimize_seconds = j.at("optimize_seconds").get<double>();
  r.postprocess_seconds = j.at("postprocess_seconds").get<double>();
  const std::string bits = j.value("solution", std::string{});
  for (char c : bits) r.solution_bits.push_back(c == '1' ? 1 : 0);
  r.detail = j.value("detail", std::string{});
  return r;
}

void write_records(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  for (const auto& r : records) out << r.to_json() << '\n';
}

std::vector<BenchmarkRecord> read_records(std::istream& in) {
  std::vector<BenchmarkRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(BenchmarkRecord::from_json(line));
  }
  return records;
}

}  // namespace qopt
