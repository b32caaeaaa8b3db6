#include "qopt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "qopt/rng.hpp"

namespace qopt {

namespace {

// Whitespace token stream that remembers line numbers and the section being
// read, so truncated files report what is missing.
class TokenReader {
 public:
  TokenReader(std::istream& in, std::string filename)
      : in_(in), filename_(std::move(filename)) {}

  long long next_int(const std::string& section) {
    const std::string tok = next_token(section);
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(filename_, "line " + std::to_string(line_),
                       "expected integer for " + section + ", got '" + tok + "'");
    }
  }

  double next_double(const std::string& section) {
    const std::string tok = next_token(section);
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(filename_, "line " + std::to_string(line_),
                       "expected number for " + section + ", got '" + tok + "'");
    }
  }

  std::string next_token(const std::string& section) {
    std::string tok;
    char c;
    while (in_.get(c)) {
      if (c == '\n') ++line_;
      if (!std::isspace(static_cast<unsigned char>(c))) {
        tok += c;
        break;
      }
    }
    if (tok.empty())
      throw ParseError(filename_, "end of file", "missing " + section);
    while (in_.get(c)) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        break;
      }
      tok += c;
    }
    return tok;
  }

  bool at_end() {
    char c;
    while (in_.get(c)) {
      if (c == '\n') ++line_;
      if (!std::isspace(static_cast<unsigned char>(c))) {
        in_.unget();
        return false;
      }
    }
    return true;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  std::string filename_;
  int line_ = 1;
};

}  // namespace

// ---------------------------------------------------------------------------
// MDKP
// ---------------------------------------------------------------------------

void MdkpInstance::validate() const {
  if (profits.size() != items) throw DimensionMismatch("mdkp: |profits| != items");
  if (weights.size() != dimensions) throw DimensionMismatch("mdkp: weight rows != dimensions");
  for (const auto& row : weights)
    if (row.size() != items) throw DimensionMismatch("mdkp: weight row width != items");
  if (capacities.size() != dimensions) throw DimensionMismatch("mdkp: |capacities| != dimensions");
}

IlpModel mdkp_to_ilp(const MdkpInstance& inst) {
  inst.validate();
  IlpModel ilp;
  ilp.sense = Sense::maximize;
  ilp.objective = inst.profits;
  ilp.upper_bounds.assign(inst.items, 1);
  ilp.a_ineq = inst.weights;
  ilp.b_ineq = inst.capacities;
  ilp.var_names.reserve(inst.items);
  for (std::size_t i = 0; i < inst.items; ++i) ilp.var_names.push_back("x" + std::to_string(i + 1));
  return ilp;
}

std::vector<double> tightness_ratios(const MdkpInstance& inst) {
  inst.validate();
  std::vector<double> ratios(inst.dimensions);
  for (std::size_t j = 0; j < inst.dimensions; ++j) {
    double total = 0.0;
    for (double w : inst.weights[j]) total += w;
    ratios[j] = total > 0.0 ? inst.capacities[j] / total
                            : std::numeric_limits<double>::infinity();
  }
  return ratios;
}

MdkpInstance parse_mdkp(std::istream& in, const std::string& filename) {
  TokenReader r(in, filename);
  MdkpInstance inst;
  inst.name = filename;
  const long long n = r.next_int("item count");
  const long long m = r.next_int("dimension count");
  if (n < 0 || m < 0) throw ParseError(filename, "header", "negative sizes");
  const double opt = r.next_double("known optimum");
  if (opt != 0.0) inst.known_optimum = opt;
  inst.items = static_cast<std::size_t>(n);
  inst.dimensions = static_cast<std::size_t>(m);
  inst.profits.reserve(inst.items);
  for (std::size_t i = 0; i < inst.items; ++i)
    inst.profits.push_back(r.next_double("profits"));
  inst.weights.assign(inst.dimensions, {});
  for (std::size_t j = 0; j < inst.dimensions; ++j) {
    inst.weights[j].reserve(inst.items);
    for (std::size_t i = 0; i < inst.items; ++i)
      inst.weights[j].push_back(r.next_double("weights row " + std::to_string(j + 1)));
  }
  for (std::size_t j = 0; j < inst.dimensions; ++j)
    inst.capacities.push_back(r.next_double("capacities"));
  return inst;
}

MdkpInstance parse_mdkp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "open", "cannot open");
  MdkpInstance inst = parse_mdkp(in, path);
  // Use the file stem as the instance name.
  const auto slash = path.find_last_of("/\\");
  inst.name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = inst.name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) inst.name = inst.name.substr(0, dot);
  return inst;
}

void write_mdkp(std::ostream& out, const MdkpInstance& inst) {
  out << inst.items << ' ' << inst.dimensions << ' '
      << (inst.known_optimum ? *inst.known_optimum : 0.0) << '\n';
  for (std::size_t i = 0; i < inst.items; ++i)
    out << inst.profits[i] << (i + 1 == inst.items ? "\n" : " ");
  for (std::size_t j = 0; j < inst.dimensions; ++j)
    for (std::size_t i = 0; i < inst.items; ++i)
      out << inst.weights[j][i] << (i + 1 == inst.items ? "\n" : " ");
  for (std::size_t j = 0; j < inst.dimensions; ++j)
    out << inst.capacities[j] << (j + 1 == inst.dimensions ? "\n" : " ");
}

MdkpInstance random_mdkp(std::size_t items, std::size_t dimensions, double alpha, Rng& rng,
                         bool integral_capacities) {
  MdkpInstance inst;
  inst.items = items;
  inst.dimensions = dimensions;
  inst.name = "random_mdkp";
  for (std::size_t i = 0; i < items; ++i)
    inst.profits.push_back(static_cast<double>(rng.uniform_int(1, 9)));
  inst.weights.assign(dimensions, {});
  for (std::size_t j = 0; j < dimensions; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < items; ++i) {
      const double w = static_cast<double>(rng.uniform_int(0, 5));
      inst.weights[j].push_back(w);
      total += w;
    }
    if (total == 0.0) {
      const std::size_t i = static_cast<std::size_t>(rng.uniform_index(items));
      inst.weights[j][i] = 1.0;
      total = 1.0;
    }
    double cap = alpha * total;
    if (integral_capacities) cap = std::max(1.0, std::floor(cap));
    inst.capacities.push_back(cap);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// MIS
// ---------------------------------------------------------------------------

void MisGraph::normalize() {
  std::vector<std::pair<int, int>> cleaned;
  cleaned.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= vertices)
      throw IndexOutOfRange("mis: edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") outside vertex range");
    cleaned.emplace_back(u, v);
  }
  std::sort(cleaned.begin(), cleaned.end());
  cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
  edges = std::move(cleaned);
}

std::vector<std::vector<int>> MisGraph::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertices));
  for (auto [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return adj;
}

bool MisGraph::is_independent(std::span<const int> set) const {
  std::vector<char> in_set(static_cast<std::size_t>(vertices), 0);
  for (int v : set) {
    if (v < 0 || v >= vertices) return false;
    in_set[static_cast<std::size_t>(v)] = 1;
  }
  for (auto [u, v] : edges)
    if (in_set[static_cast<std::size_t>(u)] && in_set[static_cast<std::size_t>(v)]) return false;
  return true;
}

IlpModel mis_to_ilp(const MisGraph& graph) {
  IlpModel ilp;
  ilp.sense = Sense::maximize;
  ilp.objective.assign(static_cast<std::size_t>(graph.vertices), 1.0);
  ilp.upper_bounds.assign(static_cast<std::size_t>(graph.vertices), 1);
  for (auto [u, v] : graph.edges) {
    std::vector<double> row(static_cast<std::size_t>(graph.vertices), 0.0);
    row[static_cast<std::size_t>(u)] = 1.0;
    row[static_cast<std::size_t>(v)] = 1.0;
    ilp.a_ineq.push_back(std::move(row));
    ilp.b_ineq.push_back(1.0);
  }
  for (int v = 0; v < graph.vertices; ++v) ilp.var_names.push_back("x" + std::to_string(v + 1));
  return ilp;
}

QuboModel mis_to_qubo(const MisGraph& graph, double penalty) {
  const std::size_t n = static_cast<std::size_t>(graph.vertices);
  QuboModel qubo;
  qubo.n = n;
  qubo.q.assign(n * n, 0.0);
  qubo.linear.assign(n, -1.0);
  for (auto [u, v] : graph.edges) {
    qubo.at(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) += penalty / 2.0;
    qubo.at(static_cast<std::size_t>(v), static_cast<std::size_t>(u)) += penalty / 2.0;
  }
  qubo.var_map.vars.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    qubo.var_map.vars[i].bits = {i};
    qubo.var_map.vars[i].weights = {1};
  }
  return qubo;
}

namespace {

std::vector<std::set<int>> neighbor_sets(const MisGraph& graph) {
  std::vector<std::set<int>> nb(static_cast<std::size_t>(graph.vertices));
  for (auto [u, v] : graph.edges) {
    nb[static_cast<std::size_t>(u)].insert(v);
    nb[static_cast<std::size_t>(v)].insert(u);
  }
  return nb;
}

bool neighborhood_is_clique(const std::vector<std::set<int>>& nb, int v) {
  const auto& n_v = nb[static_cast<std::size_t>(v)];
  for (auto it = n_v.begin(); it != n_v.end(); ++it) {
    auto jt = it;
    for (++jt; jt != n_v.end(); ++jt)
      if (!nb[static_cast<std::size_t>(*it)].count(*jt)) return false;
  }
  return true;
}

}  // namespace

std::vector<int> find_simplicial(const MisGraph& graph) {
  const auto nb = neighbor_sets(graph);
  std::vector<int> out;
  for (int v = 0; v < graph.vertices; ++v)
    if (neighborhood_is_clique(nb, v)) out.push_back(v);
  return out;
}

PreprocessResult preprocess_mis(const MisGraph& graph) {
  PreprocessResult result;
  auto nb = neighbor_sets(graph);
  std::vector<char> alive(static_cast<std::size_t>(graph.vertices), 1);

  for (;;) {
    int picked = -1;
    for (int v = 0; v < graph.vertices; ++v) {
      if (!alive[static_cast<std::size_t>(v)]) continue;
      if (neighborhood_is_clique(nb, v)) {
        picked = v;
        break;
      }
    }
    if (picked < 0) break;

    PreprocessStep step;
    step.fixed_vertex = picked;
    result.fixed.push_back(picked);
    std::vector<int> to_delete(nb[static_cast<std::size_t>(picked)].begin(),
                               nb[static_cast<std::size_t>(picked)].end());
    step.deleted_neighbors = to_delete;
    to_delete.push_back(picked);
    for (int v : to_delete) {
      alive[static_cast<std::size_t>(v)] = 0;
      for (int u : nb[static_cast<std::size_t>(v)])
        nb[static_cast<std::size_t>(u)].erase(v);
      nb[static_cast<std::size_t>(v)].clear();
    }
    result.steps.push_back(std::move(step));
  }

  std::vector<int> compact(static_cast<std::size_t>(graph.vertices), -1);
  for (int v = 0; v < graph.vertices; ++v) {
    if (!alive[static_cast<std::size_t>(v)]) continue;
    compact[static_cast<std::size_t>(v)] = static_cast<int>(result.reduced_to_original.size());
    result.reduced_to_original.push_back(v);
  }
  result.reduced.vertices = static_cast<int>(result.reduced_to_original.size());
  result.reduced.name = graph.name.empty() ? "reduced" : graph.name + ".reduced";
  for (auto [u, v] : graph.edges)
    if (alive[static_cast<std::size_t>(u)] && alive[static_cast<std::size_t>(v)])
      result.reduced.edges.emplace_back(compact[static_cast<std::size_t>(u)],
                                        compact[static_cast<std::size_t>(v)]);
  result.reduced.normalize();
  return result;
}

std::vector<int> reconstruct_mis(const MisGraph& graph, std::span<const int> fixed,
                                 std::span<const int> reduced_solution) {
  std::vector<int> out(fixed.begin(), fixed.end());
  out.insert(out.end(), reduced_solution.begin(), reduced_solution.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!graph.is_independent(out))
    throw IndependenceViolation("reconstruct_mis: union is not independent");
  return out;
}

MisGraph parse_mis(std::istream& in, const std::string& filename,
                   std::vector<std::string>* warnings) {
  MisGraph graph;
  graph.name = filename;
  std::set<std::pair<int, int>> seen;
  int max_vertex = 0;
  bool have_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#' || first == "c") continue;
    if (first == "p") {
      if (!(ls >> graph.vertices))
        throw ParseError(filename, "line " + std::to_string(lineno), "bad 'p' header");
      have_header = true;
      continue;
    }
    int u = 0, v = 0;
    try {
      u = std::stoi(first);
    } catch (const std::exception&) {
      throw ParseError(filename, "line " + std::to_string(lineno),
                       "expected vertex id, got '" + first + "'");
    }
    if (!(ls >> v))
      throw ParseError(filename, "line " + std::to_string(lineno), "edge needs two endpoints");
    if (u < 1 || v < 1)
      throw ParseError(filename, "line " + std::to_string(lineno), "vertex ids are 1-based");
    max_vertex = std::max(max_vertex, std::max(u, v));
    if (u == v) {
      if (warnings)
        warnings->push_back(filename + ": line " + std::to_string(lineno) +
                            ": self-loop dropped");
      continue;
    }
    auto e = std::minmax(u - 1, v - 1);
    if (!seen.insert({e.first, e.second}).second) {
      if (warnings)
        warnings->push_back(filename + ": line " + std::to_string(lineno) +
                            ": duplicate edge dropped");
      continue;
    }
    graph.edges.emplace_back(e.first, e.second);
  }
  if (!have_header) graph.vertices = max_vertex;
  if (max_vertex > graph.vertices)
    throw ParseError(filename, "header", "edge references vertex beyond declared count");
  graph.normalize();
  return graph;
}

MisGraph parse_mis_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "open", "cannot open");
  MisGraph g = parse_mis(in, path, warnings);
  const auto slash = path.find_last_of("/\\");
  g.name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = g.name.find_last_of('.');
  if (dot != std::string::npos && dot > 0 && g.name.substr(dot) == ".txt")
    g.name = g.name.substr(0, dot);
  return g;
}

void write_mis(std::ostream& out, const MisGraph& graph) {
  out << "p " << graph.vertices << '\n';
  for (auto [u, v] : graph.edges) out << u + 1 << ' ' << v + 1 << '\n';
}

namespace {

int transposition_moves(std::uint64_t word, int bits, bool end_around,
                        std::uint64_t* out, int cap) {
  int count = 0;
  for (int p = 0; p + 1 < bits; ++p) {
    const std::uint64_t a = (word >> p) & 1, b = (word >> (p + 1)) & 1;
    if (a != b && count < cap)
      out[count++] = word ^ ((std::uint64_t{1} << p) | (std::uint64_t{1} << (p + 1)));
  }
  if (end_around && bits > 2) {
    const std::uint64_t a = word & 1, b = (word >> (bits - 1)) & 1;
    if (a != b && count < cap)
      out[count++] = word ^ (std::uint64_t{1} | (std::uint64_t{1} << (bits - 1)));
  }
  return count;
}

std::set<std::uint64_t> deletion_ball(std::uint64_t word, int bits) {
  std::set<std::uint64_t> ball;
  for (int p = 0; p < bits; ++p) {
    const std::uint64_t low = word & ((std::uint64_t{1} << p) - 1);
    const std::uint64_t high = (word >> (p + 1)) << p;
    ball.insert(low | high);
  }
  return ball;
}

}  // namespace

MisGraph generate_challenge_graph(ChallengeFamily family, int bits) {
  if (bits < 2 || bits > 16) throw DimensionMismatch("challenge graph: bits out of range");
  const std::uint64_t count = std::uint64_t{1} << bits;
  MisGraph graph;
  graph.vertices = static_cast<int>(count);

  if (family == ChallengeFamily::one_dc) {
    graph.name = "1dc." + std::to_string(count);
    std::vector<std::set<std::uint64_t>> balls;
    balls.reserve(count);
    for (std::uint64_t w = 0; w < count; ++w) balls.push_back(deletion_ball(w, bits));
    for (std::uint64_t u = 0; u < count; ++u)
      for (std::uint64_t v = u + 1; v < count; ++v) {
        bool conflict = false;
        for (std::uint64_t x : balls[u])
          if (balls[v].count(x)) {
            conflict = true;
            break;
          }
        if (conflict) graph.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
      }
  } else {
    const bool end_around = family == ChallengeFamily::one_et;
    graph.name = (end_around ? "1et." : "1tc.") + std::to_string(count);
    // Radius-1 balls under adjacent transpositions; conflict = intersecting
    // balls, i.e. transposition distance <= 2.
    std::vector<std::set<std::uint64_t>> balls(count);
    std::uint64_t moves[32];
    for (std::uint64_t w = 0; w < count; ++w) {
      balls[w].insert(w);
      const int k = transposition_moves(w, bits, end_around, moves, 32);
      for (int i = 0; i < k; ++i) balls[w].insert(moves[i]);
    }
    for (std::uint64_t u = 0; u < count; ++u)
      for (std::uint64_t v = u + 1; v < count; ++v) {
        bool conflict = false;
        for (std::uint64_t x : balls[u])
          if (balls[v].count(x)) {
            conflict = true;
            break;
          }
        if (conflict) graph.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
      }
  }
  graph.normalize();
  return graph;
}

MisGraph random_graph(int vertices, int max_edges, Rng& rng) {
  MisGraph graph;
  graph.vertices = vertices;
  graph.name = "random_graph";
  std::vector<std::pair<int, int>> all;
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v) all.emplace_back(u, v);
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(max_edges), all.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(all.size() - i));
    std::swap(all[i], all[j]);
    graph.edges.push_back(all[i]);
  }
  graph.normalize();
  return graph;
}

// ---------------------------------------------------------------------------
// QAP
// ---------------------------------------------------------------------------

void QapInstance::validate() const {
  if (flow.size() != size * size || distance.size() != size * size)
    throw DimensionMismatch("qap: matrices must be n*n");
}

double QapInstance::assignment_cost(std::span<const int> perm) const {
  if (perm.size() != size) throw DimensionMismatch("qap: permutation length != n");
  double cost = 0.0;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      cost += flow[i * size + j] *
              distance[static_cast<std::size_t>(perm[i]) * size + static_cast<std::size_t>(perm[j])];
  return cost;
}

double default_qap_penalty(const QapInstance& inst) {
  double f_max = 0.0, d_max = 0.0;
  for (double f : inst.flow) f_max = std::max(f_max, std::abs(f));
  for (double d : inst.distance) d_max = std::max(d_max, std::abs(d));
  return 2.0 * std::max(1.0, f_max) * std::max(1.0, d_max) * static_cast<double>(inst.size);
}

QuboModel qap_to_qubo(const QapInstance& inst, double penalty) {
  inst.validate();
  const std::size_t n = inst.size;
  const std::size_t nn = n * n;
  QuboModel qubo;
  qubo.n = nn;
  qubo.q.assign(nn * nn, 0.0);
  qubo.linear.assign(nn, 0.0);

  auto var = [n](std::size_t i, std::size_t k) { return i * n + k; };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double f = inst.flow[i * n + j];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const double w = f * inst.distance[k * n + l];
          if (w == 0.0) continue;
          const std::size_t a = var(i, k), b = var(j, l);
          if (a == b) {
            qubo.linear[a] += w;  // x^2 = x
          } else {
            qubo.at(a, b) += w / 2.0;
            qubo.at(b, a) += w / 2.0;
          }
        }
    }

  // One-hot rows (each facility somewhere) and columns (each location used).
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t k = 0; k < n; ++k) terms.emplace_back(var(i, k), 1.0);
    add_squared_penalty(qubo, terms, -1.0, penalty);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t i = 0; i < n; ++i) terms.emplace_back(var(i, k), 1.0);
    add_squared_penalty(qubo, terms, -1.0, penalty);
  }

  qubo.var_map.vars.resize(nn);
  for (std::size_t a = 0; a < nn; ++a) {
    qubo.var_map.vars[a].bits = {a};
    qubo.var_map.vars[a].weights = {1};
  }
  return qubo;
}

QapInstance parse_qap(std::istream& in, const std::string& filename) {
  TokenReader r(in, filename);
  QapInstance inst;
  inst.name = filename;
  const long long n = r.next_int("size");
  if (n <= 0) throw ParseError(filename, "header", "size must be positive");
  inst.size = static_cast<std::size_t>(n);
  inst.flow.reserve(inst.size * inst.size);
  for (std::size_t i = 0; i < inst.size * inst.size; ++i)
    inst.flow.push_back(r.next_double("flow matrix"));
  inst.distance.reserve(inst.size * inst.size);
  for (std::size_t i = 0; i < inst.size * inst.size; ++i)
    inst.distance.push_back(r.next_double("distance matrix"));
  return inst;
}

QapInstance parse_qap_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "open", "cannot open");
  QapInstance inst = parse_qap(in, path);
  const auto slash = path.find_last_of("/\\");
  inst.name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = inst.name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) inst.name = inst.name.substr(0, dot);
  return inst;
}

void write_qap(std::ostream& out, const QapInstance& inst) {
  out << inst.size << '\n';
  for (std::size_t i = 0; i < inst.size; ++i)
    for (std::size_t j = 0; j < inst.size; ++j)
      out << inst.flow[i * inst.size + j] << (j + 1 == inst.size ? "\n" : " ");
  out << '\n';
  for (std::size_t i = 0; i < inst.size; ++i)
    for (std::size_t j = 0; j < inst.size; ++j)
      out << inst.distance[i * inst.size + j] << (j + 1 == inst.size ? "\n" : " ");
}

// ---------------------------------------------------------------------------
// MSP
// ---------------------------------------------------------------------------

void MspInstance::validate() const {
  if (demand.size() != retailers) throw DimensionMismatch("msp: demand rows != retailers");
  for (const auto& row : demand)
    if (row.size() != products) throw DimensionMismatch("msp: demand row width != products");
  if (targets.size() != retailers) throw DimensionMismatch("msp: |targets| != retailers");
}

MspInstance generate_msp(std::size_t retailers, long long spread, std::uint64_t seed,
                         bool interval_targets) {
  if (retailers < 2) throw DimensionMismatch("generate_msp: need at least 2 retailers");
  if (spread < 1) throw DimensionMismatch("generate_msp: spread must be >= 1");
  MspInstance inst;
  inst.retailers = retailers;
  inst.products = 10 * (retailers - 1);
  inst.spread = spread;
  inst.seed = seed;
  inst.name = std::to_string(retailers) + "x" + std::to_string(inst.products) + "_s" +
              std::to_string(seed);
  Rng rng(seed);
  inst.demand.assign(retailers, {});
  for (std::size_t i = 0; i < retailers; ++i) {
    inst.demand[i].reserve(inst.products);
    for (std::size_t j = 0; j < inst.products; ++j)
      inst.demand[i].push_back(rng.uniform_int(0, 99));
  }
  for (std::size_t i = 0; i < retailers; ++i) {
    long long total = 0;
    for (long long a : inst.demand[i]) total += a;
    if (interval_targets) {
      // b_i drawn from [ (S-D)/2, (S-D)/2 + D - 1 ], floored to stay integral.
      const long long lo = static_cast<long long>(
          std::floor(static_cast<double>(total - spread) / 2.0));
      inst.targets.push_back(lo + rng.uniform_int(0, spread - 1));
    } else {
      inst.targets.push_back(total / 2);  // 50/50 split, floor
    }
  }
  return inst;
}

long long msp_slack_bound(const MspInstance& inst, std::size_t retailer) {
  long long total = 0;
  for (long long a : inst.demand[retailer]) total += a;
  return std::max(std::llabs(inst.targets[retailer]),
                  std::llabs(inst.targets[retailer] - total));
}

IlpModel msp_to_ilp(const MspInstance& inst) {
  inst.validate();
  const std::size_t n = inst.products, m = inst.retailers;
  IlpModel ilp;
  ilp.sense = Sense::minimize;
  ilp.objective.assign(n + 2 * m, 0.0);
  ilp.upper_bounds.assign(n + 2 * m, 1);
  for (std::size_t j = 0; j < n; ++j) ilp.var_names.push_back("x" + std::to_string(j + 1));
  for (std::size_t i = 0; i < m; ++i) {
    const long long bound = msp_slack_bound(inst, i);
    ilp.objective[n + 2 * i] = 1.0;      // s_i+
    ilp.objective[n + 2 * i + 1] = 1.0;  // s_i-
    ilp.upper_bounds[n + 2 * i] = bound;
    ilp.upper_bounds[n + 2 * i + 1] = bound;
    ilp.var_names.push_back("s" + std::to_string(i + 1) + "+");
    ilp.var_names.push_back("s" + std::to_string(i + 1) + "-");
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(n + 2 * m, 0.0);
    for (std::size_t j = 0; j < n; ++j) row[j] = static_cast<double>(inst.demand[i][j]);
    row[n + 2 * i] = 1.0;
    row[n + 2 * i + 1] = -1.0;
    ilp.a_eq.push_back(std::move(row));
    ilp.b_eq.push_back(static_cast<double>(inst.targets[i]));
  }
  return ilp;
}

MspInstance parse_msp(std::istream& in, const std::string& filename) {
  TokenReader r(in, filename);
  MspInstance inst;
  inst.name = filename;
  if (r.next_token("magic 'msp'") != "msp")
    throw ParseError(filename, "line 1", "expected leading 'msp'");
  bool have_m = false, have_n = false;
  for (;;) {
    const std::string key = r.next_token("section key");
    if (key == "m") {
      inst.retailers = static_cast<std::size_t>(r.next_int("m"));
      have_m = true;
    } else if (key == "n") {
      inst.products = static_cast<std::size_t>(r.next_int("n"));
      have_n = true;
    } else if (key == "D") {
      inst.spread = r.next_int("D");
    } else if (key == "seed") {
      inst.seed = static_cast<std::uint64_t>(r.next_int("seed"));
    } else if (key == "name") {
      inst.name = r.next_token("name");
    } else if (key == "a") {
      break;
    } else {
      throw ParseError(filename, "line " + std::to_string(r.line()),
                       "unknown key '" + key + "'");
    }
  }
  if (!have_m || !have_n)
    throw ParseError(filename, "header", "m and n must precede the demand block");
  inst.demand.assign(inst.retailers, {});
  for (std::size_t i = 0; i < inst.retailers; ++i) {
    inst.demand[i].reserve(inst.products);
    for (std::size_t j = 0; j < inst.products; ++j)
      inst.demand[i].push_back(r.next_int("demand row " + std::to_string(i + 1)));
  }
  if (r.next_token("section 'b'") != "b")
    throw ParseError(filename, "line " + std::to_string(r.line()), "expected 'b' section");
  for (std::size_t i = 0; i < inst.retailers; ++i)
    inst.targets.push_back(r.next_int("targets"));
  return inst;
}

MspInstance parse_msp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "open", "cannot open");
  return parse_msp(in, path);
}

void write_msp(std::ostream& out, const MspInstance& inst) {
  out << "msp\n";
  if (!inst.name.empty()) out << "name " << inst.name << '\n';
  out << "m " << inst.retailers << '\n';
  out << "n " << inst.products << '\n';
  out << "D " << inst.spread << '\n';
  out << "seed " << inst.seed << '\n';
  out << "a\n";
  for (std::size_t i = 0; i < inst.retailers; ++i)
    for (std::size_t j = 0; j < inst.products; ++j)
      out << inst.demand[i][j] << (j + 1 == inst.products ? "\n" : " ");
  out << "b\n";
  for (std::size_t i = 0; i < inst.retailers; ++i)
    out << inst.targets[i] << (i + 1 == inst.retailers ? "\n" : " ");
}

}  // namespace qopt
