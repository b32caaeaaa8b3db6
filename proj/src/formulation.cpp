#include "qopt/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace qopt {

void IlpModel::validate() const {
  const std::size_t n = num_vars();
  if (upper_bounds.size() != n)
    throw DimensionMismatch("ILP: |upper_bounds| != |objective|");
  if (a_eq.size() != b_eq.size())
    throw DimensionMismatch("ILP: equality rows/rhs mismatch");
  if (a_ineq.size() != b_ineq.size())
    throw DimensionMismatch("ILP: inequality rows/rhs mismatch");
  for (const auto& row : a_eq)
    if (row.size() != n) throw DimensionMismatch("ILP: equality row width != n");
  for (const auto& row : a_ineq)
    if (row.size() != n) throw DimensionMismatch("ILP: inequality row width != n");
  for (long long u : upper_bounds)
    if (u < 0) throw DimensionMismatch("ILP: negative upper bound");
  for (double b : b_eq)
    if (!std::isfinite(b)) throw DimensionMismatch("ILP: non-finite equality rhs");
  for (double b : b_ineq)
    if (!std::isfinite(b)) throw DimensionMismatch("ILP: non-finite inequality rhs");
}

std::size_t VariableMap::total_bits() const {
  std::size_t n = 0;
  for (const auto& g : vars) n += g.bits.size();
  for (const auto& g : slacks) n += g.bits.size();
  return n;
}

void QuboModel::validate() const {
  if (q.size() != n * n || linear.size() != n)
    throw DimensionMismatch("QUBO: inconsistent storage");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(at(i, j) - at(j, i)) > 1e-12)
        throw DimensionMismatch("QUBO: Q not symmetric");
}

double IsingModel::energy(std::span<const int> spins) const {
  if (spins.size() != n) throw DimensionMismatch("Ising: spin count mismatch");
  double e = constant;
  for (std::size_t a = 0; a < n; ++a) {
    e += h[a] * spins[a];
    for (std::size_t b = a + 1; b < n; ++b)
      e += 2.0 * j[a * n + b] * spins[a] * spins[b];
  }
  return e;
}

BinaryEncoding plan_binary_encoding(long long upper_bound) {
  BinaryEncoding enc;
  long long reach = 0;  // 2^K - 1
  while (reach < upper_bound) {
    enc.weights.push_back(1LL << enc.bit_count);
    ++enc.bit_count;
    reach = (1LL << enc.bit_count) - 1;
  }
  return enc;
}

PenaltyConfig default_penalties(const IlpModel& ilp, double eta) {
  double c_max = 0.0;
  for (double c : ilp.objective) c_max = std::max(c_max, std::abs(c));
  const double lambda = eta * std::max(1.0, c_max);
  return PenaltyConfig{lambda, lambda};
}

void add_squared_penalty(QuboModel& qubo,
                         const std::vector<std::pair<std::size_t, double>>& terms,
                         double constant, double lambda) {
  for (std::size_t a = 0; a < terms.size(); ++a) {
    // z^2 = z for binary variables: diagonal goes to the linear part.
    qubo.linear[terms[a].first] += lambda * terms[a].second * terms[a].second;
    qubo.linear[terms[a].first] += 2.0 * lambda * constant * terms[a].second;
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      const double w = lambda * terms[a].second * terms[b].second;
      qubo.at(terms[a].first, terms[b].first) += w;
      qubo.at(terms[b].first, terms[a].first) += w;
    }
  }
  qubo.offset += lambda * constant * constant;
}

QuboModel ilp_to_qubo(const IlpModel& ilp, const PenaltyConfig& penalties) {
  ilp.validate();
  const std::size_t nv = ilp.num_vars();
  const double obj_sign = ilp.sense == Sense::maximize ? -1.0 : 1.0;

  QuboModel qubo;
  VariableMap& map = qubo.var_map;

  std::size_t next_bit = 0;
  map.vars.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const BinaryEncoding enc = plan_binary_encoding(ilp.upper_bounds[i]);
    map.vars[i].weights = enc.weights;
    for (int k = 0; k < enc.bit_count; ++k) map.vars[i].bits.push_back(next_bit++);
  }

  // Slack sizing: S_i = b_i minus the smallest LHS reachable in the box.
  map.slacks.resize(ilp.a_ineq.size());
  map.slack_bounds.resize(ilp.a_ineq.size(), 0);
  for (std::size_t r = 0; r < ilp.a_ineq.size(); ++r) {
    double min_lhs = 0.0;
    for (std::size_t i = 0; i < nv; ++i)
      if (ilp.a_ineq[r][i] < 0.0)
        min_lhs += ilp.a_ineq[r][i] * static_cast<double>(ilp.upper_bounds[i]);
    const double span = ilp.b_ineq[r] - min_lhs;
    long long bound = span < 0.0 ? -1 : static_cast<long long>(std::floor(span + 1e-9));
    if (bound < 0) {
      qubo.warnings.push_back("inequality " + std::to_string(r) +
                              " cannot be satisfied in the variable box; kept with zero slack bits");
      bound = 0;
    }
    map.slack_bounds[r] = bound;
    const BinaryEncoding enc = plan_binary_encoding(bound);
    map.slacks[r].weights = enc.weights;
    for (int k = 0; k < enc.bit_count; ++k) map.slacks[r].bits.push_back(next_bit++);
  }

  qubo.n = next_bit;
  qubo.q.assign(qubo.n * qubo.n, 0.0);
  qubo.linear.assign(qubo.n, 0.0);

  // Objective (minimization form).
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t k = 0; k < map.vars[i].bits.size(); ++k)
      qubo.linear[map.vars[i].bits[k]] +=
          obj_sign * ilp.objective[i] * static_cast<double>(map.vars[i].weights[k]);

  // Equality penalties: (A_eq x - b)^2, no slack.
  for (std::size_t r = 0; r < ilp.a_eq.size(); ++r) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t i = 0; i < nv; ++i) {
      if (ilp.a_eq[r][i] == 0.0) continue;
      for (std::size_t k = 0; k < map.vars[i].bits.size(); ++k)
        terms.emplace_back(map.vars[i].bits[k],
                           ilp.a_eq[r][i] * static_cast<double>(map.vars[i].weights[k]));
    }
    add_squared_penalty(qubo, terms, -ilp.b_eq[r], penalties.lambda_eq);
  }

  // Inequality penalties: (A_ineq x + s - b)^2.
  for (std::size_t r = 0; r < ilp.a_ineq.size(); ++r) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t i = 0; i < nv; ++i) {
      if (ilp.a_ineq[r][i] == 0.0) continue;
      for (std::size_t k = 0; k < map.vars[i].bits.size(); ++k)
        terms.emplace_back(map.vars[i].bits[k],
                           ilp.a_ineq[r][i] * static_cast<double>(map.vars[i].weights[k]));
    }
    for (std::size_t k = 0; k < map.slacks[r].bits.size(); ++k)
      terms.emplace_back(map.slacks[r].bits[k], static_cast<double>(map.slacks[r].weights[k]));
    add_squared_penalty(qubo, terms, -ilp.b_ineq[r], penalties.lambda_ineq);
  }

  return qubo;
}

double evaluate(const QuboModel& qubo, std::span<const std::uint8_t> x) {
  if (x.size() != qubo.n) throw DimensionMismatch("evaluate: bitstring length != QUBO dimension");
  double value = qubo.offset;
  for (std::size_t i = 0; i < qubo.n; ++i) {
    if (!x[i]) continue;
    value += qubo.linear[i] + qubo.at(i, i);
    for (std::size_t j = i + 1; j < qubo.n; ++j)
      if (x[j]) value += 2.0 * qubo.at(i, j);
  }
  return value;
}

IsingModel qubo_to_ising(const QuboModel& qubo) {
  const std::size_t n = qubo.n;
  IsingModel ising;
  ising.n = n;
  ising.j.assign(n * n, 0.0);
  ising.h.assign(n, 0.0);
  ising.constant = qubo.offset;

  for (std::size_t i = 0; i < n; ++i) {
    const double d = qubo.at(i, i) + qubo.linear[i];  // x_i^2 = x_i
    ising.h[i] += d / 2.0;
    ising.constant += d / 2.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = qubo.at(i, j);  // pair contributes 2w to the energy
      if (w == 0.0) continue;
      ising.j[i * n + j] += w / 4.0;
      ising.j[j * n + i] += w / 4.0;
      ising.h[i] += w / 2.0;
      ising.h[j] += w / 2.0;
      ising.constant += w / 2.0;
    }
  }
  return ising;
}

DecodedSolution decode_solution(const VariableMap& map, std::span<const std::uint8_t> bits) {
  DecodedSolution out;
  auto decode_group = [&](const BitGroup& g) {
    long long v = 0;
    for (std::size_t k = 0; k < g.bits.size(); ++k) {
      if (g.bits[k] >= bits.size())
        throw IndexOutOfRange("decode_solution: bit index " + std::to_string(g.bits[k]) +
                              " beyond bitstring");
      if (bits[g.bits[k]]) v += g.weights[k];
    }
    return v;
  };
  out.values.reserve(map.vars.size());
  for (const auto& g : map.vars) out.values.push_back(decode_group(g));
  out.slacks.reserve(map.slacks.size());
  for (const auto& g : map.slacks) out.slacks.push_back(decode_group(g));
  return out;
}

namespace {

std::string format_coeff(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_qubo(std::ostream& out, const QuboModel& qubo) {
  out << qubo.n << ' ' << format_coeff(qubo.offset) << '\n';
  for (std::size_t i = 0; i < qubo.n; ++i) {
    const double d = qubo.linear[i] + qubo.at(i, i);
    if (d != 0.0) out << i << ' ' << i << ' ' << format_coeff(d) << '\n';
    for (std::size_t j = i + 1; j < qubo.n; ++j) {
      const double w = qubo.at(i, j) + qubo.at(j, i);
      if (w != 0.0) out << i << ' ' << j << ' ' << format_coeff(w) << '\n';
    }
  }
}

void write_qubo_file(const std::string& path, const QuboModel& qubo) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, "open", "cannot open for writing");
  write_qubo(out, qubo);
}

QuboModel read_qubo(std::istream& in, const std::string& filename) {
  QuboModel qubo;
  std::size_t n = 0;
  if (!(in >> n >> qubo.offset))
    throw ParseError(filename, "header", "expected 'N offset'");
  qubo.n = n;
  qubo.q.assign(n * n, 0.0);
  qubo.linear.assign(n, 0.0);
  std::size_t i, j;
  double coeff;
  while (in >> i >> j >> coeff) {
    if (i >= n || j >= n || j < i)
      throw ParseError(filename, "term " + std::to_string(i) + " " + std::to_string(j),
                       "index out of range or i > j");
    if (i == j) {
      qubo.linear[i] += coeff;
    } else {
      qubo.at(i, j) += coeff / 2.0;
      qubo.at(j, i) += coeff / 2.0;
    }
  }
  if (!in.eof() && in.fail())
    throw ParseError(filename, "body", "malformed term line");
  // A bare QUBO file maps each bit to one binary variable.
  qubo.var_map.vars.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    qubo.var_map.vars[k].bits = {k};
    qubo.var_map.vars[k].weights = {1};
  }
  return qubo;
}

QuboModel read_qubo_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "open", "cannot open");
  return read_qubo(in, path);
}

}  // namespace qopt
