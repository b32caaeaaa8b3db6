#include "qopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qopt/rng.hpp"

namespace qopt {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::rx: return "rx";
    case GateKind::ry: return "ry";
    case GateKind::rz: return "rz";
    case GateKind::rxx: return "rxx";
  }
  return "?";
}

int Circuit::add_param() { return param_count++; }

void Circuit::push_rx(int q, int slot, double angle) {
  gates.push_back(Gate{GateKind::rx, q, -1, slot, angle});
}
void Circuit::push_ry(int q, int slot, double angle) {
  gates.push_back(Gate{GateKind::ry, q, -1, slot, angle});
}
void Circuit::push_rz(int q, int slot, double angle) {
  gates.push_back(Gate{GateKind::rz, q, -1, slot, angle});
}
void Circuit::push_rxx(int a, int b, int slot, double angle) {
  gates.push_back(Gate{GateKind::rxx, a, b, slot, angle});
}

void Circuit::validate() const {
  for (const Gate& g : gates) {
    if (g.q0 < 0 || g.q0 >= qubits)
      throw IndexOutOfRange("circuit: gate target out of range");
    if (g.kind == GateKind::rxx) {
      if (g.q1 < 0 || g.q1 >= qubits || g.q1 == g.q0)
        throw IndexOutOfRange("circuit: rxx needs two distinct targets");
    }
    if (g.slot >= param_count)
      throw ParamCountMismatch("circuit: slot index beyond parameter count");
  }
}

StateVector::StateVector(int qubits, int cap) : n_(qubits) {
  if (qubits < 0 || qubits > cap)
    throw QubitCapExceeded("statevector: " + std::to_string(qubits) + " qubits exceeds cap " +
                           std::to_string(cap));
  amps_.assign(std::size_t{1} << qubits, {0.0, 0.0});
  if (!amps_.empty()) amps_[0] = {1.0, 0.0};
}

void StateVector::apply_rx(int q, double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const std::complex<double> mis{0.0, -s};
  const std::uint64_t mask = std::uint64_t{1} << q;
  const std::uint64_t dim = amps_.size();
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (z & mask) continue;
    const auto a = amps_[z], b = amps_[z | mask];
    amps_[z] = c * a + mis * b;
    amps_[z | mask] = c * b + mis * a;
  }
}

void StateVector::apply_ry(int q, double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const std::uint64_t mask = std::uint64_t{1} << q;
  const std::uint64_t dim = amps_.size();
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (z & mask) continue;
    const auto a = amps_[z], b = amps_[z | mask];
    amps_[z] = c * a - s * b;
    amps_[z | mask] = s * a + c * b;
  }
}

void StateVector::apply_rz(int q, double theta) {
  const std::complex<double> p0{std::cos(theta / 2.0), -std::sin(theta / 2.0)};
  const std::complex<double> p1 = std::conj(p0);
  const std::uint64_t mask = std::uint64_t{1} << q;
  const std::uint64_t dim = amps_.size();
  for (std::uint64_t z = 0; z < dim; ++z) amps_[z] *= (z & mask) ? p1 : p0;
}

void StateVector::apply_rxx(int a, int b, double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const std::complex<double> mis{0.0, -s};
  const std::uint64_t ma = std::uint64_t{1} << a;
  const std::uint64_t mb = std::uint64_t{1} << b;
  const std::uint64_t dim = amps_.size();
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (z & (ma | mb)) continue;
    const std::uint64_t z00 = z, z01 = z | mb, z10 = z | ma, z11 = z | ma | mb;
    const auto a00 = amps_[z00], a01 = amps_[z01], a10 = amps_[z10], a11 = amps_[z11];
    amps_[z00] = c * a00 + mis * a11;
    amps_[z11] = c * a11 + mis * a00;
    amps_[z01] = c * a01 + mis * a10;
    amps_[z10] = c * a10 + mis * a01;
  }
}

void StateVector::apply(const Gate& g, std::span<const double> params) {
  double theta = g.angle;
  if (g.slot >= 0) {
    if (static_cast<std::size_t>(g.slot) >= params.size())
      throw ParamCountMismatch("apply: parameter slot out of range");
    theta = params[g.slot];
  }
  switch (g.kind) {
    case GateKind::rx: apply_rx(g.q0, theta); break;
    case GateKind::ry: apply_ry(g.q0, theta); break;
    case GateKind::rz: apply_rz(g.q0, theta); break;
    case GateKind::rxx: apply_rxx(g.q0, g.q1, theta); break;
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void PauliString::validate(int qubits) const {
  if (terms.empty()) throw DimensionMismatch("pauli string: empty (identity excluded)");
  std::uint64_t seen = 0;
  for (const PauliTerm& t : terms) {
    if (t.qubit < 0 || t.qubit >= qubits)
      throw IndexOutOfRange("pauli string: qubit index out of range");
    if (seen & (std::uint64_t{1} << t.qubit))
      throw DimensionMismatch("pauli string: duplicate qubit index");
    seen |= std::uint64_t{1} << t.qubit;
    if (t.basis != 'X' && t.basis != 'Y' && t.basis != 'Z')
      throw DimensionMismatch("pauli string: basis must be X, Y or Z");
  }
}

std::string PauliString::label(int) const {
  std::string s;
  for (const PauliTerm& t : terms) {
    if (!s.empty()) s += '*';
    s += t.basis;
    s += std::to_string(t.qubit);
  }
  return s;
}

StateVector run_circuit(const Circuit& circuit, std::span<const double> params, int cap) {
  circuit.validate();
  if (static_cast<int>(params.size()) != circuit.param_count)
    throw ParamCountMismatch("run_circuit: expected " + std::to_string(circuit.param_count) +
                             " parameters, got " + std::to_string(params.size()));
  StateVector state(circuit.qubits, cap);
  for (const Gate& g : circuit.gates) state.apply(g, params);
  return state;
}

double pauli_expectation(const StateVector& state, const PauliString& pauli) {
  pauli.validate(state.qubits());

  // phi = P|psi>, built by permuting/phasing amplitudes term by term.
  std::uint64_t flip = 0;       // X and Y flip their qubit
  std::vector<int> y_qubits, z_qubits;
  for (const PauliTerm& t : pauli.terms) {
    if (t.basis == 'X') flip |= std::uint64_t{1} << t.qubit;
    if (t.basis == 'Y') {
      flip |= std::uint64_t{1} << t.qubit;
      y_qubits.push_back(t.qubit);
    }
    if (t.basis == 'Z') z_qubits.push_back(t.qubit);
  }

  std::complex<double> acc{0.0, 0.0};
  const std::uint64_t dim = state.dim();
  for (std::uint64_t z = 0; z < dim; ++z) {
    const std::uint64_t src = z ^ flip;
    std::complex<double> v = state.amp(src);
    // Y|0> = i|1>, Y|1> = -i|0>; phase depends on the source bit.
    for (int q : y_qubits)
      v *= (src & (std::uint64_t{1} << q)) ? std::complex<double>{0.0, -1.0}
                                           : std::complex<double>{0.0, 1.0};
    for (int q : z_qubits)
      if (z & (std::uint64_t{1} << q)) v = -v;
    acc += std::conj(state.amp(z)) * v;
  }

  if (std::abs(acc.imag()) >= 1e-8)
    throw NonHermitianResidual("pauli_expectation: imaginary residual " +
                               std::to_string(acc.imag()));
  return acc.real();
}

std::vector<std::uint64_t> sample_basis_indices(const StateVector& state, int shots,
                                                std::uint64_t seed) {
  std::vector<double> cdf(state.dim());
  double acc = 0.0;
  for (std::uint64_t z = 0; z < state.dim(); ++z) {
    acc += state.probability(z);
    cdf[z] = acc;
  }
  const double total = acc;

  Rng rng(seed);
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform01() * total;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    out.push_back(static_cast<std::uint64_t>(it == cdf.end() ? cdf.size() - 1
                                                             : it - cdf.begin()));
  }
  return out;
}

std::vector<std::uint8_t> index_to_bits(std::uint64_t z, int n) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((z >> i) & 1);
  return bits;
}

std::vector<std::vector<std::uint8_t>> sample_bitstrings(const StateVector& state, int shots,
                                                         std::uint64_t seed) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (std::uint64_t z : sample_basis_indices(state, shots, seed))
    out.push_back(index_to_bits(z, state.qubits()));
  return out;
}

ResourceSummary resource_summary(const Circuit& circuit) {
  ResourceSummary r;
  r.qubits = circuit.qubits;
  r.gate_count = static_cast<int>(circuit.gates.size());
  r.parameter_count = circuit.param_count;
  std::uint64_t layer = 0;
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::rxx) ++r.two_qubit_gates;
    std::uint64_t used = std::uint64_t{1} << g.q0;
    if (g.kind == GateKind::rxx) used |= std::uint64_t{1} << g.q1;
    if (layer & used) {
      ++r.depth;
      layer = used;
    } else {
      if (layer == 0) ++r.depth;  // first gate of a fresh layer
      layer |= used;
    }
  }
  return r;
}

void write_circuit(std::ostream& out, const Circuit& circuit) {
  out << "qubits " << circuit.qubits << " params " << circuit.param_count << '\n';
  char buf[40];
  for (const Gate& g : circuit.gates) {
    out << gate_name(g.kind) << ' ' << g.q0;
    if (g.kind == GateKind::rxx) out << ' ' << g.q1;
    if (g.slot >= 0) {
      out << " s" << g.slot;
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", g.angle);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

}  // namespace qopt
