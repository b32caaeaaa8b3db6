#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qopt/errors.hpp"

namespace qopt {

inline constexpr int kDefaultQubitCap = 22;

enum class GateKind { rx, ry, rz, rxx };

const char* gate_name(GateKind k);

// One gate application. slot >= 0 means the angle comes from the parameter
// vector; otherwise `angle` is fixed. q1 is used by rxx only.
struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;
  int slot = -1;
  double angle = 0.0;
};

struct Circuit {
  int qubits = 0;
  std::vector<Gate> gates;
  int param_count = 0;

  int add_param();  // next contiguous slot
  void push_rx(int q, int slot, double angle = 0.0);
  void push_ry(int q, int slot, double angle = 0.0);
  void push_rz(int q, int slot, double angle = 0.0);
  void push_rxx(int a, int b, int slot, double angle = 0.0);
  void validate() const;
};

// Dense 2^n amplitude vector. Gates mutate in place; copy before mutating if
// the original is still needed.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int qubits, int cap = kDefaultQubitCap);

  int qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::complex<double>& amp(std::uint64_t z) { return amps_[z]; }
  const std::complex<double>& amp(std::uint64_t z) const { return amps_[z]; }
  std::span<const std::complex<double>> amplitudes() const { return amps_; }

  void apply(const Gate& g, std::span<const double> params);
  void apply_rx(int q, double theta);
  void apply_ry(int q, double theta);
  void apply_rz(int q, double theta);
  void apply_rxx(int a, int b, double theta);

  double norm() const;
  double probability(std::uint64_t z) const { return std::norm(amps_[z]); }

 private:
  int n_ = 0;
  std::vector<std::complex<double>> amps_;
};

// Weight-k Pauli operator: identity everywhere except the listed qubits.
// The all-identity string is not representable (terms must be non-empty).
struct PauliTerm {
  int qubit;
  char basis;  // 'X', 'Y' or 'Z'
};

struct PauliString {
  std::vector<PauliTerm> terms;
  void validate(int qubits) const;
  std::string label(int qubits) const;  // e.g. "X0*Y2"
};

StateVector run_circuit(const Circuit& circuit, std::span<const double> params,
                        int cap = kDefaultQubitCap);

// <state|P|state>. Throws NonHermitianResidual if the imaginary part of the
// inner product exceeds 1e-8.
double pauli_expectation(const StateVector& state, const PauliString& pauli);

// Seeded i.i.d. draws from |amplitude|^2. Indices use qubit 0 as bit 0.
std::vector<std::uint64_t> sample_basis_indices(const StateVector& state, int shots,
                                                std::uint64_t seed);
std::vector<std::vector<std::uint8_t>> sample_bitstrings(const StateVector& state, int shots,
                                                         std::uint64_t seed);

std::vector<std::uint8_t> index_to_bits(std::uint64_t z, int n);

struct ResourceSummary {
  int qubits = 0;
  int depth = 0;
  int gate_count = 0;
  int two_qubit_gates = 0;
  int parameter_count = 0;
};

// Depth by greedy layering: a gate opens a new layer iff it touches a qubit
// already used in the current layer.
ResourceSummary resource_summary(const Circuit& circuit);

// Debug form, one gate per line: "kind q0 [q1] s<slot>|<angle>".
void write_circuit(std::ostream& out, const Circuit& circuit);

}  // namespace qopt
