#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "qiren/rng.hpp"

namespace qiren {

using cplx = std::complex<double>;

// Full statevector over n qubits. Qubit 0 owns the most significant bit of
// the amplitude index, so |q0 q1 ... q_{n-1}> lives at index
// q0*2^{n-1} + ... + q_{n-1}.
struct StateVector {
  int num_qubits = 0;
  std::vector<cplx> amps;

  explicit StateVector(int n)
      : num_qubits(n), amps(static_cast<size_t>(1) << n, cplx(0.0, 0.0)) {
    amps[0] = 1.0;
  }

  uint64_t size() const { return amps.size(); }
  uint64_t bit(int q) const {
    return static_cast<uint64_t>(1) << (num_qubits - 1 - q);
  }
  double norm_sq() const;
};

enum class GateKind { H, X, Y, Z, RX, RY, RZ, Rot, CNOT, CZ };

struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;         // second qubit for CNOT/CZ
  double a0 = 0.0;     // angle (phi for Rot)
  double a1 = 0.0;     // theta for Rot
  double a2 = 0.0;     // omega for Rot

  static Gate h(int q) { return {GateKind::H, q}; }
  static Gate x(int q) { return {GateKind::X, q}; }
  static Gate y(int q) { return {GateKind::Y, q}; }
  static Gate z(int q) { return {GateKind::Z, q}; }
  static Gate rx(int q, double t) { return {GateKind::RX, q, -1, t}; }
  static Gate ry(int q, double t) { return {GateKind::RY, q, -1, t}; }
  static Gate rz(int q, double t) { return {GateKind::RZ, q, -1, t}; }
  // Rot(phi, theta, omega) = RZ(phi) * RY(theta) * RZ(omega) as a matrix
  // product, i.e. RZ(omega) hits the state first.
  static Gate rot(int q, double phi, double theta, double omega) {
    return {GateKind::Rot, q, -1, phi, theta, omega};
  }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, c, t}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, a, b}; }
};

// 2x2 row-major complex matrix.
using Mat2 = std::array<cplx, 4>;

Mat2 mat_h();
Mat2 mat_x();
Mat2 mat_y();
Mat2 mat_z();
Mat2 mat_rx(double theta);
Mat2 mat_ry(double theta);
Mat2 mat_rz(double theta);
Mat2 mat_rot(double phi, double theta, double omega);
Mat2 gate_matrix(const Gate& g);

void apply_1q(StateVector& psi, int q, const Mat2& m);
void apply_rz(StateVector& psi, int q, double theta);
void apply_ry(StateVector& psi, int q, double theta);
void apply_rx(StateVector& psi, int q, double theta);
void apply_cnot(StateVector& psi, int control, int target);
void apply_cz(StateVector& psi, int a, int b);
void apply_gate(StateVector& psi, const Gate& g);

enum class Pauli { X, Y, Z };

// Weighted sum of Pauli products; each product touches distinct qubits.
struct PauliTerm {
  double coeff = 1.0;
  std::vector<std::pair<int, Pauli>> ops;
};

struct Observable {
  std::vector<PauliTerm> terms;

  static Observable z(int q) { return {{PauliTerm{1.0, {{q, Pauli::Z}}}}}; }
  static Observable pauli(Pauli p, int q) { return {{PauliTerm{1.0, {{q, p}}}}}; }
};

cplx inner(const StateVector& a, const StateVector& b);
StateVector apply_observable(const Observable& obs, const StateVector& psi);
double expectation(const StateVector& psi, const Observable& obs);

// <Z_q> for every listed wire in one pass over the amplitudes.
void expectations_all_z(const StateVector& psi, const std::vector<int>& wires,
                        double* out);

// Hardware-style readout error: RX(t_q) on every qubit, t_q ~ U[0, bound],
// drawn in qubit order from `rng`.
void inject_measurement_noise(StateVector& psi, double noise_bound, Rng& rng);

}  // namespace qiren
