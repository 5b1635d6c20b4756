#pragma once
#include <vector>

#include "qiren/matrix.hpp"
#include "qiren/rng.hpp"
#include "qiren/sim/state.hpp"

namespace qiren {

enum class Entangler { CNOT, CZ };

// Data re-uploading ansatz: L repetitions of (encode, variational block),
// where encode writes each feature onto its wires as RZ(scale * h_j) and the
// variational block is K rounds of per-qubit Rot gates followed by a cyclic
// entangler ring (skipped on a single qubit). Outputs are expectation values
// of the listed observables.
struct CircuitSpec {
  int num_qubits = 1;
  int num_features = 1;
  std::vector<int> wire_feature;   // feature index encoded on each wire
  std::vector<double> wire_scale;  // angle multiplier per wire
  int reuploads = 1;               // L
  int blocks = 1;                  // K
  Entangler entangler = Entangler::CNOT;
  std::vector<Observable> observables;
  double noise_bound = 0.0;

  // wire q encodes feature q
  static CircuitSpec one_per_wire(int num_qubits);
  // wire q encodes feature q % num_features
  static CircuitSpec cyclic(int num_qubits, int num_features);
  // feature j encoded on `reps` consecutive wires
  static CircuitSpec grouped(int num_features, int reps);

  int num_params() const { return reuploads * blocks * num_qubits * 3; }
  int num_outputs() const { return static_cast<int>(observables.size()); }
  // flat parameter layout: [layer][block][qubit][3] = (phi, theta, omega)
  int param_index(int layer, int block, int qubit, int slot) const {
    return ((layer * blocks + block) * num_qubits + qubit) * 3 + slot;
  }
  void validate() const;
};

struct ProgramOp {
  enum Kind { RZParam, RYParam, RZInput, Cnot, Cz } kind;
  int q0 = 0;
  int q1 = -1;
  int param_index = -1;
  int input_index = -1;
  double scale = 1.0;
};

std::vector<ProgramOp> build_program(const CircuitSpec& spec);

// Final state before measurement; set (override_op, delta) to add delta to
// the angle of one specific op — that is what the shift rule needs.
StateVector run_program(const CircuitSpec& spec,
                        const std::vector<ProgramOp>& prog,
                        const std::vector<double>& params, const double* x,
                        int override_op = -1, double delta = 0.0);

// Expectation values; measurement noise is injected only when the spec asks
// for it and a noise rng is supplied.
std::vector<double> circuit_forward(const CircuitSpec& spec,
                                    const std::vector<ProgramOp>& prog,
                                    const std::vector<double>& params,
                                    const double* x, Rng* noise_rng = nullptr);

std::vector<double> init_circuit_params(const CircuitSpec& spec, Rng& rng);

struct CircuitJacobian {
  Matrix by_param;  // num_outputs x num_params
  Matrix by_input;  // num_outputs x num_features
};

// Shift rule: every elementary rotation has eigenvalue spacing 1, so
// df/dtheta = [f(theta + pi/2) - f(theta - pi/2)] / 2, summed over the
// occurrences of a parameter (inputs appear once per wire that encodes them).
CircuitJacobian circuit_jacobian_paramshift(const CircuitSpec& spec,
                                            const std::vector<ProgramOp>& prog,
                                            const std::vector<double>& params,
                                            const double* x);

// Reverse-mode sweep over the program: one forward pass, then walk the gates
// backwards keeping <lambda| and |psi> in sync. Exact, and O(gates) instead
// of O(gates^2).
CircuitJacobian circuit_jacobian_adjoint(const CircuitSpec& spec,
                                         const std::vector<ProgramOp>& prog,
                                         const std::vector<double>& params,
                                         const double* x);

// Vector-Jacobian product for training: contracts the jacobian with
// out_weights in a single adjoint sweep (one lambda instead of one per
// output). Accumulates into grad_params / grad_x. `cached_final`, when
// given, must be run_program's result for the same (params, x).
void circuit_vjp(const CircuitSpec& spec, const std::vector<ProgramOp>& prog,
                 const std::vector<double>& params, const double* x,
                 const double* out_weights, double* grad_params, double* grad_x,
                 const StateVector* cached_final = nullptr);

}  // namespace qiren
