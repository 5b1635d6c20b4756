#include "qiren/circuit/reupload.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qiren {

CircuitSpec CircuitSpec::one_per_wire(int num_qubits) {
  CircuitSpec s;
  s.num_qubits = num_qubits;
  s.num_features = num_qubits;
  s.wire_feature.resize(num_qubits);
  std::iota(s.wire_feature.begin(), s.wire_feature.end(), 0);
  s.wire_scale.assign(num_qubits, 1.0);
  for (int q = 0; q < num_qubits; ++q)
    s.observables.push_back(Observable::z(q));
  return s;
}

CircuitSpec CircuitSpec::cyclic(int num_qubits, int num_features) {
  CircuitSpec s = one_per_wire(num_qubits);
  s.num_features = num_features;
  for (int q = 0; q < num_qubits; ++q) s.wire_feature[q] = q % num_features;
  return s;
}

CircuitSpec CircuitSpec::grouped(int num_features, int reps) {
  CircuitSpec s = one_per_wire(num_features * reps);
  s.num_features = num_features;
  for (int q = 0; q < s.num_qubits; ++q) s.wire_feature[q] = q / reps;
  return s;
}

void CircuitSpec::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (num_features < 1) throw std::invalid_argument("need at least one feature");
  if (reuploads < 1 || blocks < 1)
    throw std::invalid_argument("reuploads and blocks must be >= 1");
  if (static_cast<int>(wire_feature.size()) != num_qubits ||
      static_cast<int>(wire_scale.size()) != num_qubits)
    throw std::invalid_argument("wire_feature/wire_scale must have one entry per qubit");
  for (int f : wire_feature)
    if (f < 0 || f >= num_features)
      throw std::invalid_argument("wire_feature index out of range");
  if (observables.empty())
    throw std::invalid_argument("circuit needs at least one observable");
  for (const Observable& o : observables)
    for (const PauliTerm& t : o.terms)
      for (const auto& [q, p] : t.ops)
        if (q < 0 || q >= num_qubits)
          throw std::invalid_argument("observable qubit out of range");
  if (noise_bound < 0.0) throw std::invalid_argument("noise_bound must be >= 0");
}

std::vector<ProgramOp> build_program(const CircuitSpec& spec) {
  spec.validate();
  std::vector<ProgramOp> prog;
  const int n = spec.num_qubits;
  for (int l = 0; l < spec.reuploads; ++l) {
    for (int q = 0; q < n; ++q) {
      ProgramOp op;
      op.kind = ProgramOp::RZInput;
      op.q0 = q;
      op.input_index = spec.wire_feature[q];
      op.scale = spec.wire_scale[q];
      prog.push_back(op);
    }
    for (int k = 0; k < spec.blocks; ++k) {
      for (int q = 0; q < n; ++q) {
        // Rot(phi, theta, omega): omega-RZ first in time, then RY, then RZ
        for (int slot : {2, 1, 0}) {
          ProgramOp op;
          op.kind = slot == 1 ? ProgramOp::RYParam : ProgramOp::RZParam;
          op.q0 = q;
          op.param_index = spec.param_index(l, k, q, slot);
          prog.push_back(op);
        }
      }
      if (n > 1) {
        for (int q = 0; q < n; ++q) {
          ProgramOp op;
          op.kind = spec.entangler == Entangler::CNOT ? ProgramOp::Cnot
                                                      : ProgramOp::Cz;
          op.q0 = q;
          op.q1 = (q + 1) % n;
          prog.push_back(op);
        }
      }
    }
  }
  return prog;
}

static double op_angle(const ProgramOp& op, const std::vector<double>& params,
                       const double* x) {
  switch (op.kind) {
    case ProgramOp::RZParam:
    case ProgramOp::RYParam: return params[op.param_index];
    case ProgramOp::RZInput: return op.scale * x[op.input_index];
    default: return 0.0;
  }
}

static void apply_op(StateVector& psi, const ProgramOp& op, double angle) {
  switch (op.kind) {
    case ProgramOp::RZParam:
    case ProgramOp::RZInput: apply_rz(psi, op.q0, angle); return;
    case ProgramOp::RYParam: apply_ry(psi, op.q0, angle); return;
    case ProgramOp::Cnot: apply_cnot(psi, op.q0, op.q1); return;
    case ProgramOp::Cz: apply_cz(psi, op.q0, op.q1); return;
  }
}

static void undo_op(StateVector& psi, const ProgramOp& op, double angle) {
  switch (op.kind) {
    case ProgramOp::RZParam:
    case ProgramOp::RZInput: apply_rz(psi, op.q0, -angle); return;
    case ProgramOp::RYParam: apply_ry(psi, op.q0, -angle); return;
    case ProgramOp::Cnot: apply_cnot(psi, op.q0, op.q1); return;
    case ProgramOp::Cz: apply_cz(psi, op.q0, op.q1); return;
  }
}

StateVector run_program(const CircuitSpec& spec,
                        const std::vector<ProgramOp>& prog,
                        const std::vector<double>& params, const double* x,
                        int override_op, double delta) {
  StateVector psi(spec.num_qubits);
  for (size_t k = 0; k < prog.size(); ++k) {
    double a = op_angle(prog[k], params, x);
    if (static_cast<int>(k) == override_op) a += delta;
    apply_op(psi, prog[k], a);
  }
  return psi;
}

// True when the observable is coeff * Z on a single wire.
static bool single_z(const Observable& o, int* wire, double* coeff) {
  if (o.terms.size() != 1) return false;
  const PauliTerm& t = o.terms[0];
  if (t.ops.size() != 1 || t.ops[0].second != Pauli::Z) return false;
  *wire = t.ops[0].first;
  *coeff = t.coeff;
  return true;
}

static std::vector<double> measure_all(const CircuitSpec& spec,
                                       const StateVector& psi) {
  const int m = spec.num_outputs();
  std::vector<double> out(m);
  std::vector<int> wires(m);
  std::vector<double> coeffs(m);
  bool fast = true;
  for (int i = 0; i < m; ++i)
    if (!single_z(spec.observables[i], &wires[i], &coeffs[i])) fast = false;
  if (fast) {
    expectations_all_z(psi, wires, out.data());
    for (int i = 0; i < m; ++i) out[i] *= coeffs[i];
  } else {
    for (int i = 0; i < m; ++i) out[i] = expectation(psi, spec.observables[i]);
  }
  return out;
}

std::vector<double> circuit_forward(const CircuitSpec& spec,
                                    const std::vector<ProgramOp>& prog,
                                    const std::vector<double>& params,
                                    const double* x, Rng* noise_rng) {
  StateVector psi = run_program(spec, prog, params, x);
  if (spec.noise_bound > 0.0 && noise_rng)
    inject_measurement_noise(psi, spec.noise_bound, *noise_rng);
  return measure_all(spec, psi);
}

std::vector<double> init_circuit_params(const CircuitSpec& spec, Rng& rng) {
  std::vector<double> p(spec.num_params());
  for (double& v : p) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return p;
}

static void check_differentiable(const CircuitSpec& spec) {
  if (spec.noise_bound != 0.0)
    throw std::logic_error("gradients are only defined for noise-free circuits");
}

CircuitJacobian circuit_jacobian_paramshift(const CircuitSpec& spec,
                                            const std::vector<ProgramOp>& prog,
                                            const std::vector<double>& params,
                                            const double* x) {
  check_differentiable(spec);
  const int m = spec.num_outputs();
  CircuitJacobian jac{Matrix(m, spec.num_params()),
                      Matrix(m, spec.num_features)};
  const double shift = std::numbers::pi / 2;
  for (size_t k = 0; k < prog.size(); ++k) {
    const ProgramOp& op = prog[k];
    if (op.kind == ProgramOp::Cnot || op.kind == ProgramOp::Cz) continue;
    StateVector plus = run_program(spec, prog, params, x, int(k), shift);
    StateVector minus = run_program(spec, prog, params, x, int(k), -shift);
    std::vector<double> fp = measure_all(spec, plus);
    std::vector<double> fm = measure_all(spec, minus);
    for (int r = 0; r < m; ++r) {
      const double d = (fp[r] - fm[r]) / 2.0;
      if (op.kind == ProgramOp::RZInput)
        jac.by_input(r, op.input_index) += op.scale * d;
      else
        jac.by_param(r, op.param_index) += d;
    }
  }
  return jac;
}

// <lam| Z_q |ket>
static cplx gen_inner_z(const StateVector& lam, const StateVector& ket, int q) {
  const uint64_t mask = lam.bit(q);
  const uint64_t n = lam.size();
  cplx s = 0.0;
  for (uint64_t i = 0; i < n; ++i) {
    const cplx v = std::conj(lam.amps[i]) * ket.amps[i];
    s += (i & mask) ? -v : v;
  }
  return s;
}

// <lam| Y_q |ket>
static cplx gen_inner_y(const StateVector& lam, const StateVector& ket, int q) {
  const uint64_t mask = lam.bit(q);
  const uint64_t n = lam.size();
  const uint64_t stride = mask << 1;
  cplx s = 0.0;
  for (uint64_t hi = 0; hi < n; hi += stride)
    for (uint64_t lo = 0; lo < mask; ++lo) {
      const uint64_t i0 = hi + lo, i1 = i0 + mask;
      s += std::conj(lam.amps[i1]) * ket.amps[i0] -
           std::conj(lam.amps[i0]) * ket.amps[i1];
    }
  return cplx(0.0, 1.0) * s;
}

// Walk the program backwards. Each `lams[r]` enters as O_r |psi_final> and
// stays aligned with `ket` as both are rewound; the running gradient of each
// rotation RG(a) (generator G, eigenvalues +-1/2) is Im <lam| G |ket> taken
// just before the rotation is undone. Accumulates into the row-major output
// buffers when they are non-null.
static void adjoint_sweep(const CircuitSpec& spec,
                          const std::vector<ProgramOp>& prog,
                          const std::vector<double>& params, const double* x,
                          StateVector& ket, std::vector<StateVector>& lams,
                          double* by_param, double* by_input) {
  const int n_params = spec.num_params();
  const int n_feat = spec.num_features;
  for (size_t kk = prog.size(); kk-- > 0;) {
    const ProgramOp& op = prog[kk];
    const double angle = op_angle(op, params, x);
    if (op.kind != ProgramOp::Cnot && op.kind != ProgramOp::Cz) {
      for (size_t r = 0; r < lams.size(); ++r) {
        const cplx s = op.kind == ProgramOp::RYParam
                           ? gen_inner_y(lams[r], ket, op.q0)
                           : gen_inner_z(lams[r], ket, op.q0);
        const double g = s.imag();
        if (op.kind == ProgramOp::RZInput) {
          if (by_input) by_input[r * n_feat + op.input_index] += op.scale * g;
        } else {
          if (by_param) by_param[r * n_params + op.param_index] += g;
        }
      }
    }
    undo_op(ket, op, angle);
    for (StateVector& lam : lams) undo_op(lam, op, angle);
  }
}

CircuitJacobian circuit_jacobian_adjoint(const CircuitSpec& spec,
                                         const std::vector<ProgramOp>& prog,
                                         const std::vector<double>& params,
                                         const double* x) {
  check_differentiable(spec);
  const int m = spec.num_outputs();
  CircuitJacobian jac{Matrix(m, spec.num_params()),
                      Matrix(m, spec.num_features)};
  StateVector ket = run_program(spec, prog, params, x);
  std::vector<StateVector> lams;
  lams.reserve(m);
  for (int r = 0; r < m; ++r)
    lams.push_back(apply_observable(spec.observables[r], ket));
  adjoint_sweep(spec, prog, params, x, ket, lams, jac.by_param.data.data(),
                jac.by_input.data.data());
  return jac;
}

void circuit_vjp(const CircuitSpec& spec, const std::vector<ProgramOp>& prog,
                 const std::vector<double>& params, const double* x,
                 const double* out_weights, double* grad_params, double* grad_x,
                 const StateVector* cached_final) {
  check_differentiable(spec);
  const int m = spec.num_outputs();
  StateVector ket = cached_final ? *cached_final
                                 : run_program(spec, prog, params, x);

  // lambda = sum_m w_m O_m |psi>, built in one pass when every observable is
  // a plain Z (the training configuration).
  std::vector<int> wires(m);
  std::vector<double> coeffs(m);
  bool fast = true;
  for (int r = 0; r < m; ++r)
    if (!single_z(spec.observables[r], &wires[r], &coeffs[r])) fast = false;
  StateVector lam(spec.num_qubits);
  if (fast) {
    const uint64_t n = ket.size();
    for (uint64_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (int r = 0; r < m; ++r) {
        const double w = out_weights[r] * coeffs[r];
        f += (i & ket.bit(wires[r])) ? -w : w;
      }
      lam.amps[i] = f * ket.amps[i];
    }
  } else {
    lam.amps.assign(ket.size(), cplx(0.0, 0.0));
    for (int r = 0; r < m; ++r) {
      StateVector t = apply_observable(spec.observables[r], ket);
      for (uint64_t i = 0; i < ket.size(); ++i)
        lam.amps[i] += out_weights[r] * t.amps[i];
    }
  }
  std::vector<StateVector> lams{std::move(lam)};
  adjoint_sweep(spec, prog, params, x, ket, lams, grad_params, grad_x);
}

}  // namespace qiren
