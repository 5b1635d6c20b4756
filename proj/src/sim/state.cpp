#include "qiren/sim/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qiren {

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const cplx& a : amps) s += std::norm(a);
  return s;
}

Mat2 mat_h() {
  const double r = 1.0 / std::sqrt(2.0);
  return {cplx(r), cplx(r), cplx(r), cplx(-r)};
}
Mat2 mat_x() { return {cplx(0), cplx(1), cplx(1), cplx(0)}; }
Mat2 mat_y() { return {cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}; }
Mat2 mat_z() { return {cplx(1), cplx(0), cplx(0), cplx(-1)}; }

Mat2 mat_rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {cplx(c), cplx(0, -s), cplx(0, -s), cplx(c)};
}
Mat2 mat_ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {cplx(c), cplx(-s), cplx(s), cplx(c)};
}
// exp(-i theta Z / 2); differs from diag(1, e^{i theta}) only by the global
// phase e^{-i theta/2}, which no expectation value can see.
Mat2 mat_rz(double theta) {
  return {std::polar(1.0, -theta / 2), cplx(0), cplx(0),
          std::polar(1.0, theta / 2)};
}
Mat2 mat_rot(double phi, double theta, double omega) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {std::polar(c, -(phi + omega) / 2), -std::polar(s, -(phi - omega) / 2),
          std::polar(s, (phi - omega) / 2), std::polar(c, (phi + omega) / 2)};
}

Mat2 gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return mat_h();
    case GateKind::X: return mat_x();
    case GateKind::Y: return mat_y();
    case GateKind::Z: return mat_z();
    case GateKind::RX: return mat_rx(g.a0);
    case GateKind::RY: return mat_ry(g.a0);
    case GateKind::RZ: return mat_rz(g.a0);
    case GateKind::Rot: return mat_rot(g.a0, g.a1, g.a2);
    default: throw std::invalid_argument("gate_matrix: not a 1-qubit gate");
  }
}

static void check_wire(const StateVector& psi, int q) {
  if (q < 0 || q >= psi.num_qubits)
    throw std::invalid_argument("qubit index out of range");
}

void apply_1q(StateVector& psi, int q, const Mat2& m) {
  check_wire(psi, q);
  const uint64_t mask = psi.bit(q);
  const uint64_t n = psi.size();
  const uint64_t stride = mask << 1;
  for (uint64_t hi = 0; hi < n; hi += stride) {
    for (uint64_t lo = 0; lo < mask; ++lo) {
      const uint64_t i0 = hi + lo, i1 = i0 + mask;
      const cplx a = psi.amps[i0], b = psi.amps[i1];
      psi.amps[i0] = m[0] * a + m[1] * b;
      psi.amps[i1] = m[2] * a + m[3] * b;
    }
  }
}

void apply_rz(StateVector& psi, int q, double theta) {
  check_wire(psi, q);
  const uint64_t mask = psi.bit(q);
  const cplx e0 = std::polar(1.0, -theta / 2), e1 = std::polar(1.0, theta / 2);
  const uint64_t n = psi.size();
  for (uint64_t i = 0; i < n; ++i) psi.amps[i] *= (i & mask) ? e1 : e0;
}

void apply_ry(StateVector& psi, int q, double theta) {
  check_wire(psi, q);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const uint64_t mask = psi.bit(q);
  const uint64_t n = psi.size();
  const uint64_t stride = mask << 1;
  for (uint64_t hi = 0; hi < n; hi += stride) {
    for (uint64_t lo = 0; lo < mask; ++lo) {
      const uint64_t i0 = hi + lo, i1 = i0 + mask;
      const cplx a = psi.amps[i0], b = psi.amps[i1];
      psi.amps[i0] = c * a - s * b;
      psi.amps[i1] = s * a + c * b;
    }
  }
}

void apply_rx(StateVector& psi, int q, double theta) {
  apply_1q(psi, q, mat_rx(theta));
}

void apply_cnot(StateVector& psi, int control, int target) {
  check_wire(psi, control);
  check_wire(psi, target);
  if (control == target)
    throw std::invalid_argument("CNOT needs distinct qubits");
  const uint64_t cm = psi.bit(control), tm = psi.bit(target);
  const uint64_t n = psi.size();
  for (uint64_t i = 0; i < n; ++i)
    if ((i & cm) && !(i & tm)) std::swap(psi.amps[i], psi.amps[i | tm]);
}

void apply_cz(StateVector& psi, int a, int b) {
  check_wire(psi, a);
  check_wire(psi, b);
  if (a == b) throw std::invalid_argument("CZ needs distinct qubits");
  const uint64_t am = psi.bit(a), bm = psi.bit(b);
  const uint64_t both = am | bm;
  const uint64_t n = psi.size();
  for (uint64_t i = 0; i < n; ++i)
    if ((i & both) == both) psi.amps[i] = -psi.amps[i];
}

void apply_gate(StateVector& psi, const Gate& g) {
  switch (g.kind) {
    case GateKind::RZ: apply_rz(psi, g.q0, g.a0); return;
    case GateKind::RY: apply_ry(psi, g.q0, g.a0); return;
    case GateKind::CNOT: apply_cnot(psi, g.q0, g.q1); return;
    case GateKind::CZ: apply_cz(psi, g.q0, g.q1); return;
    default: apply_1q(psi, g.q0, gate_matrix(g)); return;
  }
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner: size mismatch");
  cplx s = 0.0;
  for (uint64_t i = 0; i < a.size(); ++i)
    s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

StateVector apply_observable(const Observable& obs, const StateVector& psi) {
  StateVector out(psi.num_qubits);
  out.amps.assign(psi.size(), cplx(0.0, 0.0));
  for (const PauliTerm& term : obs.terms) {
    uint64_t flip = 0;
    for (const auto& [q, p] : term.ops) {
      check_wire(psi, q);
      if (p != Pauli::Z) flip |= psi.bit(q);
    }
    for (uint64_t i = 0; i < psi.size(); ++i) {
      cplx f = term.coeff;
      for (const auto& [q, p] : term.ops) {
        const bool set = i & psi.bit(q);
        if (p == Pauli::Z) {
          if (set) f = -f;
        } else if (p == Pauli::Y) {
          // Y|0> = i|1>, Y|1> = -i|0>
          f *= set ? cplx(0, -1) : cplx(0, 1);
        }
      }
      out.amps[i ^ flip] += f * psi.amps[i];
    }
  }
  return out;
}

double expectation(const StateVector& psi, const Observable& obs) {
  // Fast path: every term is a plain product of Z's, so O is diagonal.
  bool all_z = true;
  for (const PauliTerm& t : obs.terms)
    for (const auto& [q, p] : t.ops)
      if (p != Pauli::Z) all_z = false;
  if (all_z) {
    double s = 0.0;
    for (uint64_t i = 0; i < psi.size(); ++i) {
      const double pr = std::norm(psi.amps[i]);
      if (pr == 0.0) continue;
      for (const PauliTerm& t : obs.terms) {
        double sign = t.coeff;
        for (const auto& [q, p] : t.ops)
          if (i & psi.bit(q)) sign = -sign;
        s += sign * pr;
      }
    }
    return s;
  }
  return inner(psi, apply_observable(obs, psi)).real();
}

void expectations_all_z(const StateVector& psi, const std::vector<int>& wires,
                        double* out) {
  const size_t k = wires.size();
  for (size_t w = 0; w < k; ++w) out[w] = 0.0;
  const uint64_t n = psi.size();
  for (uint64_t i = 0; i < n; ++i) {
    const double pr = std::norm(psi.amps[i]);
    if (pr == 0.0) continue;
    for (size_t w = 0; w < k; ++w)
      out[w] += (i & psi.bit(wires[w])) ? -pr : pr;
  }
}

void inject_measurement_noise(StateVector& psi, double noise_bound, Rng& rng) {
  if (noise_bound < 0.0)
    throw std::invalid_argument("noise bound must be >= 0");
  if (noise_bound == 0.0) return;
  for (int q = 0; q < psi.num_qubits; ++q)
    apply_rx(psi, q, rng.uniform(0.0, noise_bound));
}

}  // namespace qiren
