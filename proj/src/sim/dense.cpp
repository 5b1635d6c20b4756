#include "qiren/sim/dense.hpp"

#include <stdexcept>

namespace qiren {

DenseMatrix dense_identity(uint64_t dim) {
  DenseMatrix m(dim * dim, cplx(0.0, 0.0));
  for (uint64_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
  return m;
}

DenseMatrix dense_kron(const DenseMatrix& a, uint64_t da, const DenseMatrix& b,
                       uint64_t db) {
  const uint64_t d = da * db;
  DenseMatrix out(d * d, cplx(0.0, 0.0));
  for (uint64_t ar = 0; ar < da; ++ar)
    for (uint64_t ac = 0; ac < da; ++ac) {
      const cplx av = a[ar * da + ac];
      if (av == cplx(0.0, 0.0)) continue;
      for (uint64_t br = 0; br < db; ++br)
        for (uint64_t bc = 0; bc < db; ++bc)
          out[(ar * db + br) * d + (ac * db + bc)] = av * b[br * db + bc];
    }
  return out;
}

DenseMatrix dense_embed(int num_qubits,
                        const std::vector<std::pair<int, Mat2>>& factors) {
  DenseMatrix acc{cplx(1.0, 0.0)};  // 1x1 seed
  uint64_t dim = 1;
  for (int q = 0; q < num_qubits; ++q) {
    DenseMatrix slot = dense_identity(2);
    for (const auto& [fq, m] : factors)
      if (fq == q) slot.assign(m.begin(), m.end());
    acc = dense_kron(acc, dim, slot, 2);
    dim *= 2;
  }
  return acc;
}

static Mat2 pauli_p0() { return {cplx(1), cplx(0), cplx(0), cplx(0)}; }
static Mat2 pauli_p1() { return {cplx(0), cplx(0), cplx(0), cplx(1)}; }

DenseMatrix dense_gate_matrix(const Gate& g, int num_qubits) {
  if (g.kind == GateKind::CNOT || g.kind == GateKind::CZ) {
    // control in |0>: identity half; control in |1>: X or Z on the partner
    DenseMatrix lo = dense_embed(num_qubits, {{g.q0, pauli_p0()}});
    Mat2 act = g.kind == GateKind::CNOT ? mat_x() : mat_z();
    DenseMatrix hi =
        dense_embed(num_qubits, {{g.q0, pauli_p1()}, {g.q1, act}});
    for (size_t i = 0; i < lo.size(); ++i) lo[i] += hi[i];
    return lo;
  }
  return dense_embed(num_qubits, {{g.q0, gate_matrix(g)}});
}

static Mat2 pauli_mat(Pauli p) {
  switch (p) {
    case Pauli::X: return mat_x();
    case Pauli::Y: return mat_y();
    default: return mat_z();
  }
}

DenseMatrix dense_observable_matrix(const Observable& obs, int num_qubits) {
  const uint64_t dim = static_cast<uint64_t>(1) << num_qubits;
  DenseMatrix out(dim * dim, cplx(0.0, 0.0));
  for (const PauliTerm& term : obs.terms) {
    std::vector<std::pair<int, Mat2>> factors;
    for (const auto& [q, p] : term.ops) factors.emplace_back(q, pauli_mat(p));
    DenseMatrix m = dense_embed(num_qubits, factors);
    for (size_t i = 0; i < m.size(); ++i) out[i] += term.coeff * m[i];
  }
  return out;
}

StateVector dense_apply(const DenseMatrix& m, const StateVector& psi) {
  const uint64_t dim = psi.size();
  if (m.size() != dim * dim)
    throw std::invalid_argument("dense_apply: dimension mismatch");
  StateVector out(psi.num_qubits);
  for (uint64_t r = 0; r < dim; ++r) {
    cplx s = 0.0;
    for (uint64_t c = 0; c < dim; ++c) s += m[r * dim + c] * psi.amps[c];
    out.amps[r] = s;
  }
  return out;
}

StateVector dense_apply_gate(const Gate& g, const StateVector& psi) {
  return dense_apply(dense_gate_matrix(g, psi.num_qubits), psi);
}

double dense_expectation(const StateVector& psi, const Observable& obs) {
  StateVector opsi =
      dense_apply(dense_observable_matrix(obs, psi.num_qubits), psi);
  return inner(psi, opsi).real();
}

}  // namespace qiren
