#pragma once
#include <vector>

#include "qiren/sim/state.hpp"

namespace qiren {

// Reference implementation that builds every operator as an explicit
// 2^n x 2^n matrix via Kronecker products and applies it by plain
// matrix-vector multiplication. Slow on purpose: it shares no code with the
// in-place kernels in state.cpp, so agreement between the two is meaningful.

using DenseMatrix = std::vector<cplx>;  // row-major, dim x dim

DenseMatrix dense_identity(uint64_t dim);
DenseMatrix dense_kron(const DenseMatrix& a, uint64_t da, const DenseMatrix& b,
                       uint64_t db);

// Embed 2x2 factors on given qubits (qubit 0 = leftmost Kronecker slot),
// identity elsewhere. Qubits must be distinct.
DenseMatrix dense_embed(int num_qubits,
                        const std::vector<std::pair<int, Mat2>>& factors);

DenseMatrix dense_gate_matrix(const Gate& g, int num_qubits);
DenseMatrix dense_observable_matrix(const Observable& obs, int num_qubits);

StateVector dense_apply(const DenseMatrix& m, const StateVector& psi);
StateVector dense_apply_gate(const Gate& g, const StateVector& psi);
double dense_expectation(const StateVector& psi, const Observable& obs);

}  // namespace qiren
