// metrics.hpp: negativity and genuine multipartite entanglement of
// multiqubit density matrices.
#pragma once

#include <cstddef>
#include <vector>

#include "enzq/dynamics.hpp"
#include "enzq/types.hpp"

namespace enzq {

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns, matching `values`
  int sweeps = 0;
};

// Cyclic complex Jacobi rotations until the off-diagonal Frobenius norm
// drops below 1e-12 * ||M||_F.
HermitianEigen jacobi_eigen(const CMatrix& m);
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

// Transposes the tensor factors of `subset` (zero-based qubits, proper and
// non-empty).
CMatrix partial_transpose(const CMatrix& rho, std::size_t n_qubits, const std::vector<QubitIndex>& subset);

// max(0, -2 * sum of negative eigenvalues of the partial transpose).
// Eigenvalues above -1e-13 count as zero.
double negativity_bipartition(const CMatrix& rho, std::size_t n_qubits, const std::vector<QubitIndex>& subset);

// Geometric mean of the N one-vs-rest negativities; 0 if any factor is 0.
double negativity_multiqubit(const CMatrix& rho, std::size_t n_qubits);

// Two-qubit reduced state of qubits (j, k); basis index 2*bit_j + bit_k.
CMatrix partial_trace_pair(const CMatrix& rho, std::size_t n_qubits, QubitIndex j, QubitIndex k);

double purity(const CMatrix& rho);

// E_G^(2): (2 / (N (N-1))) * sum_l (N - l) G(2, l), with
// G(2, l) = (4/3) [1 - (1/(N-l)) sum_j Tr(rho_{j,j+l}^2)].
double genuine_multipartite(const CMatrix& rho, std::size_t n_qubits);

struct EntanglementSample {
  double time = 0.0;       // s
  double time_norm = 0.0;  // rate * time
  double negativity = 0.0;
  double e_g2 = 0.0;
  std::vector<double> populations;
};

// One sample per evolution sample, in order. `time_unit_rate` is the rate the
// normalized time axis is expressed in (normally gamma_22).
std::vector<EntanglementSample> metrics_timeseries(const EvolutionResult& result, double time_unit_rate,
                                                   ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace enzq
