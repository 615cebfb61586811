// dynamics.hpp: single-excitation master equation, RK4 propagation and the
// dense full-Hilbert-space Lindblad oracle.
//
// Single-excitation basis |i> = |U_i>: emitter i excited, all others ground.
// The coherent terms follow the expanded published component equations,
// whose g-sign is opposite to a direct expansion with H = sum hbar g_ij
// s_i^+ s_j. Flipping every g_ij conjugates rho(t), so populations and all
// entanglement metrics are unaffected by the choice.
#pragma once

#include <cstddef>
#include <vector>

#include "enzq/couplings.hpp"
#include "enzq/types.hpp"

namespace enzq {

struct SingleExcitationState {
  CMatrix rho;  // N x N excited block
  double time = 0.0;

  std::size_t n_qubits() const noexcept { return static_cast<std::size_t>(rho.rows()); }
  double excited_population() const { return rho.trace().real(); }

  // |U_k><U_k| at t = 0 (zero-based k).
  static SingleExcitationState excited(std::size_t n, QubitIndex k);
};

struct FullDensityMatrix {
  CMatrix rho;  // 2^N x 2^N
  std::size_t n_qubits = 0;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<SingleExcitationState> states;
  std::vector<double> ground_population;
};

struct IntegrationOptions {
  double dt = 0.0;              // s; 0 selects 0.001 / max_i gamma_ii
  double t_max = 0.0;           // s
  std::size_t sample_stride = 1;
  bool check_positivity = true; // smallest eigenvalue at each sample
};

// drho_ij/dt = -sum_k [(gamma_ik/2 - i g_ik) rho_kj + (gamma_kj/2 + i g_kj) rho_ik]
CMatrix rhs_single_excitation(const CMatrix& rho, const CouplingMatrices& c);

// Term-by-term transcription of the nine three-emitter component equations.
CMatrix rhs_three_qubit_reference(const CMatrix& rho, const CouplingMatrices& c);

// Term-by-term transcription of the sixteen four-emitter component equations.
CMatrix rhs_four_qubit_reference(const CMatrix& rho, const CouplingMatrices& c);

double default_time_step(const CouplingMatrices& c);

// Classical RK4 with per-step re-symmetrization; throws IntegrationError on
// an invariant violation.
EvolutionResult integrate(const SingleExcitationState& state0, const CouplingMatrices& c,
                          const IntegrationOptions& options);

// Dense Lindblad right-hand side on the full 2^N space (N <= 6). The Hamiltonian
// sign matches rhs_single_excitation. Parallel and serial policies give
// bit-identical results.
CMatrix full_lindblad_rhs(const CMatrix& rho_full, const CouplingMatrices& c,
                          ExecPolicy policy = ExecPolicy::Parallel);

// Same equation assembled from explicit lowering-operator matrices.
CMatrix full_lindblad_rhs_reference(const CMatrix& rho_full, const CouplingMatrices& c);

// Lowering operator of qubit k on the 2^N space.
CMatrix lowering_operator(std::size_t n, QubitIndex k);

std::size_t excited_index(std::size_t n, QubitIndex k);

FullDensityMatrix embed_full(const SingleExcitationState& state);

// Inverse of embed_full restricted to the excited block.
CMatrix extract_excited_block(const CMatrix& rho_full, std::size_t n);

// Gamma_22 (second emitter), or gamma_11 for a single emitter.
double normalization_rate(const CouplingMatrices& c);

}  // namespace enzq
