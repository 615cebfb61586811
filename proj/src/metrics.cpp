#include "enzq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enzq/errors.hpp"
#include "enzq/parallel.hpp"

namespace enzq {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kNegativeEigenvalueCutoff = -1e-13;

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

void check_density_dims(const CMatrix& rho, std::size_t n) {
  if (n == 0 || n > 20) throw DomainError("qubit count out of range");
  const auto dim = ix(std::size_t{1} << n);
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("density matrix must be 2^N x 2^N");
}

std::size_t bit_of(std::size_t n, QubitIndex k) { return std::size_t{1} << (n - 1 - k); }

}  // namespace

HermitianEigen jacobi_eigen(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("matrix must be square");
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale)) {
    throw DomainError("matrix is not Hermitian");
  }
  const Eigen::Index n = m.rows();
  CMatrix a = 0.5 * (m + m.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  const double target = 1e-12 * a.norm();

  HermitianEigen out;
  while (off_diagonal_norm(a) > target) {
    if (++out.sweeps > kMaxSweeps) throw SolverError("Jacobi eigensolver did not converge", {}, off_diagonal_norm(a));
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // Phase-rotate column q so that a(p, q) becomes real and positive,
        // then apply the real symmetric Jacobi rotation.
        const Complex phase = a(p, q) / mag;
        a.col(q) *= std::conj(phase);
        a.row(q) *= phase;
        v.col(q) *= std::conj(phase);

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });
  out.values.reserve(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values.push_back(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real());
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) { return jacobi_eigen(m).values; }

CMatrix partial_transpose(const CMatrix& rho, std::size_t n_qubits, const std::vector<QubitIndex>& subset) {
  check_density_dims(rho, n_qubits);
  if (subset.empty()) throw DomainError("partial transpose subset is empty");
  std::size_t mask = 0;
  for (QubitIndex q : subset) {
    if (q >= n_qubits) throw DomainError("qubit index out of range");
    mask |= bit_of(n_qubits, q);
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (mask == dim - 1) throw DomainError("partial transpose subset must be a proper subset");

  CMatrix out(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      // Swap the subset bits between row and column index.
      const std::size_t a2 = (a & ~mask) | (b & mask);
      const std::size_t b2 = (b & ~mask) | (a & mask);
      out(ix(a2), ix(b2)) = rho(ix(a), ix(b));
    }
  }
  return out;
}

double negativity_bipartition(const CMatrix& rho, std::size_t n_qubits, const std::vector<QubitIndex>& subset) {
  const auto values = hermitian_eigenvalues(partial_transpose(rho, n_qubits, subset));
  double negative = 0.0;
  for (double v : values) {
    if (v < kNegativeEigenvalueCutoff) negative += v;
  }
  return std::max(0.0, -2.0 * negative);
}

double negativity_multiqubit(const CMatrix& rho, std::size_t n_qubits) {
  if (n_qubits < 2) throw DomainError("multiqubit negativity needs at least two qubits");
  double log_sum = 0.0;
  for (QubitIndex q = 0; q < n_qubits; ++q) {
    const double factor = negativity_bipartition(rho, n_qubits, {q});
    if (factor <= 0.0) return 0.0;
    log_sum += std::log(factor);
  }
  return std::exp(log_sum / static_cast<double>(n_qubits));
}

CMatrix partial_trace_pair(const CMatrix& rho, std::size_t n_qubits, QubitIndex j, QubitIndex k) {
  check_density_dims(rho, n_qubits);
  if (j == k) throw DomainError("partial_trace_pair needs two distinct qubits");
  if (j >= n_qubits || k >= n_qubits) throw DomainError("qubit index out of range");
  const std::size_t bj = bit_of(n_qubits, j);
  const std::size_t bk = bit_of(n_qubits, k);
  const std::size_t keep = bj | bk;
  const std::size_t dim = std::size_t{1} << n_qubits;
  const auto local = [&](std::size_t a) { return ((a & bj) ? 2u : 0u) + ((a & bk) ? 1u : 0u); };

  CMatrix out = CMatrix::Zero(4, 4);
  for (std::size_t a = 0; a < dim; ++a) {
    const std::size_t rest = a & ~keep;
    for (std::size_t pair_b = 0; pair_b < 4; ++pair_b) {
      const std::size_t b = rest | ((pair_b & 2u) ? bj : 0u) | ((pair_b & 1u) ? bk : 0u);
      out(ix(local(a)), ix(pair_b)) += rho(ix(a), ix(b));
    }
  }
  return out;
}

double purity(const CMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.cwiseAbs2().sum();
}

double genuine_multipartite(const CMatrix& rho, std::size_t n_qubits) {
  if (n_qubits < 2) throw DomainError("E_G^(2) needs at least two qubits");
  check_density_dims(rho, n_qubits);
  const double n = static_cast<double>(n_qubits);
  double weighted = 0.0;
  for (std::size_t l = 1; l < n_qubits; ++l) {
    double purity_sum = 0.0;
    for (std::size_t j = 0; j + l < n_qubits; ++j) purity_sum += purity(partial_trace_pair(rho, n_qubits, j, j + l));
    const double pairs = static_cast<double>(n_qubits - l);
    const double g2l = (4.0 / 3.0) * (1.0 - purity_sum / pairs);
    weighted += pairs * g2l;
  }
  return 2.0 / (n * (n - 1.0)) * weighted;
}

std::vector<EntanglementSample> metrics_timeseries(const EvolutionResult& result, double time_unit_rate,
                                                   ExecPolicy policy) {
  const std::size_t count = result.states.size();
  std::vector<EntanglementSample> out(count);
  const auto evaluate = [&](std::size_t s) {
    const SingleExcitationState& state = result.states[s];
    const std::size_t n = state.n_qubits();
    const FullDensityMatrix full = embed_full(state);
    EntanglementSample& sample = out[s];
    sample.time = result.times[s];
    sample.time_norm = time_unit_rate * result.times[s];
    if (n >= 2) {
      sample.negativity = negativity_multiqubit(full.rho, n);
      sample.e_g2 = genuine_multipartite(full.rho, n);
    }
    sample.populations.resize(n);
    for (std::size_t i = 0; i < n; ++i) sample.populations[i] = state.rho(ix(i), ix(i)).real();
  };
  parallel_for(count, policy, evaluate);
  return out;
}

}  // namespace enzq
