#include "enzq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "enzq/errors.hpp"
#include "enzq/rk4.hpp"

namespace enzq {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr std::size_t kMaxDenseQubits = 6;

void require_same_size(const CMatrix& rho, const CouplingMatrices& c) {
  if (rho.rows() != rho.cols() || rho.rows() != c.gamma.rows()) {
    throw DomainError("state and couplings have different qubit counts");
  }
}

std::size_t bit_of(std::size_t n, QubitIndex k) { return std::size_t{1} << (n - 1 - k); }

std::size_t full_qubit_count(const CMatrix& rho_full, const CouplingMatrices& c) {
  const std::size_t n = c.n_qubits();
  if (n > kMaxDenseQubits) throw DomainError("dense Lindblad oracle supports at most 6 qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  if (rho_full.rows() != dim || rho_full.cols() != dim) {
    throw DomainError("full density matrix must be 2^N x 2^N");
  }
  return n;
}

double max_anti_hermitian(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

SingleExcitationState SingleExcitationState::excited(std::size_t n, QubitIndex k) {
  if (k >= n) throw DomainError("excited qubit index out of range");
  SingleExcitationState s;
  s.rho = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  s.rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return s;
}

CMatrix rhs_single_excitation(const CMatrix& rho, const CouplingMatrices& c) {
  require_same_size(rho, c);
  // A = gamma/2 - i g;  drho = -(A rho + rho A^H) since gamma, g are real symmetric.
  const CMatrix a = 0.5 * c.gamma.cast<Complex>() - kI * c.g.cast<Complex>();
  return -(a * rho + rho * a.adjoint());
}

CMatrix rhs_three_qubit_reference(const CMatrix& rho, const CouplingMatrices& c) {
  if (rho.rows() != 3 || c.n_qubits() != 3) throw DomainError("three-qubit reference requires N = 3");
  const auto r = [&](int i, int j) { return rho(i - 1, j - 1); };
  const auto G = [&](int i, int j) { return c.gamma(i - 1, j - 1); };
  const auto g = [&](int i, int j) { return c.g(i - 1, j - 1); };
  const Complex i_ = kI;
  CMatrix d(3, 3);
  d(0, 0) = -G(1, 1) * r(1, 1) - G(1, 2) / 2 * (r(2, 1) + r(1, 2)) - G(1, 3) / 2 * (r(3, 1) + r(1, 3)) +
            i_ * g(1, 2) * (r(2, 1) - r(1, 2)) + i_ * g(1, 3) * (r(3, 1) - r(1, 3));
  d(0, 1) = -(G(1, 1) + G(2, 2)) / 2 * r(1, 2) - G(1, 2) / 2 * (r(1, 1) + r(2, 2)) - G(1, 3) / 2 * r(3, 2) -
            G(2, 3) / 2 * r(1, 3) + i_ * g(1, 2) * (r(2, 2) - r(1, 1)) + i_ * g(1, 3) * r(3, 2) -
            i_ * g(2, 3) * r(1, 3);
  d(0, 2) = -(G(1, 1) + G(3, 3)) / 2 * r(1, 3) - G(1, 3) / 2 * (r(3, 3) + r(1, 1)) - G(1, 2) / 2 * r(2, 3) -
            G(2, 3) / 2 * r(1, 2) + i_ * g(1, 3) * (r(3, 3) - r(1, 1)) + i_ * g(1, 2) * r(2, 3) -
            i_ * g(2, 3) * r(1, 2);
  d(1, 0) = -(G(1, 1) + G(2, 2)) / 2 * r(2, 1) - G(1, 2) / 2 * (r(1, 1) + r(2, 2)) - G(1, 3) / 2 * r(2, 3) -
            G(2, 3) / 2 * r(3, 1) + i_ * g(1, 2) * (r(1, 1) - r(2, 2)) - i_ * g(1, 3) * r(2, 3) +
            i_ * g(2, 3) * r(3, 1);
  d(1, 1) = -G(2, 2) * r(2, 2) - G(1, 2) / 2 * (r(2, 1) + r(1, 2)) - G(2, 3) / 2 * (r(3, 2) + r(2, 3)) +
            i_ * g(1, 2) * (r(1, 2) - r(2, 1)) + i_ * g(2, 3) * (r(3, 2) - r(2, 3));
  d(1, 2) = -(G(2, 2) + G(3, 3)) / 2 * r(2, 3) - G(2, 3) / 2 * (r(3, 3) + r(2, 2)) - G(1, 2) / 2 * r(1, 3) -
            G(1, 3) / 2 * r(2, 1) + i_ * g(2, 3) * (r(3, 3) - r(2, 2)) + i_ * g(1, 2) * r(1, 3) -
            i_ * g(1, 3) * r(2, 1);
  d(2, 0) = -(G(1, 1) + G(3, 3)) / 2 * r(3, 1) - G(1, 3) / 2 * (r(3, 3) + r(1, 1)) - G(1, 2) / 2 * r(3, 2) -
            G(2, 3) / 2 * r(2, 1) + i_ * g(1, 3) * (r(1, 1) - r(3, 3)) - i_ * g(1, 2) * r(3, 2) +
            i_ * g(2, 3) * r(2, 1);
  d(2, 1) = -(G(2, 2) + G(3, 3)) / 2 * r(3, 2) - G(2, 3) / 2 * (r(3, 3) + r(2, 2)) - G(1, 2) / 2 * r(3, 1) -
            G(1, 3) / 2 * r(1, 2) + i_ * g(2, 3) * (r(2, 2) - r(3, 3)) - i_ * g(1, 2) * r(3, 1) +
            i_ * g(1, 3) * r(1, 2);
  d(2, 2) = -G(3, 3) * r(3, 3) - G(2, 3) / 2 * (r(3, 2) + r(2, 3)) - G(1, 3) / 2 * (r(1, 3) + r(3, 1)) +
            i_ * g(2, 3) * (r(2, 3) - r(3, 2)) + i_ * g(1, 3) * (r(1, 3) - r(3, 1));
  return d;
}

CMatrix rhs_four_qubit_reference(const CMatrix& rho, const CouplingMatrices& c) {
  if (rho.rows() != 4 || c.n_qubits() != 4) throw DomainError("four-qubit reference requires N = 4");
  const auto r = [&](int i, int j) { return rho(i - 1, j - 1); };
  const auto G = [&](int i, int j) { return c.gamma(i - 1, j - 1); };
  const auto g = [&](int i, int j) { return c.g(i - 1, j - 1); };
  const Complex i_ = kI;
  CMatrix d(4, 4);
  d(0, 0) = -G(1, 1) * r(1, 1) - G(1, 2) / 2 * (r(2, 1) + r(1, 2)) - G(1, 3) / 2 * (r(3, 1) + r(1, 3)) -
            G(1, 4) / 2 * (r(4, 1) + r(1, 4)) + i_ * g(1, 2) * (r(2, 1) - r(1, 2)) +
            i_ * g(1, 3) * (r(3, 1) - r(1, 3)) + i_ * g(1, 4) * (r(4, 1) - r(1, 4));
  d(0, 1) = -(G(1, 1) + G(2, 2)) / 2 * r(1, 2) - G(1, 2) / 2 * (r(1, 1) + r(2, 2)) - G(1, 3) / 2 * r(3, 2) -
            G(2, 3) / 2 * r(1, 3) - G(1, 4) / 2 * r(4, 2) - G(2, 4) / 2 * r(1, 4) +
            i_ * g(1, 2) * (r(2, 2) - r(1, 1)) + i_ * g(1, 3) * r(3, 2) - i_ * g(2, 3) * r(1, 3) +
            i_ * g(1, 4) * r(4, 2) - i_ * g(2, 4) * r(1, 4);
  d(0, 2) = -(G(1, 1) + G(3, 3)) / 2 * r(1, 3) - G(1, 3) / 2 * (r(3, 3) + r(1, 1)) - G(1, 2) / 2 * r(2, 3) -
            G(2, 3) / 2 * r(1, 2) - G(1, 4) / 2 * r(4, 3) - G(3, 4) / 2 * r(1, 4) +
            i_ * g(1, 3) * (r(3, 3) - r(1, 1)) + i_ * g(1, 2) * r(2, 3) - i_ * g(2, 3) * r(1, 2) +
            i_ * g(1, 4) * r(4, 3) - i_ * g(3, 4) * r(1, 4);
  d(0, 3) = -(G(1, 1) + G(4, 4)) / 2 * r(1, 4) - G(1, 4) / 2 * (r(1, 1) + r(4, 4)) - G(1, 2) / 2 * r(2, 4) -
            G(1, 3) / 2 * r(3, 4) - G(2, 4) / 2 * r(1, 2) - G(3, 4) / 2 * r(1, 3) +
            i_ * g(1, 4) * (r(4, 4) - r(1, 1)) + i_ * g(1, 2) * r(2, 4) - i_ * g(2, 4) * r(1, 2) +
            i_ * g(1, 3) * r(3, 4) - i_ * g(3, 4) * r(1, 3);
  d(1, 0) = -(G(1, 1) + G(2, 2)) / 2 * r(2, 1) - G(1, 2) / 2 * (r(1, 1) + r(2, 2)) - G(1, 3) / 2 * r(2, 3) -
            G(2, 3) / 2 * r(3, 1) - G(1, 4) / 2 * r(2, 4) - G(2, 4) / 2 * r(4, 1) +
            i_ * g(1, 2) * (r(1, 1) - r(2, 2)) - i_ * g(1, 3) * r(2, 3) + i_ * g(2, 3) * r(3, 1) -
            i_ * g(1, 4) * r(2, 4) + i_ * g(2, 4) * r(4, 1);
  d(1, 1) = -G(2, 2) * r(2, 2) - G(1, 2) / 2 * (r(2, 1) + r(1, 2)) - G(2, 3) / 2 * (r(3, 2) + r(2, 3)) -
            G(2, 4) / 2 * (r(4, 2) + r(2, 4)) + i_ * g(1, 2) * (r(1, 2) - r(2, 1)) +
            i_ * g(2, 3) * (r(3, 2) - r(2, 3)) + i_ * g(2, 4) * (r(4, 2) - r(2, 4));
  d(1, 2) = -(G(2, 2) + G(3, 3)) / 2 * r(2, 3) - G(2, 3) / 2 * (r(3, 3) + r(2, 2)) - G(1, 2) / 2 * r(1, 3) -
            G(1, 3) / 2 * r(2, 1) - G(2, 4) / 2 * r(4, 3) - G(3, 4) / 2 * r(2, 4) +
            i_ * g(2, 3) * (r(3, 3) - r(2, 2)) + i_ * g(1, 2) * r(1, 3) - i_ * g(1, 3) * r(2, 1) +
            i_ * g(2, 4) * r(4, 3) - i_ * g(3, 4) * r(2, 4);
  d(1, 3) = -(G(2, 2) + G(4, 4)) / 2 * r(2, 4) - G(2, 4) / 2 * (r(2, 2) + r(4, 4)) - G(1, 2) / 2 * r(1, 4) -
            G(1, 4) / 2 * r(2, 1) - G(2, 3) / 2 * r(3, 4) - G(3, 4) / 2 * r(2, 3) +
            i_ * g(2, 4) * (r(4, 4) - r(2, 2)) + i_ * g(1, 2) * r(1, 4) - i_ * g(1, 4) * r(2, 1) +
            i_ * g(2, 3) * r(3, 4) - i_ * g(3, 4) * r(2, 3);
  d(2, 0) = -(G(1, 1) + G(3, 3)) / 2 * r(3, 1) - G(1, 3) / 2 * (r(3, 3) + r(1, 1)) - G(1, 2) / 2 * r(3, 2) -
            G(2, 3) / 2 * r(2, 1) - G(1, 4) / 2 * r(3, 4) - G(3, 4) / 2 * r(4, 1) +
            i_ * g(1, 3) * (r(1, 1) - r(3, 3)) - i_ * g(1, 2) * r(3, 2) + i_ * g(2, 3) * r(2, 1) -
            i_ * g(1, 4) * r(3, 4) + i_ * g(3, 4) * r(4, 1);
  d(2, 1) = -(G(2, 2) + G(3, 3)) / 2 * r(3, 2) - G(2, 3) / 2 * (r(3, 3) + r(2, 2)) - G(1, 2) / 2 * r(3, 1) -
            G(1, 3) / 2 * r(1, 2) - G(2, 4) / 2 * r(3, 4) - G(3, 4) / 2 * r(4, 2) +
            i_ * g(2, 3) * (r(2, 2) - r(3, 3)) - i_ * g(1, 2) * r(3, 1) + i_ * g(1, 3) * r(1, 2) -
            i_ * g(2, 4) * r(3, 4) + i_ * g(3, 4) * r(4, 2);
  d(2, 2) = -G(3, 3) * r(3, 3) - G(2, 3) / 2 * (r(3, 2) + r(2, 3)) - G(1, 3) / 2 * (r(1, 3) + r(3, 1)) -
            G(3, 4) / 2 * (r(4, 3) + r(3, 4)) + i_ * g(2, 3) * (r(2, 3) - r(3, 2)) +
            i_ * g(1, 3) * (r(1, 3) - r(3, 1)) + i_ * g(3, 4) * (r(4, 3) - r(3, 4));
  d(2, 3) = -(G(3, 3) + G(4, 4)) / 2 * r(3, 4) - G(3, 4) / 2 * (r(3, 3) + r(4, 4)) - G(1, 3) / 2 * r(1, 4) -
            G(1, 4) / 2 * r(3, 1) - G(2, 3) / 2 * r(2, 4) - G(2, 4) / 2 * r(3, 2) +
            i_ * g(3, 4) * (r(4, 4) - r(3, 3)) - i_ * g(1, 4) * r(3, 1) + i_ * g(1, 3) * r(1, 4) -
            i_ * g(2, 4) * r(3, 2) + i_ * g(2, 3) * r(2, 4);
  d(3, 0) = -(G(1, 1) + G(4, 4)) / 2 * r(4, 1) - G(1, 4) / 2 * (r(4, 4) + r(1, 1)) - G(1, 2) / 2 * r(4, 2) -
            G(2, 4) / 2 * r(2, 1) - G(1, 3) / 2 * r(4, 3) - G(3, 4) / 2 * r(3, 1) +
            i_ * g(1, 4) * (r(1, 1) - r(4, 4)) - i_ * g(1, 2) * r(4, 2) + i_ * g(2, 4) * r(2, 1) -
            i_ * g(1, 3) * r(4, 3) + i_ * g(3, 4) * r(3, 1);
  d(3, 1) = -(G(2, 2) + G(4, 4)) / 2 * r(4, 2) - G(2, 4) / 2 * (r(2, 2) + r(4, 4)) - G(1, 2) / 2 * r(4, 1) -
            G(1, 4) / 2 * r(1, 2) - G(2, 3) / 2 * r(4, 3) - G(3, 4) / 2 * r(3, 2) +
            i_ * g(2, 4) * (r(2, 2) - r(4, 4)) - i_ * g(1, 2) * r(4, 1) + i_ * g(1, 4) * r(1, 2) -
            i_ * g(2, 3) * r(4, 3) + i_ * g(3, 4) * r(3, 2);
  d(3, 2) = -(G(3, 3) + G(4, 4)) / 2 * r(4, 3) - G(3, 4) / 2 * (r(3, 3) + r(4, 4)) - G(1, 3) / 2 * r(4, 1) -
            G(1, 4) / 2 * r(1, 3) - G(2, 3) / 2 * r(4, 2) - G(2, 4) / 2 * r(2, 3) +
            i_ * g(3, 4) * (r(3, 3) - r(4, 4)) - i_ * g(1, 3) * r(4, 1) + i_ * g(1, 4) * r(1, 3) -
            i_ * g(2, 3) * r(4, 2) + i_ * g(2, 4) * r(2, 3);
  d(3, 3) = -G(4, 4) * r(4, 4) - G(1, 4) / 2 * (r(4, 1) + r(1, 4)) - G(2, 4) / 2 * (r(4, 2) + r(2, 4)) -
            G(3, 4) / 2 * (r(4, 3) + r(3, 4)) + i_ * g(1, 4) * (r(1, 4) - r(4, 1)) +
            i_ * g(2, 4) * (r(2, 4) - r(4, 2)) + i_ * g(3, 4) * (r(3, 4) - r(4, 3));
  return d;
}

double default_time_step(const CouplingMatrices& c) { return 1e-3 / c.gamma_max(); }

EvolutionResult integrate(const SingleExcitationState& state0, const CouplingMatrices& c,
                          const IntegrationOptions& options) {
  require_same_size(state0.rho, c);
  if (!(options.t_max > 0.0)) throw DomainError("t_max must be positive");
  if (options.dt < 0.0) throw DomainError("dt must be positive");
  if (options.sample_stride == 0) throw DomainError("sample_stride must be >= 1");

  const double dt_request = options.dt > 0.0 ? options.dt : default_time_step(c);
  const auto n_steps =
      std::max<std::size_t>(static_cast<std::size_t>(std::ceil(options.t_max / dt_request - 1e-9)), 1);
  const double dt = options.t_max / static_cast<double>(n_steps);

  EvolutionResult result;
  const auto rhs = [&c](const CMatrix& r) { return rhs_single_excitation(r, c); };

  auto check_state = [&](const CMatrix& rho, double previous_trace, std::size_t step, bool at_sample) {
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      const double p = rho(i, i).real();
      if (p < -1e-10 || p > 1.0 + 1e-10) throw IntegrationError("population outside [0, 1]", step);
    }
    const double tr = rho.trace().real();
    if (tr > 1.0 + 1e-9) throw IntegrationError("excited trace exceeds 1", step);
    if (tr > previous_trace + 1e-9) throw IntegrationError("excited trace increased", step);
    if (at_sample && options.check_positivity) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-8) throw IntegrationError("negative eigenvalue", step);
    }
    return tr;
  };

  auto record = [&](const CMatrix& rho, double t) {
    SingleExcitationState s;
    s.rho = rho;
    s.time = t;
    result.times.push_back(t);
    result.ground_population.push_back(1.0 - rho.trace().real());
    result.states.push_back(std::move(s));
  };

  if (max_anti_hermitian(state0.rho) > 1e-10) throw IntegrationError("initial state is not Hermitian", 0);
  CMatrix rho = state0.rho;
  double trace = check_state(rho, rho.trace().real(), 0, true);
  record(rho, state0.time);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    rho = rk4_step(rho, dt, rhs);
    rho = (0.5 * (rho + rho.adjoint())).eval();
    const bool sample = (step % options.sample_stride == 0) || step == n_steps;
    trace = check_state(rho, trace, step, sample);
    if (sample) record(rho, state0.time + dt * static_cast<double>(step));
  }
  return result;
}

std::size_t excited_index(std::size_t n, QubitIndex k) { return bit_of(n, k); }

CMatrix lowering_operator(std::size_t n, QubitIndex k) {
  if (k >= n) throw DomainError("qubit index out of range");
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t bit = bit_of(n, k);
  CMatrix s = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    if (b & bit) s(static_cast<Eigen::Index>(b ^ bit), static_cast<Eigen::Index>(b)) = 1.0;
  }
  return s;
}

CMatrix full_lindblad_rhs(const CMatrix& rho_full, const CouplingMatrices& c, ExecPolicy policy) {
  const std::size_t n = full_qubit_count(rho_full, c);
  const std::size_t dim = std::size_t{1} << n;

  // drho = A rho + rho A^H + sum_ij gamma_ij s_i rho s_j^+ with
  // A = sum_ij (i g_ij - gamma_ij / 2) s_i^+ s_j.
  std::vector<std::size_t> bits(n);
  for (std::size_t k = 0; k < n; ++k) bits[k] = bit_of(n, k);
  CMatrix coef(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      coef(i, j) = kI * c.g(i, j) - 0.5 * c.gamma(i, j);
    }
  }

  CMatrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };

  // Row a of A rho: A_{a c} is non-zero for c = a (diagonal n_i terms) and
  // c = a ^ bit_i ^ bit_j whenever bit_i is set in a and bit_j is not.
  const auto kernel_row = [&](std::size_t a) {
    for (std::size_t b = 0; b < dim; ++b) {
      Complex acc{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) {
        if (a & bits[i]) {
          acc += coef(i, i) * rho_full(idx(a), idx(b));
          for (std::size_t j = 0; j < n; ++j) {
            if (j != i && !(a & bits[j])) acc += coef(i, j) * rho_full(idx(a ^ bits[i] ^ bits[j]), idx(b));
          }
        }
        if (b & bits[i]) {
          acc += std::conj(coef(i, i)) * rho_full(idx(a), idx(b));
          for (std::size_t j = 0; j < n; ++j) {
            if (j != i && !(b & bits[j])) {
              acc += std::conj(coef(i, j)) * rho_full(idx(a), idx(b ^ bits[i] ^ bits[j]));
            }
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (a & bits[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (b & bits[j]) continue;
          acc += c.gamma(i, j) * rho_full(idx(a | bits[i]), idx(b | bits[j]));
        }
      }
      out(idx(a), idx(b)) = acc;
    }
  };

  const auto dim_signed = static_cast<long long>(dim);
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long a = 0; a < dim_signed; ++a) kernel_row(static_cast<std::size_t>(a));
  } else {
    for (long long a = 0; a < dim_signed; ++a) kernel_row(static_cast<std::size_t>(a));
  }
  return out;
}

CMatrix full_lindblad_rhs_reference(const CMatrix& rho_full, const CouplingMatrices& c) {
  const std::size_t n = full_qubit_count(rho_full, c);
  std::vector<CMatrix> s;
  s.reserve(n);
  for (std::size_t k = 0; k < n; ++k) s.push_back(lowering_operator(n, k));

  CMatrix dissipator = CMatrix::Zero(rho_full.rows(), rho_full.cols());
  CMatrix h = CMatrix::Zero(rho_full.rows(), rho_full.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const CMatrix up_down = s[i].adjoint() * s[j];
      dissipator += 0.5 * c.gamma(i, j) *
                    (2.0 * s[i] * rho_full * s[j].adjoint() - rho_full * up_down - up_down * rho_full);
      if (i != j) h += c.g(i, j) * up_down;
    }
  }
  // Coherent part with the sign of the expanded component equations.
  return dissipator + kI * (h * rho_full - rho_full * h);
}

FullDensityMatrix embed_full(const SingleExcitationState& state) {
  const std::size_t n = state.n_qubits();
  if (n == 0) throw DomainError("empty state");
  if (n > 20) throw DomainError("too many qubits for a dense embedding");
  if (max_anti_hermitian(state.rho) > 1e-10) throw ValidationError("rho Hermitian", "excited block is not Hermitian");
  const double excited = state.rho.trace().real();
  if (excited > 1.0 + 1e-9) throw ValidationError("trace <= 1", "excited population exceeds 1");

  const std::size_t dim = std::size_t{1} << n;
  FullDensityMatrix full;
  full.n_qubits = n;
  full.rho = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      full.rho(static_cast<Eigen::Index>(bit_of(n, i)), static_cast<Eigen::Index>(bit_of(n, j))) =
          state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  full.rho(0, 0) = 1.0 - excited;
  return full;
}

CMatrix extract_excited_block(const CMatrix& rho_full, std::size_t n) {
  CMatrix block(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rho_full(static_cast<Eigen::Index>(bit_of(n, i)), static_cast<Eigen::Index>(bit_of(n, j)));
    }
  }
  return block;
}

double normalization_rate(const CouplingMatrices& c) {
  return c.n_qubits() >= 2 ? c.gamma(1, 1) : c.gamma(0, 0);
}

}  // namespace enzq
