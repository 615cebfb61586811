#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "enzq/errors.hpp"
#include "enzq/metrics.hpp"
#include "random_inputs.hpp"

using namespace enzq;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix pure(const CVector& psi) { return psi * psi.adjoint(); }

CVector basis_state(std::size_t n, std::initializer_list<std::pair<Eigen::Index, Complex>> amps) {
  CVector psi = CVector::Zero(Eigen::Index{1} << n);
  for (const auto& [i, a] : amps) psi(i) = a;
  return psi.normalized();
}

CMatrix ghz(std::size_t n) {
  return pure(basis_state(n, {{0, 1.0}, {(Eigen::Index{1} << n) - 1, 1.0}}));
}

CMatrix w_state(std::size_t n) {
  CVector psi = CVector::Zero(Eigen::Index{1} << n);
  for (std::size_t k = 0; k < n; ++k) psi(Eigen::Index{1} << k) = 1.0;
  return pure(psi.normalized());
}

CMatrix bell() { return pure(basis_state(2, {{1, 1.0}, {2, 1.0}})); }

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = fixtures::random_matrix(static_cast<std::size_t>(n), rng);
  return 0.5 * (a + a.adjoint());
}

CMatrix random_qubit_state(std::mt19937_64& rng) {
  const CMatrix a = fixtures::random_matrix(2, rng);
  CMatrix r = a * a.adjoint();
  return r / r.trace();
}

CMatrix random_unitary2(std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(fixtures::random_matrix(2, rng));
  return qr.householderQ();
}

// Kronecker product, first argument on the most significant bits.
CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix local_unitary(std::size_t n, QubitIndex k, const CMatrix& u) {
  CMatrix op = CMatrix::Identity(1, 1);
  for (QubitIndex q = 0; q < n; ++q) op = kron(op, q == k ? u : CMatrix::Identity(2, 2));
  return op;
}

}  // namespace

TEST(Jacobi, DiagonalIsSorted) {
  CMatrix m = CMatrix::Zero(4, 4);
  m.diagonal() << 3.0, -1.0, 2.0, 0.5;
  const auto ev = hermitian_eigenvalues(m);
  EXPECT_EQ(ev, (std::vector<double>{-1.0, 0.5, 2.0, 3.0}));
}

TEST(Jacobi, TwoByTwoClosedForm) {
  CMatrix m(2, 2);
  const double a = 1.3, b = -0.7, c = 0.2;
  m << a, b, b, c;
  const auto ev = hermitian_eigenvalues(m);
  const double mid = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  EXPECT_NEAR(ev[0], mid - rad, 1e-15);
  EXPECT_NEAR(ev[1], mid + rad, 1e-15);
}

TEST(Jacobi, TraceAndDeterminantAgainstLu) {
  std::mt19937_64 rng(21);
  for (Eigen::Index n : {2, 3, 5, 8, 16}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix m = random_hermitian(n, rng);
      const auto ev = hermitian_eigenvalues(m);
      double sum = 0.0, prod = 1.0;
      for (double v : ev) {
        sum += v;
        prod *= v;
      }
      const Complex det = Eigen::PartialPivLU<CMatrix>(m).determinant();
      EXPECT_NEAR(sum, m.trace().real(), 1e-10);
      EXPECT_NEAR(prod, det.real(), 1e-8 * std::max(1.0, std::abs(det)));
      EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
    }
  }
}

TEST(Jacobi, Reconstruction) {
  std::mt19937_64 rng(22);
  for (Eigen::Index n : {1, 4, 9, 16, 32}) {
    const CMatrix m = random_hermitian(n, rng);
    const auto e = jacobi_eigen(m);
    Eigen::VectorXd lam(n);
    for (Eigen::Index i = 0; i < n; ++i) lam(i) = e.values[static_cast<std::size_t>(i)];
    const CMatrix rec = e.vectors * lam.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((m - rec).norm(), 1e-10 * m.norm());
    EXPECT_LT((e.vectors.adjoint() * e.vectors - CMatrix::Identity(n, n)).norm(), 1e-12);
  }
}

TEST(Jacobi, RejectsNonHermitian) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eigenvalues(m), DomainError);
}

TEST(PartialTranspose, Involution) {
  std::mt19937_64 rng(23);
  const CMatrix rho = fixtures::random_pure_state(3, rng);
  for (const std::vector<QubitIndex>& subset : {std::vector<QubitIndex>{0}, {1}, {0, 2}, {1, 2}}) {
    EXPECT_EQ(partial_transpose(partial_transpose(rho, 3, subset), 3, subset), rho);
  }
}

TEST(PartialTranspose, ProductStateTransposesFactor) {
  std::mt19937_64 rng(24);
  const CMatrix a = random_qubit_state(rng);
  const CMatrix b = random_qubit_state(rng);
  const CMatrix pt = partial_transpose(kron(a, b), 2, {0});
  EXPECT_LT(max_abs(pt - kron(a.transpose(), b)), 1e-15);
  EXPECT_GE(hermitian_eigenvalues(pt).front(), -1e-15);
  EXPECT_NEAR(std::abs(pt.trace() - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(PartialTranspose, BellSpectrum) {
  const auto ev = hermitian_eigenvalues(partial_transpose(bell(), 2, {0}));
  EXPECT_NEAR(ev[0], -0.5, 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], 0.5, 1e-14);
}

TEST(PartialTranspose, RejectsDegenerateSubsets) {
  const CMatrix rho = bell();
  EXPECT_THROW(partial_transpose(rho, 2, {}), DomainError);
  EXPECT_THROW(partial_transpose(rho, 2, {0, 1}), DomainError);
  EXPECT_THROW(partial_transpose(rho, 2, {2}), DomainError);
}

TEST(Negativity, ReferenceStates) {
  EXPECT_NEAR(negativity_bipartition(bell(), 2, {0}), 1.0, 1e-12);
  EXPECT_NEAR(negativity_bipartition(w_state(3), 3, {0}), 2.0 * std::sqrt(2.0) / 3.0, 1e-12);
  EXPECT_NEAR(negativity_multiqubit(w_state(3), 3), 2.0 * std::sqrt(2.0) / 3.0, 1e-12);
  EXPECT_NEAR(negativity_multiqubit(ghz(3), 3), 1.0, 1e-12);
}

TEST(Negativity, SymmetricStateGeometricMeanEqualsFactor) {
  const CMatrix w4 = w_state(4);
  EXPECT_NEAR(negativity_multiqubit(w4, 4), negativity_bipartition(w4, 4, {2}), 1e-12);
}

TEST(Negativity, PptSoundnessOnRandomProductStates) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    CMatrix rho = CMatrix::Identity(1, 1);
    for (std::size_t q = 0; q < n; ++q) rho = kron(rho, random_qubit_state(rng));
    EXPECT_LT(negativity_multiqubit(rho, n), 1e-10);
  }
}

TEST(Negativity, LocalUnitaryAndConjugationInvariance) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3;
    const CMatrix rho = fixtures::random_pure_state(n, rng);
    const double neg = negativity_multiqubit(rho, n);
    const double eg = genuine_multipartite(rho, n);
    for (QubitIndex k = 0; k < n; ++k) {
      const CMatrix u = local_unitary(n, k, random_unitary2(rng));
      const CMatrix r2 = u * rho * u.adjoint();
      EXPECT_NEAR(negativity_multiqubit(r2, n), neg, 1e-10);
      EXPECT_NEAR(genuine_multipartite(r2, n), eg, 1e-10);
    }
    EXPECT_NEAR(negativity_multiqubit(rho.conjugate(), n), neg, 1e-12);
    EXPECT_NEAR(genuine_multipartite(rho.conjugate(), n), eg, 1e-12);
  }
}

TEST(PartialTracePair, KeepingEverythingIsIdentity) {
  std::mt19937_64 rng(27);
  const CMatrix rho = fixtures::random_pure_state(2, rng);
  EXPECT_LT(max_abs(partial_trace_pair(rho, 2, 0, 1) - rho), 1e-15);
}

TEST(PartialTracePair, GhzMarginal) {
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  for (auto [j, k] : {std::pair<QubitIndex, QubitIndex>{0, 1}, {0, 2}, {1, 2}}) {
    EXPECT_LT(max_abs(partial_trace_pair(ghz(3), 3, j, k) - expected), 1e-15);
  }
}

TEST(PartialTracePair, ProductStateMarginalsFactorize) {
  std::mt19937_64 rng(28);
  const CMatrix a = random_qubit_state(rng), b = random_qubit_state(rng), c = random_qubit_state(rng);
  const CMatrix rho = kron(kron(a, b), c);
  EXPECT_LT(max_abs(partial_trace_pair(rho, 3, 0, 2) - kron(a, c)), 1e-15);
  EXPECT_LT(max_abs(partial_trace_pair(rho, 3, 1, 2) - kron(b, c)), 1e-15);
  EXPECT_THROW(partial_trace_pair(rho, 3, 1, 1), DomainError);
}

TEST(PartialTracePair, IsAValidStateForRandomInputs) {
  std::mt19937_64 rng(29);
  const CMatrix rho = fixtures::random_pure_state(4, rng);
  const CMatrix r = partial_trace_pair(rho, 4, 1, 3);
  EXPECT_LT(max_abs(r - r.adjoint()), 1e-14);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-14);
  EXPECT_GE(hermitian_eigenvalues(r).front(), -1e-9);
}

TEST(Purity, ReferenceValues) {
  std::mt19937_64 rng(30);
  EXPECT_NEAR(purity(fixtures::random_pure_state(3, rng)), 1.0, 1e-14);
  EXPECT_NEAR(purity(CMatrix::Identity(8, 8) / 8.0), 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(purity(partial_trace_pair(ghz(3), 3, 0, 1)), 0.5, 1e-15);
}

TEST(GenuineMultipartite, GhzAndW) {
  EXPECT_NEAR(genuine_multipartite(ghz(3), 3), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(genuine_multipartite(w_state(3), 3), 16.0 / 27.0, 1e-12);
}

TEST(GenuineMultipartite, GhzIsTwoThirdsForAnySize) {
  for (std::size_t n : {4u, 5u}) EXPECT_NEAR(genuine_multipartite(ghz(n), n), 2.0 / 3.0, 1e-12) << n;
}

TEST(GenuineMultipartite, ProductPureStateIsZero) {
  std::mt19937_64 rng(31);
  CMatrix rho = CMatrix::Identity(1, 1);
  for (int q = 0; q < 4; ++q) {
    CVector v(2);
    v << Complex(0.3, 0.1), Complex(-0.5, 0.8);
    rho = kron(rho, pure(v.normalized()));
  }
  EXPECT_NEAR(genuine_multipartite(rho, 4), 0.0, 1e-14);
}

TEST(GenuineMultipartite, StaysInUnitInterval) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const double e = genuine_multipartite(fixtures::random_pure_state(3, rng), 3);
    EXPECT_GE(e, -1e-12);
    EXPECT_LE(e, 1.0);
  }
}

TEST(Timeseries, GroundAndInitialSamples) {
  EvolutionResult r;
  SingleExcitationState s;
  s.rho = CMatrix::Zero(3, 3);
  r.times = {0.0, 1.0};
  r.states = {SingleExcitationState::excited(3, 1), s};
  r.ground_population = {0.0, 1.0};
  const auto m = metrics_timeseries(r, 2.0);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].negativity, 0.0);
  EXPECT_NEAR(m[0].e_g2, 0.0, 1e-15);
  EXPECT_EQ(m[0].populations, (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_EQ(m[1].negativity, 0.0);
  EXPECT_NEAR(m[1].e_g2, 0.0, 1e-15);
  EXPECT_EQ(m[1].time_norm, 2.0);
}
