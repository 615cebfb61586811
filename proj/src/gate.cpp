#include "enzq/gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "enzq/constants.hpp"
#include "enzq/errors.hpp"
#include "enzq/parallel.hpp"
#include "enzq/rk4.hpp"

namespace enzq {

namespace {

using Vec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

constexpr Complex kI{0.0, 1.0};
enum Level : int { kGG = 0, kPlus = 1, kMinus = 2, kEE = 3 };

// Basis |+> = (|ge> + |eg>)/sqrt2, |-> = (|ge> - |eg>)/sqrt2 with drive
// H = sum_i (Omega_i / 2)(s_i + s_i^+). Decay enters as -i gamma / 2 on the
// diagonal; |ee> decays into both collective states at gamma_+ + gamma_-.
Mat4 effective_hamiltonian(const CollectiveRates& r, const EffectiveDrives& d) {
  Mat4 h = Mat4::Zero();
  h(kPlus, kGG) = h(kGG, kPlus) = 0.5 * d.omega_plus;
  h(kMinus, kGG) = h(kGG, kMinus) = -0.5 * d.omega_minus;
  h(kEE, kPlus) = h(kPlus, kEE) = 0.5 * d.omega_plus;
  h(kEE, kMinus) = h(kMinus, kEE) = 0.5 * d.omega_minus;
  h(kPlus, kPlus) = -0.5 * kI * r.gamma_plus;
  h(kMinus, kMinus) = -0.5 * kI * r.gamma_minus;
  h(kEE, kEE) = -0.5 * kI * (r.gamma_plus + r.gamma_minus);
  return h;
}

void check_grid(const std::vector<double>& d_grid) {
  if (d_grid.empty()) throw DomainError("distance grid is empty");
  if (!(d_grid.front() > 0.0)) throw DomainError("distances must be positive");
  for (std::size_t i = 1; i < d_grid.size(); ++i) {
    if (!(d_grid[i] > d_grid[i - 1])) throw DomainError("distance grid must be strictly increasing");
  }
}

FidelityPoint point_from(double d, const CouplingMatrices& c) {
  FidelityPoint p;
  p.distance = d;
  p.gamma11 = c.gamma(0, 0);
  p.gamma12 = c.gamma(0, 1);
  const double gamma_minus = std::max(0.0, collective_rates(p.gamma11, p.gamma12).gamma_minus);
  p.fidelity = analytic_fidelity(gamma_minus, p.gamma11);
  return p;
}

EmitterLayout pair_layout(double d) {
  EmitterLayout layout;
  layout.positions = {0.0, d};
  return layout;
}

}  // namespace

void GateParams::validate() const {
  if (!(gamma11 > 0.0)) throw ValidationError("gamma11 > 0", "non-positive single-emitter decay");
  if (!(std::abs(gamma12) <= gamma11)) throw ValidationError("|gamma12| <= gamma11", "2 x 2 gamma is not PSD");
  if (!(blockade_ratio > 0.0)) throw ValidationError("blockade_ratio > 0", "non-positive ratio");
}

CollectiveRates collective_rates(double gamma11, double gamma12) {
  return {gamma11 + gamma12, gamma11 - gamma12};
}

EffectiveDrives effective_drives(double omega1, double omega2) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {(omega1 + omega2) * inv_sqrt2, (omega1 - omega2) * inv_sqrt2};
}

BlockadeCheck check_blockade(double gamma_plus, double omega_minus, double gamma_minus, double ratio) {
  return {gamma_plus >= ratio * omega_minus, omega_minus >= ratio * gamma_minus};
}

double analytic_fidelity(double gamma_minus, double gamma11) {
  if (!(gamma11 > 0.0)) throw DomainError("gamma11 must be positive");
  if (gamma_minus < 0.0) throw DomainError("negative subradiant rate is unphysical");
  return std::max(0.0, 1.0 - std::sqrt(gamma_minus / gamma11));
}

PulseResult simulate_pulse(const GateParams& params, double duration) {
  params.validate();
  const CollectiveRates rates = collective_rates(params.gamma11, params.gamma12);
  const EffectiveDrives drives = effective_drives(params.omega1, params.omega2);
  if (duration <= 0.0) {
    if (drives.omega_minus == 0.0) throw DomainError("2 pi pulse undefined for Omega_- = 0; pass a duration");
    duration = constants::kTwoPi / std::abs(drives.omega_minus);
  }

  const Mat4 h = effective_hamiltonian(rates, drives);
  const Mat4 generator = -kI * h;
  const double fastest = std::max({std::abs(drives.omega_plus), std::abs(drives.omega_minus), rates.gamma_plus,
                                   std::abs(rates.gamma_minus), 1.0 / duration});
  const auto steps = static_cast<std::size_t>(std::max(4000.0, std::ceil(duration * fastest / 0.02)));
  const double dt = duration / static_cast<double>(steps);

  Vec4 psi = Vec4::Zero();
  psi(kGG) = 1.0;
  const auto rhs = [&generator](const Vec4& y) -> Vec4 { return generator * y; };
  for (std::size_t s = 0; s < steps; ++s) {
    psi = rk4_step(psi, dt, rhs);
    if (!(psi.norm() <= 1.0 + 1e-6)) throw IntegrationError("pulse propagation unstable", s + 1);
  }

  PulseResult out;
  for (int k = 0; k < 4; ++k) out.amplitudes[static_cast<std::size_t>(k)] = psi(k);
  double phase = std::arg(psi(kGG));
  if (phase < 0.0) phase += constants::kTwoPi;
  out.phase_acquired = phase;
  out.fidelity = std::norm(-psi(kGG));
  return out;
}

GateReport analyze_gate(const GateParams& params, double duration) {
  params.validate();
  GateReport report;
  report.rates = collective_rates(params.gamma11, params.gamma12);
  report.drives = effective_drives(params.omega1, params.omega2);
  report.blockade = check_blockade(report.rates.gamma_plus, std::abs(report.drives.omega_minus),
                                   report.rates.gamma_minus, params.blockade_ratio);
  report.fidelity_analytic = analytic_fidelity(report.rates.gamma_minus, params.gamma11);
  report.duration = duration > 0.0 ? duration : constants::kTwoPi / std::abs(report.drives.omega_minus);
  report.pulse = simulate_pulse(params, report.duration);
  return report;
}

std::vector<FidelityPoint> fidelity_vs_distance(const GateEnvironment& env, const std::vector<double>& d_grid,
                                                ExecPolicy policy) {
  check_grid(d_grid);
  std::vector<FidelityPoint> out(d_grid.size());
  struct Evaluate {
    double d;
    FidelityPoint operator()(const FreeSpaceGate& e) const {
      EmitterLayout layout = pair_layout(d);
      layout.dipole_moment_debye = e.dipole_moment_debye;
      layout.transition_frequency = e.transition_frequency;
      layout.host_index = e.host_index;
      return point_from(d, free_space_coupling(layout));
    }
    FidelityPoint operator()(const EnzPassiveGate& e) const {
      return point_from(d, traveling_waveguide_coupling(pair_layout(d), e.gamma_wg, 0.0, e.attenuation_length));
    }
    FidelityPoint operator()(const EnzActiveGate& e) const {
      if (!(e.compensation >= 0.0 && e.compensation <= 1.0)) {
        throw DomainError("active compensation must lie in [0, 1]");
      }
      if (!(e.active_length >= 0.0)) throw DomainError("active length must be non-negative");
      double length = e.attenuation_length;
      if (d > e.active_length) {
        // Exponent scaled by (1 - c); full compensation removes it entirely.
        const double remaining = 1.0 - e.compensation;
        length = remaining > 0.0 ? e.attenuation_length / remaining : std::numeric_limits<double>::infinity();
      }
      return point_from(d, traveling_waveguide_coupling(pair_layout(d), e.gamma_wg, 0.0, length));
    }
  };
  parallel_for(d_grid.size(), policy, [&](std::size_t i) { out[i] = std::visit(Evaluate{d_grid[i]}, env); });
  return out;
}

}  // namespace enzq
