// gate.hpp: two-qubit phase gate from the superradiant/subradiant splitting.
#pragma once

#include <array>
#include <utility>
#include <variant>
#include <vector>

#include "enzq/couplings.hpp"
#include "enzq/types.hpp"

namespace enzq {

struct GateParams {
  double gamma11 = 0.0;  // rad/s
  double gamma12 = 0.0;  // rad/s
  double omega1 = 0.0;   // rad/s, Rabi frequency of atom 1
  double omega2 = 0.0;   // rad/s, Rabi frequency of atom 2
  double blockade_ratio = 10.0;

  void validate() const;
};

struct CollectiveRates {
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
};

struct EffectiveDrives {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
};

struct BlockadeCheck {
  bool superradiant_blocked = false;  // gamma_+ >= ratio * Omega_-
  bool subradiant_driven = false;     // Omega_- >= ratio * gamma_-
  bool ok() const noexcept { return superradiant_blocked && subradiant_driven; }
};

// Amplitudes over {|gg>, |+>, |->, |ee>}.
using GateAmplitudes = std::array<Complex, 4>;

struct PulseResult {
  GateAmplitudes amplitudes{};
  double phase_acquired = 0.0;  // arg of the |gg> amplitude, in [0, 2 pi)
  double fidelity = 0.0;        // |<-gg|psi>|^2
};

struct GateReport {
  CollectiveRates rates;
  EffectiveDrives drives;
  BlockadeCheck blockade;
  double fidelity_analytic = 0.0;
  PulseResult pulse;
  double duration = 0.0;  // s
};

CollectiveRates collective_rates(double gamma11, double gamma12);
EffectiveDrives effective_drives(double omega1, double omega2);
BlockadeCheck check_blockade(double gamma_plus, double omega_minus, double gamma_minus, double ratio);

// max(0, 1 - sqrt(gamma_- / gamma_11)).
double analytic_fidelity(double gamma_minus, double gamma11);

// No-jump evolution of |gg> under the non-Hermitian effective Hamiltonian.
// duration <= 0 selects the 2 pi pulse 2 pi / Omega_-.
PulseResult simulate_pulse(const GateParams& params, double duration = 0.0);

GateReport analyze_gate(const GateParams& params, double duration = 0.0);

struct FreeSpaceGate {
  double dipole_moment_debye = 60.0;
  double transition_frequency = 295e12;
  double host_index = 1.0;
};

struct EnzPassiveGate {
  double gamma_wg = 0.0;
  double attenuation_length = 0.0;
};

// Gain segment of length `active_length` between the emitters whose
// attenuation exponent is scaled by (1 - compensation). Applies only for
// separations exceeding `active_length`.
struct EnzActiveGate {
  double gamma_wg = 0.0;
  double attenuation_length = 0.0;
  double compensation = 1.0;
  double active_length = 200e-9;
};

using GateEnvironment = std::variant<FreeSpaceGate, EnzPassiveGate, EnzActiveGate>;

struct FidelityPoint {
  double distance = 0.0;  // m
  double gamma11 = 0.0;   // rad/s
  double gamma12 = 0.0;   // rad/s
  double fidelity = 0.0;
};

std::vector<FidelityPoint> fidelity_vs_distance(const GateEnvironment& env, const std::vector<double>& d_grid,
                                                ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace enzq
