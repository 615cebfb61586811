// couplings.hpp: dissipative (gamma_ij) and coherent (g_ij) emitter couplings
// from free-space, traveling-waveguide, standing-wave and tabulated reservoirs.
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "enzq/types.hpp"

namespace enzq {

struct EmitterLayout {
  std::vector<double> positions;            // m, along the channel axis
  double dipole_moment_debye = 60.0;
  Eigen::Vector3d orientation{0.0, 0.0, 1.0};
  double transition_frequency = 295e12;     // Hz
  double host_index = 1.0;

  std::size_t n_qubits() const noexcept { return positions.size(); }
  double dipole_moment_si() const noexcept;
  double angular_frequency() const noexcept;

  // Throws ValidationError naming the first violated invariant.
  void validate() const;

  // n emitters spaced by `separation`, centred on the origin.
  static EmitterLayout equally_spaced(std::size_t n, double separation);
};

struct CouplingMatrices {
  RMatrix gamma;  // rad/s
  RMatrix g;      // rad/s

  std::size_t n_qubits() const noexcept { return static_cast<std::size_t>(gamma.rows()); }
  double gamma_max() const { return gamma.diagonal().maxCoeff(); }

  // Symmetry (1e-12 relative), positive diagonal, zero diag(g), PSD gamma.
  void validate() const;
};

struct FreeSpace {
  double host_index = 1.0;
};

struct TravelingWaveguide {
  double gamma_wg = 0.0;            // rad/s
  double beta = 0.0;                // rad/m
  double attenuation_length = 0.0;  // m, +inf for a lossless channel
};

// Rank-one mode u(x) = cos(2*pi*(x - origin)/wavelength). `background` is an
// uncorrelated per-emitter decay (non-guided radiation and local quenching)
// added to the diagonal only.
struct StandingWaveCavity {
  double gamma_c = 0.0;          // rad/s
  double g_c = 0.0;              // rad/s
  double mode_wavelength = 0.0;  // m
  double mode_origin = 0.0;      // m
  double background = 0.0;       // rad/s
};

struct Tabulated {
  CouplingMatrices matrices;
};

using ReservoirModel = std::variant<FreeSpace, TravelingWaveguide, StandingWaveCavity, Tabulated>;

// n*w0^3*mu^2 / (3*pi*eps0*hbar*c^3); mu in C m, w0 in rad/s.
double intrinsic_decay_rate(double mu, double omega0, double host_index);

// Closed-form dyadic Green function result for parallel dipoles
// perpendicular to the separation axis.
CouplingMatrices free_space_coupling(const EmitterLayout& layout);

CouplingMatrices traveling_waveguide_coupling(const EmitterLayout& layout, double gamma_wg,
                                              double beta, double attenuation_length);

CouplingMatrices standing_wave_coupling(const EmitterLayout& layout, const StandingWaveCavity& cavity);

// Parses {"n": int, "gamma_ghz": [[...]], "g_ghz": [[...]]}. Rates in GHz.
// Nearly symmetric input (1e-9 relative) is symmetrized; anything else that
// violates an invariant throws ValidationError.
CouplingMatrices load_tabulated(std::string_view json_text);

// Validates and symmetrizes raw matrices (rad/s) using the same rules.
CouplingMatrices make_tabulated(RMatrix gamma, RMatrix g);

// Serializes to the tabulated JSON schema (GHz).
std::string to_tabulated_json(const CouplingMatrices& c);

CouplingMatrices compute_couplings(const EmitterLayout& layout, const ReservoirModel& model);

}  // namespace enzq
