// scenario.hpp: JSON configuration, named reservoir calibrations and the
// couple -> evolve -> measure -> report pipeline.
//
// Configurations keep the user's units (nm, THz, GHz) so that
// parse -> serialize -> parse is exact; conversion to SI happens in the
// build_* functions. Unknown keys are rejected everywhere.
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "enzq/couplings.hpp"
#include "enzq/dispersion.hpp"
#include "enzq/dynamics.hpp"
#include "enzq/gate.hpp"
#include "enzq/metrics.hpp"

namespace enzq {

inline constexpr std::string_view kToolVersion = "1.0.0";

// ---------------------------------------------------------------- presets

// Named calibrations used by the figure recipes:
//   "enz"    traveling wave, beta = 0, gamma_wg = 50 GHz, L = 5 um
//   "groove" standing wave, lambda = 800 nm antinode at the origin,
//            gamma_c = 91 GHz, g_c = 23 GHz, background 13 GHz
//   "rod"    standing wave, lambda = 800 nm, near-node centre with
//            gamma_22 = 5 GHz and |g_13| = 35 GHz at d = 200 nm
//   "free_space" vacuum closed form
ReservoirModel preset_reservoir(std::string_view name);
const std::vector<std::string>& preset_names();

// ---------------------------------------------------------------- scenario

struct LayoutDesc {
  std::vector<double> positions_nm;
  double dipole_moment_debye = 60.0;
  std::array<double, 3> orientation{0.0, 0.0, 1.0};
  double transition_frequency_thz = 295.0;
  double host_index = 1.0;
};

struct PresetDesc {
  std::string name;
};
struct FreeSpaceDesc {
  std::optional<double> host_index;
};
struct TravelingDesc {
  double gamma_wg_ghz = 0.0;
  double beta_per_um = 0.0;
  std::optional<double> attenuation_length_um;  // absent: lossless
};
struct StandingDesc {
  double gamma_c_ghz = 0.0;
  double g_c_ghz = 0.0;
  double mode_wavelength_nm = 0.0;
  double mode_origin_nm = 0.0;
  double background_ghz = 0.0;
};
struct TabulatedDesc {
  RMatrix gamma_ghz;
  RMatrix g_ghz;
};

using ReservoirDesc = std::variant<PresetDesc, FreeSpaceDesc, TravelingDesc, StandingDesc, TabulatedDesc>;

inline const std::vector<std::string> kOutputColumns = {"rho", "ground_population", "negativity", "e_g2",
                                                        "populations"};

struct ScenarioConfig {
  ReservoirDesc reservoir = PresetDesc{"enz"};
  LayoutDesc layout;
  std::size_t initial_excited = 2;  // one-based
  double dt_norm = 1e-3;            // dt * max gamma_ii
  double t_max_norm = 10.0;         // gamma_22 * t_max
  std::size_t sample_stride = 10;
  std::vector<std::string> outputs = {"negativity", "e_g2", "populations"};

  std::size_t n_qubits() const noexcept { return layout.positions_nm.size(); }
};

// Collects every violation and throws ConfigError listing them.
ScenarioConfig parse_config(std::string_view json_text);
std::string serialize_config(const ScenarioConfig& config);

EmitterLayout build_layout(const LayoutDesc& desc);
ReservoirModel build_reservoir(const ReservoirDesc& desc, const LayoutDesc& layout);

struct ScenarioRun {
  CouplingMatrices couplings;
  EvolutionResult evolution;
  std::vector<EntanglementSample> metrics;
  double time_unit_rate = 0.0;  // gamma_22, rad/s
  double dt = 0.0;              // s
  double t_max = 0.0;           // s
};

ScenarioRun simulate_scenario(const ScenarioConfig& config, ExecPolicy policy = ExecPolicy::Parallel);

struct RunOptions {
  bool absolute_time = false;
  bool record_wall_time = false;
};

// Writes evolution.csv / metrics.csv for the requested outputs plus
// manifest.json. Returns the written file names in order.
std::vector<std::string> run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                      const RunOptions& options = {});

// ---------------------------------------------------------------- writers

void write_evolution_csv(std::ostream& os, const ScenarioRun& run, bool absolute_time,
                         const std::vector<std::string>& columns = {"rho", "ground_population"});
void write_metrics_csv(std::ostream& os, const ScenarioRun& run, bool absolute_time,
                       const std::vector<std::string>& columns = {"negativity", "e_g2", "populations"});

// ---------------------------------------------------------------- dispersion

struct DispersionConfig {
  double width_nm = 200.0;
  std::array<double, 2> eps_dielectric{2.2, 0.0};
  std::string metal = "silver";          // "silver", "drude" or "fixed"
  DrudeMetal drude = DrudeMetal::silver();  // used when metal == "drude"
  std::array<double, 2> fixed_eps{-1e14, 0.0};
  double f_min_thz = 250.0;
  double f_max_thz = 500.0;
  std::size_t points = 251;
};

DispersionConfig parse_dispersion_config(std::string_view json_text);
SlotGeometry build_geometry(const DispersionConfig& c);
MetalModel build_metal(const DispersionConfig& c);
void write_dispersion_csv(std::ostream& os, const std::vector<ModeSolution>& modes);

// ---------------------------------------------------------------- gate

struct GateConfig {
  double gamma11_ghz = 50.005;
  double gamma12_ghz = 49.995;
  double omega1_ghz = 0.70710678118654752;
  double omega2_ghz = -0.70710678118654752;
  double blockade_ratio = 10.0;
  std::optional<double> duration_ns;  // default: 2 pi / Omega_-
};

GateConfig parse_gate_config(std::string_view json_text);
GateParams build_gate_params(const GateConfig& c);
std::string gate_report_json(const GateConfig& config, const GateReport& report);

struct GateSweepConfig {
  double d_min_nm = 20.0;
  double d_max_nm = 1000.0;
  double d_step_nm = 10.0;
  double dipole_moment_debye = 60.0;
  double transition_frequency_thz = 295.0;
  double host_index = 1.0;
  double gamma_wg_ghz = 50.0;
  double attenuation_length_um = 5.0;
  double active_compensation = 1.0;
  double active_length_nm = 200.0;
};

GateSweepConfig parse_gate_sweep_config(std::string_view json_text);
std::vector<double> distance_grid(const GateSweepConfig& c);

struct GateSweep {
  std::vector<FidelityPoint> free_space;
  std::vector<FidelityPoint> enz_passive;
  std::vector<FidelityPoint> enz_active;
};

GateSweep run_gate_sweep(const GateSweepConfig& c, ExecPolicy policy = ExecPolicy::Parallel);
void write_gate_sweep_csv(std::ostream& os, const GateSweep& sweep);

}  // namespace enzq
