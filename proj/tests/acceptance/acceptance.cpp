// Acceptance suite: one PASS/FAIL line per criterion.
//
//   enzq_acceptance        run every criterion
//   enzq_acceptance 6      run criterion 6 only
//
// Exit status is 0 only if every selected criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "enzq/constants.hpp"
#include "enzq/couplings.hpp"
#include "enzq/dispersion.hpp"
#include "enzq/dynamics.hpp"
#include "enzq/gate.hpp"
#include "enzq/metrics.hpp"
#include "enzq/rk4.hpp"
#include "enzq/scenario.hpp"
#include "random_inputs.hpp"

using namespace enzq;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, fixed here so that every run checks the same thing.
constexpr double kMetricExactTol = 1e-12;
constexpr double kNegativityTol = 1e-10;
constexpr double kRhsEquivalenceTol = 1e-14;
constexpr int kRhsDraws = 10000;
constexpr double kOracleTol = 1e-8;
constexpr double kTraceStepTol = 1e-9;
constexpr double kHermiticityTol = 1e-10;
constexpr double kMinEigenvalueTol = -1e-8;
constexpr double kDickeRelTol = 0.01;
constexpr double kEgPeakLo = 0.5;
constexpr double kEgPeakHi = 0.7;
constexpr double kRk4RatioLo = 12.0;
constexpr double kRk4RatioHi = 20.0;
constexpr double kPecCutoffRelTol = 1e-3;
constexpr double kDrudeCutoffLo = 250e12;
constexpr double kDrudeCutoffHi = 350e12;
constexpr double kEpsEffTol = 1e-12;
constexpr double kPhaseRelTol = 0.05;
constexpr double kPulseFidelityMin = 0.9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix pure(const CVector& psi) { return psi * psi.adjoint(); }

CMatrix ghz3() {
  CVector psi = CVector::Zero(8);
  psi(0) = psi(7) = 1.0 / std::numbers::sqrt2;
  return pure(psi);
}

CMatrix w3() {
  CVector psi = CVector::Zero(8);
  psi(1) = psi(2) = psi(4) = 1.0 / std::sqrt(3.0);
  return pure(psi);
}

CMatrix bell() {
  CVector psi = CVector::Zero(4);
  psi(1) = psi(2) = 1.0 / std::numbers::sqrt2;
  return pure(psi);
}

ScenarioConfig preset_scenario(const std::string& env, std::size_t n, double d_nm, std::size_t excited,
                               double t_max_norm, std::size_t stride) {
  ScenarioConfig c;
  if (env == "free_space") {
    c.reservoir = FreeSpaceDesc{};
  } else {
    c.reservoir = PresetDesc{env};
  }
  for (std::size_t i = 0; i < n; ++i) {
    c.layout.positions_nm.push_back((static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * d_nm);
  }
  c.initial_excited = excited;
  c.t_max_norm = t_max_norm;
  c.sample_stride = stride;
  c.outputs = {"negativity", "e_g2", "populations"};
  return c;
}

struct TrajectoryChecks {
  double worst_trace_increase = -1.0;
  double worst_hermiticity = 0.0;
  double lowest_eigenvalue = 1.0;
  std::size_t samples = 0;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig;

  void add(const EvolutionResult& r) {
    for (std::size_t k = 0; k < r.states.size(); ++k) {
      const CMatrix& rho = r.states[k].rho;
      worst_hermiticity = std::max(worst_hermiticity, max_abs(rho - rho.adjoint()));
      eig.compute(embed_full(r.states[k]).rho, Eigen::EigenvaluesOnly);
      lowest_eigenvalue = std::min(lowest_eigenvalue, eig.eigenvalues().minCoeff());
      if (k > 0) {
        worst_trace_increase = std::max(worst_trace_increase, r.states[k].excited_population() -
                                                                  r.states[k - 1].excited_population());
      }
      ++samples;
    }
  }
  bool ok() const {
    return worst_trace_increase <= kTraceStepTol && worst_hermiticity < kHermiticityTol &&
           lowest_eigenvalue >= kMinEigenvalueTol;
  }
};

// ------------------------------------------------------------ criteria

Outcome criterion_1() {
  Timer t;
  const double eg_ghz = genuine_multipartite(ghz3(), 3);
  const double eg_w = genuine_multipartite(w3(), 3);
  const double n_bell = negativity_bipartition(bell(), 2, {0});
  const double n_w = negativity_bipartition(w3(), 3, {0});
  const double e1 = std::abs(eg_ghz - 2.0 / 3.0);
  const double e2 = std::abs(eg_w - 16.0 / 27.0);
  const double e3 = std::abs(n_bell - 1.0);
  const double e4 = std::abs(n_w - 2.0 * std::sqrt(2.0) / 3.0);
  const double secs = t.seconds();
  return {e1 <= kMetricExactTol && e2 <= kMetricExactTol && e3 <= kNegativityTol && e4 <= kNegativityTol && secs < 1.0,
          "|E_G(GHZ)-2/3|=" + fmt(e1) + " |E_G(W)-16/27|=" + fmt(e2) + " |N(Bell)-1|=" + fmt(e3) +
              " |N(W)-2sqrt2/3|=" + fmt(e4) + " in " + fmt(secs) + " s"};
}

Outcome criterion_2() {
  Timer t;
  std::mt19937_64 rng(20240601);
  double worst3 = 0.0, worst4 = 0.0;
  for (int k = 0; k < kRhsDraws; ++k) {
    const auto c3 = fixtures::random_couplings(3, rng);
    const CMatrix r3 = fixtures::random_matrix(3, rng);
    worst3 = std::max(worst3, max_abs(rhs_single_excitation(r3, c3) - rhs_three_qubit_reference(r3, c3)));
    const auto c4 = fixtures::random_couplings(4, rng);
    const CMatrix r4 = fixtures::random_matrix(4, rng);
    worst4 = std::max(worst4, max_abs(rhs_single_excitation(r4, c4) - rhs_four_qubit_reference(r4, c4)));
  }
  const double secs = t.seconds();
  return {worst3 <= kRhsEquivalenceTol && worst4 <= kRhsEquivalenceTol && secs < 10.0,
          "max deviation N=3 " + fmt(worst3) + ", N=4 " + fmt(worst4) + " over " + std::to_string(kRhsDraws) +
              " draws each in " + fmt(secs) + " s"};
}

// Shared by criteria 3 and 4.
struct OracleRun {
  double worst = 0.0;
  TrajectoryChecks checks;
};

OracleRun run_oracle_comparison() {
  std::mt19937_64 rng(777);
  OracleRun out;
  for (std::size_t n : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto c = fixtures::random_couplings(n, rng, 1e9);
      SingleExcitationState s0;
      s0.rho = fixtures::random_density_block(n, rng);
      IntegrationOptions opts;
      opts.t_max = 10.0 / c.gamma_max();
      opts.sample_stride = 1;
      const auto res = integrate(s0, c, opts);
      out.checks.add(res);

      // Dense oracle propagated independently on the full 2^N space.
      const std::size_t steps = res.times.size() - 1;
      const double dt = opts.t_max / static_cast<double>(steps);
      CMatrix full = embed_full(s0).rho;
      const auto rhs = [&](const CMatrix& r) { return full_lindblad_rhs(r, c); };
      for (std::size_t k = 1; k <= steps; ++k) {
        full = rk4_step(full, dt, rhs);
        out.worst = std::max(out.worst, max_abs(extract_excited_block(full, n) - res.states[k].rho));
      }
    }
  }
  return out;
}

Outcome criterion_3() {
  Timer t;
  const auto r = run_oracle_comparison();
  const double secs = t.seconds();
  return {r.worst <= kOracleTol && secs < 30.0,
          "max |rho - rho_oracle| = " + fmt(r.worst) + " over gamma_max t in [0, 10] for N = 2, 3, 4 in " +
              fmt(secs) + " s"};
}

Outcome criterion_4() {
  TrajectoryChecks checks = run_oracle_comparison().checks;
  for (const char* env : {"enz", "groove", "rod", "free_space"}) {
    for (std::size_t n : {3u, 4u}) {
      for (std::size_t q : {1u, 2u}) {
        const auto run = simulate_scenario(preset_scenario(env, n, 200.0, q, 10.0, 1), ExecPolicy::Parallel);
        checks.add(run.evolution);
      }
    }
  }
  return {checks.ok(), "max trace step increase " + fmt(checks.worst_trace_increase) + ", max |rho - rho^H| " +
                           fmt(checks.worst_hermiticity) + ", min embedded eigenvalue " +
                           fmt(checks.lowest_eigenvalue) + " over " + std::to_string(checks.samples) + " samples"};
}

Outcome criterion_5() {
  const double gamma = constants::ghz_to_rad_per_s(10.0);
  CouplingMatrices c;
  c.gamma = RMatrix::Constant(3, 3, gamma);
  c.g = RMatrix::Zero(3, 3);
  SingleExcitationState s;
  s.rho = CMatrix::Constant(3, 3, Complex(1.0 / 3.0, 0.0));
  IntegrationOptions opts;
  opts.t_max = 2.0 / gamma;
  const auto res = integrate(s, c, opts);
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(res.times.size());
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    const double x = res.times[k];
    const double y = std::log(res.states[k].excited_population());
    st += x;
    sy += y;
    stt += x * x;
    sty += x * y;
  }
  const double rate = -(n * sty - st * sy) / (n * stt - st * st);
  const double rel = std::abs(rate / (3.0 * gamma) - 1.0);
  return {rel <= kDickeRelTol, "fitted exponent / 3 gamma = " + fmt(rate / (3.0 * gamma)) + " (rel. error " +
                                   fmt(rel) + ")"};
}

Outcome criterion_6() {
  Timer t;
  bool ok = true;
  std::ostringstream detail;
  for (double d : {200.0, 400.0}) {
    for (std::size_t q : {1u, 2u}) {
      double neg[4];
      const char* envs[4] = {"enz", "groove", "rod", "free_space"};
      for (int e = 0; e < 4; ++e) {
        const auto run = simulate_scenario(preset_scenario(envs[e], 3, d, q, 2.0, 100));
        neg[e] = run.metrics.back().negativity;
      }
      const bool here = neg[0] > neg[1] && neg[0] > neg[2] && neg[0] > neg[3];
      ok = ok && here;
      detail << "d=" << d << " Q" << q << ": enz " << fmt(neg[0]) << " groove " << fmt(neg[1]) << " rod "
             << fmt(neg[2]) << " free " << fmt(neg[3]) << (here ? "" : " (ordering violated)") << "; ";
    }
  }
  const auto peak_run = simulate_scenario(preset_scenario("enz", 3, 200.0, 2, 10.0, 1));
  double peak = 0.0;
  for (const auto& m : peak_run.metrics) peak = std::max(peak, m.e_g2);
  const bool peak_ok = peak >= kEgPeakLo && peak <= kEgPeakHi;
  const double secs = t.seconds();
  detail << "ENZ E_G peak " << fmt(peak) << "; " << fmt(secs) << " s";
  return {ok && peak_ok && secs < 60.0, detail.str()};
}

Outcome criterion_7() {
  const auto cfg = preset_scenario("enz", 3, 200.0, 2, 2.0, 1000000);
  const auto c = compute_couplings(build_layout(cfg.layout), build_reservoir(cfg.reservoir, cfg.layout));
  auto final_state = [&](double dt_norm) {
    IntegrationOptions opts;
    opts.dt = dt_norm / c.gamma_max();
    opts.t_max = cfg.t_max_norm / normalization_rate(c);
    opts.sample_stride = 1000000;
    return integrate(SingleExcitationState::excited(3, 1), c, opts).states.back().rho;
  };
  const CMatrix a = final_state(0.1);
  const CMatrix b = final_state(0.05);
  const CMatrix h = final_state(0.025);
  const double ratio = max_abs(a - b) / max_abs(b - h);
  return {ratio >= kRk4RatioLo && ratio <= kRk4RatioHi, "step-halving error ratio " + fmt(ratio)};
}

Outcome criterion_8() {
  const SlotGeometry geom;
  const MetalModel pec = FixedPermittivity{Complex(-1e14, 0.0)};
  const double expected = constants::kSpeedOfLight / (2.0 * geom.width_w * std::sqrt(geom.eps_dielectric.real()));
  const double f_pec = find_cutoff(geom, pec, 300e12, 700e12);
  const double pec_rel = std::abs(f_pec / expected - 1.0);

  const MetalModel silver = DrudeMetal::silver();
  const double f_drude = find_cutoff(geom, silver, 200e12, 600e12);
  const bool drude_ok = f_drude >= kDrudeCutoffLo && f_drude <= kDrudeCutoffHi;

  double worst = 0.0;
  std::vector<double> grid;
  for (int i = 0; i <= 250; ++i) grid.push_back(250e12 + 1e12 * i);
  for (const MetalModel& m : {silver, pec}) {
    for (const auto& s : sweep_dispersion(geom, m, grid)) {
      const double k0 = constants::kTwoPi * s.frequency / constants::kSpeedOfLight;
      const Complex again = (s.beta / k0) * (s.beta / k0);
      worst = std::max(worst, std::abs(s.eps_eff - again) / std::max(1.0, std::abs(again)));
    }
  }
  const bool ok = pec_rel <= kPecCutoffRelTol && drude_ok && worst <= kEpsEffTol;
  return {ok, "PEC cutoff " + fmt(f_pec * 1e-12) + " THz vs c/(2w sqrt(eps_d)) " + fmt(expected * 1e-12) +
                  " THz (rel " + fmt(pec_rel) + "); Drude silver cutoff " + fmt(f_drude * 1e-12) +
                  " THz, required [250, 350]" + (drude_ok ? "" : " (out of range)") +
                  "; eps_eff identity max rel error " + fmt(worst)};
}

Outcome criterion_9() {
  Timer t;
  const bool endpoints = analytic_fidelity(0.0, 1.7) == 1.0 && analytic_fidelity(1.7, 1.7) == 0.0;

  GateParams p;
  const double om = constants::ghz_to_rad_per_s(1.0);
  const double gp = 100.0 * om;
  const double gm = om / 100.0;
  p.gamma11 = 0.5 * (gp + gm);
  p.gamma12 = 0.5 * (gp - gm);
  p.omega1 = om / std::numbers::sqrt2;
  p.omega2 = -p.omega1;
  const auto pulse = simulate_pulse(p);
  const double phase_rel = std::abs(pulse.phase_acquired / std::numbers::pi - 1.0);
  const bool pulse_ok = phase_rel <= kPhaseRelTol && pulse.fidelity >= kPulseFidelityMin;

  const GateSweepConfig sweep_cfg;
  const auto sweep = run_gate_sweep(sweep_cfg);
  const double quarter_wave = constants::kSpeedOfLight / (sweep_cfg.transition_frequency_thz * 1e12) / 4.0;
  bool order_ok = true;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < sweep.free_space.size(); ++i) {
    if (sweep.free_space[i].distance < quarter_wave) continue;
    ++checked;
    order_ok = order_ok && sweep.enz_active[i].fidelity >= sweep.enz_passive[i].fidelity &&
               sweep.enz_passive[i].fidelity >= sweep.free_space[i].fidelity;
  }
  const double secs = t.seconds();
  return {endpoints && pulse_ok && order_ok && checked > 0 && secs < 10.0,
          std::string("endpoints ") + (endpoints ? "exact" : "wrong") + "; phase/pi " +
              fmt(pulse.phase_acquired / std::numbers::pi) + ", pulse fidelity " + fmt(pulse.fidelity) +
              "; ordering " + (order_ok ? "holds" : "violated") + " at " + std::to_string(checked) +
              " distances >= lambda/4; " + fmt(secs) + " s"};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome criterion_10() {
  const fs::path root = fs::temp_directory_path() / "enzq_acceptance_determinism";
  fs::remove_all(root);
  const std::string cfg_dir = ENZQ_CONFIG_DIR;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"dispersion", cfg_dir + "/dispersion_silver.json"},
      {"couplings", cfg_dir + "/three_qubit_groove_d200_q2.json"},
      {"evolve", cfg_dir + "/three_qubit_rod_d200_q1.json"},
      {"metrics", cfg_dir + "/four_qubit_enz_d200_q2.json"},
      {"gate", cfg_dir + "/gate_blockade.json"},
      {"gate-sweep", cfg_dir + "/gate_sweep.json"},
      {"run", cfg_dir + "/three_qubit_lossy_waveguide.json"},
  };
  std::size_t compared = 0;
  std::vector<std::string> mismatches;
  for (const auto& [cmd, cfg] : commands) {
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / std::to_string(rep) / cmd;
      const std::string line =
          std::string(ENZQ_CLI_PATH) + " " + cmd + " --config " + cfg + " --out " + out.string() + " > /dev/null";
      if (std::system(line.c_str()) != 0) return {false, "command failed: " + line};
    }
    for (const auto& entry : fs::directory_iterator(root / "0" / cmd)) {
      const fs::path other = root / "1" / cmd / entry.path().filename();
      ++compared;
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        mismatches.push_back(cmd + "/" + entry.path().filename().string());
      }
    }
  }
  fs::remove_all(root);
  std::string detail = std::to_string(compared) + " output files from " + std::to_string(commands.size()) +
                       " subcommands compared byte for byte";
  for (const auto& m : mismatches) detail += "; differs: " + m;
  return {mismatches.empty() && compared >= commands.size(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                          criterion_5, criterion_6, criterion_7, criterion_8,
                                                          criterion_9, criterion_10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }
  bool all = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
