// enzq: command-line front end for the coupling, dynamics, entanglement,
// dispersion and gate modules.
//
// Every subcommand writes to stdout unless --out DIR is given, in which case
// it writes a fixed file name inside DIR. Exit codes: 0 ok, 2 configuration
// error, 3 numerical error.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "enzq/errors.hpp"
#include "enzq/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  bool absolute_time = false;
  bool wall_time = false;
};

std::string read_config(const std::string& path, const char* fallback) {
  if (path.empty()) {
    if (fallback) return fallback;
    throw enzq::ConfigError({"--config: is required for this subcommand"});
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw enzq::ConfigError({"--config: cannot read '" + path + "'"});
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void emit(const Options& o, const std::string& file_name, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::filesystem::create_directories(o.out);
  const auto path = std::filesystem::path(o.out) / file_name;
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

void cmd_dispersion(const Options& o) {
  const auto cfg = enzq::parse_dispersion_config(read_config(o.config, "{}"));
  std::vector<double> grid;
  for (std::size_t i = 0; i < cfg.points; ++i) {
    const double t = cfg.points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(cfg.points - 1);
    grid.push_back((cfg.f_min_thz + t * (cfg.f_max_thz - cfg.f_min_thz)) * 1e12);
  }
  const auto modes = enzq::sweep_dispersion(enzq::build_geometry(cfg), enzq::build_metal(cfg), grid);
  std::ostringstream os;
  enzq::write_dispersion_csv(os, modes);
  emit(o, "dispersion.csv", os.str());
}

void cmd_couplings(const Options& o) {
  const auto cfg = enzq::parse_config(read_config(o.config, nullptr));
  const auto c = enzq::compute_couplings(enzq::build_layout(cfg.layout),
                                         enzq::build_reservoir(cfg.reservoir, cfg.layout));
  emit(o, "couplings.json", enzq::to_tabulated_json(c));
}

void cmd_evolve(const Options& o) {
  auto cfg = enzq::parse_config(read_config(o.config, nullptr));
  cfg.outputs = {"rho", "ground_population"};
  const auto run = enzq::simulate_scenario(cfg);
  std::ostringstream os;
  enzq::write_evolution_csv(os, run, o.absolute_time);
  emit(o, "evolution.csv", os.str());
}

void cmd_metrics(const Options& o) {
  auto cfg = enzq::parse_config(read_config(o.config, nullptr));
  cfg.outputs = {"negativity", "e_g2", "populations"};
  const auto run = enzq::simulate_scenario(cfg);
  std::ostringstream os;
  enzq::write_metrics_csv(os, run, o.absolute_time);
  emit(o, "metrics.csv", os.str());
}

void cmd_gate(const Options& o) {
  const auto cfg = enzq::parse_gate_config(read_config(o.config, "{}"));
  const double duration = cfg.duration_ns ? *cfg.duration_ns * 1e-9 : 0.0;
  const auto report = enzq::analyze_gate(enzq::build_gate_params(cfg), duration);
  emit(o, "gate.json", enzq::gate_report_json(cfg, report));
}

void cmd_gate_sweep(const Options& o) {
  const auto cfg = enzq::parse_gate_sweep_config(read_config(o.config, "{}"));
  std::ostringstream os;
  enzq::write_gate_sweep_csv(os, enzq::run_gate_sweep(cfg));
  emit(o, "gate_sweep.csv", os.str());
}

void cmd_run(const Options& o) {
  if (o.out.empty()) throw enzq::ConfigError({"--out: is required for run"});
  const auto cfg = enzq::parse_config(read_config(o.config, nullptr));
  enzq::run_scenario(cfg, o.out, enzq::RunOptions{o.absolute_time, o.wall_time});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ENZ waveguide multiqubit entanglement and phase-gate simulator"};
  app.set_version_flag("--version", std::string(enzq::kToolVersion));
  app.require_subcommand(1);

  Options opts;
  auto add = [&](const char* name, const char* help, void (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "JSON configuration file");
    sub->add_option("--out", opts.out, "output directory (default: stdout)");
    sub->add_flag("--absolute-time", opts.absolute_time, "time axis in seconds instead of gamma_22 t");
    if (std::string(name) == "run") sub->add_flag("--wall-time", opts.wall_time, "record wall time in the manifest");
    sub->callback([fn, &opts] { fn(opts); });
  };
  add("dispersion", "slot-mode dispersion sweep (CSV)", cmd_dispersion);
  add("couplings", "coupling matrices for a scenario (JSON)", cmd_couplings);
  add("evolve", "density-matrix trajectory (CSV)", cmd_evolve);
  add("metrics", "negativity, E_G^(2) and populations (CSV)", cmd_metrics);
  add("gate", "phase-gate report (JSON)", cmd_gate);
  add("gate-sweep", "gate fidelity against separation for three environments (CSV)", cmd_gate_sweep);
  add("run", "full pipeline: CSV files plus manifest.json in --out", cmd_run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  } catch (const enzq::ConfigError& e) {
    std::cerr << "enzq: " << e.what() << "\n";
    return kExitConfig;
  } catch (const enzq::SolverError& e) {
    std::cerr << "enzq: solver failed: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return kExitNumerical;
  } catch (const enzq::IntegrationError& e) {
    std::cerr << "enzq: integration failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const enzq::BracketError& e) {
    std::cerr << "enzq: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const enzq::ValidationError& e) {
    std::cerr << "enzq: invalid input: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const enzq::DomainError& e) {
    std::cerr << "enzq: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "enzq: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
