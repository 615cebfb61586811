#include "enzq/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "enzq/constants.hpp"
#include "enzq/csv.hpp"
#include "enzq/errors.hpp"

namespace enzq {

using nlohmann::json;
using nlohmann::ordered_json;
using constants::ghz_to_rad_per_s;
using constants::rad_per_s_to_ghz;

namespace {

constexpr std::size_t kMaxQubits = 8;

// Strict object reader: every access marks the key as known, finish()
// reports the rest. Problems are appended to `errors` instead of thrown.
class Fields {
 public:
  Fields(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) {
      fail("", "expected an object");
      valid_ = false;
    }
  }

  bool valid() const { return valid_; }
  bool has(const std::string& key) const { return valid_ && obj_.contains(key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (!valid_ || !obj_.contains(key)) return nullptr;
    return &obj_.at(key);
  }

  std::optional<double> number(const std::string& key, const std::function<bool(double)>& ok = {},
                               const char* rule = nullptr) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(key, "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x) || (ok && !ok(x))) {
      fail(key, std::string("must be ") + (rule ? rule : "finite"));
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::size_t> integer(const std::string& key, std::size_t lo, std::size_t hi) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() || v->get<long long>() < static_cast<long long>(lo) ||
        v->get<long long>() > static_cast<long long>(hi)) {
      fail(key, "must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return std::nullopt;
    }
    return static_cast<std::size_t>(v->get<long long>());
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      fail(key, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(key, "expected an array of finite numbers");
        return std::nullopt;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  void require(const std::string& key) {
    if (valid_ && !obj_.contains(key)) fail(key, "is required");
  }

  void fail(const std::string& key, const std::string& message) {
    errors_.push_back(qualified(key) + ": " + message);
  }

  void finish() {
    if (!valid_) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

  std::string qualified(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "<root>" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<root>: malformed JSON: ") + e.what()});
  }
}

bool positive(double x) { return x > 0.0; }
bool non_negative(double x) { return x >= 0.0; }

std::optional<RMatrix> read_matrix(Fields& f, const std::string& key) {
  const json* v = f.raw(key);
  if (!v) {
    f.require(key);
    return std::nullopt;
  }
  if (!v->is_array() || v->empty()) {
    f.fail(key, "expected a non-empty square array of arrays");
    return std::nullopt;
  }
  const auto n = static_cast<Eigen::Index>(v->size());
  RMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = (*v)[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      f.fail(key, "row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
      return std::nullopt;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& e = row[static_cast<std::size_t>(j)];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        f.fail(key, "entries must be finite numbers");
        return std::nullopt;
      }
      m(i, j) = e.get<double>();
    }
  }
  return m;
}

std::optional<ReservoirDesc> parse_reservoir(const json& node, std::vector<std::string>& errors) {
  Fields f(node, "reservoir", errors);
  if (!f.valid()) return std::nullopt;
  f.require("model");
  const auto model = f.string("model");
  std::optional<ReservoirDesc> out;
  if (!model) {
    // fall through to finish() so unknown keys are still listed
  } else if (*model == "enz" || *model == "groove" || *model == "rod") {
    out = PresetDesc{*model};
  } else if (*model == "free_space") {
    FreeSpaceDesc s;
    s.host_index = f.number("host_index", [](double x) { return x >= 1.0; }, ">= 1");
    out = s;
  } else if (*model == "traveling_waveguide") {
    TravelingDesc s;
    f.require("gamma_wg_ghz");
    s.gamma_wg_ghz = f.number("gamma_wg_ghz", positive, "> 0").value_or(1.0);
    s.beta_per_um = f.number("beta_per_um").value_or(0.0);
    s.attenuation_length_um = f.number("attenuation_length_um", positive, "> 0");
    out = s;
  } else if (*model == "standing_wave") {
    StandingDesc s;
    f.require("gamma_c_ghz");
    f.require("mode_wavelength_nm");
    s.gamma_c_ghz = f.number("gamma_c_ghz", positive, "> 0").value_or(1.0);
    s.g_c_ghz = f.number("g_c_ghz").value_or(0.0);
    s.mode_wavelength_nm = f.number("mode_wavelength_nm", positive, "> 0").value_or(1.0);
    s.mode_origin_nm = f.number("mode_origin_nm").value_or(0.0);
    s.background_ghz = f.number("background_ghz", non_negative, ">= 0").value_or(0.0);
    out = s;
  } else if (*model == "tabulated") {
    auto gamma = read_matrix(f, "gamma_ghz");
    auto g = read_matrix(f, "g_ghz");
    if (gamma && g) {
      if (gamma->rows() != g->rows()) {
        f.fail("g_ghz", "must have the same size as gamma_ghz");
      } else {
        out = TabulatedDesc{*gamma, *g};
      }
    }
  } else {
    f.fail("model", "unknown model '" + *model +
                        "' (expected enz, groove, rod, free_space, traveling_waveguide, standing_wave or tabulated)");
  }
  f.finish();
  return out;
}

std::optional<LayoutDesc> parse_layout(const json* node, const ReservoirDesc* reservoir,
                                       std::vector<std::string>& errors) {
  const auto* tab = reservoir ? std::get_if<TabulatedDesc>(reservoir) : nullptr;
  LayoutDesc desc;
  if (!node) {
    if (tab) {
      const auto n = static_cast<std::size_t>(tab->gamma_ghz.rows());
      for (std::size_t i = 0; i < n; ++i) desc.positions_nm.push_back(static_cast<double>(i));
      return desc;
    }
    errors.push_back("layout: is required");
    return std::nullopt;
  }
  Fields f(*node, "layout", errors);
  if (!f.valid()) return std::nullopt;
  bool ok = true;
  const auto n = f.integer("n_qubits", 1, kMaxQubits);
  const auto sep = f.number("separation_nm", positive, "> 0");
  const auto pos = f.numbers("positions_nm");
  if (f.has("positions_nm") && f.has("separation_nm")) {
    f.fail("positions_nm", "give either positions_nm or separation_nm, not both");
    ok = false;
  }
  if (pos) {
    if (pos->empty() || pos->size() > kMaxQubits) {
      f.fail("positions_nm", "must list between 1 and " + std::to_string(kMaxQubits) + " positions");
      ok = false;
    } else {
      if (std::adjacent_find(pos->begin(), pos->end(), std::greater_equal<double>()) != pos->end()) {
        f.fail("positions_nm", "positions must be strictly increasing");
        ok = false;
      }
      if (n && *n != pos->size()) {
        f.fail("n_qubits", "does not match the length of positions_nm");
        ok = false;
      }
      desc.positions_nm = *pos;
    }
  } else if (sep) {
    if (!n) {
      f.fail("n_qubits", "is required with separation_nm");
      ok = false;
    } else {
      for (std::size_t i = 0; i < *n; ++i) {
        desc.positions_nm.push_back((static_cast<double>(i) - 0.5 * static_cast<double>(*n - 1)) * *sep);
      }
    }
  } else if (!f.has("positions_nm") && !f.has("separation_nm")) {
    f.fail("", "needs positions_nm or n_qubits with separation_nm");
    ok = false;
  } else {
    ok = false;
  }
  if (auto v = f.number("dipole_moment_debye", positive, "> 0")) desc.dipole_moment_debye = *v;
  if (auto v = f.number("transition_frequency_thz", positive, "> 0")) desc.transition_frequency_thz = *v;
  if (auto v = f.number("host_index", [](double x) { return x >= 1.0; }, ">= 1")) desc.host_index = *v;
  if (auto v = f.numbers("orientation")) {
    const double norm = v->size() == 3 ? std::hypot((*v)[0], (*v)[1], (*v)[2]) : 0.0;
    if (v->size() != 3 || norm == 0.0) {
      f.fail("orientation", "must be a non-zero 3-vector");
      ok = false;
    } else {
      desc.orientation = {(*v)[0], (*v)[1], (*v)[2]};
    }
  }
  f.finish();
  if (tab && ok && desc.positions_nm.size() != static_cast<std::size_t>(tab->gamma_ghz.rows())) {
    errors.push_back("layout.n_qubits: does not match the tabulated matrix size");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return desc;
}

ordered_json matrix_json(const RMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json reservoir_json(const ReservoirDesc& desc) {
  ordered_json r;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PresetDesc>) {
          r["model"] = s.name;
        } else if constexpr (std::is_same_v<T, FreeSpaceDesc>) {
          r["model"] = "free_space";
          if (s.host_index) r["host_index"] = *s.host_index;
        } else if constexpr (std::is_same_v<T, TravelingDesc>) {
          r["model"] = "traveling_waveguide";
          r["gamma_wg_ghz"] = s.gamma_wg_ghz;
          r["beta_per_um"] = s.beta_per_um;
          if (s.attenuation_length_um) r["attenuation_length_um"] = *s.attenuation_length_um;
        } else if constexpr (std::is_same_v<T, StandingDesc>) {
          r["model"] = "standing_wave";
          r["gamma_c_ghz"] = s.gamma_c_ghz;
          r["g_c_ghz"] = s.g_c_ghz;
          r["mode_wavelength_nm"] = s.mode_wavelength_nm;
          r["mode_origin_nm"] = s.mode_origin_nm;
          r["background_ghz"] = s.background_ghz;
        } else {
          r["model"] = "tabulated";
          r["gamma_ghz"] = matrix_json(s.gamma_ghz);
          r["g_ghz"] = matrix_json(s.g_ghz);
        }
      },
      desc);
  return r;
}

ordered_json config_json(const ScenarioConfig& c) {
  ordered_json doc;
  doc["reservoir"] = reservoir_json(c.reservoir);
  ordered_json layout;
  layout["n_qubits"] = c.n_qubits();
  layout["positions_nm"] = c.layout.positions_nm;
  layout["dipole_moment_debye"] = c.layout.dipole_moment_debye;
  layout["orientation"] = c.layout.orientation;
  layout["transition_frequency_thz"] = c.layout.transition_frequency_thz;
  layout["host_index"] = c.layout.host_index;
  doc["layout"] = std::move(layout);
  doc["initial_excited"] = c.initial_excited;
  doc["dt_norm"] = c.dt_norm;
  doc["t_max_norm"] = c.t_max_norm;
  doc["sample_stride"] = c.sample_stride;
  doc["outputs"] = c.outputs;
  return doc;
}

bool wants(const std::vector<std::string>& columns, std::string_view name) {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

// ---------------------------------------------------------------- presets

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"enz", "groove", "rod", "free_space"};
  return names;
}

ReservoirModel preset_reservoir(std::string_view name) {
  if (name == "enz") {
    return TravelingWaveguide{ghz_to_rad_per_s(50.0), 0.0, 5e-6};
  }
  if (name == "groove") {
    return StandingWaveCavity{ghz_to_rad_per_s(91.0), ghz_to_rad_per_s(23.0), 800e-9, 0.0, ghz_to_rad_per_s(13.0)};
  }
  if (name == "rod") {
    // Centre emitter sits where u^2 = 0.1, the outer pair (+-200 nm) where
    // u^2 = 0.9 with opposite signs: gamma_22 = 5 GHz, |g_13| = 35 GHz.
    constexpr double lambda = 800e-9;
    const double delta = lambda / constants::kTwoPi * std::asin(std::sqrt(0.1));
    return StandingWaveCavity{ghz_to_rad_per_s(10.0), ghz_to_rad_per_s(35.0 / 0.9), lambda, 0.25 * lambda - delta,
                              ghz_to_rad_per_s(4.0)};
  }
  if (name == "free_space") return FreeSpace{1.0};
  throw DomainError("unknown reservoir preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- scenario

ScenarioConfig parse_config(std::string_view json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  Fields f(doc, "", errors);
  if (!f.valid()) throw ConfigError(errors);

  ScenarioConfig c;
  std::optional<ReservoirDesc> reservoir;
  if (const json* r = f.raw("reservoir")) {
    reservoir = parse_reservoir(*r, errors);
  } else {
    reservoir = c.reservoir;
  }
  const std::size_t before = errors.size();
  auto layout = parse_layout(f.raw("layout"), reservoir ? &*reservoir : nullptr, errors);
  if (reservoir) c.reservoir = *reservoir;
  if (layout) c.layout = *layout;
  const bool layout_ok = layout.has_value() && errors.size() == before;

  if (auto v = f.integer("initial_excited", 1, kMaxQubits)) {
    if (layout_ok && *v > c.n_qubits()) {
      f.fail("initial_excited", "must be in [1, " + std::to_string(c.n_qubits()) + "]");
    }
    c.initial_excited = *v;
  } else if (layout_ok && c.initial_excited > c.n_qubits()) {
    c.initial_excited = 1;
  }
  if (auto v = f.number("dt_norm", [](double x) { return x > 0.0 && x <= 0.1; }, "in (0, 0.1]")) c.dt_norm = *v;
  if (auto v = f.number("t_max_norm", positive, "> 0")) c.t_max_norm = *v;
  if (auto v = f.integer("sample_stride", 1, 100000000)) c.sample_stride = *v;
  if (const json* o = f.raw("outputs")) {
    std::vector<std::string> outs;
    if (!o->is_array()) {
      f.fail("outputs", "expected an array of names");
    } else {
      for (const auto& e : *o) {
        if (!e.is_string() || !wants(kOutputColumns, e.get<std::string>())) {
          f.fail("outputs", "unknown output " + e.dump() +
                                " (expected rho, ground_population, negativity, e_g2 or populations)");
        } else if (wants(outs, e.get<std::string>())) {
          f.fail("outputs", "duplicate output " + e.dump());
        } else {
          outs.push_back(e.get<std::string>());
        }
      }
    }
    c.outputs = std::move(outs);
  }
  f.finish();
  if (!errors.empty()) throw ConfigError(errors);

  // Remaining invariants are the model's own (PSD gamma, orientation, ...).
  try {
    build_layout(c.layout).validate();
  } catch (const ValidationError& e) {
    throw ConfigError({std::string("layout: ") + e.what()});
  }
  try {
    compute_couplings(build_layout(c.layout), build_reservoir(c.reservoir, c.layout));
  } catch (const ValidationError& e) {
    throw ConfigError({std::string("reservoir: ") + e.what()});
  } catch (const DomainError& e) {
    throw ConfigError({std::string("reservoir: ") + e.what()});
  }
  return c;
}

std::string serialize_config(const ScenarioConfig& config) { return config_json(config).dump(2) + "\n"; }

EmitterLayout build_layout(const LayoutDesc& desc) {
  EmitterLayout l;
  l.positions.reserve(desc.positions_nm.size());
  for (double x : desc.positions_nm) l.positions.push_back(x * 1e-9);
  l.dipole_moment_debye = desc.dipole_moment_debye;
  l.orientation = Eigen::Vector3d(desc.orientation[0], desc.orientation[1], desc.orientation[2]).normalized();
  l.transition_frequency = desc.transition_frequency_thz * 1e12;
  l.host_index = desc.host_index;
  return l;
}

ReservoirModel build_reservoir(const ReservoirDesc& desc, const LayoutDesc& layout) {
  return std::visit(
      [&](const auto& s) -> ReservoirModel {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PresetDesc>) {
          return preset_reservoir(s.name);
        } else if constexpr (std::is_same_v<T, FreeSpaceDesc>) {
          return FreeSpace{s.host_index.value_or(layout.host_index)};
        } else if constexpr (std::is_same_v<T, TravelingDesc>) {
          const double L = s.attenuation_length_um ? *s.attenuation_length_um * 1e-6
                                                   : std::numeric_limits<double>::infinity();
          return TravelingWaveguide{ghz_to_rad_per_s(s.gamma_wg_ghz), s.beta_per_um * 1e6, L};
        } else if constexpr (std::is_same_v<T, StandingDesc>) {
          return StandingWaveCavity{ghz_to_rad_per_s(s.gamma_c_ghz), ghz_to_rad_per_s(s.g_c_ghz),
                                    s.mode_wavelength_nm * 1e-9, s.mode_origin_nm * 1e-9,
                                    ghz_to_rad_per_s(s.background_ghz)};
        } else {
          return Tabulated{make_tabulated(s.gamma_ghz * ghz_to_rad_per_s(1.0), s.g_ghz * ghz_to_rad_per_s(1.0))};
        }
      },
      desc);
}

ScenarioRun simulate_scenario(const ScenarioConfig& config, ExecPolicy policy) {
  ScenarioRun run;
  const EmitterLayout layout = build_layout(config.layout);
  run.couplings = compute_couplings(layout, build_reservoir(config.reservoir, config.layout));
  run.time_unit_rate = normalization_rate(run.couplings);
  run.dt = config.dt_norm / run.couplings.gamma_max();
  run.t_max = config.t_max_norm / run.time_unit_rate;

  IntegrationOptions opts;
  opts.dt = run.dt;
  opts.t_max = run.t_max;
  opts.sample_stride = config.sample_stride;
  const auto state0 = SingleExcitationState::excited(config.n_qubits(), config.initial_excited - 1);
  run.evolution = integrate(state0, run.couplings, opts);

  const bool need_metrics = wants(config.outputs, "negativity") || wants(config.outputs, "e_g2") ||
                            wants(config.outputs, "populations");
  if (need_metrics) run.metrics = metrics_timeseries(run.evolution, run.time_unit_rate, policy);
  return run;
}

void write_evolution_csv(std::ostream& os, const ScenarioRun& run, bool absolute_time,
                         const std::vector<std::string>& columns) {
  CsvWriter w(os);
  const auto n = static_cast<Eigen::Index>(run.couplings.n_qubits());
  std::vector<std::string> header = {absolute_time ? "t_s" : "t_norm"};
  const bool rho = wants(columns, "rho");
  if (rho) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
        header.push_back("re_rho_" + ij);
        header.push_back("im_rho_" + ij);
      }
    }
  }
  const bool ground = wants(columns, "ground_population");
  if (ground) header.push_back("ground_population");
  w.header(header);
  for (std::size_t s = 0; s < run.evolution.times.size(); ++s) {
    const double t = run.evolution.times[s];
    w.cell(absolute_time ? t : run.time_unit_rate * t);
    if (rho) {
      const CMatrix& r = run.evolution.states[s].rho;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) w.cell(r(i, j).real()).cell(r(i, j).imag());
      }
    }
    if (ground) w.cell(run.evolution.ground_population[s]);
    w.end_row();
  }
}

void write_metrics_csv(std::ostream& os, const ScenarioRun& run, bool absolute_time,
                       const std::vector<std::string>& columns) {
  CsvWriter w(os);
  const std::size_t n = run.couplings.n_qubits();
  std::vector<std::string> header = {absolute_time ? "t_s" : "t_norm"};
  const bool neg = wants(columns, "negativity");
  const bool eg = wants(columns, "e_g2");
  const bool pops = wants(columns, "populations");
  if (neg) header.push_back("negativity");
  if (eg) header.push_back("e_g2");
  if (pops) {
    for (std::size_t k = 0; k < n; ++k) header.push_back("pop_" + std::to_string(k + 1));
  }
  w.header(header);
  for (const auto& m : run.metrics) {
    w.cell(absolute_time ? m.time : m.time_norm);
    if (neg) w.cell(m.negativity);
    if (eg) w.cell(m.e_g2);
    if (pops) {
      for (double p : m.populations) w.cell(p);
    }
    w.end_row();
  }
}

std::vector<std::string> run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                                      const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioRun run = simulate_scenario(config);
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> files;
  std::vector<std::string> evo_cols, met_cols;
  for (const auto& o : config.outputs) {
    (o == "rho" || o == "ground_population" ? evo_cols : met_cols).push_back(o);
  }
  if (!evo_cols.empty()) {
    std::ostringstream os;
    write_evolution_csv(os, run, options.absolute_time, evo_cols);
    write_file(out_dir / "evolution.csv", os.str());
    files.push_back("evolution.csv");
  }
  if (!met_cols.empty()) {
    std::ostringstream os;
    write_metrics_csv(os, run, options.absolute_time, met_cols);
    write_file(out_dir / "metrics.csv", os.str());
    files.push_back("metrics.csv");
  }

  ordered_json manifest;
  manifest["tool"] = "enzq";
  manifest["version"] = std::string(kToolVersion);
  manifest["config"] = config_json(config);
  manifest["couplings"] = ordered_json::parse(to_tabulated_json(run.couplings));
  manifest["time_unit_rate_ghz"] = rad_per_s_to_ghz(run.time_unit_rate);
  manifest["dt_s"] = run.dt;
  manifest["t_max_s"] = run.t_max;
  manifest["samples"] = run.evolution.times.size();
  manifest["absolute_time"] = options.absolute_time;
  manifest["files"] = files;
  if (options.record_wall_time) {
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  files.push_back("manifest.json");
  return files;
}

// ---------------------------------------------------------------- dispersion

DispersionConfig parse_dispersion_config(std::string_view json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  Fields f(doc, "", errors);
  if (!f.valid()) throw ConfigError(errors);
  DispersionConfig c;
  if (auto v = f.number("width_nm", positive, "> 0")) c.width_nm = *v;
  if (auto v = f.numbers("eps_dielectric")) {
    if (v->size() != 2 || (*v)[0] <= 0.0) {
      f.fail("eps_dielectric", "must be [re, im] with re > 0");
    } else {
      c.eps_dielectric = {(*v)[0], (*v)[1]};
    }
  }
  if (const json* m = f.raw("metal")) {
    if (m->is_string()) {
      if (m->get<std::string>() != "silver") f.fail("metal", "unknown metal '" + m->get<std::string>() + "'");
      c.metal = "silver";
    } else {
      Fields mf(*m, "metal", errors);
      if (mf.valid()) {
        const json* drude = mf.raw("drude");
        const json* fixed = mf.raw("fixed");
        if ((drude != nullptr) == (fixed != nullptr)) {
          mf.fail("", "needs exactly one of 'drude' or 'fixed'");
        } else if (drude) {
          Fields df(*drude, "metal.drude", errors);
          if (df.valid()) {
            c.metal = "drude";
            df.require("plasma_ev");
            df.require("collision_ev");
            c.drude.eps_inf = df.number("eps_inf").value_or(5.0);
            c.drude.plasma_frequency =
                constants::ev_to_rad_per_s(df.number("plasma_ev", positive, "> 0").value_or(9.1));
            c.drude.collision_rate =
                constants::ev_to_rad_per_s(df.number("collision_ev", non_negative, ">= 0").value_or(0.021));
            df.finish();
          }
        } else {
          const json* fx = mf.raw("fixed");
          if (!fx->is_array() || fx->size() != 2 || !(*fx)[0].is_number() || !(*fx)[1].is_number()) {
            mf.fail("fixed", "must be [re, im]");
          } else {
            c.metal = "fixed";
            c.fixed_eps = {(*fx)[0].get<double>(), (*fx)[1].get<double>()};
          }
        }
        mf.finish();
      }
    }
  }
  if (auto v = f.number("f_min_thz", positive, "> 0")) c.f_min_thz = *v;
  if (auto v = f.number("f_max_thz", positive, "> 0")) c.f_max_thz = *v;
  if (auto v = f.integer("points", 1, 1000000)) c.points = *v;
  if (c.f_max_thz < c.f_min_thz || (c.points > 1 && c.f_max_thz == c.f_min_thz)) {
    f.fail("f_max_thz", "must exceed f_min_thz");
  }
  f.finish();
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

SlotGeometry build_geometry(const DispersionConfig& c) {
  SlotGeometry g;
  g.width_w = c.width_nm * 1e-9;
  g.eps_dielectric = Complex(c.eps_dielectric[0], c.eps_dielectric[1]);
  return g;
}

MetalModel build_metal(const DispersionConfig& c) {
  if (c.metal == "silver") return DrudeMetal::silver();
  if (c.metal == "drude") return c.drude;
  return FixedPermittivity{Complex(c.fixed_eps[0], c.fixed_eps[1])};
}

void write_dispersion_csv(std::ostream& os, const std::vector<ModeSolution>& modes) {
  CsvWriter w(os);
  w.header({"f_thz", "re_beta", "im_beta", "re_eps_eff", "im_eps_eff", "residual"});
  for (const auto& m : modes) {
    w.cell(m.frequency * 1e-12)
        .cell(m.beta.real())
        .cell(m.beta.imag())
        .cell(m.eps_eff.real())
        .cell(m.eps_eff.imag())
        .cell(m.residual);
    w.end_row();
  }
}

// ---------------------------------------------------------------- gate

GateConfig parse_gate_config(std::string_view json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  Fields f(doc, "", errors);
  if (!f.valid()) throw ConfigError(errors);
  GateConfig c;
  if (auto v = f.number("gamma11_ghz", positive, "> 0")) c.gamma11_ghz = *v;
  if (auto v = f.number("gamma12_ghz")) c.gamma12_ghz = *v;
  if (auto v = f.number("omega1_ghz")) c.omega1_ghz = *v;
  if (auto v = f.number("omega2_ghz")) c.omega2_ghz = *v;
  if (auto v = f.number("blockade_ratio", positive, "> 0")) c.blockade_ratio = *v;
  c.duration_ns = f.number("duration_ns", positive, "> 0");
  if (std::abs(c.gamma12_ghz) > c.gamma11_ghz) f.fail("gamma12_ghz", "must satisfy |gamma12| <= gamma11");
  if (!c.duration_ns && c.omega1_ghz == c.omega2_ghz) {
    f.fail("duration_ns", "is required when omega1_ghz == omega2_ghz (no subradiant drive)");
  }
  f.finish();
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

GateParams build_gate_params(const GateConfig& c) {
  GateParams p;
  p.gamma11 = ghz_to_rad_per_s(c.gamma11_ghz);
  p.gamma12 = ghz_to_rad_per_s(c.gamma12_ghz);
  p.omega1 = ghz_to_rad_per_s(c.omega1_ghz);
  p.omega2 = ghz_to_rad_per_s(c.omega2_ghz);
  p.blockade_ratio = c.blockade_ratio;
  return p;
}

std::string gate_report_json(const GateConfig& config, const GateReport& r) {
  ordered_json doc;
  ordered_json in;
  in["gamma11_ghz"] = config.gamma11_ghz;
  in["gamma12_ghz"] = config.gamma12_ghz;
  in["omega1_ghz"] = config.omega1_ghz;
  in["omega2_ghz"] = config.omega2_ghz;
  in["blockade_ratio"] = config.blockade_ratio;
  if (config.duration_ns) in["duration_ns"] = *config.duration_ns;
  doc["config"] = std::move(in);
  doc["gamma_plus_ghz"] = rad_per_s_to_ghz(r.rates.gamma_plus);
  doc["gamma_minus_ghz"] = rad_per_s_to_ghz(r.rates.gamma_minus);
  doc["omega_plus_ghz"] = rad_per_s_to_ghz(r.drives.omega_plus);
  doc["omega_minus_ghz"] = rad_per_s_to_ghz(r.drives.omega_minus);
  doc["superradiant_blocked"] = r.blockade.superradiant_blocked;
  doc["subradiant_driven"] = r.blockade.subradiant_driven;
  doc["blockade_ok"] = r.blockade.ok();
  doc["fidelity_analytic"] = r.fidelity_analytic;
  doc["duration_ns"] = r.duration * 1e9;
  doc["phase_acquired"] = r.pulse.phase_acquired;
  doc["fidelity_simulated"] = r.pulse.fidelity;
  ordered_json amps = ordered_json::array();
  const char* labels[] = {"gg", "plus", "minus", "ee"};
  for (std::size_t k = 0; k < 4; ++k) {
    ordered_json a;
    a["state"] = labels[k];
    a["re"] = r.pulse.amplitudes[k].real();
    a["im"] = r.pulse.amplitudes[k].imag();
    amps.push_back(std::move(a));
  }
  doc["amplitudes"] = std::move(amps);
  return doc.dump(2) + "\n";
}

GateSweepConfig parse_gate_sweep_config(std::string_view json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  Fields f(doc, "", errors);
  if (!f.valid()) throw ConfigError(errors);
  GateSweepConfig c;
  if (auto v = f.number("d_min_nm", positive, "> 0")) c.d_min_nm = *v;
  if (auto v = f.number("d_max_nm", positive, "> 0")) c.d_max_nm = *v;
  if (auto v = f.number("d_step_nm", positive, "> 0")) c.d_step_nm = *v;
  if (auto v = f.number("dipole_moment_debye", positive, "> 0")) c.dipole_moment_debye = *v;
  if (auto v = f.number("transition_frequency_thz", positive, "> 0")) c.transition_frequency_thz = *v;
  if (auto v = f.number("host_index", positive, "> 0")) c.host_index = *v;
  if (auto v = f.number("gamma_wg_ghz", positive, "> 0")) c.gamma_wg_ghz = *v;
  if (auto v = f.number("attenuation_length_um", positive, "> 0")) c.attenuation_length_um = *v;
  if (auto v = f.number("active_compensation", [](double x) { return x >= 0.0 && x <= 1.0; }, "in [0, 1]")) {
    c.active_compensation = *v;
  }
  if (auto v = f.number("active_length_nm", non_negative, ">= 0")) c.active_length_nm = *v;
  if (c.d_max_nm < c.d_min_nm) f.fail("d_max_nm", "must be >= d_min_nm");
  else if ((c.d_max_nm - c.d_min_nm) / c.d_step_nm > 1e6) f.fail("d_step_nm", "grid exceeds 1e6 points");
  f.finish();
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

std::vector<double> distance_grid(const GateSweepConfig& c) {
  std::vector<double> d;
  const auto n = static_cast<std::size_t>(std::floor((c.d_max_nm - c.d_min_nm) / c.d_step_nm + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) d.push_back((c.d_min_nm + static_cast<double>(i) * c.d_step_nm) * 1e-9);
  return d;
}

GateSweep run_gate_sweep(const GateSweepConfig& c, ExecPolicy policy) {
  const auto grid = distance_grid(c);
  GateSweep s;
  s.free_space = fidelity_vs_distance(
      FreeSpaceGate{c.dipole_moment_debye, c.transition_frequency_thz * 1e12, c.host_index}, grid, policy);
  const double gwg = ghz_to_rad_per_s(c.gamma_wg_ghz);
  const double L = c.attenuation_length_um * 1e-6;
  s.enz_passive = fidelity_vs_distance(EnzPassiveGate{gwg, L}, grid, policy);
  s.enz_active =
      fidelity_vs_distance(EnzActiveGate{gwg, L, c.active_compensation, c.active_length_nm * 1e-9}, grid, policy);
  return s;
}

void write_gate_sweep_csv(std::ostream& os, const GateSweep& sweep) {
  CsvWriter w(os);
  w.header({"environment", "d_nm", "gamma11", "gamma12", "fidelity"});
  auto emit = [&](std::string_view env, const std::vector<FidelityPoint>& pts) {
    for (const auto& p : pts) {
      w.cell(env)
          .cell(p.distance * 1e9)
          .cell(rad_per_s_to_ghz(p.gamma11))
          .cell(rad_per_s_to_ghz(p.gamma12))
          .cell(p.fidelity);
      w.end_row();
    }
  };
  emit("freespace", sweep.free_space);
  emit("enz_passive", sweep.enz_passive);
  emit("enz_active", sweep.enz_active);
}

}  // namespace enzq
