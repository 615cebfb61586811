#include "enzq/couplings.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "enzq/constants.hpp"
#include "enzq/errors.hpp"

namespace enzq {

namespace {

using constants::kDebye;
using constants::kHbar;
using constants::kSpeedOfLight;
using constants::kVacuumPermittivity;

constexpr double kSymmetryTol = 1e-12;
constexpr double kTabulatedSymmetryTol = 1e-9;
constexpr double kPsdTol = 1e-9;

double max_abs(const RMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double asymmetry(const RMatrix& m) { return max_abs(m - m.transpose()); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

CouplingMatrices empty_couplings(std::size_t n) {
  CouplingMatrices c;
  c.gamma = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  c.g = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return c;
}

}  // namespace

double EmitterLayout::dipole_moment_si() const noexcept { return dipole_moment_debye * kDebye; }

double EmitterLayout::angular_frequency() const noexcept {
  return constants::kTwoPi * transition_frequency;
}

void EmitterLayout::validate() const {
  if (positions.empty()) throw ValidationError("n_qubits >= 1", "layout has no emitters");
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw ValidationError("positions strictly increasing",
                            "position " + std::to_string(i) + " does not exceed its predecessor");
    }
  }
  if (!(dipole_moment_debye > 0.0)) throw ValidationError("dipole_moment > 0", "got " + std::to_string(dipole_moment_debye));
  if (std::abs(orientation.norm() - 1.0) > 1e-12) {
    throw ValidationError("|orientation| = 1", "orientation is not a unit vector");
  }
  if (!(transition_frequency > 0.0)) throw ValidationError("transition_frequency > 0", "non-positive frequency");
  if (!(host_index >= 1.0)) throw ValidationError("host_index >= 1", "got " + std::to_string(host_index));
}

EmitterLayout EmitterLayout::equally_spaced(std::size_t n, double separation) {
  EmitterLayout layout;
  layout.positions.resize(n);
  const double centre = 0.5 * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    layout.positions[i] = (static_cast<double>(i) - centre) * separation;
  }
  return layout;
}

void CouplingMatrices::validate() const {
  if (gamma.rows() != gamma.cols() || g.rows() != g.cols() || gamma.rows() != g.rows()) {
    throw ValidationError("square N x N matrices", "gamma and g must both be N x N");
  }
  if (gamma.rows() == 0) throw ValidationError("n_qubits >= 1", "empty coupling matrices");
  const double scale = std::max(max_abs(gamma), max_abs(g));
  if (asymmetry(gamma) > kSymmetryTol * scale) throw ValidationError("gamma symmetric", "gamma_ij != gamma_ji");
  if (asymmetry(g) > kSymmetryTol * scale) throw ValidationError("g symmetric", "g_ij != g_ji");
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    if (!(gamma(i, i) > 0.0)) {
      throw ValidationError("gamma diagonal positive", "gamma_" + std::to_string(i + 1) + std::to_string(i + 1) + " <= 0");
    }
    if (g(i, i) != 0.0) {
      throw ValidationError("g diagonal zero", "Lamb shift g_" + std::to_string(i + 1) + std::to_string(i + 1) + " must be 0");
    }
  }
  const RMatrix sym = 0.5 * (gamma + gamma.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(sym, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -kPsdTol * max_abs(gamma)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lowest;
    throw ValidationError("gamma positive semidefinite", os.str());
  }
}

double intrinsic_decay_rate(double mu, double omega0, double host_index) {
  require_positive(mu, "dipole moment");
  require_positive(omega0, "transition frequency");
  require_positive(host_index, "host index");
  const double c3 = kSpeedOfLight * kSpeedOfLight * kSpeedOfLight;
  return host_index * omega0 * omega0 * omega0 * mu * mu /
         (3.0 * std::numbers::pi * kVacuumPermittivity * kHbar * c3);
}

CouplingMatrices free_space_coupling(const EmitterLayout& layout) {
  layout.validate();
  if (std::abs(layout.orientation.x()) > 1e-12) {
    throw DomainError("free-space closed form requires dipoles perpendicular to the channel axis");
  }
  const std::size_t n = layout.n_qubits();
  const double omega0 = layout.angular_frequency();
  const double gamma0 = intrinsic_decay_rate(layout.dipole_moment_si(), omega0, layout.host_index);
  const double k = layout.host_index * omega0 / kSpeedOfLight;

  CouplingMatrices c = empty_couplings(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.gamma(i, i) = gamma0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = k * std::abs(layout.positions[j] - layout.positions[i]);
      if (!(x > 0.0)) throw DomainError("coincident emitters: g_ij diverges as d -> 0");
      const double s = std::sin(x);
      const double co = std::cos(x);
      const double x2 = x * x;
      const double x3 = x2 * x;
      const double gij = gamma0 * 1.5 * (s / x + co / x2 - s / x3);
      const double cij = gamma0 * 0.75 * (-co / x + s / x2 + co / x3);
      c.gamma(i, j) = c.gamma(j, i) = gij;
      c.g(i, j) = c.g(j, i) = cij;
    }
  }
  return c;
}

CouplingMatrices traveling_waveguide_coupling(const EmitterLayout& layout, double gamma_wg,
                                              double beta, double attenuation_length) {
  layout.validate();
  if (!(gamma_wg > 0.0)) throw ValidationError("gamma_wg > 0", "waveguide decay rate must be positive");
  if (!(beta >= 0.0)) throw ValidationError("beta >= 0", "guided wavenumber must be non-negative");
  if (!(attenuation_length > 0.0)) throw ValidationError("attenuation_length > 0", "non-positive attenuation length");

  const std::size_t n = layout.n_qubits();
  CouplingMatrices c = empty_couplings(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.gamma(i, i) = gamma_wg;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(layout.positions[j] - layout.positions[i]);
      const double envelope = std::exp(-d / (2.0 * attenuation_length));
      c.gamma(i, j) = c.gamma(j, i) = gamma_wg * std::cos(beta * d) * envelope;
      c.g(i, j) = c.g(j, i) = 0.5 * gamma_wg * std::sin(beta * d) * envelope;
    }
  }
  return c;
}

CouplingMatrices standing_wave_coupling(const EmitterLayout& layout, const StandingWaveCavity& cavity) {
  layout.validate();
  if (!(cavity.gamma_c > 0.0)) throw ValidationError("gamma_c > 0", "cavity decay rate must be positive");
  if (!(cavity.g_c >= 0.0)) throw ValidationError("g_c >= 0", "negative coherent rate");
  if (!(cavity.mode_wavelength > 0.0)) throw ValidationError("mode_wavelength > 0", "non-positive mode wavelength");
  if (!(cavity.background >= 0.0)) throw ValidationError("background >= 0", "negative background decay");

  const std::size_t n = layout.n_qubits();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::cos(constants::kTwoPi * (layout.positions[i] - cavity.mode_origin) / cavity.mode_wavelength);
  }
  CouplingMatrices c = empty_couplings(n);
  const double floor = 1e-6 * cavity.gamma_c;
  for (std::size_t i = 0; i < n; ++i) {
    c.gamma(i, i) = std::max(cavity.gamma_c * u[i] * u[i] + cavity.background, floor);
    for (std::size_t j = i + 1; j < n; ++j) {
      c.gamma(i, j) = c.gamma(j, i) = cavity.gamma_c * u[i] * u[j];
      c.g(i, j) = c.g(j, i) = cavity.g_c * u[i] * u[j];
    }
  }
  return c;
}

CouplingMatrices make_tabulated(RMatrix gamma, RMatrix g) {
  if (gamma.rows() != gamma.cols() || g.rows() != g.cols() || gamma.rows() != g.rows()) {
    throw ValidationError("square N x N matrices", "size mismatch between gamma and g");
  }
  const double scale = std::max(max_abs(gamma), max_abs(g));
  if (asymmetry(gamma) > kTabulatedSymmetryTol * scale) {
    throw ValidationError("gamma symmetric", "asymmetry beyond 1e-9 relative");
  }
  if (asymmetry(g) > kTabulatedSymmetryTol * scale) {
    throw ValidationError("g symmetric", "asymmetry beyond 1e-9 relative");
  }
  CouplingMatrices c;
  c.gamma = 0.5 * (gamma + gamma.transpose());
  c.g = 0.5 * (g + g.transpose());
  c.validate();
  return c;
}

CouplingMatrices load_tabulated(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("valid JSON", e.what());
  }
  if (!doc.is_object()) throw ValidationError("valid JSON", "top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "n" && key != "gamma_ghz" && key != "g_ghz") {
      throw ValidationError("known keys", "unexpected key '" + key + "'");
    }
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw ValidationError("n_qubits >= 1", "'n' must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["n"].get<long long>());
  auto read = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_array() || static_cast<Eigen::Index>(doc[key].size()) != n) {
      throw ValidationError("square N x N matrices", std::string("'") + key + "' must have n rows");
    }
    RMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = doc[key][static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ValidationError("square N x N matrices", std::string("row ") + std::to_string(i) + " of '" + key + "' must have n entries");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!row[static_cast<std::size_t>(j)].is_number()) {
          throw ValidationError("numeric entries", std::string("non-numeric entry in '") + key + "'");
        }
        m(i, j) = constants::ghz_to_rad_per_s(row[static_cast<std::size_t>(j)].get<double>());
      }
    }
    return m;
  };
  RMatrix gamma = read("gamma_ghz");
  RMatrix g = read("g_ghz");
  return make_tabulated(std::move(gamma), std::move(g));
}

std::string to_tabulated_json(const CouplingMatrices& c) {
  nlohmann::ordered_json doc;
  const auto n = c.gamma.rows();
  doc["n"] = n;
  auto write = [&](const RMatrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < n; ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index j = 0; j < n; ++j) row.push_back(constants::rad_per_s_to_ghz(m(i, j)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["gamma_ghz"] = write(c.gamma);
  doc["g_ghz"] = write(c.g);
  return doc.dump(2) + "\n";
}

CouplingMatrices compute_couplings(const EmitterLayout& layout, const ReservoirModel& model) {
  struct Visitor {
    const EmitterLayout& layout;
    CouplingMatrices operator()(const FreeSpace& m) const {
      EmitterLayout l = layout;
      l.host_index = m.host_index;
      return free_space_coupling(l);
    }
    CouplingMatrices operator()(const TravelingWaveguide& m) const {
      return traveling_waveguide_coupling(layout, m.gamma_wg, m.beta, m.attenuation_length);
    }
    CouplingMatrices operator()(const StandingWaveCavity& m) const { return standing_wave_coupling(layout, m); }
    CouplingMatrices operator()(const Tabulated& m) const {
      if (m.matrices.n_qubits() != layout.n_qubits()) {
        throw ValidationError("n_qubits match", "tabulated matrices do not match the layout size");
      }
      m.matrices.validate();
      return m.matrices;
    }
  };
  return std::visit(Visitor{layout}, model);
}

}  // namespace enzq
