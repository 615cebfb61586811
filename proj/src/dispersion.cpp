#include "enzq/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "enzq/constants.hpp"
#include "enzq/errors.hpp"

namespace enzq {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kResidualInvariant = 1e-8;

double vacuum_wavenumber(double f) { return constants::kTwoPi * f / constants::kSpeedOfLight; }

Complex sinc(Complex a) {
  if (std::abs(a) < 1e-4) return 1.0 - a * a / 6.0;
  return std::sin(a) / a;
}

struct Wavenumbers {
  Complex kd;
  Complex km;
};

Wavenumbers wavenumbers(Complex beta_sq, double k0, const SlotGeometry& geom, Complex eps_metal) {
  const double k0sq = k0 * k0;
  // Principal sqrt has Re >= 0, which is the decaying branch for km. The
  // residual is even in kd so its branch does not matter.
  return {std::sqrt(geom.eps_dielectric * k0sq - beta_sq), std::sqrt(beta_sq - eps_metal * k0sq)};
}

// kd sin(kd w/2) - km cos(kd w/2): same roots as the tan form but bounded in
// the perfect-conductor limit.
struct Bounded {
  Complex value;
  Complex derivative;  // d/d(beta^2)
};

Bounded bounded_residual(Complex beta_sq, double k0, const SlotGeometry& geom, Complex eps_metal) {
  const auto [kd, km] = wavenumbers(beta_sq, k0, geom, eps_metal);
  const double half_w = 0.5 * geom.width_w;
  const Complex a = kd * half_w;
  const Complex s = std::sin(a);
  const Complex c = std::cos(a);
  Bounded out;
  out.value = kd * s - km * c;
  // dkd/ds = -1/(2 kd); the sin(a)/kd terms are rewritten through sinc.
  out.derivative = -0.5 * (half_w * sinc(a) * (1.0 + km * half_w) + half_w * c) - c / (2.0 * km);
  return out;
}

// k0^2 w for ordinary metals. The bounded form carries |km| as a prefactor, so
// the scale follows it once the metal is a much better conductor than k0 w.
double residual_scale(Complex beta_sq, double k0, const SlotGeometry& geom, Complex eps_metal) {
  const auto [kd, km] = wavenumbers(beta_sq, k0, geom, eps_metal);
  return k0 * geom.width_w * std::max({k0, std::abs(kd), std::abs(km)});
}

ModeSolution pack(double f, Complex beta_sq, const SlotGeometry& geom, Complex eps_metal) {
  const double k0 = vacuum_wavenumber(f);
  ModeSolution sol;
  sol.frequency = f;
  sol.beta = std::sqrt(beta_sq);
  sol.eps_eff = (sol.beta / k0) * (sol.beta / k0);
  // Reported on the bounded form: the tan form loses ~8 digits to
  // cancellation near its pole in the perfect-conductor limit.
  sol.residual = std::abs(bounded_residual(beta_sq, k0, geom, eps_metal).value) / residual_scale(beta_sq, k0, geom, eps_metal);
  return sol;
}

}  // namespace

DrudeMetal DrudeMetal::silver() {
  return DrudeMetal{5.0, constants::ev_to_rad_per_s(9.1), constants::ev_to_rad_per_s(0.021)};
}

void DrudeMetal::validate() const {
  if (!(eps_inf >= 1.0)) throw ValidationError("eps_inf >= 1", "got " + std::to_string(eps_inf));
  if (!(plasma_frequency > 0.0)) throw ValidationError("plasma_frequency > 0", "non-positive plasma frequency");
  if (!(collision_rate >= 0.0)) throw ValidationError("collision_rate >= 0", "negative collision rate");
}

void SlotGeometry::validate() const {
  if (!(width_w > 0.0)) throw ValidationError("width_w > 0", "non-positive slot width");
  if (!(eps_dielectric.real() > 0.0)) throw ValidationError("Re(eps_dielectric) > 0", "non-positive dielectric permittivity");
}

Complex metal_permittivity(const DrudeMetal& metal, double f) {
  const double w = constants::kTwoPi * f;
  const double wp = metal.plasma_frequency;
  return metal.eps_inf - wp * wp / Complex(w * w, metal.collision_rate * w);
}

Complex metal_permittivity(const MetalModel& metal, double f) {
  if (const auto* drude = std::get_if<DrudeMetal>(&metal)) return metal_permittivity(*drude, f);
  return std::get<FixedPermittivity>(metal).eps;
}

Complex dispersion_residual(Complex beta, double f, const SlotGeometry& geom, Complex eps_metal) {
  const double k0 = vacuum_wavenumber(f);
  const auto [kd, km] = wavenumbers(beta * beta, k0, geom, eps_metal);
  return kd * std::tan(0.5 * kd * geom.width_w) - km;
}

Complex pec_beta_squared(double f, const SlotGeometry& geom) {
  const double k0 = vacuum_wavenumber(f);
  const double cut = std::numbers::pi / geom.width_w;
  return geom.eps_dielectric * k0 * k0 - cut * cut;
}

ModeSolution solve_mode(double f, const SlotGeometry& geom, const MetalModel& metal, Complex beta_guess) {
  if (!(f > 0.0)) throw DomainError("frequency must be positive");
  geom.validate();
  if (const auto* drude = std::get_if<DrudeMetal>(&metal)) drude->validate();

  const Complex eps_m = metal_permittivity(metal, f);
  const double k0 = vacuum_wavenumber(f);

  Complex s = (beta_guess == Complex{}) ? pec_beta_squared(f, geom) : beta_guess * beta_guess;
  Bounded r = bounded_residual(s, k0, geom, eps_m);
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    if (std::abs(r.value) < 1e-13 * residual_scale(s, k0, geom, eps_m)) break;
    const Complex step = -r.value / r.derivative;
    double damping = 1.0;
    Complex trial = s + step;
    Bounded rt = bounded_residual(trial, k0, geom, eps_m);
    for (int h = 0; h < 40 && !(std::abs(rt.value) < std::abs(r.value)); ++h) {
      damping *= 0.5;
      trial = s + damping * step;
      rt = bounded_residual(trial, k0, geom, eps_m);
    }
    const bool stalled = std::abs(trial - s) <= 1e-15 * std::max(std::abs(s), k0 * k0);
    s = trial;
    r = rt;
    if (stalled) break;
  }

  ModeSolution sol = pack(f, s, geom, eps_m);
  if (!(sol.residual < kResidualInvariant)) {
    std::ostringstream os;
    os << "mode solver did not converge at f = " << f << " Hz (relative residual " << sol.residual << ")";
    throw SolverError(os.str(), sol.beta, sol.residual);
  }
  return sol;
}

double find_cutoff(const SlotGeometry& geom, const MetalModel& metal, double f_lo, double f_hi) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo)) throw BracketError("cutoff bracket must satisfy 0 < f_lo < f_hi");
  auto re_eps = [&](double f) { return solve_mode(f, geom, metal).eps_eff.real(); };
  double lo = f_lo;
  double hi = f_hi;
  double v_lo = re_eps(lo);
  const double v_hi = re_eps(hi);
  if (v_lo == 0.0) return lo;
  if (v_hi == 0.0) return hi;
  if ((v_lo < 0.0) == (v_hi < 0.0)) {
    std::ostringstream os;
    os << "Re(eps_eff) has the same sign at " << f_lo << " Hz and " << f_hi << " Hz";
    throw BracketError(os.str());
  }
  while ((hi - lo) > 1e-10 * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    const double v = re_eps(mid);
    if ((v < 0.0) == (v_lo < 0.0)) {
      lo = mid;
      v_lo = v;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<ModeSolution> sweep_dispersion(const SlotGeometry& geom, const MetalModel& metal,
                                           const std::vector<double>& f_grid) {
  if (f_grid.empty()) throw DomainError("frequency grid is empty");
  for (std::size_t i = 1; i < f_grid.size(); ++i) {
    if (!(f_grid[i] > f_grid[i - 1])) throw DomainError("frequency grid must be strictly increasing");
  }
  std::vector<ModeSolution> out;
  out.reserve(f_grid.size());
  Complex guess{};
  for (double f : f_grid) {
    try {
      out.push_back(solve_mode(f, geom, metal, guess));
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "sweep failed at " << f * 1e-12 << " THz: " << e.what();
      throw SolverError(os.str(), e.last_iterate(), e.last_residual());
    }
    guess = out.back().beta;
  }
  return out;
}

}  // namespace enzq
