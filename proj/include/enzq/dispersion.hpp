// dispersion.hpp: quasi-TE mode of a 2D metal-dielectric-metal slot with a
// Drude metal, effective permittivity and the ENZ cutoff.
//
// Time convention e^{-i w t}: loss means Im(eps) > 0. An active (gain) layer
// quoted as eps = 2.2 + 0.045i under the opposite convention is entered here
// as 2.2 - 0.045i.
#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "enzq/types.hpp"

namespace enzq {

struct DrudeMetal {
  double eps_inf = 5.0;
  double plasma_frequency = 0.0;  // rad/s
  double collision_rate = 0.0;    // rad/s

  // eps_inf = 5, hbar*w_p = 9.1 eV, hbar*Gamma = 0.021 eV.
  static DrudeMetal silver();
  void validate() const;
};

// Frequency-independent permittivity; a very large negative value is the
// perfect-conductor limit.
struct FixedPermittivity {
  Complex eps;
};

using MetalModel = std::variant<DrudeMetal, FixedPermittivity>;

struct SlotGeometry {
  double width_w = 200e-9;          // m
  Complex eps_dielectric{2.2, 0.0};
  // Carried for provenance; the 2D solver does not use them.
  double height_t = 40e-9;
  double length_l = 1e-6;
  double period_a = 400e-9;
  double period_b = 400e-9;

  void validate() const;
};

struct ModeSolution {
  double frequency = 0.0;  // Hz
  Complex beta;            // rad/m
  Complex eps_eff;         // (beta/k0)^2
  double residual = 0.0;   // |kd sin(kd w/2) - km cos(kd w/2)| / (k0 w max(k0, |kd|, |km|))
};

Complex metal_permittivity(const DrudeMetal& metal, double f);
Complex metal_permittivity(const MetalModel& metal, double f);

// R(beta) = kd tan(kd w/2) - km with kd = sqrt(eps_d k0^2 - beta^2),
// km = sqrt(beta^2 - eps_m k0^2), Re(km) >= 0.
Complex dispersion_residual(Complex beta, double f, const SlotGeometry& geom, Complex eps_metal);

// beta^2 of the TE1 parallel-plate mode with perfectly conducting walls.
Complex pec_beta_squared(double f, const SlotGeometry& geom);

// Damped Newton on beta^2. A zero guess starts from the perfect-conductor
// closed form.
ModeSolution solve_mode(double f, const SlotGeometry& geom, const MetalModel& metal, Complex beta_guess = {});

// Bisection on Re(eps_eff(f)) = 0 to 1e-4 relative frequency.
double find_cutoff(const SlotGeometry& geom, const MetalModel& metal, double f_lo, double f_hi);

// Continuation sweep over an increasing grid; each root seeds the next.
std::vector<ModeSolution> sweep_dispersion(const SlotGeometry& geom, const MetalModel& metal,
                                           const std::vector<double>& f_grid);

}  // namespace enzq
