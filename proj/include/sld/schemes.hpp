#pragma once

#include <complex>

#include "sld/errors.hpp"
#include "sld/numerics.hpp"

namespace sld {

/// Level-scheme parameters. Rates and detunings are in units of the total
/// single-atom linewidth, so gamma_1d + gamma_prime must equal 1; positions
/// are in units of 1/k0, so k0 z is just z.
struct SchemeParams {
  double gamma_1d = 0.1;     // decay rate into the guided mode
  double gamma_prime = 0.9;  // decay rate into free space
  double delta_c = -90.0;    // control-field detuning from the upper line
  Complex omega_0 = 1.0;     // control Rabi amplitude

  void validate() const {
    if (!(gamma_1d > 0.0))
      throw ConfigError("gamma_1d must be positive");
    if (!(gamma_prime >= 0.0))
      throw ConfigError("gamma_prime must be nonnegative");
    if (std::abs(gamma_1d + gamma_prime - 1.0) > 1e-9)
      throw ConfigError("gamma_1d + gamma_prime must equal 1");
  }

  /// Complex upper-level detuning delta_c + delta + i gamma_prime / 2.
  Complex dtilde(double delta) const {
    return Complex(delta_c + delta, 0.5 * gamma_prime);
  }

  double omega_sq() const { return std::norm(omega_0); }
};

/// Two-photon level shift |omega_0|^2 / (2 dtilde) produced by the control
/// field. Negative real part for red control detuning.
inline Complex stark_shift(const SchemeParams& p, double delta) {
  Complex dt = p.dtilde(delta);
  if (dt == 0.0) throw SingularityError("dtilde vanishes");
  return p.omega_sq() / (2.0 * dt);
}

/// Single-atom polarizability for an atom driven at local control
/// intensity |omega(z)|^2. At an exact drive node the atom reduces to a
/// two-level scatterer; that limit is taken algebraically because the
/// generic form degenerates to 0/0 at delta = 0.
inline Complex lambda_beta(const SchemeParams& p, double delta,
                           double omega_local_sq) {
  Complex half_g = Complex(0.0, 0.5 * p.gamma_1d);
  if (omega_local_sq == 0.0) return half_g / p.dtilde(delta);
  Complex den = p.dtilde(delta) * delta - omega_local_sq;
  if (den == 0.0) throw PoleError("polarizability pole");
  return half_g * delta / den;
}

struct RT {
  Complex t;
  Complex r;
};

/// Transmission and reflection of one scatterer of polarizability beta:
/// t = 1 / (1 + beta), r = t - 1.
inline RT beta_to_rt(Complex beta) {
  Complex den = 1.0 + beta;
  if (den == 0.0) throw SingularityError("unit reflector, 1 + beta = 0");
  Complex t = 1.0 / den;
  return {t, t - 1.0};
}

/// Mode-resolved response of one dual-V atom at position z: reflection and
/// transmission blocks S_r, S_t = I + S_r in the (sigma+, sigma-) basis,
/// and the polarizability block beta = -S_t^{-1} S_r used in transfer
/// matrices. The two counter-propagating control components imprint
/// position phases exp(+-2 i z) on the polarization-converting entries.
struct DualVScattering {
  CMat2 S_r;
  CMat2 S_t;
  CMat2 beta;
};

inline DualVScattering dualv_scattering(const SchemeParams& p, double delta,
                                        double z) {
  double om_comp_sq = 0.25 * p.omega_sq();  // each component carries omega_0/2
  Complex dt_tot = p.dtilde(delta) + Complex(0.0, 0.5 * p.gamma_1d);
  Complex den = dt_tot * delta - om_comp_sq;
  Complex d = dt_tot * den - dt_tot * om_comp_sq;
  if (d == 0.0) throw SingularityError("dual-V response denominator vanishes");
  Complex half_g = Complex(0.0, 0.5 * p.gamma_1d);
  Complex r_keep = -half_g * den / d;
  Complex r_conv = -half_g * om_comp_sq / d;

  DualVScattering out;
  out.S_r(0, 0) = r_keep;
  out.S_r(1, 1) = r_keep;
  out.S_r(0, 1) = r_conv * std::exp(Complex(0.0, 2.0 * z));
  out.S_r(1, 0) = r_conv * std::exp(Complex(0.0, -2.0 * z));
  out.S_t = CMat2::identity() + out.S_r;
  out.beta = Complex(-1.0, 0.0) * solve(out.S_t, out.S_r);
  return out;
}

}  // namespace sld
