#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "sld/errors.hpp"
#include "sld/numerics.hpp"
#include "sld/schemes.hpp"

namespace sld {

// Continuum dispersion relations. Every function returns the Bloch
// wavevector offset from the carrier in units of the atomic density
// (phase per atom), with the sign normalized to Re q > 0; the second
// branch of each curve is -q.

/// Drive-dressed transparency branch: q = (gamma_1d / 2 dtilde)
/// * delta / (delta - 2 delta_S). Near delta = 0 the slope
/// d delta / d q is exactly +-2 |omega_0|^2 / gamma_1d, purely real.
inline Complex eit_q(const SchemeParams& p, double delta) {
  if (delta == 0.0) return 0.0;
  Complex den = delta - 2.0 * stark_shift(p, delta);
  if (den == 0.0) throw PoleError("transparency-branch pole");
  Complex pref = 0.5 * p.gamma_1d / p.dtilde(delta);
  return principal_branch(pref * delta / den);
}

/// Quadratic dual-V band: q^2 = (gamma_1d / 2 dtilde)^2
/// * delta / (delta - delta_S).
inline Complex dualv_q_quadratic(const SchemeParams& p, double delta) {
  if (delta == 0.0) return 0.0;
  Complex den = delta - stark_shift(p, delta);
  if (den == 0.0) throw PoleError("quadratic-band pole");
  Complex pref = 0.5 * p.gamma_1d / p.dtilde(delta);
  return principal_branch(std::sqrt(pref * pref * delta / den));
}

/// Linear dual-V band: q = (gamma_1d / 2 dtilde)
/// * (delta - delta_S / 2) / (delta - delta_S). Crosses zero at
/// delta = delta_S / 2 with slope d delta / d q = -+ |omega_0|^2
/// / (2 gamma_1d).
inline Complex dualv_q_linear(const SchemeParams& p, double delta) {
  Complex ds = stark_shift(p, delta);
  Complex den = delta - ds;
  if (den == 0.0) throw PoleError("linear-band pole");
  Complex pref = 0.5 * p.gamma_1d / p.dtilde(delta);
  return principal_branch(pref * (delta - 0.5 * ds) / den);
}

/// Effective mass of the quadratic dual-V band at delta = 0, from
/// delta = q^2 / (2 m): m = -gamma_1d^2 / (4 (delta_c + i gamma_prime
/// / 2) |omega_0|^2).
inline Complex dualv_mass(const SchemeParams& p) {
  if (p.omega_sq() == 0.0)
    throw DomainError("effective mass needs a nonzero control field");
  Complex dt0 = Complex(p.delta_c, 0.5 * p.gamma_prime);
  if (dt0 == 0.0) throw SingularityError("dtilde(0) vanishes");
  return -p.gamma_1d * p.gamma_1d / (4.0 * dt0 * p.omega_sq());
}

/// Coefficients of a secular two-mode envelope model
/// d/dz (E+, E-) = i ((alpha1, alpha2), (-alpha2, -alpha1)) (E+, E-),
/// whose Bloch wavevector is q = sqrt(alpha1^2 - alpha2^2).
struct AlphaPair {
  Complex alpha1;
  Complex alpha2;

  Complex q() const {
    return principal_branch(std::sqrt(alpha1 * alpha1 - alpha2 * alpha2));
  }
};

/// Secular dual-V envelope coefficients. alpha1^2 - alpha2^2 reproduces
/// the quadratic band identically.
inline AlphaPair dualv_alpha_pair(const SchemeParams& p, double delta) {
  Complex ds = stark_shift(p, delta);
  Complex den = delta - ds;
  if (den == 0.0) throw PoleError("dual-V envelope pole");
  Complex pref = 0.5 * p.gamma_1d / p.dtilde(delta);
  return {pref * (delta - 0.5 * ds) / den, pref * (0.5 * ds) / den};
}

/// Fourier coefficients gamma_0 and gamma_1 = gamma_{+-1} of the
/// standing-wave response 1 / (1 - x cos^2 u) over one drive period.
/// gamma_1 switches to a series below |x| = 3e-3 where the closed form
/// cancels catastrophically. Real x >= 1 puts the pole on the
/// integration contour.
struct GammaCoeffs {
  Complex gamma0;
  Complex gamma1;
};

inline GammaCoeffs lambda_gamma_coeffs(Complex x) {
  if (x.imag() == 0.0 && x.real() >= 1.0)
    throw PoleError("standing-wave response pole on the real axis");
  Complex s = std::sqrt(1.0 - x);
  Complex g0 = 1.0 / s;
  Complex g1;
  if (std::abs(x) < 3e-3) {
    g1 = x * (0.25 + x * (0.25 + x * (15.0 / 64.0 + x * (7.0 / 32.0))));
  } else {
    g1 = -(2.0 * s + x - 2.0) / (x * s);
  }
  return {g0, g1};
}

/// Secular envelope coefficients for the standing-wave drive, averaged
/// over all atomic positions: alpha_l = (gamma_1d / 2 dtilde) gamma_l
/// with x = 2 delta_S / delta.
inline AlphaPair lambda_alpha_pair(const SchemeParams& p, double delta) {
  if (delta == 0.0)
    throw PoleError("standing-wave envelope undefined at delta = 0");
  Complex x = 2.0 * stark_shift(p, delta) / delta;
  GammaCoeffs g = lambda_gamma_coeffs(x);
  Complex pref = 0.5 * p.gamma_1d / p.dtilde(delta);
  return {pref * g.gamma0, pref * g.gamma1};
}

/// Position-averaged standing-wave dispersion, all drive harmonics
/// resummed: q^2 = (gamma_1d / 2 dtilde)^2 * 4 / (s (1 + s)^2) with
/// s = sqrt(1 - 2 delta_S / delta). Algebraically equal to
/// alpha1^2 - alpha2^2 but free of the small-x cancellation.
inline Complex lambda_infinite_q(const SchemeParams& p, double delta) {
  if (delta == 0.0) return 0.0;
  Complex x = 2.0 * stark_shift(p, delta) / delta;
  if (x.imag() == 0.0 && x.real() >= 1.0)
    throw PoleError("standing-wave response pole on the real axis");
  Complex s = std::sqrt(1.0 - x);
  Complex pref = 0.5 * p.gamma_1d / p.dtilde(delta);
  Complex q2 = pref * pref * 4.0 / (s * (1.0 + s) * (1.0 + s));
  return principal_branch(std::sqrt(q2));
}

/// Asymptotic small-q inversion of the resummed standing-wave band:
/// delta = (-delta_c - i gamma_prime / 2)^{1/3} |omega_0|^2 |q|^{4/3}
/// / gamma_1d^{4/3}. The cube root is the branch whose real part has the
/// sign of -delta_c, closest to the real axis when two qualify.
inline Complex lambda_43_delta(const SchemeParams& p, Complex qbar) {
  if (p.delta_c == 0.0)
    throw DomainError("4/3 asymptote needs a detuned control field");
  Complex w = Complex(-p.delta_c, -0.5 * p.gamma_prime);
  Complex r0 = std::pow(w, 1.0 / 3.0);
  double want = (p.delta_c < 0.0) ? 1.0 : -1.0;
  Complex best = 0.0;
  bool found = false;
  for (int k = 0; k < 3; ++k) {
    Complex r = r0 * std::exp(Complex(0.0, 2.0 * kPi * k / 3.0));
    if ((r.real() > 0.0 ? 1.0 : -1.0) != want) continue;
    if (!found || std::abs(r.imag()) < std::abs(best.imag())) best = r;
    found = true;
  }
  double mag = std::pow(std::abs(qbar), 4.0 / 3.0);
  return best * p.omega_sq() * mag / std::pow(p.gamma_1d, 4.0 / 3.0);
}

// ---------------------------------------------------------------------------
// Finite drive-harmonic truncation. Coherences are expanded in harmonics
// of the drive period; harmonic f couples to f +- 1 through the control
// field, giving a tridiagonal system. Row i holds harmonic f = order - i:
// odd |f| rows are optical coherences (diagonal dtilde - f delta_d), even
// rows are spin coherences (diagonal delta - f delta_d). delta_d is the
// detuning split between the two control components; 0 means a stationary
// standing wave.

struct Truncation {
  std::vector<Complex> diag;
  std::vector<Complex> sub;    // sub[i] = M(i+1, i)
  std::vector<Complex> super;  // super[i] = M(i, i+1)
  int order = 0;
};

inline Truncation build_truncation(const SchemeParams& p, double delta,
                                   int order, double delta_d = 0.0) {
  if (order < 1) throw DomainError("truncation order must be >= 1");
  const int n = 2 * order + 1;
  Truncation t;
  t.order = order;
  t.diag.resize(n);
  t.sub.resize(n - 1);
  t.super.resize(n - 1);
  std::vector<Complex> row_off(n);
  for (int i = 0; i < n; ++i) {
    int f = order - i;
    if (std::abs(f) % 2 == 1) {
      t.diag[i] = p.dtilde(delta) - static_cast<double>(f) * delta_d;
      row_off[i] = 0.5 * p.omega_0;
    } else {
      t.diag[i] = Complex(delta - static_cast<double>(f) * delta_d, 0.0);
      row_off[i] = 0.5 * std::conj(p.omega_0);
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    t.super[i] = row_off[i];
    t.sub[i] = row_off[i + 1];
  }
  return t;
}

/// Bloch wavevectors of the order-limited standing-wave model. The
/// harmonic chain is solved against unit sources in the f = +1 and f = -1
/// optical rows; the resulting 2x2 coupling matrix M_E gives the two
/// branches as roots of q^2 + q (M_E00 - M_E11) - det M_E = 0. Odd orders
/// produce a quadratic band at small delta, even orders a linear one.
inline std::array<Complex, 2> truncated_q(const SchemeParams& p, double delta,
                                          int order, double delta_d = 0.0) {
  Truncation tr = build_truncation(p, delta, order, delta_d);
  const int n = 2 * order + 1;
  std::vector<std::vector<Complex>> rhs(2, std::vector<Complex>(n, 0.0));
  rhs[0][order - 1] = 1.0;
  rhs[1][order + 1] = 1.0;
  tridiag_solve(tr.sub, tr.diag, tr.super, rhs);
  double half_g = 0.5 * p.gamma_1d;
  Complex me00 = half_g * rhs[0][order - 1];
  Complex me01 = half_g * rhs[1][order - 1];
  Complex me10 = half_g * rhs[0][order + 1];
  Complex me11 = half_g * rhs[1][order + 1];
  Complex b = me00 - me11;
  Complex dd = me00 * me11 - me01 * me10;
  Complex disc = std::sqrt(b * b + 4.0 * dd);
  Complex r0 = 0.5 * (-b + disc);
  Complex r1 = 0.5 * (-b - disc);
  if (r0.real() < r1.real() ||
      (r0.real() == r1.real() && r0.imag() < r1.imag()))
    std::swap(r0, r1);
  return {r0, r1};
}

}  // namespace sld
