#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sld/continuum.hpp"
#include "sld/discrete.hpp"
#include "sld/errors.hpp"
#include "sld/numerics.hpp"
#include "sld/parallel.hpp"
#include "sld/rng.hpp"
#include "sld/schemes.hpp"

namespace sld {

/// Transfer matrix of n_cells identical cells. A unit-determinant 2x2
/// power follows from the eigenvalue pair exp(+-i phi) via the closed form
/// T^n = cos(n phi) I + i sin(n phi) B with B = (T - cos(phi) I)
/// / (i sin(phi)), evaluated with the growing exponential factored into
/// log_scale. Near a band edge (sin(phi) -> 0), with a vanishing coupling
/// entry, or for extreme per-cell decay the closed form degenerates and
/// the power falls back to direct binary squaring, recording a note.
inline ScaledMatrix2 ensemble_T(const ScaledMatrix2& cell, long long n_cells,
                                std::vector<std::string>* notes = nullptr) {
  if (n_cells < 0) throw DomainError("negative cell count");
  if (n_cells == 0) return ScaledMatrix2::identity();
  if (n_cells == 1) return cell;

  auto eig = reciprocal_eigenvalues(cell);
  const ScaledComplex& decay =
      (eig[0].log_abs() <= eig[1].log_abs()) ? eig[0] : eig[1];
  double sig = -decay.log_abs();
  if (sig < 0.0) sig = 0.0;
  double theta = decay.arg();
  Complex phi(theta, sig);
  Complex sin_phi = std::sin(phi);

  // At an exact band edge the eigenvalue split is made of discriminant
  // rounding, which floors |sin(phi)| near sqrt(eps) ~ 1e-8; the cutoff
  // must clear that floor.
  double scale = 0.0;
  for (const auto& v : cell.m.a) scale = std::max(scale, abs1(v));
  bool degenerate = std::abs(sin_phi) < 1e-6 ||
                    abs1(cell.m(0, 1)) <= 1e-14 * scale ||
                    sig > 200.0 || std::abs(cell.log_scale) > 300.0;
  if (degenerate) {
    if (notes)
      notes->push_back("cell power fell back to direct squaring");
    return scaled_power(cell, n_cells);
  }

  Complex inv_isin = 1.0 / (Complex(0.0, 1.0) * sin_phi);
  CMat2 b_mat = inv_isin * (cell.value() - std::cos(phi) * CMat2::identity());

  double n = static_cast<double>(n_cells);
  Complex ep = std::exp(Complex(-2.0 * n * sig, n * theta));
  Complex em = std::exp(Complex(0.0, -n * theta));
  Complex cos_s = 0.5 * (ep + em);
  Complex sin_s = Complex(0.0, -0.5) * (ep - em);

  ScaledMatrix2 out{cos_s * CMat2::identity() +
                        (Complex(0.0, 1.0) * sin_s) * b_mat,
                    n * sig};
  out.rescale();
  return out;
}

/// Four-component cells repeat by direct binary squaring; the two-pair
/// eigenstructure gives no comparably stable closed form.
inline ScaledMatrix4 ensemble_T(const ScaledMatrix4& cell, long long n_cells) {
  if (n_cells < 0) throw DomainError("negative cell count");
  return scaled_power(cell, n_cells);
}

/// Transfer matrix of n_atoms of continuum described by envelope
/// coefficients (alpha1, alpha2): T = cos(q N) I + i sin(q N) A / q with
/// A = [[alpha1, alpha2], [-alpha2, -alpha1]], q = sqrt(alpha1^2 -
/// alpha2^2). Even in q, so the branch choice is immaterial.
inline ScaledMatrix2 ensemble_T_continuum(const AlphaPair& ap,
                                          double n_atoms) {
  Complex q = ap.q();
  if (q == 0.0)
    throw SingularityError("envelope wavevector vanishes");
  Complex w = q * n_atoms;
  double sig = std::abs(w.imag());
  Complex iw = Complex(0.0, 1.0) * w;
  Complex a = std::exp(iw - sig);
  Complex b = std::exp(-iw - sig);
  Complex cos_s = 0.5 * (a + b);
  Complex sin_s = Complex(0.0, -0.5) * (a - b);
  CMat2 amat;
  amat(0, 0) = ap.alpha1 / q;
  amat(0, 1) = ap.alpha2 / q;
  amat(1, 0) = -ap.alpha2 / q;
  amat(1, 1) = -ap.alpha1 / q;
  ScaledMatrix2 out{cos_s * CMat2::identity() +
                        (Complex(0.0, 1.0) * sin_s) * amat,
                    sig};
  out.rescale();
  return out;
}

struct TR {
  Complex t;
  Complex r;
  bool underflow = false;
};

/// Transmission and reflection for a forward-incident field:
/// r = -T21 / T22 and t = 1 / T22 (the unit determinant collapses the
/// Schur complement T11 - T12 T21 / T22 to det T / T22). When |t|
/// underflows the double range, t is reported as 0 with the flag set.
inline TR t_r_from_T(const ScaledMatrix2& tm) {
  Complex t22 = tm.m(1, 1);
  if (t22 == 0.0)
    throw DegeneracyError("no transmission channel, T22 = 0", 0.0);
  TR out;
  out.r = -tm.m(1, 0) / t22;
  double log_t = -tm.log_scale - std::log(std::abs(t22));
  if (log_t < -745.0) {
    out.t = 0.0;
    out.underflow = true;
  } else {
    out.t = std::polar(std::exp(log_t), -std::arg(t22));
  }
  return out;
}

struct TR4 {
  CMat2 t;
  CMat2 r;
  bool underflow = false;
};

/// Block version: r = -T22^{-1} T21 and t = (T11 - T12 T22^{-1} T21)
/// e^{log_scale}, columns indexed by the incident polarization. The
/// extraction resolves both polarization channels only while their decay
/// rates stay within the mantissa's range (the Schur complement cancels
/// down to the weak channel); longer or more strongly attenuating chains
/// go through the scattering cascade below.
inline TR4 t_r_from_T(const ScaledMatrix4& tm) {
  CMat2 t11 = block(tm.m, 0, 0);
  CMat2 t12 = block(tm.m, 0, 1);
  CMat2 t21 = block(tm.m, 1, 0);
  CMat2 t22 = block(tm.m, 1, 1);
  if (det(t22) == 0.0)
    throw DegeneracyError("no transmission channel, T22 block singular", 0.0);
  CMat2 x = solve(t22, t21);
  TR4 out;
  out.r = Complex(-1.0, 0.0) * x;
  CMat2 schur = t11 - t12 * x;
  double smax = 0.0;
  for (const auto& v : schur.a) smax = std::max(smax, abs1(v));
  if (smax == 0.0 || tm.log_scale + std::log(smax) < -745.0) {
    out.t = CMat2{};
    out.underflow = true;
  } else {
    CMat2 unit = Complex(1.0 / smax, 0.0) * schur;
    out.t = Complex(std::exp(tm.log_scale + std::log(smax)), 0.0) * unit;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scattering cascade: the four-component transfer product spreads its two
// polarization channels as exp(+-Im q N), and once the contrast passes the
// mantissa's ~16 decades the weak channel is lost to roundoff, leaving the
// block extraction above with a numerically rank-deficient T22. Composing
// scattering blocks instead keeps every stored entry bounded by passivity,
// at any chain length and attenuation.

/// Scattering blocks of a chain segment in the two-polarization basis.
/// r_f reflects a left-incident field (measured on the left), r_b a
/// right-incident one (measured on the right); t_f and t_b are the
/// matching transmissions, stored as a bounded part with the overall
/// magnitude split into a log factor. The default is the empty segment.
struct PolarizedS {
  CMat2 r_f;
  CMat2 r_b;
  CMat2 t_f = CMat2::identity();
  CMat2 t_b = CMat2::identity();
  double log_f = 0.0;
  double log_b = 0.0;
};

namespace detail {

inline void normalize_t(CMat2& t, double& log_t) {
  double s = 0.0;
  for (const auto& v : t.a) s = std::max(s, abs1(v));
  if (s == 0.0 || s == 1.0) return;
  for (auto& v : t.a) v /= s;
  log_t += std::log(s);
}

/// Appends a gap of optical length d on the right of a segment: both
/// transmissions turn by e^{i d} and the right-side reflection makes the
/// round trip e^{2 i d}.
inline void append_gap(PolarizedS& s, double d) {
  Complex ph = std::exp(Complex(0.0, d));
  s.t_f = ph * s.t_f;
  s.t_b = ph * s.t_b;
  s.r_b = (ph * ph) * s.r_b;
}

}  // namespace detail

/// Composition of two segments, x on the left of y. Interface round
/// trips sum to (I - r_b^x r_f^y)^{-1}; each side's reflection gains the
/// other segment seen through its own attenuated double pass, and the
/// transmissions concatenate through the summed round trips.
inline PolarizedS star(const PolarizedS& x, const PolarizedS& y) {
  CMat2 loop = CMat2::identity() - x.r_b * y.r_f;
  CMat2 v = solve(loop, x.t_f);
  CMat2 u = solve(loop, x.r_b * y.t_b);
  PolarizedS out;
  out.t_f = y.t_f * v;
  out.log_f = x.log_f + y.log_f;
  out.t_b = x.t_b * (y.t_b + y.r_f * u);
  out.log_b = x.log_b + y.log_b;
  Complex round_x(std::exp(x.log_f + x.log_b), 0.0);
  out.r_f = x.r_f + round_x * (x.t_b * (y.r_f * v));
  Complex round_y(std::exp(y.log_f + y.log_b), 0.0);
  out.r_b = y.r_b + round_y * (y.t_f * u);
  detail::normalize_t(out.t_f, out.log_f);
  detail::normalize_t(out.t_b, out.log_b);
  return out;
}

/// Repeats a segment by star-composition squaring.
inline PolarizedS star_power(const PolarizedS& s, long long n) {
  if (n < 0) throw DomainError("negative cell count");
  PolarizedS acc;
  PolarizedS base = s;
  while (n > 0) {
    if (n & 1) acc = star(acc, base);
    n >>= 1;
    if (n > 0) base = star(base, base);
  }
  return acc;
}

/// Scattering blocks of one dual-V cell, composed atom by atom. A point
/// scatterer reflects and transmits symmetrically with the closed-form
/// blocks of dualv_scattering, and the gaps in between only turn phases.
inline PolarizedS cell_S_dualv(const SchemeParams& p, const Placement& pl,
                               double delta) {
  PolarizedS acc;
  double prev = 0.0;
  for (int j = 0; j < pl.size(); ++j) {
    detail::append_gap(acc, pl.z[j] - prev);
    DualVScattering s = dualv_scattering(p, delta, pl.z[j]);
    PolarizedS atom;
    atom.r_f = s.S_r;
    atom.r_b = s.S_r;
    atom.t_f = s.S_t;
    atom.t_b = s.S_t;
    acc = star(acc, atom);
    prev = pl.z[j];
  }
  detail::append_gap(acc, pl.length() - prev);
  return acc;
}

/// Transmission and reflection blocks of a composed segment, in the same
/// layout as the transfer extraction. A forward transmission below the
/// double range is reported as zero with the flag set.
inline TR4 t_r_from_S(const PolarizedS& s) {
  TR4 out;
  out.r = s.r_f;
  double smax = 0.0;
  for (const auto& v : s.t_f.a) smax = std::max(smax, abs1(v));
  if (smax == 0.0 || s.log_f + std::log(smax) < -745.0) {
    out.t = CMat2{};
    out.underflow = true;
  } else {
    out.t = Complex(std::exp(s.log_f), 0.0) * s.t_f;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ensemble spectra

enum class Scheme { lambda, dualv };

/// Which dual-V channel a spectrum reports: every outgoing polarization
/// for a sigma+ input, or only the converted sigma- component.
enum class DualVObservable { total, convert };

struct SpectrumPoint {
  double t_mean = 1.0;
  double r_mean = 0.0;
  double t_iqr = 0.0;
  double r_iqr = 0.0;
  bool underflow = false;
};

struct Spectrum {
  std::vector<double> delta;
  std::vector<SpectrumPoint> points;
};

struct SpectrumSpec {
  SchemeParams params;
  Scheme scheme = Scheme::lambda;
  bool regular = true;
  int unit_atoms = 2;        // atoms per cell for regular placement
  int n_u = 1;               // half-wavelengths per cell (random placement)
  double phi_over_pi = 0.0;  // drive phase (standing-wave scheme)
  long long n_total = 0;     // total atom count
  int realizations = 1;      // disorder realizations (random placement)
  std::uint64_t seed = 0;
  DualVObservable observable = DualVObservable::total;
};

namespace detail {

struct PowerPair {
  double t = 1.0;
  double r = 0.0;
  bool underflow = false;
};

inline PowerPair transmitted_reflected(const SchemeParams& p, Scheme scheme,
                                       const Placement& pl, double delta,
                                       double phi_over_pi, long long n_cells,
                                       DualVObservable obs) {
  PowerPair out;
  if (scheme == Scheme::lambda) {
    TR tr = t_r_from_T(ensemble_T(cell_T(p, pl, delta, phi_over_pi), n_cells));
    out.t = std::norm(tr.t);
    out.r = std::norm(tr.r);
    out.underflow = tr.underflow;
  } else {
    TR4 tr = t_r_from_S(star_power(cell_S_dualv(p, pl, delta), n_cells));
    if (obs == DualVObservable::total) {
      out.t = std::norm(tr.t(0, 0)) + std::norm(tr.t(1, 0));
      out.r = std::norm(tr.r(0, 0)) + std::norm(tr.r(1, 0));
    } else {
      out.t = std::norm(tr.t(1, 0));
      out.r = std::norm(tr.r(1, 0));
    }
    out.underflow = tr.underflow;
  }
  return out;
}

}  // namespace detail

/// Transmitted and reflected power across a detuning grid. Regular
/// placements are deterministic (zero IQR); random placements draw one
/// configuration per realization, reused across the whole grid, and
/// report means and interquartile ranges over realizations.
inline Spectrum spectrum(const SpectrumSpec& spec,
                         const std::vector<double>& grid) {
  spec.params.validate();
  Spectrum out;
  out.delta = grid;
  out.points.assign(grid.size(), SpectrumPoint{});
  if (spec.n_total == 0) return out;

  if (spec.regular) {
    if (spec.n_total % spec.unit_atoms != 0)
      throw ConfigError("atom total must be a multiple of the cell size");
    long long n_cells = spec.n_total / spec.unit_atoms;
    Placement pl = regular_positions(spec.unit_atoms);
    parallel_for(grid.size(), [&](std::size_t i) {
      auto pp = detail::transmitted_reflected(spec.params, spec.scheme, pl,
                                              grid[i], spec.phi_over_pi,
                                              n_cells, spec.observable);
      out.points[i] =
          SpectrumPoint{pp.t, pp.r, 0.0, 0.0, pp.underflow};
    });
    return out;
  }

  if (spec.realizations < 1)
    throw ConfigError("random placement needs at least one realization");
  if (spec.n_total > INT32_MAX)
    throw ConfigError("atom total too large for a single cell");
  const int reals = spec.realizations;
  std::vector<Placement> placements;
  placements.reserve(reals);
  for (int r = 0; r < reals; ++r)
    placements.push_back(random_positions(static_cast<int>(spec.n_total),
                                          spec.n_u,
                                          stream_rng(spec.seed, r)));

  std::vector<detail::PowerPair> flat(grid.size() * reals);
  parallel_for(flat.size(), [&](std::size_t k) {
    std::size_t i = k / reals;
    std::size_t r = k % reals;
    flat[k] = detail::transmitted_reflected(spec.params, spec.scheme,
                                            placements[r], grid[i],
                                            spec.phi_over_pi, 1,
                                            spec.observable);
  });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> ts(reals), rs(reals);
    bool uf = false;
    for (int r = 0; r < reals; ++r) {
      ts[r] = flat[i * reals + r].t;
      rs[r] = flat[i * reals + r].r;
      uf = uf || flat[i * reals + r].underflow;
    }
    SpectrumPoint pt;
    pt.t_mean = pairwise_sum(ts) / reals;
    pt.r_mean = pairwise_sum(rs) / reals;
    pt.t_iqr = percentile(ts, 75.0) - percentile(ts, 25.0);
    pt.r_iqr = percentile(rs, 75.0) - percentile(rs, 25.0);
    pt.underflow = uf;
    out.points[i] = pt;
  }
  return out;
}

/// A transmission resonance: the m-th longitudinal mode, where the
/// accumulated single-pass phase N Re q reaches m pi.
struct Resonance {
  int m = 0;
  double delta = 0.0;
};

/// Linear-interpolated crossings of Re q through the ladder m pi / N,
/// m = 1, 2, ... over the swept band. NaN stretches (skipped poles) are
/// bridged by ignoring the affected segments.
inline std::vector<Resonance> resonance_locations(
    const std::vector<double>& delta, const std::vector<Complex>& band,
    long long n_total) {
  if (delta.size() != band.size())
    throw DomainError("resonance grid size mismatch");
  if (n_total < 1) throw DomainError("resonances need at least one atom");
  const double step = kPi / static_cast<double>(n_total);
  std::vector<Resonance> out;
  for (std::size_t i = 1; i < delta.size(); ++i) {
    double qa = band[i - 1].real();
    double qb = band[i].real();
    if (std::isnan(qa) || std::isnan(qb) || qa == qb) continue;
    double lo = std::min(qa, qb);
    double hi = std::max(qa, qb);
    long long m_lo = static_cast<long long>(std::ceil(lo / step));
    if (m_lo < 1) m_lo = 1;
    long long m_hi = static_cast<long long>(std::floor(hi / step));
    for (long long m = m_lo; m <= m_hi; ++m) {
      double target = static_cast<double>(m) * step;
      if (target == qa && !out.empty() &&
          out.back().m == static_cast<int>(m))
        continue;
      double frac = (target - qa) / (qb - qa);
      out.push_back({static_cast<int>(m),
                     delta[i - 1] + frac * (delta[i] - delta[i - 1])});
    }
  }
  return out;
}

}  // namespace sld
