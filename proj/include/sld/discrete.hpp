#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "sld/continuum.hpp"
#include "sld/errors.hpp"
#include "sld/numerics.hpp"
#include "sld/parallel.hpp"
#include "sld/rng.hpp"
#include "sld/schemes.hpp"

namespace sld {

/// Atom positions over one Bloch cell of length n_u half-wavelengths
/// (n_u pi in units of 1/k0). For lattices commensurate with the drive,
/// `turns` carries the exact position fractions z / pi so that drive
/// nodes are hit exactly; it is empty for sampled positions, where nodes
/// have measure zero.
struct Placement {
  std::vector<double> z;
  std::vector<double> turns;
  int n_u = 1;

  double length() const { return static_cast<double>(n_u) * kPi; }
  int size() const { return static_cast<int>(z.size()); }
};

/// N_u equidistant atoms per half-wavelength cell: z_j = j pi / N_u,
/// n_u = 1. N_u must be even so the cell tiles the drive period; with the
/// drive phase at zero this places one atom exactly on a node.
inline Placement regular_positions(int n_atoms) {
  if (n_atoms < 2 || n_atoms % 2 != 0)
    throw DomainError("regular placement needs an even atom count >= 2");
  Placement pl;
  pl.n_u = 1;
  pl.z.resize(n_atoms);
  pl.turns.resize(n_atoms);
  for (int j = 0; j < n_atoms; ++j) {
    pl.turns[j] = static_cast<double>(j) / n_atoms;
    pl.z[j] = pl.turns[j] * kPi;
  }
  return pl;
}

/// n_atoms positions drawn uniformly on [0, n_u pi), sorted.
inline Placement random_positions(int n_atoms, int n_u, SplitMix64 rng) {
  if (n_atoms < 0) throw DomainError("negative atom count");
  if (n_u < 1) throw DomainError("cell must span at least one half-wavelength");
  Placement pl;
  pl.n_u = n_u;
  pl.z.resize(n_atoms);
  double span = static_cast<double>(n_u) * kPi;
  for (auto& z : pl.z) z = rng.uniform() * span;
  std::sort(pl.z.begin(), pl.z.end());
  return pl;
}

inline Placement random_positions(int n_atoms, int n_u, std::uint64_t seed) {
  return random_positions(n_atoms, n_u, stream_rng(seed, 0));
}

/// Transfer matrix of one scatterer of polarizability beta, in the
/// (forward, backward) field basis.
inline CMat2 atom_T(Complex beta) {
  CMat2 m;
  m(0, 0) = 1.0 - beta;
  m(0, 1) = -beta;
  m(1, 0) = beta;
  m(1, 1) = 1.0 + beta;
  return m;
}

/// Block version for a 2x2 polarizability (two polarizations per
/// direction): [[I - beta, -beta], [beta, I + beta]].
inline CMat4 atom_T(const CMat2& beta) {
  CMat2 eye = CMat2::identity();
  CMat4 m;
  set_block(m, 0, 0, eye - beta);
  set_block(m, 0, 1, Complex(-1.0, 0.0) * beta);
  set_block(m, 1, 0, beta);
  set_block(m, 1, 1, eye + beta);
  return m;
}

/// Free propagation over distance d: exp(+-i d) on the two directions.
inline CMat2 free_T(double d) {
  CMat2 m;
  m(0, 0) = std::exp(Complex(0.0, d));
  m(1, 1) = std::exp(Complex(0.0, -d));
  return m;
}

inline CMat4 free_T4(double d) {
  CMat4 m;
  Complex f = std::exp(Complex(0.0, d));
  Complex b = std::exp(Complex(0.0, -d));
  m(0, 0) = f;
  m(1, 1) = f;
  m(2, 2) = b;
  m(3, 3) = b;
  return m;
}

namespace detail {

template <int N>
void fold_left(ScaledMatrix<N>& acc, const CMat<N>& factor) {
  acc.m = factor * acc.m;
  acc.rescale();
}

}  // namespace detail

/// Transfer matrix of one standing-wave cell: atoms at placement
/// positions, each driven at the local intensity |omega_0 cos(pi t)|^2
/// with t = z / pi + phi_over_pi. The drive phase is passed as a fraction
/// of pi so exact node fractions stay exact.
inline ScaledMatrix2 cell_T(const SchemeParams& p, const Placement& pl,
                            double delta, double phi_over_pi = 0.0) {
  ScaledMatrix2 acc = ScaledMatrix2::identity();
  double prev = 0.0;
  const bool exact = !pl.turns.empty();
  for (int j = 0; j < pl.size(); ++j) {
    double t = (exact ? pl.turns[j] : pl.z[j] / kPi) + phi_over_pi;
    double c = cos_pi(t);
    Complex beta = lambda_beta(p, delta, p.omega_sq() * c * c);
    detail::fold_left(acc, free_T(pl.z[j] - prev));
    detail::fold_left(acc, atom_T(beta));
    prev = pl.z[j];
  }
  detail::fold_left(acc, free_T(pl.length() - prev));
  return acc;
}

/// Transfer matrix of one dual-V cell in the four-component basis
/// (forward sigma+, forward sigma-, backward sigma+, backward sigma-).
inline ScaledMatrix4 cell_T_dualv(const SchemeParams& p, const Placement& pl,
                                  double delta) {
  ScaledMatrix4 acc = ScaledMatrix4::identity();
  double prev = 0.0;
  for (int j = 0; j < pl.size(); ++j) {
    CMat2 beta = dualv_scattering(p, delta, pl.z[j]).beta;
    detail::fold_left(acc, free_T4(pl.z[j] - prev));
    detail::fold_left(acc, atom_T(beta));
    prev = pl.z[j];
  }
  detail::fold_left(acc, free_T4(pl.length() - prev));
  return acc;
}

/// Bloch wavevector offsets from the carrier, in phase per atom, for each
/// cell eigenvalue: lambda = (-1)^{n_u} exp(i q N_u) with N_u atoms per
/// cell, so q = (arg((-1)^{n_u} lambda) - i log|lambda|) / N_u. Real parts
/// land in the principal zone (-pi/N_u, pi/N_u]; Im q > 0 decays forward.
template <std::size_t K>
std::array<Complex, K> bloch_q(const std::array<ScaledComplex, K>& eigs,
                               int n_atoms, int n_u) {
  std::array<Complex, K> out;
  const bool flip = (n_u % 2) != 0;
  for (std::size_t k = 0; k < K; ++k) {
    Complex m = eigs[k].mantissa;
    if (flip) m = -m;
    double re = std::atan2(m.imag(), m.real()) / n_atoms;
    double im = -eigs[k].log_abs() / n_atoms;
    out[k] = Complex(re, im);
  }
  return out;
}

/// Band order used at the first grid point of a sweep: decaying bands
/// (Im q >= 0) first, then descending Re q.
inline bool band_before(Complex a, Complex b) {
  bool ga = a.imag() >= 0.0;
  bool gb = b.imag() >= 0.0;
  if (ga != gb) return ga;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

/// Principal-zone bands of the standing-wave cell at one detuning.
inline std::vector<Complex> lambda_bands(const SchemeParams& p,
                                         const Placement& pl, double delta,
                                         double phi_over_pi = 0.0) {
  auto eig = reciprocal_eigenvalues(cell_T(p, pl, delta, phi_over_pi));
  auto qs = bloch_q(eig, pl.size(), pl.n_u);
  return {qs.begin(), qs.end()};
}

/// Principal-zone bands of the dual-V cell at one detuning.
inline std::vector<Complex> dualv_bands(const SchemeParams& p,
                                        const Placement& pl, double delta) {
  auto eig = reciprocal_eigenvalues(cell_T_dualv(p, pl, delta));
  auto qs = bloch_q(eig, pl.size(), pl.n_u);
  return {qs.begin(), qs.end()};
}

/// A swept band structure. bands[b][i] is the wavevector of band b at
/// delta[i]; grid points where the cell response sits exactly on a pole
/// are NaN and listed in `skipped`.
struct DispersionCurve {
  std::vector<double> delta;
  std::vector<std::vector<Complex>> bands;
  std::vector<double> skipped;
};

/// Sweeps band_fn over the grid and connects bands between neighboring
/// points. Principal-zone real parts are unwrapped by integer multiples
/// of the zone width 2 pi / N_u, and bands are matched to the previous
/// point by the assignment minimizing sum |dRe| + |dIm|. A jump of half a
/// zone or more cannot be tracked and raises UnwrapError.
template <typename BandFn>
DispersionCurve sweep_dispersion(const std::vector<double>& grid, int n_bands,
                                 int n_atoms, BandFn&& band_fn) {
  const std::size_t npts = grid.size();
  std::vector<std::vector<Complex>> raw(npts);
  std::vector<char> is_pole(npts, 0);
  parallel_for(npts, [&](std::size_t i) {
    try {
      raw[i] = band_fn(grid[i]);
    } catch (const PoleError&) {
      is_pole[i] = 1;
    }
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  DispersionCurve out;
  out.delta = grid;
  out.bands.assign(n_bands,
                   std::vector<Complex>(npts, Complex(nan, nan)));

  const double zone = 2.0 * kPi / n_atoms;
  std::vector<Complex> prev;
  for (std::size_t i = 0; i < npts; ++i) {
    if (is_pole[i]) {
      out.skipped.push_back(grid[i]);
      continue;
    }
    if (static_cast<int>(raw[i].size()) != n_bands)
      throw Error("band function returned the wrong band count");
    std::vector<Complex> cur = raw[i];
    if (prev.empty()) {
      std::sort(cur.begin(), cur.end(), band_before);
    } else {
      std::vector<int> idx(n_bands);
      for (int b = 0; b < n_bands; ++b) idx[b] = b;
      double best_cost = std::numeric_limits<double>::infinity();
      std::vector<Complex> best(n_bands), assigned(n_bands);
      do {
        double cost = 0.0;
        for (int b = 0; b < n_bands; ++b) {
          Complex c = cur[idx[b]];
          double k = std::round((prev[b].real() - c.real()) / zone);
          Complex adj(c.real() + k * zone, c.imag());
          assigned[b] = adj;
          cost += std::abs(prev[b].real() - adj.real()) +
                  std::abs(prev[b].imag() - adj.imag());
        }
        if (cost < best_cost) {
          best_cost = cost;
          best = assigned;
        }
      } while (std::next_permutation(idx.begin(), idx.end()));
      for (int b = 0; b < n_bands; ++b) {
        if (!(std::abs(prev[b].real() - best[b].real()) < 0.5 * zone))
          throw UnwrapError(
              "band tracking jumped by half a zone; use a finer delta grid");
      }
      cur = best;
    }
    for (int b = 0; b < n_bands; ++b) out.bands[b][i] = cur[b];
    prev = cur;
  }
  return out;
}

/// Effective mass of the quadratic lattice band for N_u equidistant atoms
/// per cell at drive phase zero: m = -(N_u - 1) gamma_1d^2
/// / (2 N_u^2 (delta_c + i gamma_prime / 2) |omega_0|^2).
inline Complex lattice_mass(const SchemeParams& p, int n_atoms) {
  if (n_atoms < 2 || n_atoms % 2 != 0)
    throw DomainError("lattice mass needs an even atom count >= 2");
  if (p.omega_sq() == 0.0)
    throw DomainError("lattice mass needs a nonzero control field");
  Complex dt0 = Complex(p.delta_c, 0.5 * p.gamma_prime);
  if (dt0 == 0.0) throw SingularityError("dtilde(0) vanishes");
  double nu = static_cast<double>(n_atoms);
  return -(nu - 1.0) * p.gamma_1d * p.gamma_1d /
         (2.0 * nu * nu * dt0 * p.omega_sq());
}

/// Mass fitted from the computed band: q^2 against 2 m delta on a
/// ten-point geometric grid inside the quadratic window. The window top
/// is a tenth of 0.2 |delta_S(0)| (pi / N_u)^2, the scale where the band
/// starts bending away from the parabola.
inline Complex lattice_mass_fit(const SchemeParams& p, int n_atoms) {
  Placement pl = regular_positions(n_atoms);
  double v = 0.2 * std::abs(stark_shift(p, 0.0)) *
             (kPi / n_atoms) * (kPi / n_atoms);
  const int npts = 10;
  double sum_aa = 0.0;
  Complex sum_ab = 0.0;
  for (int i = 0; i < npts; ++i) {
    double frac = static_cast<double>(i) / (npts - 1);
    double d = (v / 100.0) * std::pow(10.0, frac);
    auto bands = lambda_bands(p, pl, d);
    Complex q = *std::max_element(
        bands.begin(), bands.end(),
        [](Complex a, Complex b) { return a.imag() < b.imag(); });
    sum_aa += d * d;
    sum_ab += d * (q * q);
  }
  return sum_ab / sum_aa / 2.0;
}

}  // namespace sld
