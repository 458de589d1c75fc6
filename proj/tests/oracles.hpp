#pragma once

// Slow, independent reference implementations used only by the tests.
// Everything here deliberately avoids the library's algorithms: dense
// elimination instead of the banded solve, root iteration instead of the
// pair-preserving eigensolver, plain long products instead of the closed
// forms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "sld/numerics.hpp"
#include "sld/schemes.hpp"

namespace oracles {

using sld::Complex;

/// All roots of a polynomial sum c[k] z^k by Durand-Kerner iteration.
inline std::vector<Complex> poly_roots(std::vector<Complex> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<Complex> r(n);
  for (int i = 0; i < n; ++i)
    r[i] = std::pow(Complex(0.4, 0.9), i);  // standard non-symmetric start
  for (int it = 0; it < 500; ++it) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex num = 0.0;
      for (int k = n; k >= 0; --k) num = num * r[i] + c[k];
      num /= c[n];
      Complex den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (r[i] - r[j]);
      Complex step = num / den;
      r[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14) break;
  }
  return r;
}

/// Characteristic polynomial coefficients (ascending powers) via the
/// Faddeev-LeVerrier recursion.
template <int N>
std::vector<Complex> char_poly(const sld::CMat<N>& a) {
  sld::CMat<N> m;  // zero
  std::vector<Complex> c(N + 1);
  c[N] = 1.0;
  sld::CMat<N> am;
  for (int k = 1; k <= N; ++k) {
    for (int i = 0; i < N; ++i) m(i, i) += c[N - k + 1];
    am = a * m;
    c[N - k] = -sld::trace(am) / static_cast<double>(k);
    m = am;
  }
  return c;
}

/// Dense complex Gaussian elimination with partial pivoting.
inline std::vector<Complex> dense_solve(std::vector<std::vector<Complex>> a,
                                        std::vector<Complex> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (int r = c + 1; r < n; ++r) {
      Complex f = a[r][c] / a[c][c];
      for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= a[i][j] * b[j];
    b[i] /= a[i][i];
  }
  return b;
}

/// Plain unscaled matrix product factors[last] * ... * factors[first].
template <int N>
sld::CMat<N> naive_product(const std::vector<sld::CMat<N>>& factors) {
  sld::CMat<N> acc = sld::CMat<N>::identity();
  for (const auto& f : factors) acc = f * acc;
  return acc;
}

/// Composite Simpson quadrature of a complex integrand on [a, b].
template <typename F>
Complex simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  Complex s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * ((k % 2) ? 4.0 : 2.0);
  return s * (h / 3.0);
}

/// Closed-form reflection and transmission of N/2 two-level mirror cells:
/// the resonant stack acts like a single scatterer of strength
/// (N/2) beta.
inline sld::RT bragg_stack(Complex beta_node, long long n_total) {
  Complex eff = 0.5 * static_cast<double>(n_total) * beta_node;
  Complex t = 1.0 / (1.0 + eff);
  return {t, t - 1.0};
}

/// Least-squares slope of y against x through the data mean.
inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

/// Geometric grid of n points from lo to hi inclusive.
inline std::vector<double> geomspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

/// Linear grid of n points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return g;
}

}  // namespace oracles
