#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "sld/errors.hpp"

namespace sld {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// |re| + |im|, the pivoting and rescaling size proxy. Cheaper than the
/// modulus and within a factor sqrt(2) of it.
inline double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

/// Flips the sign so that Re q > 0, or Im q >= 0 on the Re q = 0 line.
/// Used to pick one representative of a +-q eigenvalue pair.
inline Complex principal_branch(Complex q) {
  if (q.real() < 0 || (q.real() == 0 && q.imag() < 0)) return -q;
  return q;
}

// ---------------------------------------------------------------------------
// Small dense complex matrices

template <int N>
struct CMat {
  std::array<Complex, N * N> a{};

  Complex& operator()(int r, int c) { return a[r * N + c]; }
  const Complex& operator()(int r, int c) const { return a[r * N + c]; }

  static CMat identity() {
    CMat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
};

using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

template <int N>
CMat<N> operator*(const CMat<N>& x, const CMat<N>& y) {
  CMat<N> r;
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      Complex xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <int N>
CMat<N> operator*(Complex s, const CMat<N>& x) {
  CMat<N> r = x;
  for (auto& v : r.a) v *= s;
  return r;
}

template <int N>
CMat<N> operator+(const CMat<N>& x, const CMat<N>& y) {
  CMat<N> r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

template <int N>
CMat<N> operator-(const CMat<N>& x, const CMat<N>& y) {
  CMat<N> r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

template <int N>
Complex trace(const CMat<N>& x) {
  Complex t = 0.0;
  for (int i = 0; i < N; ++i) t += x(i, i);
  return t;
}

/// tr(A B) without forming the product.
template <int N>
Complex trace_product(const CMat<N>& x, const CMat<N>& y) {
  Complex t = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) t += x(i, j) * y(j, i);
  return t;
}

inline Complex det(const CMat2& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

/// Determinant by Gaussian elimination with partial pivoting.
inline Complex det(const CMat4& m) {
  CMat4 w = m;
  Complex d = 1.0;
  for (int c = 0; c < 4; ++c) {
    int p = c;
    for (int r = c + 1; r < 4; ++r)
      if (abs1(w(r, c)) > abs1(w(p, c))) p = r;
    if (w(p, c) == 0.0) return 0.0;
    if (p != c) {
      for (int j = c; j < 4; ++j) std::swap(w(c, j), w(p, j));
      d = -d;
    }
    d *= w(c, c);
    for (int r = c + 1; r < 4; ++r) {
      Complex f = w(r, c) / w(c, c);
      for (int j = c; j < 4; ++j) w(r, j) -= f * w(c, j);
    }
  }
  return d;
}

inline CMat2 inverse(const CMat2& m) {
  Complex d = det(m);
  if (d == 0.0) throw SingularityError("2x2 matrix is singular");
  CMat2 r;
  r(0, 0) = m(1, 1) / d;
  r(0, 1) = -m(0, 1) / d;
  r(1, 0) = -m(1, 0) / d;
  r(1, 1) = m(0, 0) / d;
  return r;
}

/// Solves m x = b for a 2x2 system.
inline CMat2 solve(const CMat2& m, const CMat2& b) { return inverse(m) * b; }

inline CMat2 block(const CMat4& m, int br, int bc) {
  CMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = m(2 * br + i, 2 * bc + j);
  return r;
}

inline void set_block(CMat4& m, int br, int bc, const CMat2& b) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(2 * br + i, 2 * bc + j) = b(i, j);
}

// ---------------------------------------------------------------------------
// Scaled products: transfer matrices over long media overflow double range,
// so matrices carry a separate log magnitude and the stored part is
// renormalized after every multiplication.

template <int N>
struct ScaledMatrix {
  CMat<N> m;
  double log_scale = 0.0;

  static ScaledMatrix identity() { return {CMat<N>::identity(), 0.0}; }

  /// Divides the stored part by its largest entry (size proxy) and moves
  /// the factor into log_scale. Exact when the largest entry is real.
  void rescale() {
    double s = 0.0;
    for (const auto& v : m.a) s = std::max(s, abs1(v));
    if (s == 0.0 || s == 1.0) return;
    for (auto& v : m.a) v /= s;
    log_scale += std::log(s);
  }

  /// The plain matrix, valid only while exp(log_scale) is representable.
  CMat<N> value() const {
    double f = std::exp(log_scale);
    CMat<N> r = m;
    for (auto& v : r.a) v *= f;
    return r;
  }
};

using ScaledMatrix2 = ScaledMatrix<2>;
using ScaledMatrix4 = ScaledMatrix<4>;

template <int N>
ScaledMatrix<N> operator*(const ScaledMatrix<N>& x, const ScaledMatrix<N>& y) {
  ScaledMatrix<N> r{x.m * y.m, x.log_scale + y.log_scale};
  r.rescale();
  return r;
}

/// Product factors[last] * ... * factors[first], i.e. factors applied in
/// index order to a vector, renormalized after every step.
template <int N>
ScaledMatrix<N> scaled_product(const std::vector<CMat<N>>& factors) {
  ScaledMatrix<N> acc = ScaledMatrix<N>::identity();
  for (const auto& f : factors) {
    acc.m = f * acc.m;
    acc.rescale();
  }
  return acc;
}

template <int N>
ScaledMatrix<N> scaled_product(const std::vector<ScaledMatrix<N>>& factors) {
  ScaledMatrix<N> acc = ScaledMatrix<N>::identity();
  for (const auto& f : factors) acc = f * acc;
  return acc;
}

/// base^n by binary exponentiation, renormalized at every multiply.
template <int N>
ScaledMatrix<N> scaled_power(ScaledMatrix<N> base, long long n) {
  if (n < 0) throw DomainError("scaled_power requires n >= 0");
  ScaledMatrix<N> acc = ScaledMatrix<N>::identity();
  while (n > 0) {
    if (n & 1) acc = base * acc;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return acc;
}

/// Distance of the true determinant from 1, measured in log magnitude and
/// phase: hypot(log|det| + N log_scale, arg det). Zero for a unit
/// determinant.
template <int N>
double unit_det_residual(const ScaledMatrix<N>& t) {
  Complex d = det(t.m);
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return std::hypot(std::log(std::abs(d)) + N * t.log_scale, std::arg(d));
}

// ---------------------------------------------------------------------------
// Eigenvalues of transfer matrices. A lossless-flux transfer matrix has
// unit determinant and eigenvalues in reciprocal pairs (lambda, 1/lambda);
// the pairing survives absorption because it reflects two-sided
// propagation, not energy conservation.

/// A complex number stored as mantissa * exp(log_scale).
struct ScaledComplex {
  Complex mantissa;
  double log_scale = 0.0;

  Complex value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
  double arg() const { return std::arg(mantissa); }
};

namespace detail {

/// Root of z^2 - 2 half z + prod with the larger magnitude, computed
/// without cancellation; the companion root is prod / root.
inline Complex dominant_quadratic_root(Complex half, Complex prod) {
  Complex disc = std::sqrt(half * half - prod);
  if (std::real(std::conj(half) * disc) < 0) disc = -disc;
  return half + disc;
}

}  // namespace detail

/// Eigenvalues of a 2x2 transfer matrix as a reciprocal pair. The second
/// entry is constructed as the exact inverse of the first, so the pair
/// product is 1 by construction. Throws DegeneracyError when the
/// determinant is not 1.
inline std::array<ScaledComplex, 2> reciprocal_eigenvalues(
    const ScaledMatrix2& t) {
  double resid = unit_det_residual(t);
  if (!(resid <= 1e-6))
    throw DegeneracyError("transfer matrix determinant is not 1", resid);
  Complex half = 0.5 * (t.m(0, 0) + t.m(1, 1));
  Complex big = detail::dominant_quadratic_root(half, det(t.m));
  if (big == 0.0)
    throw DegeneracyError("eigenvalue pair collapsed at zero", resid);
  return {ScaledComplex{big, t.log_scale},
          ScaledComplex{1.0 / big, -t.log_scale}};
}

inline std::array<ScaledComplex, 2> reciprocal_eigenvalues(const CMat2& t) {
  double resid = std::abs(det(t) - 1.0);
  if (!(resid <= 1e-6))
    throw DegeneracyError("transfer matrix determinant is not 1", resid);
  return reciprocal_eigenvalues(ScaledMatrix2{t, 0.0});
}

/// Eigenvalues of a 4x4 transfer matrix as two reciprocal pairs, via the
/// substitution mu = lambda + sigma^2/lambda that folds the palindromic
/// quartic into two quadratics. Entries (0,1) and (2,3) are exact inverse
/// pairs. Throws DegeneracyError when the characteristic polynomial is not
/// palindromic (determinant 1, matching first and third coefficients).
inline std::array<ScaledComplex, 4> reciprocal_eigenvalues(
    const ScaledMatrix4& t) {
  const CMat4& m = t.m;
  CMat4 m2 = m * m;
  CMat4 m3 = m2 * m;
  Complex p1 = trace(m);
  Complex p2 = trace(m2);
  Complex p3 = trace(m3);
  Complex p4 = trace_product(m2, m2);
  Complex e1 = p1;
  Complex e2 = (e1 * p1 - p2) / 2.0;
  Complex e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
  Complex e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;
  double ls = t.log_scale;

  double rdet = (e4 == 0.0) ? std::numeric_limits<double>::infinity()
                            : std::hypot(std::log(std::abs(e4)) + 4.0 * ls,
                                         std::arg(e4));
  if (!(rdet <= 1e-6))
    throw DegeneracyError("transfer matrix determinant is not 1", rdet);

  // Palindromic check compares e3 (rescaled to true units relative to e1)
  // against e1 in log space to survive large log_scale.
  double rpal;
  if (e3 == 0.0) {
    rpal = std::abs(e1) / std::max(1.0, std::abs(e1));
  } else {
    double la = std::log(std::abs(e3)) + 2.0 * ls;
    if (la > 690.0) {
      rpal = la;
    } else {
      Complex v3 = std::polar(std::exp(la), std::arg(e3));
      rpal = std::abs(v3 - e1) / std::max(1.0, std::abs(e1));
    }
  }
  if (!(rpal <= 1e-6))
    throw DegeneracyError("eigenvalues do not form reciprocal pairs", rpal);

  // Stored pairs multiply to exp(-2 log_scale); sigma^2 recovers that
  // product from the determinant.
  Complex sigma2 = std::sqrt(e4);
  Complex mu1 = detail::dominant_quadratic_root(0.5 * e1, e2 - 2.0 * sigma2);
  Complex mu2 = (mu1 == 0.0) ? Complex(0.0) : (e2 - 2.0 * sigma2) / mu1;

  std::array<ScaledComplex, 4> out;
  int k = 0;
  for (Complex mu : {mu1, mu2}) {
    Complex dom = detail::dominant_quadratic_root(0.5 * mu, sigma2);
    if (dom == 0.0)
      throw DegeneracyError("eigenvalue pair collapsed at zero", rdet);
    out[k++] = ScaledComplex{dom, ls};
    out[k++] = ScaledComplex{1.0 / dom, -ls};
  }
  return out;
}

inline std::array<ScaledComplex, 4> reciprocal_eigenvalues(const CMat4& t) {
  double resid = std::abs(det(t) - 1.0);
  if (!(resid <= 1e-6))
    throw DegeneracyError("transfer matrix determinant is not 1", resid);
  return reciprocal_eigenvalues(ScaledMatrix4{t, 0.0});
}

// ---------------------------------------------------------------------------
// Tridiagonal solve with partial pivoting. Plain elimination is unstable
// here: drive-coupling chains have near-zero diagonals on alternating rows,
// so pivoting (with its second-superdiagonal fill-in) is required.

/// Solves A x = b for tridiagonal A, overwriting each rhs column with x.
/// sub[i] = A(i+1, i), diag[i] = A(i, i), super[i] = A(i, i+1).
inline void tridiag_solve(std::vector<Complex> sub, std::vector<Complex> diag,
                          std::vector<Complex> super,
                          std::vector<std::vector<Complex>>& rhs) {
  const std::size_t n = diag.size();
  if (n == 0) throw DomainError("tridiag_solve requires a nonempty system");
  if (sub.size() + 1 != n || super.size() + 1 != n)
    throw DomainError("tridiag_solve band sizes do not match");
  for (const auto& col : rhs)
    if (col.size() != n) throw DomainError("tridiag_solve rhs size mismatch");

  std::vector<Complex> du2(n >= 2 ? n - 2 : 0, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (abs1(diag[i]) >= abs1(sub[i])) {
      if (diag[i] == 0.0)
        throw SingularityError("tridiagonal system is singular");
      Complex mult = sub[i] / diag[i];
      diag[i + 1] -= mult * super[i];
      for (auto& b : rhs) b[i + 1] -= mult * b[i];
    } else {
      Complex mult = diag[i] / sub[i];
      diag[i] = sub[i];
      Complex tmp = diag[i + 1];
      diag[i + 1] = super[i] - mult * tmp;
      if (i + 2 < n) {
        du2[i] = super[i + 1];
        super[i + 1] = -mult * du2[i];
      }
      super[i] = tmp;
      for (auto& b : rhs) {
        std::swap(b[i], b[i + 1]);
        b[i + 1] -= mult * b[i];
      }
    }
  }
  if (diag[n - 1] == 0.0)
    throw SingularityError("tridiagonal system is singular");

  for (auto& b : rhs) {
    b[n - 1] /= diag[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - super[n - 2] * b[n - 1]) / diag[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      std::size_t i = k - 2;
      if (i + 2 < n)
        b[i] = (b[i] - super[i] * b[i + 1] - du2[i] * b[i + 2]) / diag[i];
    }
  }
}

// ---------------------------------------------------------------------------
// Trigonometry on exact fractions of pi

/// cos(pi t), exact (+-1 or 0) whenever 2t is an integer. Standing-wave
/// nodes live at half-integer t; evaluating cos(pi/2) in radians misses
/// them by ~6e-17, which a resonant atom amplifies into a visible error.
inline double cos_pi(double t) {
  double q = 2.0 * t;
  if (q == std::round(q) && std::abs(q) < 9.0e15) {
    long long k = static_cast<long long>(std::fmod(q, 4.0));
    if (k < 0) k += 4;
    switch (k) {
      case 0: return 1.0;
      case 2: return -1.0;
      default: return 0.0;
    }
  }
  return std::cos(kPi * t);
}

// ---------------------------------------------------------------------------
// Quadrature and fitting

/// Fourier coefficient (1/pi) integral of f(u) exp(-2 i ell u) over a
/// half period u in [-pi/2, pi/2), by the midpoint-free uniform rule that
/// converges geometrically for periodic analytic integrands. Throws
/// PoleError if a sample is non-finite (integrand pole on a grid point).
template <typename F>
Complex fourier_coefficient_quadrature(F&& f, int ell, int n = 2048) {
  if (n < 2) throw DomainError("quadrature needs at least 2 samples");
  Complex sum = 0.0;
  for (int k = 0; k < n; ++k) {
    double u = -0.5 * kPi + kPi * static_cast<double>(k) / n;
    Complex v = f(u);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw PoleError("integrand pole on a quadrature node");
    sum += v * std::exp(Complex(0.0, -2.0 * ell * u));
  }
  return sum / static_cast<double>(n);
}

/// Least-squares slope of log y against log x, i.e. the exponent p of a
/// power law y ~ x^p. Requires at least 5 strictly positive samples and a
/// decade of dynamic range in x.
inline double fit_power_law(const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit_power_law size mismatch");
  if (x.size() < 5) throw DomainError("fit_power_law needs >= 5 samples");
  double xmin = x[0], xmax = x[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("fit_power_law requires positive samples");
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
  }
  if (!(xmax >= 10.0 * xmin))
    throw DomainError("fit_power_law needs a decade of range in x");
  double mx = 0.0, my = 0.0;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) * inv_n;
    my += std::log(y[i]) * inv_n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

/// Pairwise summation; error grows like log n instead of n.
inline double pairwise_sum(const double* p, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Percentile with linear interpolation between order statistics
/// (rank h = (n - 1) p / 100).
inline double percentile(std::vector<double> v, double p) {
  if (v.empty()) throw DomainError("percentile of an empty sample");
  std::sort(v.begin(), v.end());
  double h = (static_cast<double>(v.size()) - 1.0) * p / 100.0;
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace sld
