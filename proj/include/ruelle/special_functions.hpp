#pragma once

#include <boost/math/special_functions/digamma.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "ruelle/errors.hpp"
#include "ruelle/factored.hpp"

namespace ruelle {

using cplx = std::complex<double>;

namespace detail {

// B_2, B_4, ..., B_28
inline constexpr std::array<double, 14> kBernoulliEven = {
    1.0 / 6.0,          -1.0 / 30.0,           1.0 / 42.0,       -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0,       7.0 / 6.0,        -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0,     854513.0 / 138.0, -236364091.0 / 2730.0,
    8553103.0 / 6.0,    -23749461029.0 / 870.0};

// zeta'(-1) = 1/12 - log(Glaisher's constant)
inline constexpr double kZetaPrimeMinusOne = -0.16542114370045092921;

inline constexpr double kLog2Pi = 1.8378770664093454836;

template <class T>
struct KahanSum {
  T sum{};
  T comp{};
  void add(const T& x) {
    T y = x - comp;
    T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Signed zeros matter for the principal log on the negative axis; the cut is
// approached from above everywhere in this library.
inline cplx upper(cplx z) {
  if (z.imag() == 0.0) z.imag(0.0);
  return z;
}

inline bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

inline constexpr double kShiftTarget = 16.0;

inline cplx stirling_log_gamma(cplx w) {
  cplx lw = std::log(w);
  cplx v = (w - 0.5) * lw - w + 0.5 * kLog2Pi;
  cplx inv = 1.0 / w;
  cplx inv2 = inv * inv;
  cplx p = inv;
  for (int k = 1; k <= 12; ++k) {
    v += kBernoulliEven[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
    p *= inv2;
  }
  return v;
}

// log G(w+1) for large |w|, Re w > 0.
inline cplx asymptotic_log_barnes_g1(cplx w) {
  cplx lw = std::log(w);
  cplx v = 0.5 * w * w * (lw - 1.5) + 0.5 * w * kLog2Pi - lw / 12.0 + kZetaPrimeMinusOne;
  cplx inv2 = 1.0 / (w * w);
  cplx p = inv2;
  for (int k = 1; k <= 12; ++k) {
    v += kBernoulliEven[k] / (4.0 * k * (k + 1.0)) * p;
    p *= inv2;
  }
  return v;
}

}  // namespace detail

// Log-Gamma continuous on C \ (-inf, 0], real on the positive axis; on the cut
// the limit from the upper half-plane is returned.
inline cplx log_gamma(cplx z) {
  z = detail::upper(z);
  if (detail::is_nonpositive_integer(z)) throw PoleAt(z, "log_gamma at a nonpositive integer");
  if (z.real() >= detail::kShiftTarget) return detail::stirling_log_gamma(z);
  int n = static_cast<int>(std::ceil(detail::kShiftTarget - z.real()));
  detail::KahanSum<cplx> shift;
  for (int j = 0; j < n; ++j) shift.add(std::log(detail::upper(z + double(j))));
  return detail::stirling_log_gamma(z + double(n)) - shift.sum;
}

inline double log_gamma(double x) { return log_gamma(cplx(x, 0.0)).real(); }

// log G(z) for the Barnes G-function, continuous on C \ (-inf, 0].
inline cplx log_barnes_g(cplx z) {
  z = detail::upper(z);
  if (detail::is_nonpositive_integer(z)) throw ZeroAt("Barnes G vanishes at nonpositive integers");
  int n = 0;
  if (z.real() - 1.0 < detail::kShiftTarget) n = static_cast<int>(std::ceil(detail::kShiftTarget + 1.0 - z.real()));
  if (n == 0) return detail::asymptotic_log_barnes_g1(z - 1.0);
  // log G(z) = log G(z+n) - sum_{j<n} log Gamma(z+j)
  cplx lg = log_gamma(z);
  detail::KahanSum<cplx> acc;
  for (int j = 0; j < n; ++j) {
    acc.add(lg);
    lg += std::log(detail::upper(z + double(j)));
  }
  return detail::asymptotic_log_barnes_g1(z + double(n - 1)) - acc.sum;
}

// Analytic branch of log sin(pi z) on the upper and on the lower half-plane,
// equal to log(pi) - log_gamma(z) - log_gamma(1-z) there. Real arguments take
// the limit from above.
inline cplx log_sin_pi(cplx z) {
  constexpr double pi = std::numbers::pi;
  const cplx I(0.0, 1.0);
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  z = detail::upper(z);
  if (z.imag() == 0.0 && z.real() == std::round(z.real())) throw ZeroAt("sin(pi z) vanishes at an integer");
  cplx q = std::exp(2.0 * pi * I * z);
  return -I * pi * z + std::log(1.0 - q) - std::log(2.0) + I * (pi / 2.0);
}

// Hurwitz zeta for real s > 1 and a > 0 (Euler-Maclaurin).
inline double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw DomainError("hurwitz_zeta requires s > 1");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta requires a > 0");
  constexpr int N = 24;
  detail::KahanSum<double> acc;
  for (int n = 0; n < N; ++n) acc.add(std::pow(n + a, -s));
  double x = N + a;
  acc.add(std::pow(x, 1.0 - s) / (s - 1.0));
  acc.add(0.5 * std::pow(x, -s));
  // sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * x^{-s-2k+1}
  double rising = s;       // s (s+1) ... (s+2k-2)
  double fact = 2.0;       // (2k)!
  double xp = std::pow(x, -s - 1.0);
  for (int k = 1; k <= 12; ++k) {
    acc.add(detail::kBernoulliEven[k - 1] / fact * rising * xp);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    xp /= x * x;
  }
  return acc.sum;
}

inline double digamma(double a) {
  if (!(a > 0.0)) throw DomainError("digamma requires a > 0");
  return boost::math::digamma(a);
}

// Riemann zeta on C \ {1}; Euler-Maclaurin for Re s >= 1/2, reflection otherwise.
inline cplx riemann_zeta(cplx s) {
  constexpr double pi = std::numbers::pi;
  if (s == cplx(1.0, 0.0)) throw PoleAt(s, "riemann_zeta at s=1");
  if (s == cplx(0.0, 0.0)) return -0.5;
  if (s.real() < 0.5) {
    if (s.imag() == 0.0 && s.real() < 0 && std::fmod(s.real(), 2.0) == 0.0) return 0.0;
    // zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    cplx sn = std::sin(0.5 * pi * s);
    cplx lg = log_gamma(1.0 - s);
    return std::exp(s * std::log(2.0) + (s - 1.0) * std::log(pi) + lg) * sn * riemann_zeta(1.0 - s);
  }
  int N = 20 + static_cast<int>(std::abs(s));
  detail::KahanSum<cplx> acc;
  for (int n = 1; n < N; ++n) acc.add(std::exp(-s * std::log(double(n))));
  double x = N;
  cplx xs = std::exp(-s * std::log(x));
  acc.add(x * xs / (s - 1.0));
  acc.add(0.5 * xs);
  cplx rising = s;
  double fact = 2.0;
  cplx term = xs / x;
  for (int k = 1; k <= 14; ++k) {
    acc.add(detail::kBernoulliEven[k - 1] / fact * rising * term);
    rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    term /= x * x;
  }
  return acc.sum;
}

// sin(pi x) with the integer part removed first; x - n is exact near n.
inline double sin_pi(double x) {
  double n = std::round(x);
  double v = std::sin(std::numbers::pi * (x - n));
  return std::fmod(n, 2.0) == 0.0 ? v : -v;
}

// prod_{l=1}^{nu} sin((l - x) pi / nu), factor by factor. Each numerator is
// shifted by a multiple of nu before x is subtracted, so factors near a zero
// keep full relative accuracy.
inline double sine_product(int nu, double x) {
  if (nu < 2) throw DomainError("sine_product requires nu >= 2");
  double p = 1.0;
  for (int l = 1; l <= nu; ++l) {
    double q = std::round((l - x) / nu);
    double t = ((l - q * nu) - x) / nu;
    double v = std::sin(std::numbers::pi * t);
    p *= std::fmod(q, 2.0) == 0.0 ? v : -v;
  }
  return p;
}

// prod_{l != n} sin((l - n) pi / nu) = (-1)^{n-1} nu 2^{1-nu}.
inline SignedMagnitude sine_product_integer(int nu, int n) {
  if (nu < 2) throw DomainError("sine_product_integer requires nu >= 2");
  if (n < 1 || n > nu) throw DomainError("sine_product_integer requires 1 <= n <= nu");
  SignedMagnitude out;
  out.sign = (n % 2 == 1) ? 1 : -1;
  out.magnitude = FactoredMagnitude::integer(nu) * FactoredMagnitude::integer(2).pow(Rational(1 - nu));
  return out;
}

}  // namespace ruelle
