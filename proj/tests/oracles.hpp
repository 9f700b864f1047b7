#pragma once

// Reference computations shared by the unit tests and the acceptance run. They
// go back to series definitions and never call the closed forms under test.

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "ruelle/congruence.hpp"

namespace ruelle::oracle {

inline int moebius(nt::i64 n) {
  int m = 1;
  for (auto [p, e] : nt::factorize(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

// 12 g from brute-force counts: index via |P^1(Z/N)|, elliptic points from the
// two quadratics, cusps from the divisor sum.
inline nt::i64 twelve_genus_brute(nt::i64 N) {
  nt::i64 pairs = 0;
  for (nt::i64 c = 0; c < N; ++c)
    for (nt::i64 d = 0; d < N; ++d) pairs += std::gcd(std::gcd(c, d), N) == 1;
  const nt::i64 mu = pairs / nt::euler_phi(N);
  nt::i64 e2 = 0, e3 = 0;
  for (nt::i64 x = 0; x < N; ++x) {
    e2 += nt::mod(x * x + 1, N) == 0;
    e3 += nt::mod(x * x + x + 1, N) == 0;
  }
  nt::i64 einf = 0;
  for (nt::i64 d : nt::divisors(N)) einf += nt::euler_phi(std::gcd(d, N / d));
  return 12 + mu - 3 * e2 - 4 * e3 - 6 * einf;
}

// L(s, chi) for s in {1, 2} straight from the series: M full blocks, then the
// tail (mq+a)^{-s} = (mq)^{-s} sum_j binom(-s, j) (a/mq)^j summed over m >= M.
inline std::complex<double> l_series(int s, const DirichletCharacter& chi) {
  const nt::i64 q = chi.modulus();
  const int M = 2000;
  std::complex<double> acc = 0.0;
  for (nt::i64 n = 1; n < nt::i64(M) * q; ++n) acc += chi(n) * std::pow(double(n), -double(s));
  // n = mq + a with m >= M, 1 <= a < q; chi(mq) = 0
  for (int j = 1; j <= 12; ++j) {
    std::complex<double> cj = 0.0;
    for (nt::i64 a = 1; a < q; ++a) cj += chi(a) * std::pow(double(a) / double(q), double(j));
    const double t = s + j;
    double partial = 0.0;
    for (int m = 1; m < M; ++m) partial += std::pow(double(m), -t);
    const double tail = boost::math::zeta(t) - partial;
    acc += std::pow(double(q), -double(s)) * boost::math::binomial_coefficient<double>(s + j - 1, j) *
           (j % 2 ? -1.0 : 1.0) * cj * tail;
  }
  return acc;
}

// Hurwitz zeta continued to s near 0 by Euler-Maclaurin with the full B_2k tail.
inline double hurwitz_any(double s, double a) {
  static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  const int n = 30;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::pow(k + a, -s);
  const double x = n + a;
  acc += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s, fact = 2.0, xp = std::pow(x, -s - 1.0);
  for (int k = 1; k <= 8; ++k) {
    acc += B[k - 1] / fact * rising * xp;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    xp /= x * x;
  }
  return acc;
}

// L(s, psi) for a character given pointwise mod M, any real s != 1.
template <class Chi>
std::complex<double> l_mod(double s, nt::i64 M, Chi&& psi) {
  std::complex<double> acc = 0.0;
  for (nt::i64 a = 1; a <= M; ++a) {
    auto v = psi(a);
    if (v != 0.0) acc += v * hurwitz_any(s, double(a) / double(M));
  }
  return acc * std::pow(double(M), -s);
}

// log|phi(s)| from the scattering determinant written as a product over F, with
// every L-function evaluated from its Dirichlet series continued via Hurwitz.
inline double log_abs_phi(double s, nt::i64 N, const DirichletCharacter& chi) {
  ScatteringSets S = scattering_sets(N, chi);
  double v = 0.0;
  for (nt::i64 m : g_set(N, chi.conductor())) {
    nt::i64 g = std::gcd(m, N / m);
    v += (1 - 2 * s) * nt::euler_phi(g) * std::log(double(N / g));
  }
  v += S.nF() * ((2 * s - 1) * std::log(std::numbers::pi) + std::lgamma(1 - s) - std::lgamma(s));
  for (const auto& t : S.F) {
    const nt::i64 M = t.m * t.q1();
    auto psi = [&](nt::i64 a) -> std::complex<double> {
      if (std::gcd(a, M) != 1) return 0.0;
      return t.xi1(a) * t.xi2(a);
    };
    v += (1 - 2 * s) * std::log(double(t.q1()));
    v += std::log(std::abs(l_mod(2 - 2 * s, M, psi))) - std::log(std::abs(l_mod(2 * s, M, psi)));
  }
  return v;
}

// |a_n0 d(1)| = lim s^{-n0} |phi(s)| |Gamma(s) / Gamma(s - 1/2)|^{tau0}. Very small s
// lose digits to cancellation in the vanishing L-values, so the limit comes from
// polynomial extrapolation over s = h, 2h, ..., 8h.
inline double scaled_phi(double s, nt::i64 N, const DirichletCharacter& chi, int n0, int tau0) {
  // Gamma(s - 1/2) = Gamma(s + 1/2) / (s - 1/2)
  double lg = std::lgamma(s) - (std::lgamma(s + 0.5) - std::log(std::abs(s - 0.5)));
  return std::exp(log_abs_phi(s, N, chi) - n0 * std::log(s) + tau0 * lg);
}

inline double numeric_an0_d1(nt::i64 N, const DirichletCharacter& chi, int n0, int tau0) {
  const int n = 8;
  const double h = 4e-3;
  double value = 0.0;
  for (int j = 1; j <= n; ++j) {
    double w = 1.0;  // Lagrange weight of node j at 0
    for (int i = 1; i <= n; ++i)
      if (i != j) w *= double(i) / double(i - j);
    value += w * scaled_phi(j * h, N, chi, n0, tau0);
  }
  return value;
}

}  // namespace ruelle::oracle
