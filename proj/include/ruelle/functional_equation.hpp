#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <tuple>
#include <vector>

#include "ruelle/core_model.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/factored.hpp"
#include "ruelle/special_functions.hpp"

namespace ruelle {

struct ScatteringData {
  int n0 = 0;
  double a_n0 = 1.0;
  double d1 = 1.0;
  double c1 = 0.0;
  // 1/2 tr(I - Phi(1/2)); unknown means 0 for evaluation and no sign claims.
  std::optional<int> half_trace_exponent;
  // phi(s; chi); empty means phi == 1.
  std::function<cplx(cplx)> phi;
  // Exact |a_n0 d(1)| when available; replaces |a_n0 * d1| in magnitudes.
  std::optional<FactoredMagnitude> an0_d1_abs;
  // False when only |a_n0 d(1)| is known.
  bool signs_known = true;

  static ScatteringData compact() {
    ScatteringData d;
    d.half_trace_exponent = 0;
    return d;
  }

  int half_trace() const { return half_trace_exponent.value_or(0); }

  FactoredMagnitude an0_d1_magnitude() const {
    if (an0_d1_abs) return *an0_d1_abs;
    return FactoredMagnitude::numeric(std::abs(a_n0 * d1));
  }
};

// Everything a functional-equation or lead-term evaluation needs.
struct Model {
  OrbifoldSignature sig;
  MultiplierSystem ms;
  CombinatorialProfile profile;
  ScatteringData data;

  int m() const { return ms.dimension(); }
  const Rational& k() const { return ms.k(); }
  double kd() const { return to_double(ms.k()); }
};

inline Model make_model(const OrbifoldSignature& sig, const MultiplierSystem& ms, ScatteringData data) {
  CombinatorialProfile pr = residue_profile(sig, ms);
  if (data.a_n0 == 0.0 || data.d1 == 0.0) throw InputError("a_n0 and d1 must be nonzero");
  if (sig.compact()) {
    if (data.n0 != 0 || data.a_n0 != 1.0 || data.d1 != 1.0 || data.c1 != 0.0 || data.half_trace() != 0 || data.phi)
      throw InputError("compact signature requires trivial scattering data (n0=0, a_n0=1, d1=1, c1=0, phi=1)");
    if (data.an0_d1_abs && data.an0_d1_abs->value() != 1.0)
      throw InputError("compact signature requires |a_n0 d(1)| = 1");
  }
  if (pr.tau0 == 0 && data.phi) throw InputError("phi must be absent when tau0 = 0 (the scattering matrix is empty)");
  if (pr.tau0 == 1) {
    int expected = ms.k() == 0 ? 0 : (is_integer(ms.k()) ? 1 : 2);
    if (data.n0 != expected)
      throw InputError("with tau0 = 1 the scattering order n0 must be " + std::to_string(expected));
  }
  if (data.half_trace_exponent && *data.half_trace_exponent < 0)
    throw InputError("half_trace_exponent must be >= 0");
  return Model{sig, ms, std::move(pr), std::move(data)};
}

// ---------------------------------------------------------------------------
// Structured products C * prod sin(pi (s + b)/nu)^e * prod (s + b)^e with
// integer exponents. Normal form: shifts of sine factors lie in [0, nu),
// every factor has +s, equal factors are merged and the sign is explicit.

struct SineFactor {
  int nu = 1;
  Rational shift{0};
  int exponent = 0;
  auto key() const { return std::tie(nu, shift); }
  bool operator==(const SineFactor& o) const { return nu == o.nu && shift == o.shift && exponent == o.exponent; }
};

struct LinearFactor {
  Rational shift{0};
  int exponent = 0;
  bool operator==(const LinearFactor& o) const { return shift == o.shift && exponent == o.exponent; }
};

class ProductForm {
 public:
  int sign = 1;
  FactoredMagnitude constant;
  std::vector<SineFactor> sines;
  std::vector<LinearFactor> linears;

  // Multiply by sin(pi (sigma s + b) / nu)^e.
  void add_sine(int sigma, Rational b, int nu, int e) {
    if (e == 0) return;
    if (sigma < 0) {  // sin(-x) = -sin(x)
      if (e % 2 != 0) sign = -sign;
      b = -b;
    }
    // sin(x + t pi) = (-1)^t sin(x)
    std::int64_t t = floor_of(b / Rational(nu));
    b -= Rational(t * nu);
    if ((t % 2 != 0) && (e % 2 != 0)) sign = -sign;
    for (auto& f : sines)
      if (f.nu == nu && f.shift == b) {
        f.exponent += e;
        return;
      }
    sines.push_back({nu, b, e});
  }

  // Multiply by (sigma s + b)^e.
  void add_linear(int sigma, Rational b, int e) {
    if (e == 0) return;
    if (sigma < 0) {
      if (e % 2 != 0) sign = -sign;
      b = -b;
    }
    for (auto& f : linears)
      if (f.shift == b) {
        f.exponent += e;
        return;
      }
    linears.push_back({b, e});
  }

  // Canonical ordering and removal of cancelled factors.
  void normalize() {
    std::erase_if(sines, [](const SineFactor& f) { return f.exponent == 0; });
    std::erase_if(linears, [](const LinearFactor& f) { return f.exponent == 0; });
    std::sort(sines.begin(), sines.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
    std::sort(linears.begin(), linears.end(), [](const auto& a, const auto& b) { return a.shift < b.shift; });
  }

  bool same_structure(const ProductForm& o) const {
    return sign == o.sign && constant.same_atoms(o.constant) && sines == o.sines && linears == o.linears;
  }

  cplx evaluate(cplx s) const {
    constexpr double pi = std::numbers::pi;
    cplx v = double(sign) * constant.value();
    for (const auto& f : sines) {
      cplx base = std::sin(pi * (s + to_double(f.shift)) / double(f.nu));
      if (f.exponent < 0 && std::abs(base) < 1e-8) throw PoleAt(s, "vanishing sine factor with negative exponent");
      v *= ipow(base, f.exponent);
    }
    for (const auto& f : linears) {
      cplx base = s + to_double(f.shift);
      if (f.exponent < 0 && std::abs(base) < 1e-8) throw PoleAt(s, "vanishing linear factor with negative exponent");
      v *= ipow(base, f.exponent);
    }
    return v;
  }

  // log of evaluate(s) up to a multiple of 2 pi i; no overflow.
  cplx log_evaluate(cplx s) const {
    constexpr double pi = std::numbers::pi;
    cplx v = constant.log_value();
    if (sign < 0) v += cplx(0.0, pi);
    for (const auto& f : sines) {
      cplx base = std::sin(pi * (s + to_double(f.shift)) / double(f.nu));
      if (std::abs(base) < 1e-8 && f.exponent < 0) throw PoleAt(s, "vanishing sine factor with negative exponent");
      // log sin from the q-form keeps large imaginary parts finite
      v += double(f.exponent) * log_sin_pi((s + to_double(f.shift)) / double(f.nu));
    }
    for (const auto& f : linears) {
      cplx base = s + to_double(f.shift);
      if (f.exponent < 0 && std::abs(base) < 1e-8) throw PoleAt(s, "vanishing linear factor with negative exponent");
      v += double(f.exponent) * std::log(base);
    }
    return v;
  }

  // Order of vanishing at s=0 and the exact leading coefficient there.
  struct Leading {
    int order = 0;
    SignedMagnitude coefficient;
  };
  Leading leading_at_zero() const {
    Leading out;
    out.coefficient.sign = sign;
    out.coefficient.magnitude = constant;
    for (const auto& f : sines) {
      if (f.shift == 0) {  // sin(pi s / nu) ~ (pi/nu) s
        out.order += f.exponent;
        out.coefficient.magnitude *= (FactoredMagnitude::pi() / FactoredMagnitude::integer(f.nu)).pow(Rational(f.exponent));
      } else {  // shift/nu in (0,1): positive value
        out.coefficient.magnitude *= FactoredMagnitude::sin_pi(f.shift / Rational(f.nu)).pow(Rational(f.exponent));
      }
    }
    for (const auto& f : linears) {
      if (f.shift == 0) {
        out.order += f.exponent;
      } else {
        if (f.shift < 0 && f.exponent % 2 != 0) out.coefficient.sign = -out.coefficient.sign;
        out.coefficient.magnitude *= FactoredMagnitude::rational(abs(f.shift)).pow(Rational(f.exponent));
      }
    }
    return out;
  }

  // The same product with s replaced by -s.
  ProductForm reflected() const {
    ProductForm r;
    r.sign = sign;
    r.constant = constant;
    for (const auto& f : sines) r.add_sine(-1, f.shift, f.nu, f.exponent);
    for (const auto& f : linears) r.add_linear(-1, f.shift, f.exponent);
    r.normalize();
    return r;
  }

  static cplx ipow(cplx z, int e) {
    cplx r = 1.0;
    cplx b = e < 0 ? 1.0 / z : z;
    unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
    while (n) {
      if (n & 1u) r *= b;
      b *= b;
      n >>= 1u;
    }
    return r;
  }
};

namespace detail {

inline FactoredMagnitude product_sin_pi_beta(const Model& md) {
  FactoredMagnitude p;
  for (const auto& cusp : md.ms.parabolic_angles())
    for (const auto& b : cusp)
      if (!b.is_zero()) p *= b.sin_pi_magnitude();
  return p;
}

inline double sum_log_sin_pi_beta(const Model& md) {
  double acc = 0.0;
  for (const auto& cusp : md.ms.parabolic_angles())
    for (const auto& b : cusp)
      if (!b.is_zero()) acc += std::log(std::sin(std::numbers::pi * b.value()));
  return acc;
}

inline double total_beta(const Model& md) {
  double t = 0.0;
  for (const auto& b : md.profile.beta_sums) t += b.value();
  return t;
}

// sum_j (1 - 1/nu_j) and sum_j 1/nu_j, exactly.
inline Rational sum_one_minus_inv_nu(const Model& md) {
  Rational v(0);
  for (int nu : md.sig.elliptic_orders()) v += Rational(nu - 1, nu);
  return v;
}
inline Rational sum_inv_nu(const Model& md) {
  Rational v(0);
  for (int nu : md.sig.elliptic_orders()) v += Rational(1, nu);
  return v;
}

inline void require_cut_plane(cplx s, const Model& md) {
  double ak = std::abs(md.kd());
  if (s.imag() == 0.0 && (s.real() <= ak || s.real() >= 1.0 - ak))
    throw DomainError("s must avoid (-inf,|k|] and [1-|k|,inf)");
}

inline void require_half_line(cplx s, const Model& md) {
  double ak = std::abs(md.kd());
  if (s.imag() == 0.0 && s.real() <= ak) throw DomainError("s must avoid (-inf,|k|]");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Factor definitions (logarithms, continuous on C \ (-inf, |k|]).

inline cplx log_zI_definition(cplx s, const Model& md) {
  detail::require_half_line(s, md);
  const double k = md.kd();
  const double c = md.m() * to_double(md.sig.area_over_2pi());
  cplx inner = s * detail::kLog2Pi + s * (1.0 - s) + (0.5 + k) * log_gamma(s + k) + (0.5 - k) * log_gamma(s - k) -
               log_barnes_g(s + k + 1.0) - log_barnes_g(s - k + 1.0);
  return c * inner;
}

inline cplx log_zEll_definition(cplx s, const Model& md) {
  detail::require_half_line(s, md);
  const double k = md.kd();
  const double m = md.m();
  cplx v = 0.0;
  cplx lg_pair = md.sig.rho() > 0 ? log_gamma(s - k) + log_gamma(s + k) : cplx(0.0);
  for (const auto& e : md.profile.elliptic) {
    const double nu = e.nu;
    v += m * (1.0 - 1.0 / nu) * s * std::log(nu) - 0.5 * m * (1.0 - 1.0 / nu) * lg_pair;
    for (int l = 0; l < e.nu; ++l) {
      if (e.alpha_at(l)) v += (e.alpha_at(l) / nu) * log_gamma((s - k + double(l)) / nu);
      if (e.alpha_tilde_at(l)) v += (e.alpha_tilde_at(l) / nu) * log_gamma((s + k + double(l)) / nu);
    }
  }
  return v;
}

inline cplx log_zPar_definition(cplx s, const Model& md) {
  detail::require_half_line(s, md);
  if (md.sig.cusps() == 0) return 0.0;
  const double k = md.kd();
  const double m = md.m();
  cplx v = -m * md.sig.cusps() * s * std::log(2.0);
  cplx ratio = log_gamma(s + k) - log_gamma(s - k);
  for (const auto& b : md.profile.beta_sums) v += (m / 2.0 - b.value()) * ratio;
  v -= s * detail::sum_log_sin_pi_beta(md);
  const int h = md.data.half_trace();
  if (h) v += double(h) * std::log(detail::upper(s - 0.5));
  const int t0 = md.profile.tau0;
  if (t0) v += double(t0) * (log_gamma(s - k) - log_gamma(s) - log_gamma(s + 0.5));
  return v;
}

inline cplx log_z_definition(cplx s, const Model& md) {
  return log_zI_definition(s, md) + log_zEll_definition(s, md) + log_zPar_definition(s, md);
}

// Ratios f(s)/f(1-s) straight from the definitions (reference path).
inline cplx zI_ratio_from_definition(cplx s, const Model& md) {
  detail::require_cut_plane(s, md);
  return std::exp(log_zI_definition(s, md) - log_zI_definition(1.0 - s, md));
}
inline cplx zEll_ratio_from_definition(cplx s, const Model& md) {
  detail::require_cut_plane(s, md);
  return std::exp(log_zEll_definition(s, md) - log_zEll_definition(1.0 - s, md));
}
inline cplx zPar_ratio_from_definition(cplx s, const Model& md) {
  detail::require_cut_plane(s, md);
  return std::exp(log_zPar_definition(s, md) - log_zPar_definition(1.0 - s, md));
}

// ---------------------------------------------------------------------------
// Closed forms of the ratios. Rational powers of sines use log_sin_pi, the
// branch inherited from the Gamma-function side.

inline cplx log_zI_ratio(cplx s, const Model& md) {
  detail::require_cut_plane(s, md);
  const double k = md.kd();
  const double c = md.m() * to_double(md.sig.area_over_2pi());
  cplx v = (2.0 * s - 1.0) * detail::kLog2Pi;
  if (k != 0.0) v += k * (log_sin_pi(s - k) - log_sin_pi(s + k));
  v -= 0.5 * (log_gamma(s + k) - log_gamma(1.0 - s + k) + log_gamma(s - k) - log_gamma(1.0 - s - k));
  v -= log_barnes_g(s + k) + log_barnes_g(s - k) - log_barnes_g(1.0 - s + k) - log_barnes_g(1.0 - s - k);
  return c * v;
}

inline cplx log_zEll_ratio(cplx s, const Model& md) {
  detail::require_cut_plane(s, md);
  if (md.sig.rho() == 0) return 0.0;
  const double k = md.kd();
  const double m = md.m();
  const double s1 = to_double(detail::sum_one_minus_inv_nu(md));
  const double s2 = to_double(detail::sum_inv_nu(md));
  cplx lsp = log_sin_pi(s + k);
  cplx v = m * s1 * std::log(2.0) - m * s2 * lsp + 0.5 * m * s1 * (log_sin_pi(s - k) - lsp);
  for (const auto& e : md.profile.elliptic) {
    const double nu = e.nu;
    for (int l = 1; l <= e.nu; ++l) {
      double ex = e.alpha_at(l) / nu + e.r_at(l);
      if (ex != 0.0) v += ex * log_sin_pi((-s - k + double(l)) / nu);
    }
    for (int l = 0; l < e.nu; ++l)
      if (e.alpha_at(l)) v -= (e.alpha_at(l) / nu) * log_sin_pi((s - k + double(l)) / nu);
  }
  return v;
}

inline cplx log_zPar_ratio(cplx s, const Model& md) {
  detail::require_cut_plane(s, md);
  if (md.sig.cusps() == 0) return 0.0;
  constexpr double pi = std::numbers::pi;
  const double k = md.kd();
  const double m = md.m();
  const double tau = md.sig.cusps();
  cplx v = -m * tau * (2.0 * s - 1.0) * std::log(2.0);
  double ex = m * tau / 2.0 - detail::total_beta(md);
  if (ex != 0.0) v += ex * (log_sin_pi(s - k) - log_sin_pi(s + k));
  v += (1.0 - 2.0 * s) * detail::sum_log_sin_pi_beta(md);
  v += cplx(0.0, pi * md.data.half_trace());
  const int t0 = md.profile.tau0;
  if (t0)
    v += double(t0) * (log_gamma(s - k) - log_gamma(1.0 - s - k) + log_gamma(1.0 - s) + log_gamma(1.5 - s) -
                       log_gamma(s) - log_gamma(s + 0.5));
  return v;
}

inline cplx zI_ratio(cplx s, const Model& md) { return std::exp(log_zI_ratio(s, md)); }
inline cplx zEll_ratio(cplx s, const Model& md) { return std::exp(log_zEll_ratio(s, md)); }
inline cplx zPar_ratio(cplx s, const Model& md) { return std::exp(log_zPar_ratio(s, md)); }

// Scattering determinant for SL2(Z): sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s)).
inline cplx phi_level_one(cplx s) {
  cplx lg = log_gamma(s - 0.5) - log_gamma(s);
  return std::sqrt(std::numbers::pi) * std::exp(lg) * riemann_zeta(2.0 * s - 1.0) / riemann_zeta(2.0 * s);
}

inline cplx phi_value(cplx s, const Model& md) {
  if (md.data.phi) return md.data.phi(s);
  if (md.profile.tau0 > 0) throw InputError("phi is required when tau0 > 0");
  return 1.0;
}

// Z(1-s) = kappa(s) Z(s)
inline cplx log_kappa(cplx s, const Model& md) {
  return log_zI_ratio(s, md) + log_zEll_ratio(s, md) + log_zPar_ratio(s, md) + std::log(phi_value(s, md));
}
inline cplx kappa(cplx s, const Model& md) { return std::exp(log_kappa(s, md)); }

// ---------------------------------------------------------------------------
// H(s) with R(s)phi(s) R(-s)phi(-s) = H(s), and H1(s).

namespace detail {

// m(2g-2+rho+tau): the combined exponent of sin(pi(s+k)) sin(pi(-s+k)) coming
// from the identity and elliptic contributions.
inline int sine_pair_exponent(const Model& md) {
  Rational e = Rational(md.m()) * md.sig.area_over_2pi() + Rational(md.m()) * sum_inv_nu(md);
  if (!is_integer(e)) throw std::logic_error("non-integer exponent in H");
  return static_cast<int>(e.numerator());
}

inline void add_elliptic_pairs(ProductForm& f, const Model& md) {
  const Rational& k = md.k();
  for (const auto& e : md.profile.elliptic)
    for (int l = 1; l <= e.nu; ++l) {
      int r = e.r_at(l);
      if (!r) continue;
      f.add_sine(-1, Rational(l) - k, e.nu, -r);
      f.add_sine(+1, Rational(l) - k, e.nu, -r);
    }
}

}  // namespace detail

inline ProductForm H_form(const Model& md) {
  ProductForm f;
  Rational two_exp = Rational(2 * md.m()) * md.sig.area_over_2pi() -
                     Rational(2 * md.m()) * detail::sum_one_minus_inv_nu(md) - Rational(2 * md.m() * md.sig.cusps());
  if (!is_integer(two_exp)) throw std::logic_error("non-integer power of 2 in H");
  f.constant = FactoredMagnitude::integer(2).pow(two_exp) * detail::product_sin_pi_beta(md).pow(Rational(-2));
  const Rational& k = md.k();
  int E = detail::sine_pair_exponent(md);
  f.add_sine(+1, k, 1, E);
  f.add_sine(-1, k, 1, E);
  detail::add_elliptic_pairs(f, md);
  int t0 = md.profile.tau0;
  f.add_linear(-1, -k, t0);
  f.add_linear(+1, -k, t0);
  f.add_linear(+1, Rational(0), -t0);
  f.add_linear(-1, Rational(0), -t0);
  f.add_linear(+1, Rational(1, 2), -t0);
  f.add_linear(-1, Rational(1, 2), -t0);
  f.normalize();
  return f;
}

inline ProductForm H1_form(const Model& md) {
  ProductForm f;
  const Rational& k = md.k();
  int t0 = md.profile.tau0;
  int E = detail::sine_pair_exponent(md) - t0;
  f.add_sine(+1, k, 1, E);
  f.add_sine(-1, k, 1, E);
  detail::add_elliptic_pairs(f, md);
  f.add_sine(+1, Rational(0), 1, t0);
  f.add_sine(+1, Rational(1, 2), 1, t0);  // cos(pi s)
  f.add_linear(+1, Rational(0), -t0);
  f.normalize();
  return f;
}

inline cplx H(cplx s, const Model& md) { return H_form(md).evaluate(s); }
inline cplx H1(cplx s, const Model& md) { return H1_form(md).evaluate(s); }

// c(chi, Gamma) = 2^{-m(2g-2)} d(1) prod_{j, p > m_j} sin(pi beta_jp)
inline SignedMagnitude c_chi_gamma(const Model& md) {
  SignedMagnitude c;
  c.sign = md.data.d1 < 0 ? -1 : 1;
  c.magnitude = FactoredMagnitude::integer(2).pow(Rational(-md.m() * (2 * md.sig.genus() - 2))) *
                FactoredMagnitude::numeric(std::abs(md.data.d1)) * detail::product_sin_pi_beta(md);
  return c;
}

// L(s) of the scattering determinant: (Gamma(s)Gamma(s-1/2)/(Gamma(s-k)Gamma(s+k)))^{tau0} d(1) e^{c1 s}.
inline cplx scattering_gamma_factor(cplx s, const Model& md) {
  const double k = md.kd();
  cplx v = std::log(cplx(md.data.d1)) + md.data.c1 * s;
  int t0 = md.profile.tau0;
  if (t0) v += double(t0) * (log_gamma(s) + log_gamma(s - 0.5) - log_gamma(s - k) - log_gamma(s + k));
  return std::exp(v);
}

// ---------------------------------------------------------------------------
// The three contributions of R(s)R(-s): ratio f(1+s)f(1-s)/(f(s)f(-s)) from the
// factor definitions, against the closed sine forms.

// Kept as logarithms: for large m * area the values leave double range.
struct Contribution {
  cplx log_assembled;
  cplx log_closed;
  cplx assembled() const { return std::exp(log_assembled); }
  cplx closed() const { return std::exp(log_closed); }
  double relative_error() const { return std::abs(std::exp(log_assembled - log_closed) - 1.0); }
};

namespace detail {
template <class F>
cplx four_point(cplx s, F&& logf) {
  return logf(1.0 + s) + logf(1.0 - s) - logf(s) - logf(-s);
}
}  // namespace detail

inline Contribution identity_contribution(cplx s, const Model& md) {
  if (s.imag() == 0.0) throw DomainError("identity_contribution needs non-real s");
  const double k = md.kd();
  const double c = md.m() * to_double(md.sig.area_over_2pi());
  Contribution out;
  out.log_assembled = detail::four_point(s, [&](cplx z) { return log_zI_definition(z, md); });
  out.log_closed = c * (std::log(4.0) + log_sin_pi(s + k) + log_sin_pi(k - s));
  return out;
}

inline Contribution elliptic_contribution(cplx s, const Model& md) {
  if (s.imag() == 0.0) throw DomainError("elliptic_contribution needs non-real s");
  const double k = md.kd();
  const double m = md.m();
  Contribution out;
  out.log_assembled = detail::four_point(s, [&](cplx z) { return log_zEll_definition(z, md); });
  cplx v = -2.0 * m * to_double(detail::sum_one_minus_inv_nu(md)) * std::log(2.0);
  if (md.sig.rho() > 0) v += m * to_double(detail::sum_inv_nu(md)) * (log_sin_pi(s + k) + log_sin_pi(k - s));
  for (const auto& e : md.profile.elliptic)
    for (int l = 1; l <= e.nu; ++l)
      if (e.r_at(l))
        v -= double(e.r_at(l)) * (log_sin_pi((-s - k + double(l)) / double(e.nu)) +
                                  log_sin_pi((s - k + double(l)) / double(e.nu)));
  out.log_closed = v;
  return out;
}

inline Contribution parabolic_contribution(cplx s, const Model& md) {
  if (s.imag() == 0.0) throw DomainError("parabolic_contribution needs non-real s");
  const double k = md.kd();
  Contribution out;
  out.log_assembled = detail::four_point(s, [&](cplx z) { return log_zPar_definition(z, md); });
  cplx v = -2.0 * md.m() * md.sig.cusps() * std::log(2.0) - 2.0 * detail::sum_log_sin_pi_beta(md);
  int t0 = md.profile.tau0;
  if (t0) v += double(t0) * std::log((-s - k) * (s - k) / (s * (-s) * (s + 0.5) * (-s + 0.5)));
  out.log_closed = v;
  return out;
}

}  // namespace ruelle
