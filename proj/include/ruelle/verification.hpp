#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ruelle/core_model.hpp"
#include "ruelle/functional_equation.hpp"
#include "ruelle/lead_term.hpp"
#include "ruelle/number_theory.hpp"
#include "ruelle/special_functions.hpp"
#include "ruelle/torsion.hpp"

namespace ruelle {

// mt19937_64 with explicit reductions so a seed gives the same draws with any
// standard library (the std distributions are implementation defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t next() { return g_(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  bool coin() { return next() & 1u; }

 private:
  std::mt19937_64 g_;
};

struct ModelOptions {
  bool allow_cusps = true;
  bool integral_k = false;  // k in Z
  bool zero_k = false;
  int max_genus = 3;
  int max_rho = 4;
  int max_nu = 7;
  int max_m = 3;
};

// phi(s) = exp(c(2s-1)) satisfies phi(s) phi(1-s) = 1.
inline std::function<cplx(cplx)> exponential_phi(double c) {
  return [c](cplx s) { return std::exp(c * (2.0 * s - 1.0)); };
}

inline OrbifoldSignature random_signature(Rng& rng, const ModelOptions& opt) {
  for (;;) {
    int g = rng.uniform_int(0, opt.max_genus);
    int tau = opt.allow_cusps ? rng.uniform_int(0, 3) : 0;
    int rho = rng.uniform_int(0, opt.max_rho);
    std::vector<int> nus;
    for (int j = 0; j < rho; ++j) nus.push_back(rng.uniform_int(2, opt.max_nu));
    Rational a = Rational(2 * g - 2 + tau);
    for (int nu : nus) a += Rational(1) - Rational(1, nu);
    if (a > 0) return OrbifoldSignature(g, tau, nus);
  }
}

// Non-integral k with |k| < 3; compact signatures draw from the admissible
// lattice (1/(m A lcm)) Z, A = area/2pi. Empty when that lattice is Z.
inline std::optional<Rational> random_fractional_k(Rng& rng, const OrbifoldSignature& sig, int m) {
  if (!sig.compact()) {
    Rational k;
    do {
      int q = rng.uniform_int(2, 12);
      k = Rational(rng.uniform_int(-3 * q + 1, 3 * q - 1), q);
    } while (is_integer(k));
    return k;
  }
  Rational unit = Rational(1) / (Rational(m) * sig.area_over_2pi() * Rational(sig.lcm_orders()));
  if (is_integer(unit)) return std::nullopt;
  const int span = static_cast<int>(floor_of(Rational(3) / unit));
  for (;;) {
    Rational k = unit * Rational(rng.uniform_int(-span, span));
    if (!is_integer(k) && k > -3 && k < 3) return k;
  }
}

inline Model random_model(Rng& rng, const ModelOptions& opt = {}) {
  OrbifoldSignature sig = random_signature(rng, opt);
  int m = rng.uniform_int(1, opt.max_m);
  Rational k;
  if (opt.zero_k) k = 0;
  else if (opt.integral_k) k = rng.uniform_int(-3, 3);
  else {
    std::optional<Rational> kk;
    while (!(kk = random_fractional_k(rng, sig, m))) {
      sig = random_signature(rng, opt);
      m = rng.uniform_int(1, opt.max_m);
    }
    k = *kk;
  }
  std::vector<std::vector<int>> alpha;
  for (int nu : sig.elliptic_orders()) {
    std::vector<int> a;
    for (int p = 0; p < m; ++p) a.push_back(rng.uniform_int(0, nu - 1));
    alpha.push_back(std::move(a));
  }
  std::vector<std::vector<Angle>> beta;
  for (int j = 0; j < sig.cusps(); ++j) {
    int zeros = rng.uniform_int(0, m);
    std::vector<Angle> b(zeros, Angle(Rational(0)));
    for (int p = zeros; p < m; ++p) {
      int q = rng.uniform_int(2, 12);
      b.emplace_back(Rational(rng.uniform_int(1, q - 1), q));
    }
    beta.push_back(std::move(b));
  }
  MultiplierSystem ms(m, k, alpha, beta);
  ScatteringData d = ScatteringData::compact();
  if (!sig.compact()) {
    CombinatorialProfile pr = residue_profile(sig, ms);
    d.n0 = pr.tau0 == 1 ? (k == 0 ? 0 : (is_integer(k) ? 1 : 2)) : rng.uniform_int(-3, 3);
    d.a_n0 = (rng.coin() ? 1 : -1) * rng.uniform(0.5, 2.0);
    d.d1 = (rng.coin() ? 1 : -1) * rng.uniform(0.5, 2.0);
    d.c1 = rng.uniform(-1.0, 1.0);
    d.half_trace_exponent = rng.uniform_int(0, pr.tau0);
    if (pr.tau0 > 0) d.phi = exponential_phi(rng.uniform(-0.5, 0.5));  // empty scattering matrix otherwise
  }
  return make_model(sig, ms, d);
}

// 0.1 <= |Im s| <= 5, away from the real cuts.
inline cplx random_s(Rng& rng) {
  double im = rng.uniform(0.1, 5.0) * (rng.coin() ? 1 : -1);
  return {rng.uniform(-3.0, 3.0), im};
}

struct KitanoInstance {
  SeifertIndex X;
  KitanoRep rep;
};

struct YamaguchiInstance {
  SeifertIndex X;
  YamaguchiRep rep;
};

inline std::vector<std::pair<int, int>> random_fibers(Rng& rng, int max_rho, int max_nu) {
  std::vector<std::pair<int, int>> f;
  int rho = rng.uniform_int(1, max_rho);
  for (int j = 0; j < rho; ++j) {
    int nu = rng.uniform_int(2, max_nu), beta;
    do beta = rng.uniform_int(1, nu - 1);
    while (std::gcd(nu, beta) != 1);
    f.emplace_back(nu, beta);
  }
  return f;
}

inline KitanoInstance random_kitano(Rng& rng) {
  SeifertIndex X(rng.uniform_int(-3, 3), rng.uniform_int(1, 3), random_fibers(rng, 4, 9));
  KitanoRep r;
  r.m = rng.uniform_int(2, 6);
  do r.a = rng.uniform_int(1, r.m - 1);
  while (std::gcd(r.a, r.m) != 1);
  for (const auto& f : X.fibers()) {
    std::vector<int> a;
    for (int p = 0; p < r.m; ++p) a.push_back(rng.uniform_int(0, f.nu - 1));
    r.residues.push_back(std::move(a));
  }
  return {X, r};
}

inline YamaguchiInstance random_yamaguchi(Rng& rng) {
  SeifertIndex X(rng.uniform_int(-3, 3), rng.uniform_int(1, 3), random_fibers(rng, 4, 9));
  YamaguchiRep r;
  r.N = rng.uniform_int(1, 5);
  for (const auto& f : X.fibers()) {
    int eta;
    do eta = 2 * rng.uniform_int(0, f.nu) + 1;
    while (std::gcd(eta, f.nu) != 1);
    r.eta.push_back(eta);
  }
  return {X, r};
}

// ---------------------------------------------------------------------------
// Identity families, shared by the CLI and the acceptance run.

struct SuiteResult {
  std::string family;
  long samples = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string detail;

  void record(double err) {
    ++samples;
    if (!(err <= worst)) worst = std::isnan(err) ? INFINITY : std::max(worst, err);
    if (!(err <= tolerance)) pass = false;
  }
  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
};

inline double rel_err(cplx a, cplx b) { return std::abs(a / b - 1.0); }
inline double rel_err(double a, double b) { return std::abs(a / b - 1.0); }

// Both sine-product identities, nu = 2..max_nu, per_nu random x each.
inline SuiteResult sine_product_suite(Rng& rng, int max_nu = 60, int per_nu = 100, double tol = 1e-12) {
  SuiteResult r{"sine-products", 0, 0.0, tol, true, {}};
  const double pi = std::numbers::pi;
  for (int nu = 2; nu <= max_nu; ++nu) {
    for (int i = 0; i < per_nu; ++i) {
      double x;
      do x = rng.uniform(-4.0, 4.0);
      while (std::abs(x - std::round(x)) < 1e-3);
      r.record(rel_err(sine_product(nu, x), std::ldexp(sin_pi(x), 1 - nu)));
    }
    for (int n = 1; n <= nu; ++n) {
      double p = 1.0;
      for (int l = 1; l <= nu; ++l)
        if (l != n) p *= std::sin((l - n) * pi / nu);
      r.record(rel_err(sine_product_integer(nu, n).value(), p));
    }
  }
  return r;
}

// Identity, elliptic and parabolic four-point ratios, assembled vs closed, per random instance.
inline SuiteResult contribution_suite(Rng& rng, int instances = 10, int per_instance = 200, double tol = 1e-9) {
  SuiteResult r{"contributions", 0, 0.0, tol, true, {}};
  for (int i = 0; i < instances; ++i) {
    Model md = random_model(rng);
    for (int t = 0; t < per_instance; ++t) {
      cplx s = random_s(rng);
      r.record(identity_contribution(s, md).relative_error());
      r.record(elliptic_contribution(s, md).relative_error());
      r.record(parabolic_contribution(s, md).relative_error());
    }
  }
  return r;
}

// H(s) = H(-s) structurally and numerically; k/-k conjugation; H against
// kappa(s+1)/kappa(s) phi(s) phi(-s).
inline SuiteResult h_structure_suite(Rng& rng, int instances = 10, int per_instance = 100, double tol_sym = 1e-10,
                                     double tol_kappa = 1e-9) {
  SuiteResult r{"h-structure", 0, 0.0, std::max(tol_sym, tol_kappa), true, {}};
  for (int i = 0; i < instances; ++i) {
    Model md = random_model(rng);
    ProductForm f = H_form(md);
    ProductForm g = f.reflected();
    if (!f.same_structure(g)) r.fail("H(s) and H(-s) differ in structure");
    Model conj = make_model(md.sig, md.ms.conjugate(md.sig), md.data);
    if (!H_form(conj).same_structure(f)) r.fail("H(s;k) and H(s;-k) differ in structure");
    ProductForm hc = H_form(conj);
    for (int t = 0; t < per_instance; ++t) {
      cplx s = random_s(rng);
      // in logs: H reaches far outside double range for large exponents
      cplx lh = f.log_evaluate(s);
      double e1 = std::abs(std::exp(lh - f.log_evaluate(-s)) - 1.0);
      double e2 = std::abs(std::exp(lh - hc.log_evaluate(s)) - 1.0);
      cplx log_via = log_kappa(s + 1.0, md) - log_kappa(s, md);
      log_via += std::log(phi_value(s, md)) + std::log(phi_value(-s, md));
      double e3 = std::abs(std::exp(lh - log_via) - 1.0);
      if (!(e1 <= tol_sym) || !(e2 <= tol_sym)) r.fail("H symmetry numeric deviation");
      if (!(e3 <= tol_kappa)) r.fail("H against kappa deviation");
      ++r.samples;
      for (double e : {e1, e2, e3}) r.worst = std::isnan(e) ? INFINITY : std::max(r.worst, e);
    }
  }
  return r;
}

// sum_l r_j(l) = m, the r(l) difference identity, tilde tau0 by brute force.
inline SuiteResult partition_suite(Rng& rng, int instances = 200) {
  SuiteResult r{"partition", 0, 0.0, 0.0, true, {}};
  for (int i = 0; i < instances; ++i) {
    ModelOptions opt;
    opt.integral_k = rng.coin();
    Model md = random_model(rng, opt);
    int brute = 0;
    for (std::size_t j = 0; j < md.profile.elliptic.size(); ++j) {
      const auto& e = md.profile.elliptic[j];
      int total = 0;
      for (int l = 1; l <= e.nu; ++l) total += e.r_at(l);
      if (total != md.m()) r.fail("sum of r_j differs from m");
      for (int l = 0; l <= 2 * e.nu; ++l) {
        // (alpha(l) - alpha(l-1)) = m - nu r(l)
        if (e.alpha_at(l) - e.alpha_at(l - 1) != md.m() - e.nu * e.r_at(l)) r.fail("r(l) identity fails");
        if (e.r_at(l) != e.r_at(l + e.nu)) r.fail("r_j is not periodic");
      }
      if (is_integer(md.k())) {
        std::int64_t k = md.k().numerator();
        for (int a : md.ms.elliptic_residues()[j])
          if (nt::mod(a + k, e.nu) == 0) ++brute;
      }
    }
    if (brute != md.profile.tilde_tau0) r.fail("tilde tau0 differs from brute-force count");
    ++r.samples;
  }
  return r;
}

}  // namespace ruelle
