#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/core_model.hpp"
#include "ruelle/factored.hpp"
#include "ruelle/functional_equation.hpp"

namespace ruelle {

struct LeadTermResult {
  int order = 0;
  FactoredMagnitude magnitude;  // |lim s^{-order} R(s)|
  bool sign_known = false;
  std::optional<int> sign;

  double value() const { return (sign ? *sign : 1) * magnitude.value(); }
};

namespace detail {

// m(2g-2+rho+tau) - tau0 - tilde tau0, the half order of H1 at 0 for integral k.
inline int half_order_H1(const Model& md) {
  return sine_pair_exponent(md) - md.profile.tau0 - md.profile.tilde_tau0;
}

// 2^{m(2g-2)} prod sin(pi beta)^{-1} / |a_n0 d(1)|, common to all paths.
inline FactoredMagnitude lead_prefactor(const Model& md) {
  return FactoredMagnitude::integer(2).pow(Rational(md.m() * (2 * md.sig.genus() - 2))) *
         product_sin_pi_beta(md).inverse() * md.data.an0_d1_magnitude().inverse();
}

// k_j in {1..nu} with k_j = k mod nu.
inline int residue_in_one_to_nu(std::int64_t k, int nu) {
  int r = static_cast<int>(((k % nu) + nu) % nu);
  return r == 0 ? nu : r;
}

}  // namespace detail

inline int ord_R_at_zero(const Model& md) {
  if (!is_integer(md.k())) return -md.data.n0;
  return detail::half_order_H1(md) - md.data.n0;
}

// Square root of the squared limit, k integral or not.
inline LeadTermResult lead_term(const Model& md) {
  LeadTermResult out;
  out.order = ord_R_at_zero(md);
  FactoredMagnitude v = detail::lead_prefactor(md);
  const Rational& k = md.k();
  const int t0 = md.profile.tau0;
  if (!is_integer(k)) {
    v *= FactoredMagnitude::pi().pow(Rational(t0, 2));
    v *= FactoredMagnitude::sin_pi(k).pow(Rational(detail::sine_pair_exponent(md) - t0));
    for (const auto& e : md.profile.elliptic)
      for (int l = 1; l <= e.nu; ++l)
        if (e.r_at(l)) v *= FactoredMagnitude::sin_pi((Rational(l) - k) / Rational(e.nu)).pow(Rational(-e.r_at(l)));
  } else {
    const std::int64_t ki = k.numerator();
    v *= FactoredMagnitude::pi().pow(Rational(detail::half_order_H1(md)) + Rational(t0, 2));
    for (const auto& e : md.profile.elliptic) {
      int kj = detail::residue_in_one_to_nu(ki, e.nu);
      if (e.r_at(kj)) v *= FactoredMagnitude::integer(e.nu).pow(Rational(e.r_at(kj)));
      for (int l = 1; l <= e.nu; ++l)
        if (l != kj && e.r_at(l))
          v *= FactoredMagnitude::sin_pi((Rational(l) - k) / Rational(e.nu)).pow(Rational(-e.r_at(l)));
    }
  }
  out.magnitude = v;
  return out;
}

// Signed lead term for k = 0; the sign is reported only when it is determined
// by the inputs.
inline LeadTermResult lead_term_k0(const Model& md) {
  if (md.k() != 0) throw InputError("lead_term_k0 requires k = 0");
  LeadTermResult out;
  out.order = ord_R_at_zero(md);
  const int t0 = md.profile.tau0;
  FactoredMagnitude v = detail::lead_prefactor(md);
  v *= FactoredMagnitude::pi().pow(Rational(detail::sine_pair_exponent(md) - md.profile.tilde_tau0) - Rational(t0, 2));
  for (const auto& e : md.profile.elliptic) {
    v *= FactoredMagnitude::integer(e.nu).pow(Rational(e.r[0]));
    for (int l = 1; l < e.nu; ++l)
      if (e.r[l]) v *= FactoredMagnitude::sin_pi(Rational(l, e.nu)).pow(Rational(-e.r[l]));
  }
  out.magnitude = v;
  if (md.data.half_trace_exponent && md.data.signs_known) {
    int s = ((*md.data.half_trace_exponent + t0 + 1) % 2 == 0) ? 1 : -1;
    if (md.data.d1 * md.data.a_n0 < 0) s = -s;
    out.sign_known = true;
    out.sign = s;
  }
  return out;
}

// Lead coefficient of H1 at 0 and c(chi,Gamma)^{-2} |a_n0|^{-2}; the squared
// lead term read off the structured product.
struct SquaredLead {
  int order_H1 = 0;
  SignedMagnitude h1_lead;
  FactoredMagnitude squared_magnitude;
};

inline SquaredLead squared_lead_from_H1(const Model& md) {
  auto lead = H1_form(md).leading_at_zero();
  SquaredLead out;
  out.order_H1 = lead.order;
  out.h1_lead = lead.coefficient;
  FactoredMagnitude c = c_chi_gamma(md).magnitude;
  FactoredMagnitude an0 = FactoredMagnitude::numeric(std::abs(md.data.a_n0));
  if (md.data.an0_d1_abs) {
    // c carries |d(1)|; swap it for the exact |a_n0 d(1)|.
    c = c / FactoredMagnitude::numeric(std::abs(md.data.d1));
    an0 = *md.data.an0_d1_abs;
  }
  out.squared_magnitude = (c * an0).pow(Rational(-2)) * lead.coefficient.magnitude;
  return out;
}

// k -> 0 continuity: k^{-P} |lead(k)| against |lead(0)|, P = m(2g-2+rho+tau) - tau0 - tilde tau0.
struct KLimitReport {
  std::vector<double> ks;
  std::vector<double> scaled;      // k^{-P} |lead(k)|
  std::vector<double> deviations;  // |scaled / lead0 - 1|
  std::vector<double> observed_orders;
  double lead0 = 0.0;
  double extrapolated = 0.0;
  double extrapolated_deviation = 0.0;
  int power = 0;
  bool converged = false;
  std::string note;
};

struct KLimitOptions {
  std::vector<Rational> ks{Rational(1, 100), Rational(1, 200), Rational(1, 400)};
  double tolerance = 1e-6;
  std::optional<int> tilde_tau0_override;  // negative control
};

inline KLimitReport k_limit_check(const OrbifoldSignature& sig, const MultiplierSystem& ms0, ScatteringData data,
                                  const KLimitOptions& opt = {}) {
  if (ms0.k() != 0) throw InputError("k_limit_check expects the k = 0 member of the family");
  if (opt.ks.size() != 3) throw InputError("k_limit_check uses exactly three k values");
  const Rational step = opt.ks[0] / opt.ks[1];
  if (step != Rational(2) || opt.ks[1] / opt.ks[2] != Rational(2))
    throw InputError("k values must halve: k, k/2, k/4");

  auto with_k = [&](const Rational& k) {
    MultiplierSystem ms(ms0.dimension(), k, ms0.elliptic_residues(), ms0.parabolic_angles());
    ScatteringData d = data;
    if (residue_profile(sig, ms).tau0 == 1) d.n0 = (k == 0) ? 0 : (is_integer(k) ? 1 : 2);
    return make_model(sig, ms, d);
  };

  KLimitReport rep;
  Model m0 = with_k(Rational(0));
  int tt0 = opt.tilde_tau0_override.value_or(m0.profile.tilde_tau0);
  rep.power = detail::sine_pair_exponent(m0) - m0.profile.tau0 - tt0;
  rep.lead0 = lead_term_k0(m0).magnitude.value();
  for (const auto& k : opt.ks) {
    if (k <= 0 || k >= 1) throw InputError("k values must lie in (0,1)");
    Model mk = with_k(k);
    double kd = to_double(k);
    double f = std::exp(lead_term(mk).magnitude.log_value() - rep.power * std::log(kd));
    rep.ks.push_back(kd);
    rep.scaled.push_back(f);
    rep.deviations.push_back(std::abs(f / rep.lead0 - 1.0));
  }
  const auto& f = rep.scaled;
  rep.extrapolated = (8.0 * f[2] - 6.0 * f[1] + f[0]) / 3.0;
  rep.extrapolated_deviation = std::abs(rep.extrapolated / rep.lead0 - 1.0);

  constexpr double tiny = 1e-13;
  bool shrinking = true;
  for (std::size_t i = 0; i + 1 < rep.deviations.size(); ++i) {
    double a = rep.deviations[i], b = rep.deviations[i + 1];
    if (a < tiny && b < tiny) {
      rep.observed_orders.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    double ord = (b > 0.0) ? std::log2(a / b) : std::numeric_limits<double>::infinity();
    rep.observed_orders.push_back(ord);
    if (!(ord >= 0.9)) shrinking = false;
  }
  rep.converged = shrinking && rep.extrapolated_deviation <= opt.tolerance;
  if (!shrinking) rep.note = "deviation does not decrease at least linearly in k";
  else if (!rep.converged) rep.note = "extrapolated value misses the k = 0 lead term";
  return rep;
}

}  // namespace ruelle
