#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/factored.hpp"
#include "ruelle/rational.hpp"

namespace ruelle {

class OrbifoldSignature {
 public:
  OrbifoldSignature(int genus, int cusps, std::vector<int> elliptic_orders)
      : genus_(genus), cusps_(cusps), nus_(std::move(elliptic_orders)) {
    if (genus_ < 0) throw InputError("genus must be >= 0");
    if (cusps_ < 0) throw InputError("cusp count must be >= 0");
    for (int nu : nus_)
      if (nu < 2) throw InputError("elliptic orders must be >= 2");
    if (area_over_2pi() <= 0)
      throw NonHyperbolic("2g-2+sum(1-1/nu)+tau = " + to_string(area_over_2pi()) + " is not positive");
  }

  int genus() const { return genus_; }
  int cusps() const { return cusps_; }
  int rho() const { return static_cast<int>(nus_.size()); }
  const std::vector<int>& elliptic_orders() const { return nus_; }
  bool compact() const { return cusps_ == 0; }

  // omega / 2pi = 2g - 2 + sum(1 - 1/nu_j) + tau, exactly.
  Rational area_over_2pi() const {
    Rational v(2 * genus_ - 2 + cusps_);
    for (int nu : nus_) v += Rational(nu - 1, nu);
    return v;
  }

  std::int64_t lcm_orders() const {
    std::int64_t l = 1;
    for (int nu : nus_) l = lcm(l, nu);
    return l;
  }

 private:
  int genus_;
  int cusps_;
  std::vector<int> nus_;
};

inline double hyperbolic_area(const OrbifoldSignature& sig) {
  return 2.0 * std::numbers::pi * to_double(sig.area_over_2pi());
}

// A number in [0,1) or a sum of such, exact when possible.
class Angle {
 public:
  Angle() : exact_(Rational(0)), value_(0.0) {}
  Angle(const Rational& q) : exact_(q), value_(to_double(q)) {}  // NOLINT(implicit)
  static Angle real(double v) {
    Angle a;
    a.exact_.reset();
    a.value_ = v;
    return a;
  }

  bool is_exact() const { return exact_.has_value(); }
  const std::optional<Rational>& exact() const { return exact_; }
  double value() const { return value_; }
  bool is_zero() const { return exact_ ? *exact_ == 0 : value_ == 0.0; }

  // |sin(pi * this)|
  FactoredMagnitude sin_pi_magnitude() const {
    if (exact_) return FactoredMagnitude::sin_pi(*exact_);
    return FactoredMagnitude::numeric(std::abs(std::sin(std::numbers::pi * value_)));
  }

  friend Angle operator+(const Angle& a, const Angle& b) {
    if (a.exact_ && b.exact_) return Angle(*a.exact_ + *b.exact_);
    return real(a.value_ + b.value_);
  }

  std::string to_string() const {
    if (exact_) return ruelle::to_string(*exact_);
    return std::to_string(value_);
  }

 private:
  std::optional<Rational> exact_;
  double value_;
};

// Eigenvalue-level description of a multiplier system: on the j-th elliptic
// generator the eigenvalues are exp(-2 pi i (k + alpha_jp) / nu_j), on the j-th
// parabolic generator exp(2 pi i beta_jp), zeros listed first.
class MultiplierSystem {
 public:
  MultiplierSystem(int dimension, Rational k, std::vector<std::vector<int>> elliptic_residues,
                   std::vector<std::vector<Angle>> parabolic_angles)
      : m_(dimension), k_(k), alpha_(std::move(elliptic_residues)), beta_(std::move(parabolic_angles)) {
    if (m_ < 1) throw InputError("dimension must be >= 1");
    for (std::size_t j = 0; j < alpha_.size(); ++j)
      if (static_cast<int>(alpha_[j].size()) != m_)
        throw InputError("elliptic_residues[" + std::to_string(j) + "] must have exactly m entries");
    for (std::size_t j = 0; j < beta_.size(); ++j) {
      const auto& b = beta_[j];
      if (static_cast<int>(b.size()) != m_)
        throw InputError("parabolic_angles[" + std::to_string(j) + "] must have exactly m entries");
      bool seen_nonzero = false;
      for (const auto& x : b) {
        if (x.value() < 0.0 || x.value() >= 1.0 || (x.is_exact() && (*x.exact() < 0 || *x.exact() >= 1)))
          throw InputError("parabolic_angles[" + std::to_string(j) + "] entries must lie in [0,1)");
        if (x.is_zero() && seen_nonzero)
          throw InputError("parabolic_angles[" + std::to_string(j) + "] must list zeros first");
        if (!x.is_zero()) seen_nonzero = true;
      }
    }
  }

  int dimension() const { return m_; }
  const Rational& k() const { return k_; }
  const std::vector<std::vector<int>>& elliptic_residues() const { return alpha_; }
  const std::vector<std::vector<Angle>>& parabolic_angles() const { return beta_; }

  // alpha -> (nu - alpha) mod nu together with k -> -k.
  MultiplierSystem conjugate(const OrbifoldSignature& sig) const {
    auto a = alpha_;
    for (std::size_t j = 0; j < a.size(); ++j) {
      int nu = sig.elliptic_orders().at(j);
      for (int& x : a[j]) x = (nu - x) % nu;
    }
    return MultiplierSystem(m_, -k_, a, beta_);
  }

 private:
  int m_;
  Rational k_;
  std::vector<std::vector<int>> alpha_;
  std::vector<std::vector<Angle>> beta_;
};

struct EllipticProfile {
  int nu = 2;
  std::vector<int> r;            // r[l] for l = 0..nu-1; periodic
  std::vector<int> alpha_sum;    // alpha_j(l)
  std::vector<int> alpha_tilde;  // tilde alpha_j(l)

  static int mod(int l, int nu) { return ((l % nu) + nu) % nu; }
  int r_at(int l) const { return r[mod(l, nu)]; }
  int alpha_at(int l) const { return alpha_sum[mod(l, nu)]; }
  int alpha_tilde_at(int l) const { return alpha_tilde[mod(l, nu)]; }
};

struct CombinatorialProfile {
  int tau0 = 0;
  int tilde_tau0 = 0;
  std::vector<Angle> beta_sums;
  std::vector<EllipticProfile> elliptic;
};

inline void check_consistent(const OrbifoldSignature& sig, const MultiplierSystem& ms) {
  if (static_cast<int>(ms.elliptic_residues().size()) != sig.rho())
    throw InputError("elliptic_residues must have one entry per elliptic class (rho=" +
                     std::to_string(sig.rho()) + ")");
  if (static_cast<int>(ms.parabolic_angles().size()) != sig.cusps())
    throw InputError("parabolic_angles must have one entry per cusp (tau=" + std::to_string(sig.cusps()) + ")");
  for (int j = 0; j < sig.rho(); ++j) {
    int nu = sig.elliptic_orders()[j];
    for (int a : ms.elliptic_residues()[j])
      if (a < 0 || a >= nu)
        throw InputError("elliptic_residues[" + std::to_string(j) + "] entries must lie in 0.." +
                         std::to_string(nu - 1));
  }
}

inline CombinatorialProfile residue_profile(const OrbifoldSignature& sig, const MultiplierSystem& ms) {
  check_consistent(sig, ms);
  CombinatorialProfile pr;
  for (const auto& b : ms.parabolic_angles()) {
    Angle sum;
    for (const auto& x : b) {
      if (x.is_zero()) ++pr.tau0;
      sum = sum + x;
    }
    pr.beta_sums.push_back(sum);
  }
  for (int j = 0; j < sig.rho(); ++j) {
    EllipticProfile e;
    e.nu = sig.elliptic_orders()[j];
    e.r.assign(e.nu, 0);
    e.alpha_sum.assign(e.nu, 0);
    e.alpha_tilde.assign(e.nu, 0);
    for (int l = 0; l < e.nu; ++l) {
      for (int a : ms.elliptic_residues()[j]) {
        if ((a + l) % e.nu == 0) ++e.r[l];
        e.alpha_sum[l] += (a + l) % e.nu;
        e.alpha_tilde[l] += EllipticProfile::mod(l - a, e.nu);
      }
    }
    pr.elliptic.push_back(std::move(e));
  }
  if (is_integer(ms.k())) {
    int k = static_cast<int>(ms.k().numerator());
    for (const auto& e : pr.elliptic) pr.tilde_tau0 += e.r_at(k);
  }
  return pr;
}

// k in (1/m)(2pi/omega)(1/lcm nu) Z when tau = 0; always true otherwise.
inline bool admissibility_check(const OrbifoldSignature& sig, int m, const Rational& k) {
  if (!sig.compact()) return true;
  if (m < 1) throw InputError("dimension must be >= 1");
  Rational scaled = k * Rational(m) * sig.area_over_2pi() * Rational(sig.lcm_orders());
  return is_integer(scaled);
}

}  // namespace ruelle
