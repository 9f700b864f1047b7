#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "ruelle/core_model.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/factored.hpp"
#include "ruelle/functional_equation.hpp"
#include "ruelle/lead_term.hpp"

namespace ruelle {

struct SeifertFiber {
  int nu = 2;
  int beta = 1;
  int mu = 1;     // 0 < mu < nu
  int alpha = 0;  // alpha nu - beta mu = -1
};

// Index {b, (o,g); (nu_1,beta_1), ...}.
class SeifertIndex {
 public:
  SeifertIndex(int b, int genus, const std::vector<std::pair<int, int>>& fibers) : b_(b), genus_(genus) {
    if (genus_ < 1) throw InputError("Seifert index needs genus >= 1");
    for (std::size_t j = 0; j < fibers.size(); ++j) {
      auto [nu, beta] = fibers[j];
      if (nu < 2) throw InputError("fiber " + std::to_string(j) + ": nu must be >= 2");
      if (std::gcd(nu, beta) != 1) throw InputError("fiber " + std::to_string(j) + ": gcd(nu, beta) must be 1");
      fibers_.push_back(solve(nu, beta));
    }
  }

  // Fibers (nu, nu-1) with b = 2-2g, the family of the higher torsion.
  static SeifertIndex standard(int genus, const std::vector<int>& nus) {
    std::vector<std::pair<int, int>> f;
    for (int nu : nus) f.emplace_back(nu, nu - 1);
    return SeifertIndex(2 - 2 * genus, genus, f);
  }

  int b() const { return b_; }
  int genus() const { return genus_; }
  int rho() const { return static_cast<int>(fibers_.size()); }
  const std::vector<SeifertFiber>& fibers() const { return fibers_; }
  std::vector<int> orders() const {
    std::vector<int> v;
    for (const auto& f : fibers_) v.push_back(f.nu);
    return v;
  }

 private:
  static SeifertFiber solve(int nu, int beta) {
    // beta mu = 1 mod nu by extended Euclid, then alpha = (beta mu - 1) / nu.
    long long r0 = ((beta % nu) + nu) % nu, r1 = nu, s0 = 1, s1 = 0;
    while (r1 != 0) {
      long long q = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    long long mu = ((s0 % nu) + nu) % nu;
    if (nu == 1 || mu == 0) mu = nu;  // unreachable for nu >= 2 and coprime beta
    long long num = static_cast<long long>(beta) * mu - 1;
    SeifertFiber f{nu, beta, static_cast<int>(mu), static_cast<int>(num / nu)};
    if (f.alpha * nu - beta * f.mu != -1) throw std::logic_error("Seifert invariant solve failed");
    return f;
  }

  int b_;
  int genus_;
  std::vector<SeifertFiber> fibers_;
};

struct KitanoRep {
  int m = 2;
  int a = 1;  // lambda = exp(2 pi i a/m)
  std::vector<std::vector<int>> residues;  // alpha_jp in 0..nu_j-1

  Rational k() const { return Rational(a, m); }

  void validate(const SeifertIndex& X) const {
    if (m < 2) throw InputError("Kitano representation needs m >= 2");
    if (std::gcd(a, m) != 1) throw InputError("Kitano representation needs gcd(a, m) = 1");
    if (a % m == 0) throw InputError("lambda = 1: the representation is not acyclic");
    if (static_cast<int>(residues.size()) != X.rho())
      throw InputError("Kitano residues need one list per exceptional fiber");
    for (int j = 0; j < X.rho(); ++j) {
      if (static_cast<int>(residues[j].size()) != m)
        throw InputError("Kitano residues[" + std::to_string(j) + "] must have m entries");
      for (int x : residues[j])
        if (x < 0 || x >= X.fibers()[j].nu)
          throw InputError("Kitano residues[" + std::to_string(j) + "] entries must lie in 0..nu-1");
    }
  }
};

struct YamaguchiRep {
  int N = 1;
  std::vector<int> eta;  // odd, coprime to nu_j

  void validate(const SeifertIndex& X) const {
    if (N < 1) throw InputError("Yamaguchi representation needs N >= 1");
    if (static_cast<int>(eta.size()) != X.rho()) throw InputError("Yamaguchi eta needs one entry per fiber");
    for (int j = 0; j < X.rho(); ++j) {
      int e = eta[j];
      if (e % 2 == 0) throw InputError("eta[" + std::to_string(j) + "] must be odd");
      if (std::gcd(e, X.fibers()[j].nu) != 1) throw InputError("eta[" + std::to_string(j) + "] must be coprime to nu");
    }
  }
};

inline void require_exceptional_fibers(const SeifertIndex& X) {
  if (X.rho() < 1) throw InputError("at least one exceptional fiber is required");
}

// |tau| = 2^{m(2-2g-rho)} |sin k pi|^{m(2-2g-rho)} prod_j prod_p 2|sin(pi(k+alpha_jp)/nu_j)|
inline FactoredMagnitude kitano_torsion_abs(const SeifertIndex& X, const KitanoRep& rep) {
  require_exceptional_fibers(X);
  rep.validate(X);
  const Rational k = rep.k();
  const Rational e(rep.m * (2 - 2 * X.genus() - X.rho()));
  FactoredMagnitude t = FactoredMagnitude::integer(2).pow(e) * FactoredMagnitude::sin_pi(k).pow(e);
  for (int j = 0; j < X.rho(); ++j)
    for (int x : rep.residues[j])
      t *= FactoredMagnitude::integer(2) * FactoredMagnitude::sin_pi((k + Rational(x)) / Rational(X.fibers()[j].nu));
  return t;
}

// (lambda-1)^{m(2-2g-rho)} prod_j prod_p (lambda^{alpha_j} e_jp^{mu_j} - 1), with
// e_jp the eigenvalues of the image of q_j.
inline std::complex<double> kitano_torsion_complex(const SeifertIndex& X, const KitanoRep& rep) {
  require_exceptional_fibers(X);
  rep.validate(X);
  constexpr double pi = std::numbers::pi;
  const std::complex<double> I(0.0, 1.0);
  const double k = to_double(rep.k());
  auto lambda_pow = [&](long long n) { return std::exp(2.0 * pi * I * (double(rep.a) * double(n) / rep.m)); };
  std::complex<double> t = ProductForm::ipow(lambda_pow(1) - 1.0, rep.m * (2 - 2 * X.genus() - X.rho()));
  for (int j = 0; j < X.rho(); ++j) {
    const auto& f = X.fibers()[j];
    for (int x : rep.residues[j]) {
      // q_j = s_j^{beta_j} in the group, so e_jp is the core eigenvalue to the power beta_j.
      std::complex<double> core = std::exp(-2.0 * pi * I * ((k + x) / f.nu));
      std::complex<double> e = std::pow(core, f.beta);
      t *= lambda_pow(f.alpha) * std::pow(e, f.mu) - 1.0;
    }
  }
  return t;
}

// 2^{-2N(2-2g-rho)} prod_j prod_{i=1}^N (2 sin(pi(2i-1)eta_j/(2nu_j)))^{-2}
inline FactoredMagnitude yamaguchi_torsion(const SeifertIndex& X, const YamaguchiRep& rep) {
  require_exceptional_fibers(X);
  rep.validate(X);
  FactoredMagnitude t = FactoredMagnitude::integer(2).pow(Rational(-2 * rep.N * (2 - 2 * X.genus() - X.rho())));
  for (int j = 0; j < X.rho(); ++j)
    for (int i = 1; i <= rep.N; ++i) {
      Rational q((2 * i - 1) * rep.eta[j], 2 * X.fibers()[j].nu);
      t *= (FactoredMagnitude::integer(2) * FactoredMagnitude::sin_pi(q)).pow(Rational(-2));
    }
  return t;
}

inline MultiplierSystem kitano_multiplier(const KitanoRep& rep, const SeifertIndex& X) {
  rep.validate(X);
  return MultiplierSystem(rep.m, rep.k(), rep.residues, {});
}

// S_2N(j) = {(+-(2l-1) eta_j - 1)/2 : l = 1..N} reduced mod nu_j; weight 1.
inline MultiplierSystem yamaguchi_multiplier(const YamaguchiRep& rep, const SeifertIndex& X) {
  rep.validate(X);
  std::vector<std::vector<int>> res;
  for (int j = 0; j < X.rho(); ++j) {
    const int nu = X.fibers()[j].nu;
    std::vector<int> r;
    for (int l = 1; l <= rep.N; ++l)
      for (int sgn : {+1, -1}) {
        int x = (sgn * (2 * l - 1) * rep.eta[j] - 1) / 2;  // exact: the numerator is even
        r.push_back(((x % nu) + nu) % nu);
      }
    res.push_back(std::move(r));
  }
  return MultiplierSystem(2 * rep.N, Rational(1, 2), res, {});
}

struct FriedReport {
  FactoredMagnitude torsion;
  FactoredMagnitude zeta_side;  // |R(0)|^{-1} (Kitano) or |R(0)| (Yamaguchi)
  double torsion_value = 0.0;
  double zeta_value = 0.0;
  double deviation = 0.0;
  int order = 0;
  double tolerance = 1e-10;
  bool pass = false;
};

namespace detail {
inline FriedReport finish_fried(FactoredMagnitude torsion, FactoredMagnitude zeta, int order, double tol) {
  FriedReport r;
  r.torsion = std::move(torsion);
  r.zeta_side = std::move(zeta);
  r.torsion_value = r.torsion.value();
  r.zeta_value = r.zeta_side.value();
  r.deviation = std::abs(r.zeta_value / r.torsion_value - 1.0);
  r.order = order;
  r.tolerance = tol;
  r.pass = order == 0 && r.deviation <= tol;
  return r;
}
}  // namespace detail

// zeta_rep lets a caller feed a different representation to the zeta side
// (negative controls); by default both sides use rep.
inline FriedReport verify_fried_kitano(const SeifertIndex& X, const KitanoRep& rep, double tol = 1e-10,
                                       const KitanoRep* zeta_rep = nullptr) {
  FactoredMagnitude torsion = kitano_torsion_abs(X, rep);
  OrbifoldSignature sig(X.genus(), 0, X.orders());
  Model md = make_model(sig, kitano_multiplier(zeta_rep ? *zeta_rep : rep, X), ScatteringData::compact());
  LeadTermResult lead = lead_term(md);
  return detail::finish_fried(torsion, lead.magnitude.inverse(), lead.order, tol);
}

inline FriedReport verify_fried_yamaguchi(const SeifertIndex& X, const YamaguchiRep& rep, double tol = 1e-10,
                                          const MultiplierSystem* zeta_ms = nullptr) {
  FactoredMagnitude torsion = yamaguchi_torsion(X, rep);
  OrbifoldSignature sig(X.genus(), 0, X.orders());
  Model md = make_model(sig, zeta_ms ? *zeta_ms : yamaguchi_multiplier(rep, X), ScatteringData::compact());
  LeadTermResult lead = lead_term(md);
  return detail::finish_fried(torsion, lead.magnitude, lead.order, tol);
}

}  // namespace ruelle
