#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ruelle/core_model.hpp"
#include "ruelle/dirichlet.hpp"
#include "ruelle/factored.hpp"
#include "ruelle/functional_equation.hpp"
#include "ruelle/lead_term.hpp"
#include "ruelle/number_theory.hpp"

namespace ruelle {

// ---------------------------------------------------------------------------
// Gamma_0(N) invariants

struct LevelInvariants {
  nt::i64 N = 1;
  nt::i64 index = 1;  // [SL2(Z) : Gamma_0(N)]
  int n2 = 0;         // elliptic classes of order 2
  int n3 = 0;         // elliptic classes of order 3
  int rho = 0;
  int tau = 0;
  Rational area_over_2pi{0};
  Rational genus_exact{0};
  int genus = 0;
  std::vector<int> nus;  // 2's then 3's
};

inline nt::i64 gamma0_index(nt::i64 N) {
  nt::i64 v = N;
  for (nt::i64 p : nt::prime_divisors(N)) v = v / p * (p + 1);
  return v;
}

inline int cusp_count(nt::i64 N) {
  nt::i64 t = 1;
  for (auto [p, e] : nt::factorize(N)) t *= nt::ipow(p, e / 2) + nt::ipow(p, (e - 1) / 2);
  return static_cast<int>(t);
}

inline LevelInvariants level_invariants(nt::i64 N) {
  if (N < 1) throw InputError("level must be >= 1");
  LevelInvariants L;
  L.N = N;
  L.index = gamma0_index(N);
  if (N % 4 != 0) {
    int v = 1;
    for (nt::i64 p : nt::prime_divisors(N)) v *= 1 + nt::legendre_minus_one(p);
    L.n2 = v;
  }
  if (N % 9 != 0) {
    int v = 1;
    for (nt::i64 p : nt::prime_divisors(N)) v *= 1 + nt::legendre_minus_three(p);
    L.n3 = v;
  }
  L.rho = L.n2 + L.n3;
  L.tau = cusp_count(N);
  L.area_over_2pi = Rational(L.index, 6);
  L.nus.assign(L.n2, 2);
  L.nus.insert(L.nus.end(), L.n3, 3);
  // area/2pi = 2g - 2 + sum(1 - 1/nu) + tau
  Rational rest = L.area_over_2pi - Rational(L.n2, 2) - Rational(2 * L.n3, 3) - Rational(L.tau);
  L.genus_exact = (rest + Rational(2)) / Rational(2);
  if (!is_integer(L.genus_exact) || L.genus_exact < 0)
    throw std::logic_error("non-integral genus for N=" + std::to_string(N));
  L.genus = static_cast<int>(L.genus_exact.numerator());
  return L;
}

inline OrbifoldSignature level_signature(const LevelInvariants& L) {
  return OrbifoldSignature(L.genus, L.tau, L.nus);
}

// ---------------------------------------------------------------------------
// Cusps a/c, c | N, a mod gcd(c, N/c)

struct CuspRep {
  nt::i64 c = 1;
  nt::i64 d = 1;  // gcd(c, N/c)
  nt::i64 a = 1;  // coprime to c
};

inline std::vector<CuspRep> cusp_set(nt::i64 N) {
  std::vector<CuspRep> out;
  for (nt::i64 c : nt::divisors(N)) {
    nt::i64 d = std::gcd(c, N / c);
    for (nt::i64 a = 0; a < d; ++a) {
      if (std::gcd(a, d) != 1) continue;
      out.push_back({c, d, nt::coprime_lift(a, d, c)});
    }
  }
  return out;
}

// chi(S_{a/c}) = chi(1 - a N / gcd(c, N/c)), as a turn in [0,1).
inline Rational chi_on_parabolic(nt::i64 N, const CuspRep& cusp, const DirichletCharacter& chi) {
  if (chi.modulus() != N) throw InputError("character modulus must equal the level");
  auto t = chi.turn(1 - cusp.a * (N / cusp.d));
  if (!t) throw std::logic_error("parabolic generator entry is not a unit");
  return *t;
}

inline bool cusp_is_singular(nt::i64 N, const CuspRep& cusp, nt::i64 q) { return (N / cusp.d) % q == 0; }

inline int tau0_closed_form(nt::i64 N, nt::i64 q) {
  if (q < 1 || N % q != 0) throw InputError("conductor must divide the level");
  nt::i64 t = 1;
  for (auto [p, e] : nt::factorize(N)) {
    int eq = nt::valuation(q, p);
    if (e < 2 * eq) t *= 2 * nt::ipow(p, e - eq);
    else t *= nt::ipow(p, e / 2) + nt::ipow(p, (e - 1) / 2);
  }
  return static_cast<int>(t);
}

inline int tau0_divisor_sum(nt::i64 N, nt::i64 q) {
  if (q < 1 || N % q != 0) throw InputError("conductor must divide the level");
  nt::i64 t = 0;
  for (nt::i64 c : nt::divisors(N)) {
    nt::i64 d = std::gcd(c, N / c);
    if ((N / d) % q == 0) t += nt::euler_phi(d);
  }
  return static_cast<int>(t);
}

// Number of cusps whose generator is fixed by chi.
inline int tau0_enumerated(nt::i64 N, const DirichletCharacter& chi) {
  int t = 0;
  for (const auto& c : cusp_set(N))
    if (chi_on_parabolic(N, c, chi) == 0) ++t;
  return t;
}

// ---------------------------------------------------------------------------
// Elliptic classes from x^2+1 = 0 (order 2) and x^2-x+1 = 0 (order 3) mod N.

struct EllipticClass {
  int nu = 2;
  nt::i64 x = 0;
  Rational turn{0};  // chi(R) = exp(2 pi i turn)
  std::optional<int> alpha;  // chi(R) = exp(-2 pi i alpha / nu); empty when chi(R)^nu != 1
  bool fixed() const { return turn == 0; }
};

struct EllipticAction {
  std::vector<EllipticClass> classes;
  int tilde_tau0 = 0;
  int C1 = 0, C2 = 0, C3 = 0;
  FactoredMagnitude E;  // 2^C1 3^C2 (sqrt3/2)^{-C3}
};

inline EllipticAction elliptic_action(nt::i64 N, const DirichletCharacter& chi) {
  if (chi.modulus() != N) throw InputError("character modulus must equal the level");
  EllipticAction out;
  auto add = [&](int nu, nt::i64 x, nt::i64 lower_right) {
    EllipticClass e;
    e.nu = nu;
    e.x = x;
    e.turn = *chi.turn(lower_right);
    Rational a = -e.turn * Rational(nu);
    if (is_integer(a)) e.alpha = static_cast<int>(nt::mod(a.numerator(), nu));
    out.classes.push_back(e);
  };
  for (nt::i64 x = 0; x < N; ++x)
    if (nt::mod(x * x + 1, N) == 0) add(2, x, -x);  // [[x, -(x^2+1)/N], [N, -x]]
  for (nt::i64 x = 0; x < N; ++x)
    if (nt::mod(x * x - x + 1, N) == 0) add(3, x, 1 - x);  // [[x, -(x^2-x+1)/N], [N, 1-x]]
  for (const auto& e : out.classes) {
    if (e.fixed()) {
      ++out.tilde_tau0;
      (e.nu == 2 ? out.C1 : out.C2)++;
    } else if (e.nu == 3) {
      ++out.C3;
    }
  }
  out.E = FactoredMagnitude::integer(2).pow(Rational(out.C1)) * FactoredMagnitude::integer(3).pow(Rational(out.C2)) *
          (FactoredMagnitude::integer(3).pow(Rational(1, 2)) / FactoredMagnitude::integer(2)).pow(Rational(-out.C3));
  return out;
}

// ---------------------------------------------------------------------------
// All characters mod N with products done on exponent vectors.

class CharacterTable {
 public:
  explicit CharacterTable(nt::i64 N) : N_(N), group_(UnitGroup::get(N)) {
    chars_ = DirichletCharacter::all(N);
    for (std::size_t i = 0; i < chars_.size(); ++i) {
      index_[chars_[i].exponents()] = i;
      cond_.push_back(chars_[i].conductor());
      parity_.push_back(chars_[i].parity());
      prim_.push_back(chars_[i].primitive_part());
    }
  }

  static std::shared_ptr<const CharacterTable> get(nt::i64 N) {
    static std::mutex mu;
    static std::map<nt::i64, std::shared_ptr<const CharacterTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[N];
    if (!slot) slot = std::make_shared<const CharacterTable>(N);
    return slot;
  }

  std::size_t size() const { return chars_.size(); }
  const DirichletCharacter& at(std::size_t i) const { return chars_[i]; }
  nt::i64 conductor(std::size_t i) const { return cond_[i]; }
  int parity(std::size_t i) const { return parity_[i]; }
  const DirichletCharacter& primitive(std::size_t i) const { return prim_[i]; }

  std::size_t index_of(const DirichletCharacter& chi) const {
    if (chi.modulus() != N_) throw InputError("character modulus mismatch");
    return index_.at(chi.exponents());
  }
  std::size_t mul(std::size_t i, std::size_t j) const { return combine(i, j, +1); }
  std::size_t div(std::size_t i, std::size_t j) const { return combine(i, j, -1); }

 private:
  std::size_t combine(std::size_t i, std::size_t j, int sgn) const {
    auto a = chars_[i].exponents();
    auto b = chars_[j].exponents();
    for (std::size_t t = 0; t < a.size(); ++t) a[t] = nt::mod(a[t] + sgn * b[t], group_->orders()[t]);
    return index_.at(a);
  }

  nt::i64 N_;
  std::shared_ptr<const UnitGroup> group_;
  std::vector<DirichletCharacter> chars_;
  std::map<std::vector<nt::i64>, std::size_t> index_;
  std::vector<nt::i64> cond_;
  std::vector<int> parity_;
  std::vector<DirichletCharacter> prim_;
};

// ---------------------------------------------------------------------------
// Scattering sets F, F0 and G_{N,q}

struct ScatteringTriple {
  nt::i64 m = 1;
  DirichletCharacter xi1 = DirichletCharacter::trivial(1);
  DirichletCharacter xi2 = DirichletCharacter::trivial(1);
  DirichletCharacter psi = DirichletCharacter::trivial(1);  // (xi1 xi2)_*
  bool in_F0 = false;
  nt::i64 q1() const { return xi1.modulus(); }
  nt::i64 q2() const { return xi2.modulus(); }
};

struct ScatteringSets {
  std::vector<ScatteringTriple> F;
  int nF0 = 0;
  std::vector<nt::i64> G;
  int nF() const { return static_cast<int>(F.size()); }
};

inline std::vector<nt::i64> g_set(nt::i64 N, nt::i64 q) {
  std::vector<nt::i64> G;
  for (nt::i64 m : nt::divisors(N))
    if ((N / std::gcd(m, N / m)) % q == 0) G.push_back(m);
  return G;
}

namespace detail {
// Visits (m, index of xi1 lifted mod N, index of xi2 lifted mod N) for every member of F.
template <class Visit>
void for_each_scattering_member(nt::i64 N, const DirichletCharacter& chi, Visit&& visit) {
  auto T = CharacterTable::get(N);
  const std::size_t ic = T->index_of(chi);
  for (std::size_t z = 0; z < T->size(); ++z) {
    const nt::i64 q1 = T->conductor(z);
    // chi xi2 = xi1 on units mod N fixes xi2 = (xi1 conj chi)_*
    const std::size_t w = T->div(z, ic);
    const nt::i64 q2 = T->conductor(w);
    if (T->parity(z) != T->parity(w)) continue;
    for (nt::i64 m : nt::divisors(N / q1))
      if (m % q2 == 0) visit(m, z, w);
  }
}
}  // namespace detail

inline int scattering_set_size(nt::i64 N, const DirichletCharacter& chi) {
  int n = 0;
  detail::for_each_scattering_member(N, chi, [&](nt::i64, std::size_t, std::size_t) { ++n; });
  return n;
}

inline ScatteringSets scattering_sets(nt::i64 N, const DirichletCharacter& chi) {
  auto T = CharacterTable::get(N);
  ScatteringSets S;
  detail::for_each_scattering_member(N, chi, [&](nt::i64 m, std::size_t z, std::size_t w) {
    ScatteringTriple t;
    t.m = m;
    t.xi1 = T->primitive(z);
    t.xi2 = T->primitive(w);
    t.psi = T->primitive(T->mul(z, w));
    t.in_F0 = t.psi.modulus() == 1;
    if (t.in_F0) ++S.nF0;
    S.F.push_back(std::move(t));
  });
  std::sort(S.F.begin(), S.F.end(), [](const ScatteringTriple& a, const ScatteringTriple& b) {
    return std::make_tuple(a.m, a.xi1.id(), a.xi2.id()) < std::make_tuple(b.m, b.xi1.id(), b.xi2.id());
  });
  S.G = g_set(N, chi.conductor());
  return S;
}

// ---------------------------------------------------------------------------
// L-value atoms, shared by every path so that equal factors cancel exactly.

inline double l_value_abs_cached(int s, const DirichletCharacter& chi) {
  static std::mutex mu;
  static std::map<std::pair<int, std::string>, double> cache;
  auto key = std::make_pair(s, chi.conj_class_id());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double v = std::abs(l_value(s, chi));
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = v;
  return v;
}

// |L(2,psi)| / |L(1, conj psi)|
inline FactoredMagnitude l_ratio_atom(const DirichletCharacter& psi) {
  const std::string tag = psi.conj_class_id();
  return FactoredMagnitude::l_value(2, tag, l_value_abs_cached(2, psi)) /
         FactoredMagnitude::l_value(1, tag, l_value_abs_cached(1, psi));
}

// ---------------------------------------------------------------------------
// n0 and |a_n0 d(1)|

struct ScatteringLead {
  int n0 = 0;
  int sigma = 0;  // sum over F of #{p | m q1 : psi(p) = 1}
  int nF = 0;
  int nF0 = 0;
  FactoredMagnitude an0_d1_abs;
};

namespace detail {
// |1 - z p^{-2}| and |1 - z| for z = psi(p), a root of unity or 0.
inline FactoredMagnitude one_minus_over_p2(const std::optional<Rational>& t, nt::i64 p) {
  if (!t) return {};
  if (*t == 0) return FactoredMagnitude::rational(Rational(1) - Rational(1, p * p));
  if (*t == Rational(1, 2)) return FactoredMagnitude::rational(Rational(1) + Rational(1, p * p));
  std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * to_double(*t));
  return FactoredMagnitude::numeric(std::abs(1.0 - z / double(p * p)));
}
inline FactoredMagnitude one_minus(const Rational& t) {
  return FactoredMagnitude::integer(2) * FactoredMagnitude::sin_pi(t);
}
}  // namespace detail

inline ScatteringLead scattering_lead(nt::i64 N, const DirichletCharacter& chi, const ScatteringSets& S) {
  ScatteringLead out;
  out.nF = S.nF();
  out.nF0 = S.nF0;
  FactoredMagnitude v = FactoredMagnitude::integer(2).pow(Rational(-out.nF)) *
                        FactoredMagnitude::pi().pow(Rational(-3 * out.nF, 2)) *
                        (FactoredMagnitude::pi().pow(Rational(2)) / FactoredMagnitude::integer(3)).pow(Rational(out.nF0));
  for (nt::i64 m : S.G) {
    nt::i64 g = std::gcd(m, N / m);
    v *= FactoredMagnitude::integer(N / g).pow(Rational(nt::euler_phi(g)));
  }
  for (const auto& t : S.F) {
    const nt::i64 cond = t.psi.modulus();
    v *= FactoredMagnitude::integer(t.q1()) * FactoredMagnitude::integer(cond).pow(Rational(-1, 2));
    for (nt::i64 p : nt::prime_divisors(t.m * t.q1())) {
      std::optional<Rational> z = t.psi.turn(p);
      v *= detail::one_minus_over_p2(z, p);
      if (z && *z == 0) {
        ++out.sigma;
        v /= FactoredMagnitude::integer(2) * FactoredMagnitude::log_of(p);
      } else if (z) {
        v /= detail::one_minus(*z);
      }
    }
    if (!t.in_F0) v *= l_ratio_atom(t.psi);
  }
  out.n0 = -(out.nF - out.nF0) - out.sigma;
  out.an0_d1_abs = v;
  return out;
}

// ---------------------------------------------------------------------------
// Lead term of R(s; chi) at s = 0 for Gamma_0(N), weight 0.

struct CongruenceReport {
  nt::i64 N = 1;
  std::string character;
  nt::i64 conductor = 1;
  LevelInvariants inv;
  int tau0 = 0;
  int tilde_tau0 = 0;
  int nF = 0;
  int nF0 = 0;
  int sigma = 0;
  int n0 = 0;
  FactoredMagnitude an0_d1_abs;
  FactoredMagnitude E;
  FactoredMagnitude P;
  LeadTermResult lead;
};

inline void require_even(const DirichletCharacter& chi) {
  if (chi.parity() != 1)
    throw InputError("weight 0 on Gamma_0(N) needs an even character (chi(-1) = 1)");
}

// prod over non-singular cusps of 2|1 - chi(S_{a/c})|^{-1}
inline FactoredMagnitude parabolic_factor(nt::i64 N, const DirichletCharacter& chi) {
  FactoredMagnitude P;
  for (const auto& c : cusp_set(N)) {
    Rational t = chi_on_parabolic(N, c, chi);
    if (t != 0) P *= FactoredMagnitude::sin_pi(t).inverse();  // 2|1-e(t)|^{-1} = 1/sin(pi t)
  }
  return P;
}

inline CongruenceReport congruence_report(nt::i64 N, const DirichletCharacter& chi) {
  if (chi.modulus() != N) throw InputError("character modulus must equal the level");
  require_even(chi);
  CongruenceReport r;
  r.N = N;
  r.character = chi.id();
  r.conductor = chi.conductor();
  r.inv = level_invariants(N);
  r.tau0 = tau0_closed_form(N, r.conductor);
  EllipticAction ea = elliptic_action(N, chi);
  r.tilde_tau0 = ea.tilde_tau0;
  r.E = ea.E;
  ScatteringSets S = scattering_sets(N, chi);
  if (S.nF() != r.tau0) throw std::logic_error("#F != tau0 at N=" + std::to_string(N));
  ScatteringLead sl = scattering_lead(N, chi, S);
  r.nF = sl.nF;
  r.nF0 = sl.nF0;
  r.sigma = sl.sigma;
  r.n0 = sl.n0;
  r.an0_d1_abs = sl.an0_d1_abs;
  r.P = parabolic_factor(N, chi);
  const int e = 2 * r.inv.genus - 2 + r.inv.rho + r.inv.tau;
  r.lead.order = e - r.tau0 - r.tilde_tau0 - r.n0;
  r.lead.magnitude = r.an0_d1_abs.inverse() * FactoredMagnitude::integer(2).pow(Rational(2 * r.inv.genus - 2)) *
                     FactoredMagnitude::pi().pow(Rational(e - r.tilde_tau0) - Rational(r.tau0, 2)) * r.E * r.P;
  return r;
}

inline LeadTermResult ruelle_lead_congruence(nt::i64 N, const DirichletCharacter& chi) {
  return congruence_report(N, chi).lead;
}

// The same data as a general orbifold model (m=1, k=0), for the generic lead-term path.
inline Model congruence_model(nt::i64 N, const DirichletCharacter& chi) {
  require_even(chi);
  LevelInvariants L = level_invariants(N);
  EllipticAction ea = elliptic_action(N, chi);
  std::vector<std::vector<int>> alpha;
  for (int nu : {2, 3})
    for (const auto& e : ea.classes)
      if (e.nu == nu) alpha.push_back({e.alpha.value()});
  std::vector<std::vector<Angle>> beta;
  for (const auto& c : cusp_set(N)) beta.push_back({Angle(chi_on_parabolic(N, c, chi))});
  MultiplierSystem ms(1, Rational(0), alpha, beta);
  ScatteringSets S = scattering_sets(N, chi);
  ScatteringLead sl = scattering_lead(N, chi, S);
  ScatteringData d;
  d.n0 = sl.n0;
  d.an0_d1_abs = sl.an0_d1_abs;
  d.signs_known = false;
  if (N == 1) {
    d.phi = phi_level_one;
    d.half_trace_exponent = 1;  // phi(1/2) = -1
  }
  return make_model(level_signature(L), ms, d);
}

// ---------------------------------------------------------------------------
// N = l^2, l >= 5 prime, cond chi = l^b: closed forms specialised by hand.

struct PrimeSquareReport {
  nt::i64 ell = 5;
  int b = 0;
  int tau0 = 0;
  int rho = 0;
  Rational two_g_minus_two{0};
  int nF0 = 0;
  int sigma = 0;
  int tilde_tau0 = 0;
  FactoredMagnitude A1, A2, A3, E, P;
  LeadTermResult lead;
};

inline PrimeSquareReport prime_square_case(nt::i64 ell, int b, const DirichletCharacter& chi) {
  if (ell < 5 || !nt::is_prime(ell)) throw InputError("prime_square_case needs a prime l >= 5");
  if (b < 0 || b > 2) throw InputError("b must be 0, 1 or 2");
  const nt::i64 N = ell * ell;
  if (chi.modulus() != N) throw InputError("character must be defined mod l^2");
  if (chi.conductor() != nt::ipow(ell, b)) throw InputError("conductor of chi is not l^b");
  require_even(chi);

  PrimeSquareReport r;
  r.ell = ell;
  r.b = b;
  const nt::i64 res = ell % 12;
  r.rho = res == 1 ? 4 : (res == 11 ? 0 : 2);
  Rational shift = res == 1 ? Rational(7, 3) : res == 5 ? Rational(1) : res == 7 ? Rational(4, 3) : Rational(0);
  r.two_g_minus_two = Rational((ell - 6) * (ell + 1), 6) - shift;
  if (!is_integer(r.two_g_minus_two)) throw std::logic_error("2g-2 not integral");
  const int tgm2 = static_cast<int>(r.two_g_minus_two.numerator());
  const int tau = static_cast<int>(ell + 1);
  r.tau0 = b == 2 ? 2 : tau;
  r.nF0 = b == 0 ? 4 : (b == 1 ? 2 : 0);
  r.sigma = b == 0 ? 3 : (b == 1 ? 2 : 0);

  EllipticAction ea = elliptic_action(N, chi);
  r.tilde_tau0 = ea.tilde_tau0;
  r.E = ea.E;

  const auto fl = [&](Rational e) { return FactoredMagnitude::integer(ell).pow(e); };
  const FactoredMagnitude one_minus = FactoredMagnitude::rational(Rational(1) - Rational(1, ell * ell));
  const FactoredMagnitude two_log = FactoredMagnitude::integer(2) * FactoredMagnitude::log_of(ell);
  r.A1 = b == 2 ? fl(Rational(4)) : fl(Rational(4 + ell - 1));
  if (b == 0) r.A2 = fl(Rational(1) + Rational(ell - 3, 2)) * (one_minus / two_log).pow(Rational(3));
  else if (b == 1) r.A2 = fl(Rational(3, 2) + Rational(ell - 4, 2)) * (one_minus / two_log).pow(Rational(2));

  // A3: L-value ratios, characters mod l lifted where needed
  auto mod_l = DirichletCharacter::all(ell);
  if (b == 0) {
    for (const auto& xi : mod_l) {
      auto sq = (xi * xi).primitive_part();
      if (sq.modulus() != 1) r.A3 *= l_ratio_atom(sq);
    }
  } else {
    const DirichletCharacter chi_p = chi.primitive_part();
    r.A3 = l_ratio_atom(chi_p).pow(Rational(2));
    if (b == 1) {
      const DirichletCharacter chibar = chi_p.conj();
      for (const auto& xi : mod_l) {
        auto sq = xi * xi;
        if (sq == chibar) continue;
        r.A3 *= l_ratio_atom((chi_p * sq).primitive_part());
      }
    }
  }

  if (b == 2)
    for (nt::i64 a = 1; a < ell; ++a) r.P *= FactoredMagnitude::sin_pi(*chi.turn(1 - a * ell)).inverse();

  r.lead.order = -r.nF0 + r.sigma + tgm2 + r.rho + tau - r.tilde_tau0;
  r.lead.magnitude = FactoredMagnitude::integer(2).pow(Rational(r.tau0 + tgm2)) *
                     FactoredMagnitude::integer(3).pow(Rational(r.nF0)) *
                     FactoredMagnitude::pi().pow(Rational(r.tau0 - r.nF0 - r.sigma + r.lead.order)) *
                     (r.A1 * r.A2 * r.A3).inverse() * r.E * r.P;
  return r;
}

}  // namespace ruelle
