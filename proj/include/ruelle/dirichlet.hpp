#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/number_theory.hpp"
#include "ruelle/rational.hpp"
#include "ruelle/special_functions.hpp"

namespace ruelle {

// (Z/NZ)^x with a fixed generating set: CRT over prime powers, least primitive
// root at odd p, (-1, 5) at 2^e with e >= 3, -1 at 4.
class UnitGroup {
 public:
  explicit UnitGroup(nt::i64 N) : N_(N), lambda_(nt::carmichael(N)) {
    if (N < 1) throw InputError("modulus must be >= 1");
    for (auto [p, e] : nt::factorize(N)) {
      nt::i64 pe = nt::ipow(p, e);
      auto lift = [&](nt::i64 g) {
        // x = g mod p^e, x = 1 mod N/p^e
        nt::i64 rest = N / pe;
        for (nt::i64 x = nt::mod(g, pe); x < N; x += pe)
          if (nt::mod(x, rest) == 1 % rest) return x;
        throw std::logic_error("CRT lift failed");
      };
      if (p == 2) {
        if (e >= 2) add_gen(lift(pe - 1), 2);
        if (e >= 3) add_gen(lift(5), pe / 4);
      } else {
        add_gen(lift(nt::primitive_root(p, e)), pe / p * (p - 1));
      }
    }
    // exponent vectors of every unit
    exps_.assign(N_, {});
    std::vector<nt::i64> e(gens_.size(), 0);
    for (;;) {
      nt::i64 a = 1 % N_;
      for (std::size_t i = 0; i < gens_.size(); ++i) a = nt::mulmod(a, nt::powmod(gens_[i], e[i], N_), N_);
      exps_[a] = e;
      std::size_t i = 0;
      while (i < e.size() && ++e[i] == orders_[i]) e[i++] = 0;
      if (i == e.size()) break;
    }
  }

  nt::i64 modulus() const { return N_; }
  nt::i64 exponent() const { return lambda_; }
  const std::vector<nt::i64>& generators() const { return gens_; }
  const std::vector<nt::i64>& orders() const { return orders_; }
  bool is_unit(nt::i64 a) const { return std::gcd(nt::mod(a, N_), N_) == 1; }
  const std::vector<nt::i64>& exponents_of(nt::i64 a) const { return exps_.at(nt::mod(a, N_)); }

  static std::shared_ptr<const UnitGroup> get(nt::i64 N) {
    static std::mutex mu;
    static std::map<nt::i64, std::shared_ptr<const UnitGroup>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[N];
    if (!slot) slot = std::make_shared<const UnitGroup>(N);
    return slot;
  }

 private:
  void add_gen(nt::i64 g, nt::i64 ord) {
    gens_.push_back(g);
    orders_.push_back(ord);
  }

  nt::i64 N_;
  nt::i64 lambda_;
  std::vector<nt::i64> gens_;
  std::vector<nt::i64> orders_;
  std::vector<std::vector<nt::i64>> exps_;
};

// A Dirichlet character mod N; values are exp(2 pi i v / lambda(N)) with the
// integer v stored per residue (-1 off the units).
class DirichletCharacter {
 public:
  static DirichletCharacter from_exponents(nt::i64 N, const std::vector<nt::i64>& k) {
    auto G = UnitGroup::get(N);
    if (k.size() != G->generators().size())
      throw InputError("character mod " + std::to_string(N) + " needs " + std::to_string(G->generators().size()) +
                       " exponents");
    DirichletCharacter c(G);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] < 0 || k[i] >= G->orders()[i])
        throw InputError("character exponent " + std::to_string(i) + " must lie in 0.." +
                         std::to_string(G->orders()[i] - 1));
    const nt::i64 L = G->exponent();
    for (nt::i64 a = 0; a < N; ++a) {
      if (!G->is_unit(a)) continue;
      const auto& e = G->exponents_of(a);
      nt::i64 v = 0;
      for (std::size_t i = 0; i < k.size(); ++i) v += k[i] * e[i] * (L / G->orders()[i]);
      c.table_[a] = nt::mod(v, L);
    }
    return c;
  }

  static DirichletCharacter trivial(nt::i64 N) {
    return from_exponents(N, std::vector<nt::i64>(UnitGroup::get(N)->generators().size(), 0));
  }

  // Built from a function giving the value at each unit as a turn in [0,1).
  template <class F>
  static DirichletCharacter from_turns(nt::i64 N, F&& turn) {
    auto G = UnitGroup::get(N);
    DirichletCharacter c(G);
    const nt::i64 L = G->exponent();
    for (nt::i64 a = 0; a < N; ++a) {
      if (!G->is_unit(a)) continue;
      Rational t = frac_of(turn(a)) * Rational(L);
      if (!is_integer(t)) throw std::logic_error("value is not a lambda(N)-th root of unity");
      c.table_[a] = t.numerator();
    }
    return c;
  }

  static std::vector<DirichletCharacter> all(nt::i64 N) {
    auto G = UnitGroup::get(N);
    std::vector<DirichletCharacter> out;
    std::vector<nt::i64> k(G->generators().size(), 0);
    for (;;) {
      out.push_back(from_exponents(N, k));
      std::size_t i = 0;
      while (i < k.size() && ++k[i] == G->orders()[i]) k[i++] = 0;
      if (i == k.size()) break;
    }
    return out;
  }

  static std::vector<DirichletCharacter> primitive(nt::i64 q) {
    std::vector<DirichletCharacter> out;
    for (auto& c : all(q))
      if (c.conductor() == q) out.push_back(std::move(c));
    return out;
  }

  nt::i64 modulus() const { return group_->modulus(); }
  nt::i64 lambda() const { return group_->exponent(); }

  // exponent of the value in units of 1/lambda(N); nullopt off the units
  std::optional<nt::i64> index(nt::i64 a) const {
    nt::i64 v = table_[nt::mod(a, modulus())];
    if (v < 0) return std::nullopt;
    return v;
  }
  std::optional<Rational> turn(nt::i64 a) const {
    auto v = index(a);
    if (!v) return std::nullopt;
    return Rational(*v, lambda());
  }
  bool is_one_at(nt::i64 a) const {
    auto v = index(a);
    return v && *v == 0;
  }
  std::complex<double> operator()(nt::i64 a) const {
    auto v = index(a);
    if (!v) return 0.0;
    double th = 2.0 * std::numbers::pi * double(*v) / double(lambda());
    return {std::cos(th), std::sin(th)};
  }

  std::vector<nt::i64> exponents() const {
    std::vector<nt::i64> k;
    const auto& g = group_->generators();
    for (std::size_t i = 0; i < g.size(); ++i) k.push_back(table_[g[i]] * group_->orders()[i] / lambda());
    return k;
  }

  bool is_trivial() const {
    for (auto v : table_)
      if (v > 0) return false;
    return true;
  }
  int parity() const { return is_one_at(modulus() - 1) ? 1 : -1; }

  nt::i64 conductor() const {
    if (conductor_) return *conductor_;
    const nt::i64 N = modulus();
    for (nt::i64 q : nt::divisors(N)) {
      bool ok = true;
      for (nt::i64 a = 1; a < N && ok; a += q)
        if (group_->is_unit(a) && !is_one_at(a)) ok = false;
      if (ok) {
        conductor_ = q;
        return q;
      }
    }
    conductor_ = N;
    return N;
  }

  // The primitive character inducing this one.
  DirichletCharacter primitive_part() const {
    const nt::i64 q = conductor(), N = modulus();
    auto L = lambda();
    return from_turns(q, [&](nt::i64 b) {
      for (nt::i64 a = b; a < b + N * q + 1; a += q)
        if (group_->is_unit(a)) return Rational(*index(a), L);
      throw std::logic_error("no unit lift");
    });
  }

  // Same character viewed mod M (N | M).
  DirichletCharacter induced(nt::i64 M) const {
    if (M % modulus() != 0) throw InputError("induced modulus must be a multiple of the modulus");
    return from_turns(M, [&](nt::i64 a) { return *turn(a); });
  }

  DirichletCharacter conj() const {
    return from_turns(modulus(), [&](nt::i64 a) { return -*turn(a); });
  }

  friend DirichletCharacter operator*(const DirichletCharacter& x, const DirichletCharacter& y) {
    nt::i64 M = std::lcm(x.modulus(), y.modulus());
    return from_turns(M, [&](nt::i64 a) { return *x.turn(a) + *y.turn(a); });
  }

  bool operator==(const DirichletCharacter& o) const {
    return modulus() == o.modulus() && table_ == o.table_;
  }

  // "N:[k1,k2,...]" in the canonical generator order.
  std::string id() const {
    std::string s = std::to_string(modulus()) + ":[";
    auto k = exponents();
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + "]";
  }

  // Shared by chi and its conjugate; |L(s,chi)| = |L(s,conj chi)| for real s.
  std::string conj_class_id() const {
    std::string a = id(), b = conj().id();
    return a < b ? a : b;
  }

 private:
  explicit DirichletCharacter(std::shared_ptr<const UnitGroup> g)
      : group_(std::move(g)), table_(group_->modulus(), -1) {}

  std::shared_ptr<const UnitGroup> group_;
  std::vector<nt::i64> table_;
  mutable std::optional<nt::i64> conductor_;
};

// L(s, chi) for primitive chi and s in {1, 2}: Hurwitz zeta at s=2, digamma at s=1.
inline std::complex<double> l_value(int s, const DirichletCharacter& chi) {
  const nt::i64 f = chi.modulus();
  if (chi.conductor() != f) throw InputError("l_value needs a primitive character");
  if (s == 1 && chi.is_trivial()) throw PoleAt({1.0, 0.0}, "L(s, trivial) has a pole at s=1");
  if (s != 1 && s != 2) throw InputError("l_value supports s = 1 and s = 2 only");
  detail::KahanSum<std::complex<double>> acc;
  for (nt::i64 a = 1; a <= f; ++a) {
    if (!chi.index(a)) continue;
    double x = double(a) / double(f);
    acc.add(chi(a) * (s == 2 ? hurwitz_zeta(2.0, x) : digamma(x)));
  }
  return s == 2 ? acc.sum / double(f * f) : -acc.sum / double(f);
}

}  // namespace ruelle
