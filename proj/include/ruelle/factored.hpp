#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ruelle/errors.hpp"
#include "ruelle/rational.hpp"

namespace ruelle {

struct Atom {
  enum class Kind { Prime, Pi, SinPi, Log, LValue };

  Kind kind = Kind::Pi;
  std::int64_t n = 0;   // prime base, argument of log, or s of an L-value
  Rational q{0};        // argument of sin(pi q), normalized into (0, 1/2)
  std::string tag;      // character id of an L-value

  bool operator<(const Atom& o) const {
    return std::tie(kind, n, q, tag) < std::tie(o.kind, o.n, o.q, o.tag);
  }
  bool operator==(const Atom& o) const {
    return std::tie(kind, n, q, tag) == std::tie(o.kind, o.n, o.q, o.tag);
  }

  std::string name() const {
    switch (kind) {
      case Kind::Prime: return std::to_string(n);
      case Kind::Pi: return "pi";
      case Kind::SinPi: return "sin(pi*" + to_string(q) + ")";
      case Kind::Log: return "log(" + std::to_string(n) + ")";
      case Kind::LValue: return "|L(" + std::to_string(n) + "," + tag + ")|";
    }
    return "?";
  }
};

// Positive real number written as prod atom^exponent * (numeric residue).
// Exponents are exact rationals; the residue absorbs inputs that have no exact
// form (real parabolic angles, user supplied scattering constants, ...).
class FactoredMagnitude {
 public:
  FactoredMagnitude() = default;

  static FactoredMagnitude one() { return {}; }

  static FactoredMagnitude integer(std::int64_t v) {
    if (v <= 0) throw DomainError("FactoredMagnitude::integer needs a positive value");
    FactoredMagnitude f;
    std::int64_t rest = v;
    for (std::int64_t p = 2; p * p <= rest; ++p) {
      while (rest % p == 0) {
        f.add(prime_atom(p), Rational(1));
        rest /= p;
      }
    }
    if (rest > 1) f.add(prime_atom(rest), Rational(1));
    return f;
  }

  static FactoredMagnitude rational(const Rational& v) {
    if (v <= 0) throw DomainError("FactoredMagnitude::rational needs a positive value");
    return integer(v.numerator()) / integer(v.denominator());
  }

  static FactoredMagnitude pi() {
    FactoredMagnitude f;
    f.add(Atom{Atom::Kind::Pi, 0, Rational(0), {}}, Rational(1));
    return f;
  }

  // |sin(pi q)| for non-integer q.
  static FactoredMagnitude sin_pi(const Rational& q) {
    Rational r = frac_of(q);
    if (r == 0) throw DomainError("sin(pi q) vanishes for integer q=" + ruelle::to_string(q));
    if (r > Rational(1, 2)) r = Rational(1) - r;
    if (r == Rational(1, 2)) return one();
    if (r == Rational(1, 6)) return rational(Rational(1, 2));
    if (r == Rational(1, 4)) return integer(2).pow(Rational(-1, 2));
    if (r == Rational(1, 3)) return integer(3).pow(Rational(1, 2)) / integer(2);
    FactoredMagnitude f;
    f.add(Atom{Atom::Kind::SinPi, 0, r, {}}, Rational(1));
    return f;
  }

  static FactoredMagnitude log_of(std::int64_t v) {
    if (v < 2) throw DomainError("log atom needs an integer >= 2");
    FactoredMagnitude f;
    f.add(Atom{Atom::Kind::Log, v, Rational(0), {}}, Rational(1));
    return f;
  }

  // |L(s, chi)|; the numeric value travels with the atom for evaluation.
  static FactoredMagnitude l_value(int s, const std::string& tag, double abs_value) {
    if (!(abs_value > 0)) throw DomainError("L-value atom needs a positive magnitude");
    FactoredMagnitude f;
    Atom a{Atom::Kind::LValue, s, Rational(0), tag};
    f.add(a, Rational(1));
    f.lvalues_[a] = abs_value;
    return f;
  }

  static FactoredMagnitude numeric(double v) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("numeric residue must be positive and finite");
    FactoredMagnitude f;
    f.residue_log_ = std::log(v);
    return f;
  }

  FactoredMagnitude pow(const Rational& e) const {
    FactoredMagnitude f;
    if (e == 0) return f;
    for (const auto& [a, x] : atoms_) f.atoms_[a] = x * e;
    f.lvalues_ = lvalues_;
    f.residue_log_ = residue_log_ * to_double(e);
    return f;
  }

  FactoredMagnitude inverse() const { return pow(Rational(-1)); }

  FactoredMagnitude& operator*=(const FactoredMagnitude& o) {
    for (const auto& [a, x] : o.atoms_) add(a, x);
    for (const auto& [a, v] : o.lvalues_) lvalues_[a] = v;
    residue_log_ += o.residue_log_;
    return *this;
  }
  FactoredMagnitude& operator/=(const FactoredMagnitude& o) { return *this *= o.inverse(); }

  friend FactoredMagnitude operator*(FactoredMagnitude a, const FactoredMagnitude& b) { return a *= b; }
  friend FactoredMagnitude operator/(FactoredMagnitude a, const FactoredMagnitude& b) { return a /= b; }

  double log_value() const {
    double acc = residue_log_;
    double comp = 0.0;  // Kahan compensation
    for (const auto& [a, e] : atoms_) {
      double term = to_double(e) * log_atom(a) - comp;
      double t = acc + term;
      comp = (t - acc) - term;
      acc = t;
    }
    return acc;
  }
  double value() const { return std::exp(log_value()); }

  const std::map<Atom, Rational>& atoms() const { return atoms_; }

  Rational exponent(const Atom& a) const {
    auto it = atoms_.find(a);
    return it == atoms_.end() ? Rational(0) : it->second;
  }
  Rational exponent_of_prime(std::int64_t p) const { return exponent(prime_atom(p)); }
  Rational exponent_of_pi() const { return exponent(Atom{Atom::Kind::Pi, 0, Rational(0), {}}); }

  bool has_residue() const { return residue_log_ != 0.0; }
  double residue() const { return std::exp(residue_log_); }

  bool has_lvalues() const {
    for (const auto& [a, e] : atoms_)
      if (a.kind == Atom::Kind::LValue) return true;
    return false;
  }

  // Same atoms with the same exponents; numeric residues are not compared.
  bool same_atoms(const FactoredMagnitude& o) const { return atoms_ == o.atoms_; }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, e] : atoms_) {
      if (!first) os << " * ";
      first = false;
      os << a.name();
      if (e != 1) os << "^(" << ruelle::to_string(e) << ")";
    }
    if (has_residue()) {
      if (!first) os << " * ";
      first = false;
      os.precision(17);
      os << residue();
    }
    if (first) os << "1";
    return os.str();
  }

 private:
  static Atom prime_atom(std::int64_t p) { return Atom{Atom::Kind::Prime, p, Rational(0), {}}; }

  void add(const Atom& a, const Rational& e) {
    auto [it, inserted] = atoms_.emplace(a, e);
    if (!inserted) it->second += e;
    if (it->second == 0) atoms_.erase(it);
  }

  double log_atom(const Atom& a) const {
    switch (a.kind) {
      case Atom::Kind::Prime: return std::log(static_cast<double>(a.n));
      case Atom::Kind::Pi: return std::log(std::numbers::pi);
      case Atom::Kind::SinPi: return std::log(std::sin(std::numbers::pi * to_double(a.q)));
      case Atom::Kind::Log: return std::log(std::log(static_cast<double>(a.n)));
      case Atom::Kind::LValue: return std::log(lvalues_.at(a));
    }
    return 0.0;
  }

  std::map<Atom, Rational> atoms_;
  std::map<Atom, double> lvalues_;
  double residue_log_ = 0.0;
};

// A real number given as sign times magnitude.
struct SignedMagnitude {
  int sign = 1;
  FactoredMagnitude magnitude;
  double value() const { return sign * magnitude.value(); }
};

}  // namespace ruelle
