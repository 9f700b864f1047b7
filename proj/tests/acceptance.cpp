// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any
// criterion fails, unless it is named with --expect-fail and does fail; a listed
// criterion that passes is also an error, so the list cannot go stale.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "ruelle/congruence.hpp"
#include "ruelle/lead_term.hpp"
#include "ruelle/torsion.hpp"
#include "ruelle/verification.hpp"

using namespace ruelle;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& why) {
    if (!ok) {
      if (pass) detail << "first failure: " << why << "; ";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using Clock = std::chrono::steady_clock;
const double pi = std::numbers::pi;

void c1(Outcome& o) {
  Rng rng(101);
  auto t0 = Clock::now();
  auto r = sine_product_suite(rng, 60, 100, 1e-12);
  double t = seconds_since(t0);
  o.check(r.pass, "sine identity deviation");
  o.check(t < 1.0, "runtime");
  o.detail << r.samples << " samples, worst rel " << r.worst << ", " << t << " s";
}

void c2(Outcome& o) {
  Rng rng(102);
  auto t0 = Clock::now();
  auto r = contribution_suite(rng, 10, 200, 1e-9);
  double t = seconds_since(t0);
  o.check(r.pass, "contribution deviation");
  o.check(t < 10.0, "runtime");
  o.detail << r.samples << " samples over 10 instances, worst rel " << r.worst << ", " << t << " s";
}

void c3(Outcome& o) {
  Rng rng(103);
  auto r = h_structure_suite(rng, 10, 100, 1e-10, 1e-9);
  o.check(r.pass, r.detail.empty() ? "H deviation" : r.detail);
  o.detail << r.samples << " samples, worst " << r.worst;
}

void c4(Outcome& o) {
  SeifertIndex X(0, 1, {{2, 1}});
  KitanoRep hand;
  hand.m = 2;
  hand.a = 1;
  hand.residues = {{0, 1}};
  auto h = verify_fried_kitano(X, hand);
  const auto half = FactoredMagnitude::rational(Rational(1, 2));
  o.check(h.pass && h.torsion.same_atoms(half) && h.zeta_side.same_atoms(half), "hand instance is not 1/2 on both sides");
  Rng rng(104);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto in = random_kitano(rng);
    auto rep = verify_fried_kitano(in.X, in.rep, 1e-10);
    o.check(rep.pass, "random instance " + std::to_string(i));
    worst = std::max(worst, rep.deviation);
  }
  o.detail << "hand: " << h.torsion.to_string() << " vs " << h.zeta_side.to_string() << "; 200 random, worst " << worst;
}

void c5(Outcome& o) {
  SeifertIndex X(0, 1, {{2, 1}});
  YamaguchiRep hand;
  hand.N = 1;
  hand.eta = {1};
  auto h = verify_fried_yamaguchi(X, hand);
  const auto two = FactoredMagnitude::integer(2);
  o.check(h.pass && h.torsion.same_atoms(two) && h.zeta_side.same_atoms(two), "hand instance is not 2 on both sides");
  Rng rng(105);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto in = random_yamaguchi(rng);
    auto rep = verify_fried_yamaguchi(in.X, in.rep, 1e-10);
    o.check(rep.pass, "random instance " + std::to_string(i));
    worst = std::max(worst, rep.deviation);
  }
  o.detail << "hand: " << h.torsion.to_string() << " vs " << h.zeta_side.to_string() << "; 200 random, worst " << worst;
}

void c6(Outcome& o) {
  auto r = congruence_report(1, DirichletCharacter::trivial(1)).lead;
  auto g = lead_term_k0(congruence_model(1, DirichletCharacter::trivial(1)));
  const double want = 9.0 / (pi * pi);
  o.check(r.order == -2 && g.order == -2, "order");
  o.check(std::abs(r.magnitude.value() / want - 1.0) <= 1e-12, "closed form magnitude");
  o.check(std::abs(g.magnitude.value() / want - 1.0) <= 1e-12, "generic path magnitude");
  o.detail << "ord " << r.order << ", |lead| = " << r.magnitude.to_string() << " = " << r.magnitude.value();
}

FactoredMagnitude squarefree_literal(nt::i64 N) {
  const int T = 1 << nt::prime_divisors(N).size();
  return FactoredMagnitude::pi().pow(Rational(1, 2)) / FactoredMagnitude::integer(6) *
         FactoredMagnitude::integer(N).pow(Rational(T));
}

// The product over G and over the p | N factors worked out for trivial chi.
FactoredMagnitude squarefree_recomputed(nt::i64 N) {
  const int T = 1 << nt::prime_divisors(N).size();
  FactoredMagnitude f = (FactoredMagnitude::pi().pow(Rational(1, 2)) * FactoredMagnitude::integer(N) /
                         FactoredMagnitude::integer(6))
                            .pow(Rational(T));
  for (nt::i64 p : nt::prime_divisors(N))
    f *= (FactoredMagnitude::rational(Rational(1) - Rational(1, p * p)) /
          (FactoredMagnitude::integer(2) * FactoredMagnitude::log_of(p)))
             .pow(Rational(T, 2));
  return f;
}

const std::vector<nt::i64> kSquarefree{1, 2, 3, 5, 6, 10, 15, 30};

void c7(Outcome& o) {
  for (nt::i64 N : kSquarefree) {
    auto r = congruence_report(N, DirichletCharacter::trivial(N));
    bool ok = r.an0_d1_abs.same_atoms(squarefree_literal(N));
    o.check(ok, "N=" + std::to_string(N));
    o.detail << "N=" << N << (ok ? " match" : " differs") << " (" << r.an0_d1_abs.value() << " vs "
             << squarefree_literal(N).value() << "); ";
  }
}

// Informational: the same levels against the recomputed closed form and the
// numeric determinant.
void c7_info(Outcome& o) {
  for (nt::i64 N : kSquarefree) {
    auto chi = DirichletCharacter::trivial(N);
    auto r = congruence_report(N, chi);
    o.check(r.an0_d1_abs.same_atoms(squarefree_recomputed(N)), "recomputed form N=" + std::to_string(N));
    double numeric = oracle::numeric_an0_d1(N, chi, r.n0, r.tau0);
    o.check(std::abs(std::log(numeric) - r.an0_d1_abs.log_value()) <= 1e-6, "numeric determinant N=" + std::to_string(N));
  }
  o.detail << "|a_n0 d(1)| = (sqrt(pi) N/6)^T prod_p ((1-p^-2)/(2 log p))^(T/2), T = 2^omega(N), "
              "exact in factors and within 1e-6 of the numeric scattering determinant";
}

void c8(Outcome& o) {
  auto t0 = Clock::now();
  long chars = 0, even = 0;
  for (nt::i64 N = 1; N <= 200; ++N) {
    for (const auto& chi : DirichletCharacter::all(N)) {
      ++chars;
      const nt::i64 q = chi.conductor();
      const int t = tau0_closed_form(N, q);
      o.check(t == tau0_divisor_sum(N, q) && t == tau0_enumerated(N, chi), "tau0 at " + chi.id());
      // F is only defined for the even characters of weight 0
      if (chi.parity() == 1) {
        ++even;
        o.check(scattering_set_size(N, chi) == t, "#F at " + chi.id());
      }
    }
  }
  double t = seconds_since(t0);
  o.check(t < 60.0, "runtime");
  o.detail << chars << " characters (" << even << " even, #F checked on those), " << t << " s";
}

void c9(Outcome& o) {
  int cases = 0, symbolic = 0;
  double worst = 0.0;
  std::set<int> bs;
  for (nt::i64 ell : {5, 7, 11, 13}) {
    const nt::i64 N = ell * ell;
    for (const auto& chi : DirichletCharacter::all(N)) {
      if (chi.parity() != 1) continue;
      const nt::i64 q = chi.conductor();
      const int b = q == 1 ? 0 : (q == ell ? 1 : 2);
      bs.insert(b);
      auto ps = prime_square_case(ell, b, chi);
      auto r = congruence_report(N, chi);
      ++cases;
      o.check(ps.lead.order == r.lead.order, "order at " + chi.id());
      double dev = std::abs(std::exp(ps.lead.magnitude.log_value() - r.lead.magnitude.log_value()) - 1.0);
      worst = std::max(worst, dev);
      o.check(dev <= 1e-9, "magnitude at " + chi.id());
      if (ps.lead.magnitude.same_atoms(r.lead.magnitude)) ++symbolic;
    }
  }
  o.check(bs.size() == 3, "not every b was reached");
  o.detail << cases << " characters, b in {0,1,2}, " << symbolic << " equal atom by atom, worst rel " << worst;
}

void c10(Outcome& o) {
  double z2 = l_value(2, DirichletCharacter::trivial(1)).real();
  o.check(std::abs(z2 - pi * pi / 6.0) <= 1e-12, "L(2, trivial)");
  int n = 0;
  double worst = 0.0;
  for (nt::i64 q = 3; q <= 50; ++q)
    for (const auto& c : DirichletCharacter::primitive(q))
      for (int s : {1, 2}) {
        double d = std::abs(l_value(s, c) - oracle::l_series(s, c));
        worst = std::max(worst, d);
        o.check(d <= 1e-8, c.id() + " s=" + std::to_string(s));
        ++n;
      }
  o.detail << "L(2,1) - pi^2/6 = " << z2 - pi * pi / 6.0 << "; " << n << " values, worst abs " << worst;
}

void c11(Outcome& o) {
  for (nt::i64 N = 1; N <= 500; ++N) {
    try {
      auto L = level_invariants(N);
      o.check(is_integer(L.genus_exact) && L.genus >= 0, "genus at N=" + std::to_string(N));
      if (N <= 100) o.check(12 * L.genus == oracle::twelve_genus_brute(N), "oracle at N=" + std::to_string(N));
    } catch (const std::exception& e) {
      o.check(false, e.what());
    }
  }
  o.detail << "N <= 500 integral, N <= 100 against brute-force counts";
}

void c12(Outcome& o) {
  OrbifoldSignature sig(1, 2, {3});
  MultiplierSystem ms(2, Rational(0), {{0, 1}},
                      {{Angle(), Angle(Rational(1, 3))}, {Angle(Rational(1, 4)), Angle(Rational(1, 2))}});
  ScatteringData d;
  d.phi = exponential_phi(0.2);
  d.half_trace_exponent = 0;
  d.a_n0 = 1.5;
  d.d1 = -0.75;
  auto rep = k_limit_check(sig, ms, d);
  o.check(rep.converged, rep.note);
  bool linear = rep.deviations.size() == 3 && rep.deviations[0] > rep.deviations[1] && rep.deviations[1] > rep.deviations[2];
  for (double p : rep.observed_orders) linear = linear && std::abs(p - 1.0) < 0.1;
  o.check(linear, "deviation does not shrink linearly in k");
  o.detail << "k = 1e-2, 5e-3, 2.5e-3: deviations";
  for (double x : rep.deviations) o.detail << " " << x;
  o.detail << "; observed orders";
  for (double x : rep.observed_orders) o.detail << " " << x;
  o.detail << "; extrapolated deviation " << rep.extrapolated_deviation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail, see the README");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<void(Outcome&)>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  bool ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    try {
      criteria[i](o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    if (o.pass == (expected.count(id) > 0)) ok = false;
    if (id == 7) {
      Outcome info;
      try {
        c7_info(info);
      } catch (const std::exception& e) {
        info.check(false, std::string("exception: ") + e.what());
      }
      std::printf("    info  7: %s  %s\n", info.pass ? "PASS" : "FAIL", info.detail.str().c_str());
      if (!info.pass) ok = false;
    }
  }
  if (!expected.empty()) {
    std::printf("expected failures:");
    for (int id : expected) std::printf(" %d", id);
    std::printf("\n");
  }
  std::printf("%s\n", ok ? "acceptance: OK" : "acceptance: UNEXPECTED RESULT");
  return ok ? 0 : 1;
}
