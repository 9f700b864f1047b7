#include <gtest/gtest.h>

#include <cmath>
#include <array>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "ruelle/congruence.hpp"

using namespace ruelle;
using namespace ruelle::oracle;
using std::numbers::pi;

namespace {

std::vector<DirichletCharacter> even_characters(nt::i64 N) {
  std::vector<DirichletCharacter> out;
  for (auto& c : DirichletCharacter::all(N))
    if (c.parity() == 1) out.push_back(c);
  return out;
}

}  // namespace

TEST(Characters, CountsOrthogonalityAndParity) {
  for (nt::i64 N = 1; N <= 60; ++N) {
    auto all = DirichletCharacter::all(N);
    EXPECT_EQ(nt::i64(all.size()), nt::euler_phi(N));
    for (const auto& c : all) {
      std::complex<double> sum = 0.0;
      for (nt::i64 a = 0; a < N; ++a) sum += c(a);
      EXPECT_LT(std::abs(sum - (c.is_trivial() ? double(nt::euler_phi(N)) : 0.0)), 1e-9);
      EXPECT_LT(std::abs(c(N - 1) - double(c.parity())), 1e-12);
      EXPECT_EQ(c.primitive_part().induced(N), c);
      EXPECT_EQ(c.primitive_part().conductor(), c.conductor());
    }
    for (nt::i64 a = 2; a < N; ++a) {
      if (std::gcd(a, N) != 1) continue;
      std::complex<double> sum = 0.0;
      for (const auto& c : all) sum += c(a);
      EXPECT_LT(std::abs(sum), 1e-9);
    }
  }
}

TEST(Characters, PrimitiveCountIsMoebiusConvolution) {
  for (nt::i64 q = 1; q <= 120; ++q) {
    nt::i64 expect = 0;
    for (nt::i64 d : nt::divisors(q)) expect += moebius(d) * nt::euler_phi(q / d);
    EXPECT_EQ(nt::i64(DirichletCharacter::primitive(q).size()), expect) << q;
  }
}

TEST(LValues, KnownValues) {
  EXPECT_NEAR(l_value(2, DirichletCharacter::trivial(1)).real(), pi * pi / 6.0, 1e-14);
  DirichletCharacter quad = DirichletCharacter::from_exponents(5, {2});
  EXPECT_NEAR(l_value(1, quad).real(), 2.0 * std::log((1.0 + std::sqrt(5.0)) / 2.0) / std::sqrt(5.0), 1e-13);
  // Catalan's constant
  DirichletCharacter m4 = DirichletCharacter::from_exponents(4, {1});
  EXPECT_NEAR(l_value(2, m4).real(), 0.91596559417721901505, 1e-14);
  EXPECT_NEAR(l_value(1, m4).real(), pi / 4.0, 1e-14);
  EXPECT_THROW(l_value(1, DirichletCharacter::trivial(1)), PoleAt);
  EXPECT_THROW(l_value(2, DirichletCharacter::trivial(4)), InputError);
}

TEST(LValues, AgainstDirectSeriesForEveryPrimitiveCharacter) {
  for (nt::i64 q = 3; q <= 50; ++q)
    for (const auto& c : DirichletCharacter::primitive(q))
      for (int s : {1, 2}) EXPECT_LT(std::abs(l_value(s, c) - l_series(s, c)), 1e-10) << c.id() << " s=" << s;
}

TEST(Level, GenusAgainstBruteForce) {
  for (nt::i64 N = 1; N <= 100; ++N) {
    auto L = level_invariants(N);
    int e2 = 0, e3 = 0;
    for (nt::i64 x = 0; x < N; ++x) {
      e2 += nt::mod(x * x + 1, N) == 0;
      e3 += nt::mod(x * x + x + 1, N) == 0;
    }
    EXPECT_EQ(L.n2, e2);
    EXPECT_EQ(L.n3, e3);
    EXPECT_EQ(12 * L.genus, twelve_genus_brute(N)) << N;
  }
  for (nt::i64 N = 101; N <= 500; ++N) EXPECT_NO_THROW(level_invariants(N));
  EXPECT_EQ(level_invariants(11).genus, 1);
  EXPECT_EQ(level_invariants(37).genus, 2);
  EXPECT_THROW(level_invariants(0), InputError);
}

TEST(Level, TauZeroThreeWaysAndSizeOfF) {
  for (nt::i64 N = 1; N <= 200; ++N)
    for (const auto& chi : even_characters(N)) {
      const nt::i64 q = chi.conductor();
      const int t = tau0_closed_form(N, q);
      EXPECT_EQ(t, tau0_divisor_sum(N, q));
      EXPECT_EQ(t, tau0_enumerated(N, chi)) << chi.id();
      EXPECT_EQ(scattering_set_size(N, chi), t) << chi.id();
    }
  EXPECT_EQ(tau0_closed_form(30, 1), 8);
  EXPECT_THROW(tau0_closed_form(10, 3), InputError);
}

// Elliptic stabilisers written out as matrices and checked by hand: each lies in
// Gamma_0(N), has the right trace, and chi reads off its lower-right entry.
TEST(Elliptic, StabilisersAndFixedCounts) {
  for (nt::i64 N = 1; N <= 150; ++N) {
    auto L = level_invariants(N);
    for (const auto& chi : even_characters(N)) {
      auto ea = elliptic_action(N, chi);
      int n2 = 0, n3 = 0, fixed = 0;
      for (const auto& e : ea.classes) {
        nt::i64 a = e.x, c = N;
        nt::i64 d = e.nu == 2 ? -e.x : 1 - e.x;
        nt::i64 b = e.nu == 2 ? -(e.x * e.x + 1) / N : -(e.x * e.x - e.x + 1) / N;
        EXPECT_EQ(a * d - b * c, 1);
        EXPECT_EQ(a + d, e.nu == 2 ? 0 : 1);
        (e.nu == 2 ? n2 : n3)++;
        EXPECT_EQ(e.turn, *chi.turn(d));
        // chi(R) is a nu-th root of unity because chi is even and R^nu = -1
        EXPECT_TRUE(e.alpha.has_value());
        fixed += std::abs(chi(d) - 1.0) < 1e-12;
      }
      EXPECT_EQ(n2, L.n2);
      EXPECT_EQ(n3, L.n3);
      EXPECT_EQ(ea.tilde_tau0, fixed);
    }
  }
  // N = 5 with the quadratic character moves both order-2 points
  auto quad = DirichletCharacter::from_exponents(5, {2});
  auto ea = elliptic_action(5, quad);
  EXPECT_EQ(ea.classes.size(), 2u);
  EXPECT_EQ(ea.tilde_tau0, 0);
  EXPECT_EQ(elliptic_action(5, DirichletCharacter::trivial(5)).tilde_tau0, 2);
}

// Elliptic points of Gamma_0(N) as cosets Gamma_0(N) g in SL2(Z) fixed by S
// (order 2) or ST (order 3); the stabiliser is g E g^{-1}. Cosets are points of
// P^1(Z/N), taken up to unit scaling.
TEST(Elliptic, AgainstCosetFixedPoints) {
  using M2 = std::array<nt::i64, 4>;  // a b c d
  auto mul = [](const M2& x, const M2& y) {
    return M2{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
  };
  for (nt::i64 N = 1; N <= 50; ++N) {
    std::set<std::pair<nt::i64, nt::i64>> seen;
    std::vector<M2> cosets;
    for (nt::i64 c = 0; c < N; ++c)
      for (nt::i64 d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1) continue;
        std::pair<nt::i64, nt::i64> key{N, N};
        for (nt::i64 u = 1; u <= N; ++u)
          if (std::gcd(u, N) == 1) key = std::min(key, {nt::mod(u * c, N), nt::mod(u * d, N)});
        if (!seen.insert(key).second) continue;
        // lift to a coprime bottom row, then a d - b c = 1 by extended Euclid
        nt::i64 cc = c, dd = d == 0 && c == 0 ? 1 : d;
        while (std::gcd(cc, dd) != 1) dd += N;
        nt::i64 r0 = dd, r1 = cc, s0 = 1, s1 = 0, t0 = 0, t1 = 1;  // s dd + t cc = r
        while (r1 != 0) {
          nt::i64 q = r0 / r1;
          std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
          std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
          std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
        }
        if (r0 < 0) s0 = -s0, t0 = -t0;
        cosets.push_back({s0, -t0, cc, dd});
        ASSERT_EQ(s0 * dd + t0 * cc, 1);
      }
    ASSERT_EQ(nt::i64(cosets.size()), gamma0_index(N)) << N;
    for (const auto& chi : even_characters(N)) {
      auto ea = elliptic_action(N, chi);
      for (int nu : {2, 3}) {
        const M2 E = nu == 2 ? M2{0, -1, 1, 0} : M2{0, -1, 1, 1};
        std::multiset<Rational> brute, lib;
        for (const auto& g : cosets) {
          M2 ginv{g[3], -g[1], -g[2], g[0]};
          M2 R = mul(mul(g, E), ginv);  // in Gamma_0(N) exactly when the coset is fixed by E
          if (nt::mod(R[2], N) != 0) continue;
          Rational t = *chi.turn(R[3]);
          brute.insert(std::min(t, frac_of(-t)));
        }
        for (const auto& e : ea.classes)
          if (e.nu == nu) lib.insert(std::min(e.turn, frac_of(-e.turn)));
        EXPECT_EQ(brute, lib) << "N=" << N << " nu=" << nu << " " << chi.id();
      }
    }
  }
}

TEST(Scattering, PrimeSquareTrivialCharacter) {
  auto S = scattering_sets(25, DirichletCharacter::trivial(25));
  EXPECT_EQ(S.nF(), 6);
  EXPECT_EQ(S.nF0, 4);
  auto sl = scattering_lead(25, DirichletCharacter::trivial(25), S);
  EXPECT_EQ(sl.sigma, 3);
  EXPECT_EQ(sl.n0, -(6 - 4) - 3);
}

TEST(Scattering, LevelTwoClosedValue) {
  auto r = congruence_report(2, DirichletCharacter::trivial(2));
  EXPECT_EQ(r.n0, -1);
  EXPECT_NEAR(r.an0_d1_abs.value(), pi / (24.0 * std::log(2.0)), 1e-15);
}

// Independent route: evaluate the scattering determinant near s = 0 from Dirichlet
// series and read off the order and the leading coefficient.
TEST(Scattering, LeadAgainstNumericDeterminant) {
  int checked = 0;
  for (nt::i64 N : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 15, 16, 18, 21, 25, 30}) {
    for (const auto& chi : even_characters(N)) {
      auto r = congruence_report(N, chi);
      // order of phi at 0 is tau0 + n0: slope of log|phi| between two small s
      const double s1 = 1e-2, s2 = 1e-3;
      const double slope = (log_abs_phi(s1, N, chi) - log_abs_phi(s2, N, chi)) / std::log(s1 / s2);
      EXPECT_NEAR(slope, r.tau0 + r.n0, 0.15) << "N=" << N << " " << chi.id();
      const double oracle = numeric_an0_d1(N, chi, r.n0, r.tau0);
      EXPECT_NEAR(std::log(oracle), r.an0_d1_abs.log_value(), 1e-6) << "N=" << N << " " << chi.id();
      ++checked;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(Congruence, LevelOneLead) {
  auto r = congruence_report(1, DirichletCharacter::trivial(1));
  EXPECT_EQ(r.lead.order, -2);
  EXPECT_NEAR(r.lead.magnitude.value(), 9.0 / (pi * pi), 1e-15);
  EXPECT_TRUE(r.lead.magnitude.same_atoms(lead_term_k0(congruence_model(1, DirichletCharacter::trivial(1))).magnitude));
}

// The congruence closed form and the generic orbifold path agree.
TEST(Congruence, GenericModelPath) {
  for (nt::i64 N = 1; N <= 60; ++N)
    for (const auto& chi : even_characters(N)) {
      auto r = congruence_report(N, chi);
      auto g = lead_term_k0(congruence_model(N, chi));
      EXPECT_EQ(r.lead.order, g.order) << N << " " << chi.id();
      EXPECT_NEAR(r.lead.magnitude.log_value(), g.magnitude.log_value(),
                  1e-11 * std::max(1.0, std::abs(g.magnitude.log_value())))
          << N << " " << chi.id();
    }
}

TEST(Congruence, PrimeSquareDualPath) {
  for (nt::i64 ell : {5, 7, 11, 13}) {
    const nt::i64 N = ell * ell;
    for (const auto& chi : even_characters(N)) {
      const nt::i64 q = chi.conductor();
      const int b = q == 1 ? 0 : (q == ell ? 1 : 2);
      auto ps = prime_square_case(ell, b, chi);
      auto r = congruence_report(N, chi);
      EXPECT_EQ(ps.tau0, r.tau0);
      EXPECT_EQ(ps.nF0, r.nF0);
      EXPECT_EQ(ps.sigma, r.sigma);
      EXPECT_EQ(ps.lead.order, r.lead.order) << chi.id();
      EXPECT_NEAR(ps.lead.magnitude.log_value(), r.lead.magnitude.log_value(),
                  1e-10 * std::max(1.0, std::abs(r.lead.magnitude.log_value())))
          << chi.id();
    }
  }
  EXPECT_THROW(prime_square_case(3, 0, DirichletCharacter::trivial(9)), InputError);
  EXPECT_THROW(prime_square_case(5, 1, DirichletCharacter::trivial(25)), InputError);
}

TEST(Congruence, OddCharacterRejected) {
  auto odd = DirichletCharacter::from_exponents(5, {1});
  ASSERT_EQ(odd.parity(), -1);
  EXPECT_THROW(congruence_report(5, odd), InputError);
  EXPECT_THROW(congruence_model(5, odd), InputError);
  EXPECT_THROW(congruence_report(6, DirichletCharacter::trivial(5)), InputError);
}
