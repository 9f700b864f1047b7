#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ruelle/congruence.hpp"
#include "ruelle/functional_equation.hpp"
#include "ruelle/verification.hpp"

using namespace ruelle;

namespace {

Model kitano_hand() {
  OrbifoldSignature sig(1, 0, {2});
  return make_model(sig, MultiplierSystem(2, Rational(1, 2), {{0, 1}}, {}), ScatteringData::compact());
}

Model level_one() { return congruence_model(1, DirichletCharacter::trivial(1)); }

double rel(cplx a, cplx b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST(HForm, KitanoInstanceAtZero) {
  // R(s) R(-s) at 0 for a compact quotient is R(0)^2 = 4
  EXPECT_NEAR(H(cplx(0.0, 0.0), kitano_hand()).real(), 4.0, 1e-14);
  EXPECT_NEAR(H(cplx(0.0, 0.0), kitano_hand()).imag(), 0.0, 1e-14);
}

TEST(HForm, EvenInStructureOnRandomModels) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    Model md = random_model(rng);
    EXPECT_TRUE(H_form(md).same_structure(H_form(md).reflected()));
    EXPECT_TRUE(H1_form(md).same_structure(H1_form(md).reflected()));
  }
}

TEST(HForm, WeightConjugationOnRandomModels) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    ModelOptions opt;
    opt.integral_k = rng.coin();
    Model md = random_model(rng, opt);
    Model conj = make_model(md.sig, md.ms.conjugate(md.sig), md.data);
    EXPECT_TRUE(H_form(md).same_structure(H_form(conj)));
  }
}

TEST(HForm, PolesThrow) {
  EXPECT_THROW(H(cplx(0.0, 0.0), level_one()), PoleAt);
  EXPECT_THROW(H(cplx(0.5, 0.0), level_one()), PoleAt);
}

TEST(Kappa, ReflectionGivesOne) {
  Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    Model md = random_model(rng);
    for (int t = 0; t < 20; ++t) {
      cplx s = random_s(rng);
      cplx v = std::exp(log_kappa(s, md) + log_kappa(1.0 - s, md));
      EXPECT_LT(std::abs(v - 1.0), 1e-9) << s;
    }
  }
}

TEST(Kappa, LevelOne) {
  Model md = level_one();
  for (cplx s : {cplx(0.3, 1.0), cplx(-1.2, 0.4), cplx(2.5, -3.0)}) {
    EXPECT_LT(std::abs(std::exp(log_kappa(s, md) + log_kappa(1.0 - s, md)) - 1.0), 1e-10) << s;
    cplx via = std::exp(log_kappa(s + 1.0, md) - log_kappa(s, md)) * phi_value(s, md) * phi_value(-s, md);
    EXPECT_LT(rel(H(s, md), via), 1e-9) << s;
  }
}

TEST(Phi, LevelOneReflectionAndCentre) {
  for (cplx s : {cplx(0.3, 1.7), cplx(2.0, 0.5), cplx(-0.4, -2.2)})
    EXPECT_LT(std::abs(phi_level_one(s) * phi_level_one(1.0 - s) - 1.0), 1e-12) << s;
  EXPECT_NEAR(phi_level_one(cplx(0.5, 1e-7)).real(), -1.0, 1e-6);
}

TEST(Phi, RequiredExactlyWhenThereAreOpenCusps) {
  OrbifoldSignature sig(0, 3, {});
  MultiplierSystem open(1, Rational(0), {}, {{Angle()}, {Angle(Rational(1, 2))}, {Angle(Rational(1, 3))}});
  MultiplierSystem closed(1, Rational(0), {}, {{Angle(Rational(1, 4))}, {Angle(Rational(1, 2))}, {Angle(Rational(1, 3))}});
  ScatteringData d;
  d.half_trace_exponent = 0;
  EXPECT_THROW(phi_value(cplx(0.2, 1.0), make_model(sig, open, d)), InputError);
  d.phi = exponential_phi(0.1);
  EXPECT_THROW(make_model(sig, closed, d), InputError);
  EXPECT_NO_THROW(make_model(sig, open, d));
}

TEST(Ratios, ClosedFormsMatchDefinitions) {
  Rng rng(24);
  for (int i = 0; i < 30; ++i) {
    Model md = random_model(rng);
    for (int t = 0; t < 20; ++t) {
      cplx s = random_s(rng);
      // compare in logs: the ratios themselves overflow for large m area
      auto gap = [&](cplx closed, cplx def_s, cplx def_1ms) { return std::abs(std::exp(closed - def_s + def_1ms) - 1.0); };
      EXPECT_LT(gap(log_zI_ratio(s, md), log_zI_definition(s, md), log_zI_definition(1.0 - s, md)), 1e-9) << s;
      EXPECT_LT(gap(log_zEll_ratio(s, md), log_zEll_definition(s, md), log_zEll_definition(1.0 - s, md)), 1e-9) << s;
      EXPECT_LT(gap(log_zPar_ratio(s, md), log_zPar_definition(s, md), log_zPar_definition(1.0 - s, md)), 1e-9) << s;
    }
  }
}

TEST(Contributions, AssembledAgainstClosed) {
  Rng rng(25);
  for (int i = 0; i < 20; ++i) {
    ModelOptions opt;
    opt.integral_k = rng.coin();
    Model md = random_model(rng, opt);
    for (int t = 0; t < 20; ++t) {
      cplx s = random_s(rng);
      EXPECT_LT(identity_contribution(s, md).relative_error(), 1e-9);
      EXPECT_LT(elliptic_contribution(s, md).relative_error(), 1e-9);
      EXPECT_LT(parabolic_contribution(s, md).relative_error(), 1e-9);
    }
  }
}

TEST(Contributions, RealArgumentsRejected) {
  EXPECT_THROW(identity_contribution(cplx(0.3, 0.0), kitano_hand()), DomainError);
}

TEST(Definitions, RejectTheCut) {
  EXPECT_THROW(log_zI_definition(cplx(0.2, 0.0), kitano_hand()), DomainError);
  EXPECT_NO_THROW(log_zI_definition(cplx(0.7, 0.0), kitano_hand()));
}

TEST(CChiGamma, Examples) {
  EXPECT_NEAR(c_chi_gamma(kitano_hand()).value(), 1.0, 1e-15);
  // level one: 2^{-(2g-2)} with g = 0, all parabolic angles zero
  EXPECT_NEAR(c_chi_gamma(level_one()).magnitude.value(), 4.0, 1e-15);
  OrbifoldSignature sig(0, 3, {});
  MultiplierSystem ms(1, Rational(0), {}, {{Angle()}, {Angle(Rational(1, 2))}, {Angle(Rational(1, 6))}});
  ScatteringData d;
  d.d1 = -3.0;
  d.half_trace_exponent = 0;
  d.phi = exponential_phi(0.0);
  SignedMagnitude c = c_chi_gamma(make_model(sig, ms, d));
  EXPECT_EQ(c.sign, -1);
  EXPECT_NEAR(c.magnitude.value(), 4.0 * 3.0 * 1.0 * 0.5, 1e-14);
}

TEST(ScatteringGamma, TrivialWhenTauZeroIsZero) {
  Model md = kitano_hand();
  EXPECT_LT(std::abs(scattering_gamma_factor(cplx(0.4, 1.0), md) - 1.0), 1e-15);
}

// Without open cusps H1 is H stripped of its constant.
TEST(H1Form, CoincidesWithHWithoutOpenCusps) {
  Rng rng(26);
  int seen = 0;
  while (seen < 50) {
    Model md = random_model(rng);
    if (md.profile.tau0 != 0) continue;
    ++seen;
    double constant = std::exp(H_form(md).constant.log_value());
    EXPECT_NEAR(std::log2(constant) + 2.0 * detail::product_sin_pi_beta(md).log_value() / std::log(2.0),
                2.0 * md.m() * (2 * md.sig.genus() - 2), 1e-12);
    for (int t = 0; t < 5; ++t) {
      cplx s = random_s(rng);
      EXPECT_LT(rel(H(s, md), constant * double(H_form(md).sign) * H1(s, md) * double(H1_form(md).sign)), 1e-10) << s;
    }
  }
}

TEST(HForm, LogEvaluationAgreesWhereValuesAreFinite) {
  Rng rng(27);
  for (int i = 0; i < 100; ++i) {
    Model md = random_model(rng);
    cplx s = random_s(rng) * 0.2;
    cplx h = H(s, md);
    if (!std::isfinite(std::abs(h)) || std::abs(h) == 0.0) continue;
    EXPECT_LT(std::abs(std::exp(H_form(md).log_evaluate(s)) / h - 1.0), 1e-12);
  }
}

// Integral weights take the other branch of the elliptic bookkeeping; the kappa
// route must still reproduce H.
TEST(HForm, AgainstKappaForIntegralWeights) {
  Rng rng(28);
  for (int i = 0; i < 30; ++i) {
    ModelOptions opt;
    opt.integral_k = true;
    Model md = random_model(rng, opt);
    ProductForm f = H_form(md);
    for (int t = 0; t < 20; ++t) {
      cplx s = random_s(rng);
      cplx via = log_kappa(s + 1.0, md) - log_kappa(s, md) + std::log(phi_value(s, md)) + std::log(phi_value(-s, md));
      EXPECT_LT(std::abs(std::exp(f.log_evaluate(s) - via) - 1.0), 1e-9) << s;
    }
  }
}
