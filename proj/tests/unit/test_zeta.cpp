#include <gtest/gtest.h>

#include <cmath>

#include "tamelab/eval.hpp"
#include "tamelab/zeta.hpp"

using namespace tamelab;

namespace {

Rational inv(std::int64_t p) { return Rational(1, p); }

RatFunc geometric(std::int64_t p, int b) {
  // (1 - 1/p) / (1 - T^b / p)
  return RatFunc(UPoly::constant(1 - inv(p)), UPoly({Rational(1)}) - UPoly::monomial(inv(p), b));
}

// first coefficients of the power series of r at T = 0
std::vector<Rational> series(const RatFunc& r, int n) {
  std::vector<Rational> out;
  Rational d0 = r.den().coeff(0);
  for (int k = 0; k < n; ++k) {
    Rational c = r.num().coeff(k);
    for (int j = 1; j <= k; ++j) c -= r.den().coeff(j) * out[k - j];
    out.push_back(c / d0);
  }
  return out;
}

// mu(ord f = k) from counting solutions of f = 0 mod p^k
std::vector<Rational> shell_measures(const Polynomial& f, std::int64_t p, int kmax) {
  std::size_t n = f.nvars();
  std::vector<Rational> at_least(kmax + 2);
  for (int k = 0; k <= kmax + 1; ++k) {
    std::int64_t m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    std::int64_t total = 1, count = 0;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    std::vector<Rational> x(n);
    for (std::int64_t idx = 0; idx < total; ++idx) {
      std::int64_t r = idx;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = r % m;
        r /= m;
      }
      Rational v = f.evaluate(x);
      if (v == 0 || valuation(v, p) >= k) ++count;
    }
    at_least[k] = Rational(count, total);
  }
  std::vector<Rational> out;
  for (int k = 0; k <= kmax; ++k) out.push_back(at_least[k] - at_least[k + 1]);
  return out;
}

}  // namespace

TEST(Zeta, MonomialExamples) {
  for (std::int64_t p : {5, 7}) {
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("x"), p), geometric(p, 1));
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("1"), p), RatFunc(Rational(1)));
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("x^2"), p), geometric(p, 2));
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("x*y"), p), geometric(p, 1) * geometric(p, 1));
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("x", "pO"), p), RatFunc(UPoly::monomial(inv(p), 1)) * geometric(p, 1));
  }
  auto r = igusa_exact(IntegralSpec::from_text("x"), 5);
  ASSERT_EQ(r.factors.size(), 1u);
  EXPECT_EQ(r.factors[0], (DenominatorFactor{-1, 1}));
  EXPECT_TRUE(check_degree(r));
}

TEST(Zeta, SeriesMatchesPointCounts) {
  for (const char* text : {"x^2 + y^2", "x^2 - y^3", "x^3 + y^3", "x*y", "x^2 + 2*y^2 - 3"})
    for (std::int64_t p : {5, 7}) {
      auto spec = IntegralSpec::from_text(text);
      auto z = igusa_ratfunc(spec, p);
      auto got = series(z, 3);
      auto want = shell_measures(spec.f, p, 2);
      for (int k = 0; k < 3; ++k) EXPECT_EQ(got[k], want[k]) << text << " p=" << p << " k=" << k;
    }
}

TEST(Zeta, NumericBracket) {
  auto spec = IntegralSpec::from_text("x");
  auto b = igusa_numeric(spec, 5, 1.0, 4);
  EXPECT_TRUE(b.contains(25.0 / 30.0));
  EXPECT_NEAR(b.estimate(), 25.0 / 30.0, 1e-12);
  auto one = igusa_numeric(IntegralSpec::from_text("1"), 5, 2.0, 3);
  EXPECT_DOUBLE_EQ(one.lower, 1.0);
  EXPECT_DOUBLE_EQ(one.upper, 1.0);
  auto cusp = IntegralSpec::from_text("x^2 - y^3");
  double last = 1e9;
  for (int depth : {2, 4, 6, 8}) {
    auto br = igusa_numeric(cusp, 7, 1.5, depth);
    EXPECT_LE(br.width(), last);
    last = br.width();
    EXPECT_TRUE(br.contains(igusa_exact(cusp, 7).evaluate(std::pow(7.0, -1.5))));
  }
  EXPECT_THROW(igusa_numeric(spec, 5, -1, 3), std::invalid_argument);
}

TEST(Zeta, WeightsAndFactors) {
  std::int64_t p = 5;
  auto spec = IntegralSpec::from_text("x");
  spec.weights.push_back(spec.f);
  // sum_k k (1 - 1/p) p^-k T^k
  auto z = series(igusa_ratfunc(spec, p), 6);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(z[k], Rational(k) * (1 - inv(p)) * prime_power(p, -k));
  spec.weights.push_back(spec.f);
  z = series(igusa_ratfunc(spec, p), 6);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(z[k], Rational(k * k) * (1 - inv(p)) * prime_power(p, -k));
  // |g| with g = x: integral of |x|^(s+1)
  auto gspec = IntegralSpec::from_text("x");
  gspec.g = gspec.f;
  auto gz = series(igusa_ratfunc(gspec, p), 5);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(gz[k], (1 - inv(p)) * prime_power(p, -2 * k));
  // weight on another polynomial: ord(y) |x|^s on O^2 factors
  auto two = IntegralSpec::from_text("x + 0*y");
  two.weights.push_back(parse_polynomial("y", two.vars).poly);
  auto tz = igusa_ratfunc(two, p);
  Rational mean_ord = Rational(1, p - 1);  // sum_k k (1 - 1/p) p^-k
  EXPECT_EQ(tz, geometric(p, 1) * RatFunc(mean_ord));
}

TEST(Zeta, OrbitalIntegralsPartition) {
  for (std::int64_t n : {2, 3}) {
    std::int64_t p = 7;
    auto spec = IntegralSpec::from_text("x");
    RatFunc sum;
    for (const auto& cls : kummer_classes(n, p)) {
      auto r = orbital_integral(spec, kummer_orbit_formula(n, cls.valuation_class, cls.ac_representative), p);
      EXPECT_TRUE(check_degree(r)) << r.str();
      sum += r.to_ratfunc();
    }
    EXPECT_EQ(sum, igusa_ratfunc(spec, p));
  }
  // squares in Z_5: even valuation, unit part a square (2 of the 4 residues)
  auto sq = orbital_integral(IntegralSpec::from_text("x"), kummer_orbit_formula(2, 0, 1), 5).to_ratfunc();
  auto z = series(sq, 6);
  for (int k = 0; k < 6; ++k)
    EXPECT_EQ(z[k], k % 2 ? Rational(0) : Rational(2, 5) * prime_power(5, -k)) << k;
  auto top = orbital_integral(IntegralSpec::from_text("x"), parse("0 = 0"), 5);
  EXPECT_EQ(top.to_ratfunc(), igusa_ratfunc(IntegralSpec::from_text("x"), 5));
  EXPECT_THROW(orbital_integral(IntegralSpec::from_text("x"), parse("ord(x) = 0"), 5), std::invalid_argument);
}

TEST(Zeta, MeasureAndScaling) {
  for (std::int64_t p : {5, 7}) {
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("1", "O,2+pO"), p), RatFunc(inv(p)));
    EXPECT_EQ(igusa_ratfunc(IntegralSpec::from_text("1", "pO,1+pO,O"), p), RatFunc(inv(p) * inv(p)));
    for (const char* text : {"x^2 + y^2", "x^2 - y^3"}) {
      auto spec = IntegralSpec::from_text(text);
      auto scaled = spec;
      scaled.f = spec.f.scaled(p);
      EXPECT_EQ(igusa_ratfunc(scaled, p), RatFunc::T() * igusa_ratfunc(spec, p));
    }
  }
}

TEST(Zeta, UniformDenominator) {
  std::vector<TwoVarRational> xs, x2, consts;
  for (std::int64_t p : {5, 7, 11}) {
    xs.push_back(igusa_exact(IntegralSpec::from_text("x"), p));
    x2.push_back(igusa_exact(IntegralSpec::from_text("x^2"), p));
    consts.push_back(igusa_exact(IntegralSpec::from_text("1"), p));
  }
  auto fx = fit_uniform_denominator(xs);
  ASSERT_TRUE(fx.ok);
  EXPECT_EQ(fx.a, 0);
  EXPECT_EQ(fx.factors, (std::vector<DenominatorFactor>{{-1, 1}}));
  auto fx2 = fit_uniform_denominator(x2);
  ASSERT_TRUE(fx2.ok);
  EXPECT_EQ(fx2.factors, (std::vector<DenominatorFactor>{{-1, 2}}));
  auto fc = fit_uniform_denominator(consts);
  ASSERT_TRUE(fc.ok);
  EXPECT_TRUE(fc.factors.empty());
  EXPECT_FALSE(fit_uniform_denominator({xs[0], xs[1]}).ok);
  TwoVarRational bad = TwoVarRational::from_ratfunc(RatFunc(UPoly::monomial(1, 2), UPoly({1, -1})), 5);
  EXPECT_FALSE(check_degree(bad));
}

TEST(Zeta, BudgetAndErrors) {
  ZetaOptions tight;
  tight.max_depth = 2;
  EXPECT_THROW(igusa_exact(IntegralSpec::from_text("x^2 - y^3"), 5, tight), BudgetExceeded);
  EXPECT_THROW(IntegralSpec::from_text("x*y", "O"), std::invalid_argument);
  EXPECT_THROW(IntegralSpec::from_text("x", "Q"), std::invalid_argument);
  EXPECT_THROW(igusa_exact(IntegralSpec::from_text("x"), 6), std::invalid_argument);
}
