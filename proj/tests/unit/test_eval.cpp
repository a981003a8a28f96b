#include <gtest/gtest.h>

#include <set>

#include "tamelab/eval.hpp"

using namespace tamelab;

namespace {

Elem E(const FieldDesc& K, std::int64_t n) { return Elem::from_int(K, n); }

}  // namespace

TEST(Eval, ResidueAtoms) {
  auto K = FieldDesc::padic(5);
  EXPECT_TRUE(eval_formula(parse("ac(x) = 1"), {{"x", E(K, 6)}}, K));
  EXPECT_FALSE(eval_formula(parse("ac(x) = 1"), {{"x", E(K, 7)}}, K));
  // squares mod 5 by enumeration
  std::set<int> squares;
  for (int a = 0; a < 5; ++a) squares.insert(a * a % 5);
  auto f = parse("(exists xi:RF) xi^2 = ac(x)");
  for (int a = 1; a < 5; ++a)
    EXPECT_EQ(eval_formula(f, {{"x", E(K, a)}}, K), squares.count(a) == 1) << a;
  EXPECT_TRUE(eval_formula(parse("ord[2](x) = 0"), {{"x", E(K, 25)}}, K));
  EXPECT_FALSE(eval_formula(parse("ord[2](x) = 0"), {{"x", E(K, 5)}}, K));
  EXPECT_TRUE(eval_formula(parse("ord[3](x) = 0"), {{"x", E(K, 0)}}, K));
  EXPECT_TRUE(eval_formula(parse("ac(x) = 0"), {{"x", E(K, 0)}}, K));
  EXPECT_TRUE(eval_formula(parse("x * y = 6"), {{"x", E(K, 2)}, {"y", E(K, 3)}}, K));
  EXPECT_THROW(eval_formula(parse("(exists y:VF) x = y"), {{"x", E(K, 2)}}, K), std::invalid_argument);
}

TEST(Eval, QuotientQuantifiersRangeOverZmodN) {
  auto K = FieldDesc::padic(7);
  auto f = parse("(exists m:VGQ[3]) ord[3](x) = (2 * m)");
  for (int k = 0; k < 6; ++k) EXPECT_TRUE(eval_formula(f, {{"x", Elem::uniformizer(K).pow(k)}}, K));
  auto g = parse("(exists m:VGQ[4]) ord[4](x) = (2 * m)");
  EXPECT_TRUE(eval_formula(g, {{"x", E(K, 49)}}, K));
  EXPECT_FALSE(eval_formula(g, {{"x", E(K, 7)}}, K));
  EXPECT_TRUE(eval_formula(parse("pi[4,2](ord[4](x)) = 1"), {{"x", E(K, 7 * 7 * 7)}}, K));
}

TEST(Eval, ValueGroupModeUsesInfinityConvention) {
  auto K = FieldDesc::padic(5);
  Elem zero = E(K, 0);
  EXPECT_TRUE(eval_formula(parse("ord(x) <= ord(y)"), {{"x", zero}, {"y", zero}}, K));
  EXPECT_TRUE(eval_formula(parse("ord(x) <= ord(y)"), {{"x", E(K, 3)}, {"y", zero}}, K));
  EXPECT_FALSE(eval_formula(parse("ord(x) <= ord(y)"), {{"x", zero}, {"y", E(K, 3)}}, K));
  EXPECT_TRUE(eval_formula(parse("ord(x) = ord(y)"), {{"x", zero}, {"y", zero}}, K));
  EXPECT_FALSE(eval_formula(parse("ord(x) = ord(y)"), {{"x", zero}, {"y", E(K, 2)}}, K));
  auto even = parse("(exists m:VG) ord(x) = (2 * m)");
  for (int k = -3; k <= 3; ++k)
    EXPECT_EQ(eval_formula(even, {{"x", Elem::uniformizer(K).pow(k)}}, K), k % 2 == 0) << k;
  EXPECT_FALSE(eval_formula(even, {{"x", zero}}, K));
  // mixed with residue conditions inside the block
  auto mixed = parse("(exists xi:RF) (exists m:VG) (ac(x) = xi & ord(x) = (2 * m) & xi = 3)");
  EXPECT_TRUE(eval_formula(mixed, {{"x", E(K, 3 * 25)}}, K));
  EXPECT_FALSE(eval_formula(mixed, {{"x", E(K, 3 * 5)}}, K));
}

TEST(Eval, PrecisionErrorsAndMonotonicity) {
  auto K = FieldDesc::padic(5, 10);
  Elem a = parse_elem(K, "p^0 * (1 + 2*p + O(p^3))");
  Elem b = parse_elem(K, "p^0 * (1 + 2*p + 3*p^3)");
  EXPECT_THROW(eval_formula(parse("x = y"), {{"x", a}, {"y", b}}, K), PrecisionError);
  EXPECT_THROW(eval_formula(parse("ac(x - y) = 0"), {{"x", a}, {"y", b}}, K), PrecisionError);
  std::mt19937_64 rng(4);
  auto f = parse("(ac(x - y) = 2 | ord[3](x + y) = 1)");
  for (int i = 0; i < 200; ++i) {
    Elem x = sample(K, -2, 2, rng), y = sample(K, -2, 2, rng);
    std::optional<bool> last;
    for (int r : {2, 4, 6, 8, 10}) {
      try {
        bool v = eval_formula(f, {{"x", x.truncated(r)}, {"y", y.truncated(r)}}, K);
        if (last) EXPECT_EQ(*last, v);
        last = v;
      } catch (const PrecisionError&) {
        EXPECT_FALSE(last.has_value()) << "a certified verdict became uncertifiable";
      }
    }
    ASSERT_TRUE(last.has_value());
    EXPECT_EQ(*last, eval_formula(f, {{"x", x}, {"y", y}}, K));
  }
}

TEST(Orbits, KummerInvariantVectors) {
  auto K = FieldDesc::padic(5);
  auto spec = kummer_invariant_spec(ActionSpec::kummer(2));
  EXPECT_EQ(orbit_invariants({E(K, 4)}, spec), (InvariantVector{{4}, {0}}));
  EXPECT_EQ(orbit_invariants({E(K, 5)}, spec), (InvariantVector{{1}, {1}}));
  EXPECT_EQ(orbit_invariants({E(K, 0)}, spec), (InvariantVector{{0}, {0}}));
}

TEST(Orbits, SameOrbitWithWitness) {
  auto K = FieldDesc::padic(5, 12);
  auto action = ActionSpec::kummer(2);
  auto d = same_orbit({E(K, 1)}, {E(K, 4)}, action, K);
  ASSERT_EQ(d.verdict, OrbitVerdict::Same);
  ASSERT_EQ(d.witness.size(), 1u);
  EXPECT_TRUE(d.witness[0].pow(2).congruent(E(K, 4)));
  EXPECT_TRUE(d.witness[0].ac() == 2 || d.witness[0].ac() == 3);
  EXPECT_EQ(same_orbit({E(K, 1)}, {E(K, 2)}, action, K).verdict, OrbitVerdict::Different);
  EXPECT_EQ(same_orbit({E(K, 1)}, {E(K, 5)}, action, K).verdict, OrbitVerdict::Different);
  EXPECT_THROW(same_orbit({E(K, 1)}, {E(K, 2)}, ActionSpec::kummer(5), K), std::invalid_argument);
}

TEST(Orbits, WitnessesSatisfyTheAction) {
  std::mt19937_64 rng(8);
  for (auto K : {FieldDesc::padic(7, 10), FieldDesc::laurent(7, 10)}) {
    auto action = ActionSpec::parse("torus:2,3");
    for (int i = 0; i < 100; ++i) {
      std::vector<Elem> x{sample(K, -3, 3, rng), sample(K, -3, 3, rng)};
      std::vector<Elem> g{sample(K, -3, 3, rng), sample(K, -3, 3, rng)};
      std::vector<Elem> y{g[0].pow(2) * x[0], g[1].pow(3) * x[1]};
      auto d = same_orbit(x, y, action, K);
      ASSERT_EQ(d.verdict, OrbitVerdict::Same);
      EXPECT_TRUE((d.witness[0].pow(2) * x[0]).congruent(y[0]));
      EXPECT_TRUE((d.witness[1].pow(3) * x[1]).congruent(y[1]));
    }
  }
}

TEST(Orbits, CensusMatchesEnumerationModP3) {
  for (std::int64_t n : {2, 3})
    for (std::int64_t p : {5, 7, 11}) {
      // independent count: valuation classes times unit classes found by brute force
      std::int64_t m = p * p * p, units = 0;
      std::set<std::int64_t> powers;
      for (std::int64_t u = 1; u < m; ++u)
        if (u % p) {
          ++units;
          std::int64_t v = 1;
          for (int k = 0; k < n; ++k) v = v * u % m;
          powers.insert(v);
        }
      std::size_t expected = static_cast<std::size_t>(n * units / static_cast<std::int64_t>(powers.size()));
      EXPECT_EQ(kummer_class_count_mod_p3(n, p), expected);
      EXPECT_EQ(kummer_classes(n, p).size(), expected);
      auto K = FieldDesc::padic(p, 8);
      auto action = ActionSpec::kummer(n);
      auto report = class_census(kummer_invariant_spec(action), action, K, {1000, 3, -6, 6});
      EXPECT_EQ(report.violations, 0u);
      EXPECT_EQ(report.classes, expected) << n << " " << p;
      auto doubled = class_census(kummer_invariant_spec(action), action, K, {2000, 3, -6, 6});
      EXPECT_EQ(doubled.classes, report.classes);
    }
  EXPECT_EQ(kummer_class_count_mod_p3(2, 5), 4u);
}

TEST(Orbits, OrbitFormulaDescribesTheOrbit) {
  std::mt19937_64 rng(12);
  for (std::int64_t n : {2, 3}) {
    auto K = FieldDesc::padic(7, 8);
    auto action = ActionSpec::kummer(n);
    for (const auto& cls : kummer_classes(n, 7)) {
      auto f = kummer_orbit_formula(n, cls.valuation_class, cls.ac_representative);
      EXPECT_TRUE(is_tame(f));
      Elem rep = Elem::uniformizer(K).pow(cls.valuation_class) * E(K, cls.ac_representative);
      for (int i = 0; i < 40; ++i) {
        Elem x = sample(K, -4, 4, rng);
        bool same = same_orbit({rep}, {x}, action, K).verdict == OrbitVerdict::Same;
        EXPECT_EQ(eval_formula(f, {{"x", x}}, K), same);
      }
      EXPECT_FALSE(eval_formula(f, {{"x", E(K, 0)}}, K));
    }
  }
}
