#include <gtest/gtest.h>

#include "tamelab/vg_qe.hpp"

using namespace tamelab;

namespace {

bool has_vg_quantifier(const FormulaPtr& f) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) &&
      f->var_sort.is_group())
    return true;
  for (const auto& s : f->subs)
    if (has_vg_quantifier(s)) return true;
  return false;
}

// Direct search for a witness x = a/b over a wide grid, independent of the
// cell machinery of the oracle.
bool brute_exists(const FormulaPtr& body, const std::string& x, const VGModel& model,
                  std::map<std::string, Rational> values, std::int64_t range,
                  const std::vector<std::int64_t>& dens) {
  for (std::int64_t b : dens)
    for (std::int64_t a = -range * b; a <= range * b; ++a) {
      values[x] = Rational(a, b);
      if (evaluate_vg(body, model, values)) return true;
    }
  return false;
}

}  // namespace

TEST(VgModel, QuotientIsDPart) {
  VGModel m{6};
  EXPECT_EQ(m.quotient(2), 2);
  EXPECT_EQ(m.quotient(5), 1);
  EXPECT_EQ(m.quotient(12), 12);
  EXPECT_EQ(m.quotient(10), 2);
  EXPECT_EQ(VGModel{1}.quotient(4), 1);
  EXPECT_EQ(VGModel{3}.quotient(2), 1);
  EXPECT_EQ(m.free_prime(), 5);
  EXPECT_EQ(VGModel{1}.free_prime(), 2);
  EXPECT_TRUE(VGModel{3}.contains(Rational(1, 2)));
  EXPECT_FALSE(VGModel{3}.contains(Rational(1, 3)));
}

TEST(VgQe, HalvingIsAlwaysPossibleWhenTwoIsInvertible) {
  VGModel m{3};
  auto f = parse("(exists x:VG) y:VG = (2 * x)");
  auto g = eliminate_all(f, m);
  EXPECT_FALSE(has_vg_quantifier(g));
  // y ranges over the grid; a witness y/2 always exists in Z^(3).
  for (int a = -10; a <= 10; ++a)
    for (int b : {1, 2, 4, 8})
      EXPECT_TRUE(evaluate_vg(g, m, {{"y", Rational(a, b)}}));
  auto report = bounded_check(f, parse("true"), m);
  EXPECT_TRUE(report.agree);
  EXPECT_GT(report.assignments, 0u);
}

TEST(VgQe, HalvingNeedsEvenCosetWhenTwoDividesD) {
  VGModel m{2};
  auto g = eliminate_all(parse("(exists x:VG) y:VG = (2 * x)"), m);
  EXPECT_TRUE(evaluate_vg(g, m, {{"y", 4}}));
  EXPECT_FALSE(evaluate_vg(g, m, {{"y", 3}}));
  EXPECT_TRUE(bounded_check(g, parse("pi[2](y:VG) = 0"), m).agree);
}

TEST(VgQe, DensityBetweenBounds) {
  VGModel m{1};
  auto f = parse("(exists x:VG) (y1:VG < x & x < y2:VG)");
  auto g = eliminate_all(f, m);
  EXPECT_FALSE(has_vg_quantifier(g));
  auto expected = parse("y1:VG < y2:VG");
  for (VGModel model : {VGModel{1}, VGModel{2}, VGModel{6}}) {
    auto h = eliminate_all(f, model);
    auto report = bounded_check(h, expected, model);
    EXPECT_TRUE(report.agree) << print(h) << "\n" << report.to_json().dump();
  }
}

TEST(VgQe, CongruenceTransportsThroughEquation) {
  VGModel m{3};
  auto f = parse("(exists x:VG) (y:VG = (2 * x) & pi[3](x) = alpha:VGQ[3])");
  auto g = eliminate_all(f, m);
  EXPECT_FALSE(has_vg_quantifier(g));
  auto expected = parse("pi[3](y:VG) = (2 * alpha:VGQ[3])");
  // Independent check: residues of y and alpha enumerated, witness x = y/2.
  for (int y = -9; y <= 9; ++y)
    for (int alpha = 0; alpha < 3; ++alpha) {
      bool want = ((y % 3 + 3) % 3) == (2 * alpha) % 3;
      EXPECT_EQ(evaluate_vg(g, m, {{"y", y}}, {{"alpha", alpha}}), want) << y << " " << alpha;
    }
  EXPECT_TRUE(bounded_check(g, expected, m).agree);
}

TEST(VgQe, ForallIsDualOfExists) {
  VGModel m{2};
  auto f = parse("(forall x:VG) (x <= y:VG | (y:VG < x))");
  EXPECT_TRUE(bounded_check(eliminate_all(f, m), parse("true"), m).agree);
  auto g = parse("(forall x:VG) x <= y:VG");
  EXPECT_TRUE(bounded_check(eliminate_all(g, m), parse("false"), m).agree);
}

TEST(VgQe, QuantifierFreeInputUnchanged) {
  VGModel m{6};
  auto f = parse("(y:VG <= z:VG & pi[2](y:VG) = 1)");
  EXPECT_EQ(eliminate_all(f, m), f);
}

TEST(VgQe, NestedQuantifiersAgreeWithDirectSearch) {
  VGModel m{2};
  auto f = parse("(exists x:VG) (exists z:VG) (y:VG = (x + z) & (2 * x) = (3 * z) & 0 < z)");
  auto g = eliminate_all(f, m);
  EXPECT_FALSE(has_vg_quantifier(g));
  auto body = f->subs[0];
  for (int a = -6; a <= 6; ++a) {
    Rational y = a;
    bool want = brute_exists(body, "x", m, {{"y", y}}, 8, {1, 5, 25});
    EXPECT_EQ(evaluate_vg(g, m, {{"y", y}}), want) << a;
  }
}

TEST(VgQe, EliminationIsIdempotent) {
  VGModel m{6};
  auto f = parse("(exists x:VG) (y:VG < (3 * x) & pi[4](x) = 1 & (2 * x) != z:VG)");
  auto g = eliminate_all(f, m);
  EXPECT_TRUE(equal(eliminate_all(g, m), g));
}

TEST(VgQe, OracleLocatesWrongAnswer) {
  VGModel m{2};
  auto f = parse("(exists x:VG) y:VG = (2 * x)");
  auto report = bounded_check(f, parse("true"), m);
  EXPECT_FALSE(report.agree);
  EXPECT_GE(report.disagreements, 1u);
  ASSERT_EQ(report.counterexample.size(), 1u);
  EXPECT_EQ(report.counterexample[0].first, "y");
  EXPECT_TRUE(report.rhs_value);
  EXPECT_FALSE(report.lhs_value);
  EXPECT_TRUE(bounded_check(f, f, m).agree);
}

TEST(VgQe, OracleEvaluatesQuotientQuantifiers) {
  VGModel m{6};
  EXPECT_TRUE(evaluate_vg(parse("(exists q:VGQ[4]) (2 * q) = 2"), m, {}));
  EXPECT_FALSE(evaluate_vg(parse("(exists q:VGQ[4]) (2 * q) = 1"), m, {}));
  // 5 is invertible in Z^(6): G/5G is trivial.
  EXPECT_TRUE(evaluate_vg(parse("(forall q:VGQ[5]) q = 0"), m, {}));
}
