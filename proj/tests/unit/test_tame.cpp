#include <gtest/gtest.h>

#include "tamelab/eval.hpp"
#include "tamelab/tame.hpp"

using namespace tamelab;

namespace {

Elem E(const FieldDesc& K, std::int64_t n) { return Elem::from_int(K, n); }

std::vector<Elem> test_points(const FieldDesc& K, std::mt19937_64& rng) {
  std::vector<Elem> out{E(K, 0)};
  for (int v = -6; v <= 6; ++v) out.push_back(Elem::uniformizer(K).pow(v) * sample(K, 0, 0, rng));
  return out;
}

}  // namespace

TEST(Tame, RewriteExamplesAtSeven) {
  auto K = FieldDesc::padic(7);
  TermPtr x = var("x", Sort::vf()), y = var("y", Sort::vf());
  auto lt = rewrite_ord_lt(x, y, 7);
  auto le = rewrite_ord_le(x, y, 7);
  auto eqf = rewrite_ord_eq(x, y, 7);
  EXPECT_TRUE(is_tame(lt));
  EXPECT_TRUE(eval_formula(lt, {{"x", E(K, 7)}, {"y", E(K, 49)}}, K));
  EXPECT_FALSE(eval_formula(lt, {{"x", E(K, 49)}, {"y", E(K, 7)}}, K));
  EXPECT_FALSE(eval_formula(lt, {{"x", E(K, 3)}, {"y", E(K, 5)}}, K));
  EXPECT_TRUE(eval_formula(eqf, {{"x", E(K, 3)}, {"y", E(K, -3)}}, K));
  EXPECT_TRUE(eval_formula(lt, {{"x", E(K, 1)}, {"y", E(K, 0)}}, K));
  EXPECT_FALSE(eval_formula(le, {{"x", E(K, 49)}, {"y", E(K, 7)}}, K));
  EXPECT_TRUE(eval_formula(le, {{"x", E(K, 0)}, {"y", E(K, 0)}}, K));
  EXPECT_TRUE(eval_formula(eqf, {{"x", E(K, 0)}, {"y", E(K, 0)}}, K));
  EXPECT_THROW(rewrite_ord_lt(x, y, 3), std::domain_error);
  EXPECT_THROW(rewrite_ord_lt(x, y, 2), std::domain_error);
}

TEST(Tame, RewritesAgreeWithValuations) {
  for (std::int64_t p : {5, 7, 11}) {
    auto r = check_ord_rewrites(p, 2000, 17);
    EXPECT_EQ(r.disagreements, 0u) << p << " " << r.to_json().dump();
    EXPECT_EQ(r.by_kind.size(), 5u);
  }
}

TEST(Tame, NormalFormAgreesWithValueGroupEvaluation) {
  auto K = FieldDesc::padic(5, 8);
  std::mt19937_64 rng(5);
  auto pts = test_points(K, rng);
  auto f = parse("ord(x) < ord(y)");
  auto t = to_tame(f);
  EXPECT_TRUE(is_tame(t));
  for (const auto& a : pts)
    for (const auto& b : pts)
      EXPECT_EQ(eval_formula(t, {{"x", a}, {"y", b}}, K), eval_formula(f, {{"x", a}, {"y", b}}, K))
          << a.str() << " " << b.str();

  auto even = parse("(exists m:VG) ord(x) = (2 * m)");
  auto te = to_tame(even);
  EXPECT_TRUE(is_tame(te));
  EXPECT_NE(print(te).find("ord[2]"), std::string::npos) << print(te);
  for (const auto& a : pts) EXPECT_EQ(eval_formula(te, {{"x", a}}, K), eval_formula(even, {{"x", a}}, K)) << a.str();

  auto mixed = parse("(exists m:VG) (ord(x) + ord(y) = (3 * m) & ord(x) <= ord(y * y))");
  auto tm = to_tame(mixed);
  EXPECT_TRUE(is_tame(tm));
  for (std::size_t i = 0; i < pts.size(); i += 2)
    for (std::size_t j = 0; j < pts.size(); j += 3)
      EXPECT_EQ(eval_formula(tm, {{"x", pts[i]}, {"y", pts[j]}}, K),
                eval_formula(mixed, {{"x", pts[i]}, {"y", pts[j]}}, K))
          << pts[i].str() << " " << pts[j].str();
}

TEST(Tame, TameInputUnchangedAndBadInputRejected) {
  auto f = parse("(ac(x) = 1 & ord[3](x) = 2)");
  EXPECT_TRUE(equal(to_tame(f), f));
  EXPECT_THROW(to_tame(parse("(exists y:VF) ord(x) < ord(y)")), std::invalid_argument);
  EXPECT_THROW(to_tame(parse("ord(x) = m")), std::invalid_argument);
}

TEST(Tame, ComputeD0) {
  EXPECT_EQ(compute_d0(parse("(ord[2](x) = 1 & ord[3](y) = 0)")), 6);
  EXPECT_EQ(compute_d0(parse("ac(x) = 1")), 1);
  EXPECT_EQ(compute_d0(parse("(ord[3](x) = 1 | ord[8](x) = 0)")), 24);
}
