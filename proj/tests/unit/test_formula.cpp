#include <gtest/gtest.h>

#include <random>

#include "tamelab/formula.hpp"

using namespace tamelab;

TEST(Formula, ParsesResidueQuantifier) {
  auto f = parse("(exists xi:RF) ac(x) = xi");
  ASSERT_EQ(f->kind, FormulaKind::Exists);
  EXPECT_EQ(f->var_sort, Sort::rf());
  EXPECT_EQ(f->subs[0]->kind, FormulaKind::Eq);
  EXPECT_EQ(f->subs[0]->lhs->kind, TermKind::Ac);
}

TEST(Formula, ParsesOrdComparison) {
  auto f = parse("ord(x) <= ord(y)");
  ASSERT_EQ(f->kind, FormulaKind::Le);
  EXPECT_EQ(f->lhs->sort, Sort::vg());
  EXPECT_EQ(f->lhs->args[0]->sort, Sort::vf());
}

TEST(Formula, RejectsProjectionWithoutDivisibility) {
  EXPECT_THROW(parse("pi_{4,3}(m) = 0"), SortError);
  EXPECT_THROW(parse("pi[4,3](m) = 0"), SortError);
  EXPECT_NO_THROW(parse("pi[4,2](m) = 0"));
  try {
    parse("pi[4,3](m) = 0");
  } catch (const SortError& e) {
    EXPECT_NE(std::string(e.what()).find("pi[4,3]"), std::string::npos);
  }
}

TEST(Formula, SyntaxErrorsCarryPosition) {
  try {
    parse("ord(x) <= ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 10u);
  }
  EXPECT_THROW(parse("(exists x:VQ) true"), ParseError);
  EXPECT_THROW(parse("x = y )"), ParseError);
}

TEST(Formula, SortConflictsNameTheSubterm) {
  try {
    parse("ac(x) = ord(y)");
    FAIL();
  } catch (const SortError& e) {
    EXPECT_NE(std::string(e.what()).find("ac(x)"), std::string::npos);
  }
  EXPECT_THROW(parse("(exists x:RF) ord(x) = 0"), SortError);
  EXPECT_THROW(parse("ac(x) <= ac(y)"), SortError);
}

TEST(Formula, Tameness) {
  EXPECT_TRUE(is_tame(parse("(exists xi:RF) ac(x) = xi")));
  EXPECT_FALSE(is_tame(parse("(exists y:VF) y * y = x")));
  EXPECT_FALSE(is_tame(parse("ord(x) <= ord(y)")));
  EXPECT_TRUE(is_tame(parse("ord[2](x) = 1 & ac(x) = 3")));
  EXPECT_FALSE(is_tame(parse("pi[2](m) = 0")));
}

TEST(Formula, FreeVariables) {
  EXPECT_TRUE(free_vars(parse("(exists x:VF) x = x")).empty());
  auto vs = free_vars(parse("ac(x) = xi:RF"));
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0], std::make_pair(std::string("x"), Sort::vf()));
  EXPECT_EQ(vs[1], std::make_pair(std::string("xi"), Sort::rf()));
  auto bound = free_vars(parse("(exists x:VF) ac(x) = xi:RF"));
  ASSERT_EQ(bound.size(), 1u);
  EXPECT_EQ(bound[0].first, "xi");
}

TEST(Formula, ModuliAreCollected) {
  auto ms = moduli(parse("ord[2](x) = 0 & ord[3](y) = 1"));
  EXPECT_EQ(ms, (std::set<std::int64_t>{2, 3}));
  EXPECT_TRUE(moduli(parse("ac(x) = 1")).empty());
}

TEST(Formula, LiteralsTakeSortFromContext) {
  auto f = parse("ord[4](x) = 3");
  EXPECT_EQ(f->rhs->sort, Sort::vgq(4));
  auto g = parse("2 = 3:RF");
  EXPECT_EQ(g->lhs->sort, Sort::rf());
  auto h = parse("2 * m:VG = ord(x)");
  EXPECT_EQ(h->lhs->kind, TermKind::Scale);
  EXPECT_EQ(h->lhs->k, 2);
}

TEST(Formula, JsonExportIsStable) {
  auto j = to_json(parse("(forall m:VGQ[3]) m = ord[3](x)"));
  EXPECT_EQ(j["kind"], "forall");
  EXPECT_EQ(j["sort"], "VGQ[3]");
  EXPECT_EQ(j["body"]["rhs"]["kind"], "ord_n");
  EXPECT_EQ(j["body"]["rhs"]["n"], 3);
}

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  TermPtr term(Sort s, int depth) {
    int leaf = depth <= 0 ? 1 : pick(3) == 0;
    if (leaf) {
      if (pick(2) == 0) {
        const char* names[] = {"a", "b", "c"};
        std::string prefix = s.kind == SortKind::VF ? "x" : s.kind == SortKind::RF ? "r"
                             : s.kind == SortKind::VG ? "g" : "q" + std::to_string(s.n);
        return var(prefix + names[pick(3)], s);
      }
      Rational v = pick(7) - 3;
      if (s.kind == SortKind::VF && pick(3) == 0) v /= pick(4) + 2;
      return lit(v, s);
    }
    int choice = pick(s.is_ring() ? 6 : 5);
    switch (choice) {
      case 0: return add(term(s, depth - 1), term(s, depth - 1));
      case 1: return sub(term(s, depth - 1), term(s, depth - 1));
      case 2: return neg(term(s, depth - 1));
      case 3:
        if (s.is_ring()) return mul(term(s, depth - 1), term(s, depth - 1));
        return scale(pick(9) - 4, term(s, depth - 1));
      case 5: return pow(term(s, depth - 1), pick(3));
      default: break;
    }
    switch (s.kind) {
      case SortKind::VF: return term(s, depth - 1);
      case SortKind::RF: return ac(term(Sort::vf(), depth - 1));
      case SortKind::VG: return ord(term(Sort::vf(), depth - 1));
      case SortKind::VGQ:
        if (pick(3) == 0) return ord_n(s.n, term(Sort::vf(), depth - 1));
        if (pick(2) == 0) return pi(s.n, term(Sort::vg(), depth - 1));
        return pi_nm(2 * s.n, s.n, term(Sort::vgq(2 * s.n), depth - 1));
    }
    return nullptr;
  }

  FormulaPtr formula(int depth) {
    Sort sorts[] = {Sort::vf(), Sort::rf(), Sort::vg(), Sort::vgq(2), Sort::vgq(3)};
    if (depth <= 0 || pick(4) == 0) {
      int k = pick(7);
      if (k == 0) return pick(2) ? top() : bot();
      Sort s = sorts[pick(5)];
      if (s.kind == SortKind::VG && pick(2)) return le(term(s, 2), term(s, 2));
      return eq(term(s, 2), term(s, 2));
    }
    switch (pick(6)) {
      case 0: return not_(formula(depth - 1));
      case 1: return and_(formula(depth - 1), formula(depth - 1));
      case 2: return or_(formula(depth - 1), formula(depth - 1));
      case 3: return implies(formula(depth - 1), formula(depth - 1));
      default: {
        Sort s = sorts[pick(5)];
        std::string prefix = s.kind == SortKind::VF ? "x" : s.kind == SortKind::RF ? "r"
                             : s.kind == SortKind::VG ? "g" : "q" + std::to_string(s.n);
        const char* names[] = {"a", "b", "c"};
        auto body = formula(depth - 1);
        std::string v = prefix + names[pick(3)];
        return pick(2) ? exists(v, s, body) : forall(v, s, body);
      }
    }
  }
};

}  // namespace

TEST(Formula, PrintParseRoundTripOnRandomAsts) {
  Gen gen(20261015);
  for (int i = 0; i < 2000; ++i) {
    auto f = gen.formula(4);
    std::string text = print(f);
    FormulaPtr back;
    ASSERT_NO_THROW(back = parse(text)) << text;
    EXPECT_TRUE(equal(f, back)) << text << "\n" << print(back);
    EXPECT_EQ(print(back), text);
  }
}

TEST(Formula, PrintIsIdentityUpToWhitespace) {
  std::string src = "(exists m:VG) (ord(x) = (2 * m) & !pi[2](m) = 1)";
  EXPECT_EQ(print(parse(src)), src);
  EXPECT_EQ(print(parse("  (exists m:VG)(ord(x)=(2*m)&!pi[2](m)=1)")), src);
}
