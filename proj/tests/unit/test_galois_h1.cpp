#include <gtest/gtest.h>

#include <set>

#include "tamelab/galois_h1.hpp"
#include "tamelab/numeric.hpp"

using namespace tamelab;

namespace {

// all maps Gamma -> A by backtracking, then classes by explicit orbits
std::pair<std::size_t, std::size_t> whole_map_h1(const GroupAction& act) {
  const auto& G = act.gamma;
  const auto& A = act.a;
  int n = G.size();
  std::vector<Cocycle> all;
  Cocycle c(n, -1);
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      all.push_back(c);
      return;
    }
    for (int v = 0; v < A.size(); ++v) {
      c[k] = v;
      bool ok = true;
      for (int s = 0; s <= k && ok; ++s)
        for (int t = 0; t <= k && ok; ++t) {
          int st = G.mul(s, t);
          if (st <= k) ok = c[st] == A.mul(c[s], act.apply(s, c[t]));
        }
      if (ok) rec(k + 1);
    }
    c[k] = -1;
  };
  rec(0);
  std::set<std::set<Cocycle>> classes;
  for (const auto& a : all) {
    std::set<Cocycle> orbit;
    for (int b = 0; b < A.size(); ++b) {
      Cocycle x(n);
      for (int s = 0; s < n; ++s) x[s] = A.mul(A.mul(A.inv(b), a[s]), act.apply(s, b));
      orbit.insert(x);
    }
    classes.insert(orbit);
  }
  return {all.size(), classes.size()};
}

Perm negation(int n) {
  Perm p(n);
  for (int x = 0; x < n; ++x) p[x] = (n - x) % n;
  return p;
}

}  // namespace

TEST(GaloisH1, GroupsValidate) {
  auto s3 = FiniteGroup::symmetric3();
  EXPECT_EQ(s3.size(), 6);
  EXPECT_FALSE(s3.is_abelian());
  EXPECT_EQ(FiniteGroup::mu_semidirect(3, 2, 2).size(), 6);
  EXPECT_FALSE(FiniteGroup::mu_semidirect(3, 2, 2).is_abelian());
  EXPECT_TRUE(FiniteGroup::mu_semidirect(4, 1, 1).is_abelian());
  EXPECT_THROW(FiniteGroup::mu_semidirect(7, 2, 3), std::invalid_argument);
  EXPECT_THROW(FiniteGroup({"a", "b"}, {{0, 1}, {0, 1}}), std::invalid_argument);
  EXPECT_EQ(FiniteGroup::cyclic(6).generators().size(), 1u);
  EXPECT_EQ(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)).generators().size(), 2u);
}

TEST(GaloisH1, SmallExamples) {
  auto z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3);
  EXPECT_EQ(enumerate_h1(GroupAction::trivial(z2, z2)).size(), 2u);
  EXPECT_EQ(enumerate_h1(GroupAction::trivial(FiniteGroup::trivial(), z3)).size(), 1u);
  auto inv = GroupAction::from_generators(z2, z3, {{1, negation(3)}});
  auto h = enumerate_h1(inv);
  EXPECT_EQ(h.cocycles.size(), 3u);
  EXPECT_EQ(h.size(), 1u);
  EXPECT_EQ(h.representatives[0], trivial_cocycle(inv));
  EXPECT_THROW(enumerate_h1(GroupAction::trivial(FiniteGroup::cyclic(12), FiniteGroup::cyclic(12)), {5}),
               BudgetExceeded);
}

TEST(GaloisH1, MatchesWholeMapEnumeration) {
  auto catalog = h1_catalog();
  ASSERT_GE(catalog.size(), 10u);
  for (const auto& e : catalog) {
    ASSERT_LE(e.action.gamma.size(), 12) << e.name;
    ASSERT_LE(e.action.a.size(), 12) << e.name;
    auto h = enumerate_h1(e.action);
    auto [cocycles, classes] = whole_map_h1(e.action);
    EXPECT_EQ(h.cocycles.size(), cocycles) << e.name;
    EXPECT_EQ(h.size(), classes) << e.name;
    std::vector<std::size_t> sizes(h.size(), 0);
    for (auto c : h.class_of) ++sizes[c];
    for (auto n : sizes) EXPECT_GT(n, 0u);
  }
}

TEST(GaloisH1, KnownCounts) {
  std::map<std::string, std::size_t> expected{
      {"Z2 trivial on Z2", 2}, {"Z2 trivial on S3", 2}, {"Z3 trivial on S3", 2},
      {"Z4 trivial on Klein", 4}, {"Z2 Frobenius on F9^x", 1}, {"Z4 on Z5 by 2", 1}};
  for (const auto& e : h1_catalog())
    if (expected.count(e.name)) EXPECT_EQ(enumerate_h1(e.action).size(), expected[e.name]) << e.name;
}

TEST(GaloisH1, RestrictionAndTwisting) {
  for (const auto& e : h1_catalog()) {
    if (e.subgroup.empty()) continue;
    auto r = restriction_kernels(e.action, e.subgroup);
    EXPECT_TRUE(r.all_trivial()) << e.name << " " << r.to_json().dump();
    auto h = enumerate_h1(e.action);
    EXPECT_EQ(r.twists, h.size());
  }
  // index 2 into Z/2 coefficients: the nontrivial class dies
  auto z2 = FiniteGroup::cyclic(2);
  auto r = restriction_kernels(GroupAction::trivial(z2, z2), {0});
  EXPECT_FALSE(r.all_trivial());
  EXPECT_THROW(make_subgroup(FiniteGroup::cyclic(6), {0, 1}), std::invalid_argument);

  auto sub = make_subgroup(FiniteGroup::cyclic(6), {0, 1, 2, 3, 4, 5});
  for (const auto& e : h1_catalog())
    if (e.name == "Z6 on Z3 through Z2")
      for (const auto& c : enumerate_h1(e.action).cocycles) EXPECT_EQ(restriction(e.action, c, sub), c);
}

TEST(GaloisH1, TwistThenUntwist) {
  auto s3 = FiniteGroup::symmetric3();
  auto act = GroupAction::from_generators(FiniteGroup::cyclic(2), s3, {{1, s3.conjugation(2)}});
  auto h = enumerate_h1(act);
  for (const auto& c : h.cocycles) {
    auto tw = twist(act, c);
    auto back = twist(tw, untwist_cocycle(act, c));
    EXPECT_EQ(back.act, act.act);
  }
  EXPECT_EQ(twist(act, trivial_cocycle(act)).act, act.act);
  auto z3 = FiniteGroup::cyclic(3);
  auto ab = GroupAction::from_generators(FiniteGroup::cyclic(2), z3, {{1, negation(3)}});
  for (const auto& c : enumerate_h1(ab).cocycles) EXPECT_EQ(twist(ab, c).act, ab.act);
  EXPECT_THROW(twist(act, Cocycle{1, 0}), std::invalid_argument);
}

TEST(GaloisH1, InducedMaps) {
  auto z2 = FiniteGroup::cyclic(2), z4 = FiniteGroup::cyclic(4), z6 = FiniteGroup::cyclic(6);
  auto id = map_h1_by_hom(GroupAction::trivial(z2, z4), GroupAction::trivial(z2, z4), {0, 1, 2, 3});
  EXPECT_TRUE(id.injective && id.surjective && id.well_defined);
  // Z/4 -> Z/2 collapses Hom(Z/2, Z/4) = {0, 2}
  auto collapse = map_h1_by_hom(GroupAction::trivial(z2, z4), GroupAction::trivial(z2, z2), {0, 1, 0, 1});
  EXPECT_FALSE(collapse.kernel_trivial);
  EXPECT_FALSE(collapse.injective);
  // Z/6 -> Z/2 keeps the class of 3
  auto keep = map_h1_by_hom(GroupAction::trivial(z2, z6), GroupAction::trivial(z2, z2), {0, 1, 0, 1, 0, 1});
  EXPECT_TRUE(keep.injective);
  EXPECT_TRUE(keep.surjective);
  EXPECT_THROW(map_h1_by_hom(GroupAction::trivial(z2, z4), GroupAction::trivial(z2, z2), {0, 1, 1, 1}),
               std::invalid_argument);
  auto inv = GroupAction::from_generators(z2, z4, {{1, negation(4)}});
  auto h = enumerate_h1(inv);
  auto bad = map_h1(h, h, [](const Cocycle& c) { return Cocycle{0, c[1] == 2 ? 1 : c[1]}; });
  EXPECT_FALSE(bad.well_defined);
}

TEST(GaloisH1, CorSeparatesOrbits) {
  for (const auto& e : orbit_model_catalog())
    for (int x0 : e.model.rational_points()) {
      auto r = check_cor_x0(e.model, x0);
      EXPECT_TRUE(r.tau_independent) << e.name;
      EXPECT_TRUE(r.separates) << e.name << " " << r.to_json().dump();
      EXPECT_EQ(r.rational_orbits, r.classes_hit) << e.name;
    }
  // F_9^x: 4 = a non-square of F_3^x goes to the nontrivial class of H1(Z/2, mu_2)
  auto m = kummer_orbit_model(2, 3, 2);
  auto st = stabilizer(m, 0);
  auto h = enumerate_h1(st.action);
  EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(h.classify(cor_x0(m, 0, 0, 0)), 0u);
  EXPECT_EQ(h.classify(cor_x0(m, 0, 4, 2)), 1u);
  EXPECT_EQ(h.classify(cor_x0(m, 0, 4, 6)), 1u);
  EXPECT_THROW(cor_x0(m, 0, 4, 1), std::invalid_argument);
  EXPECT_THROW(cor_x0(m, 0, 2, 1), std::invalid_argument);
}

TEST(GaloisH1, JsonInstances) {
  auto inst = h1_instance_from_json(nlohmann::json::parse(
      R"({"gamma": {"cyclic": 2}, "A": {"cyclic": 3}, "action": {"generators": {"1": [0, 2, 1]}}, "subgroup": [0]})"));
  EXPECT_EQ(enumerate_h1(inst.action).size(), 1u);
  EXPECT_EQ(inst.subgroup, std::vector<int>{0});
  EXPECT_THROW(h1_instance_from_json(nlohmann::json::parse(
                   R"({"gamma": {"cyclic": 2}, "A": {"cyclic": 3}, "action": {"generators": {"1": [0, 1, 1]}}})")),
               std::invalid_argument);
}
