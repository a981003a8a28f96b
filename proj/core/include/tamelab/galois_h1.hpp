#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tamelab {

using Perm = std::vector<int>;

/// Finite group given by its multiplication table; elements are 0..n-1.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  /// Checks closure, associativity, identity and inverses.
  FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table);

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric3();
  static FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);
  /// N x| H with (n1,h1)(n2,h2) = (n1 phi_{h1}(n2), h1 h2); phi[h] is an automorphism of N.
  static FiniteGroup semidirect(const FiniteGroup& n, const FiniteGroup& h, const std::vector<Perm>& phi);
  /// mu_n x| Z/b with the generator of Z/b acting by zeta -> zeta^e (e^b = 1 mod n),
  /// the shape of Gal(K(zeta_n, t^(1/n)) / K) for K = F_q((t)) and e = q.
  static FiniteGroup mu_semidirect(int n, int b, int e);

  int size() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  int pow(int a, std::int64_t k) const;
  int order(int a) const;
  const std::string& label(int a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  bool is_abelian() const;
  /// A small generating set (greedy).
  const std::vector<int>& generators() const { return generators_; }
  bool is_subgroup(const std::vector<int>& elements) const;
  /// Subgroup generated by the given elements, sorted.
  std::vector<int> generated(const std::vector<int>& elements) const;
  bool is_automorphism(const Perm& p) const;
  Perm conjugation(int g) const;  // x -> g x g^-1

  nlohmann::json to_json() const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<int> generators_;
  int identity_ = 0;
};

/// Gamma acting on A by automorphisms: act[s][a] = s(a).
struct GroupAction {
  FiniteGroup gamma;
  FiniteGroup a;
  std::vector<Perm> act;

  /// Checks that each act[s] is an automorphism and s -> act[s] a homomorphism.
  void validate() const;
  int apply(int s, int x) const { return act[s][x]; }

  static GroupAction trivial(const FiniteGroup& gamma, const FiniteGroup& a);
  /// Extends automorphisms given on generators of gamma to all of gamma.
  static GroupAction from_generators(const FiniteGroup& gamma, const FiniteGroup& a, const std::map<int, Perm>& images);
  /// gamma acting through a homomorphism rho: gamma -> Aut(a) given as a function.
  static GroupAction through(const FiniteGroup& gamma, const FiniteGroup& a, const std::function<Perm(int)>& rho);
};

/// Values a_s for s in Gamma.
using Cocycle = std::vector<int>;

bool is_cocycle(const GroupAction& action, const Cocycle& c);
Cocycle trivial_cocycle(const GroupAction& action);
/// a'_s = b^-1 a_s s(b)
Cocycle coboundary_twist(const GroupAction& action, const Cocycle& c, int b);
bool cohomologous(const GroupAction& action, const Cocycle& c1, const Cocycle& c2);

struct H1Set {
  std::vector<Cocycle> cocycles;       // all cocycles
  std::vector<std::size_t> class_of;   // class index of each cocycle
  std::vector<Cocycle> representatives;  // index 0 is the trivial class
  std::map<Cocycle, std::size_t> index;  // cocycle -> position in cocycles

  std::size_t size() const { return representatives.size(); }
  std::size_t classify(const Cocycle& c) const;  // throws std::invalid_argument if not a cocycle
  nlohmann::json to_json(const GroupAction& action) const;
};

struct H1Options {
  std::size_t budget = 1000000;  // candidate generator images
};

/// All cocycles (from generator images, validated) modulo a ~ b^-1 a s(b).
/// Throws BudgetExceeded when |A|^(#generators) exceeds the budget.
H1Set enumerate_h1(const GroupAction& action, const H1Options& options = {});

/// Subgroup of gamma with its own table; embedding[i] is the element of gamma.
struct Subgroup {
  FiniteGroup group;
  std::vector<int> embedding;
  std::size_t index = 1;
};

/// Throws std::invalid_argument if the elements do not form a subgroup.
Subgroup make_subgroup(const FiniteGroup& gamma, const std::vector<int>& elements);
GroupAction restrict_action(const GroupAction& action, const Subgroup& sub);
Cocycle restriction(const GroupAction& action, const Cocycle& c, const Subgroup& sub);

/// s -> (conjugation by c_s) o s. Throws std::invalid_argument if c is not a cocycle.
GroupAction twist(const GroupAction& action, const Cocycle& c);
/// Cocycle of twist(action, c) whose twist gives back the original action.
Cocycle untwist_cocycle(const GroupAction& action, const Cocycle& c);

struct H1MapReport {
  std::vector<std::size_t> image;  // class in target of each source class
  bool well_defined = true;
  bool kernel_trivial = true;  // only the trivial class maps to the trivial class
  bool injective = true;
  bool surjective = true;
  std::vector<std::string> issues;
  nlohmann::json to_json() const;
};

/// Induced map of a pointwise map of cocycles; well-definedness is checked on every cocycle.
H1MapReport map_h1(const H1Set& source, const H1Set& target, const std::function<Cocycle(const Cocycle&)>& f);

/// Map of H1 induced by a Gamma-equivariant homomorphism A -> B (hom[a] in B).
H1MapReport map_h1_by_hom(const GroupAction& source, const GroupAction& target, const std::vector<int>& hom);

struct RestrictionReport {
  std::size_t index = 1;
  std::size_t twists = 0;
  std::vector<bool> kernel_trivial;  // per twisting class of H1(Gamma, A)
  bool all_trivial() const;
  nlohmann::json to_json() const;
};

/// Kernel of H1(Gamma, A_c) -> H1(Gamma', A_c) for every class c of H1(Gamma, A).
RestrictionReport restriction_kernels(const GroupAction& action, const std::vector<int>& subgroup);

/// G-set X with a compatible Gamma action: s(g x) = s(g) s(x).
struct OrbitModel {
  GroupAction galois;  // Gamma acting on G
  int points = 0;
  std::vector<Perm> g_act;      // g_act[g][x] = g x
  std::vector<Perm> gamma_act;  // gamma_act[s][x] = s(x)

  void validate() const;
  std::vector<int> rational_points() const;  // fixed by Gamma
  std::vector<int> rational_group() const;   // G^Gamma
  /// tau with tau x0 = x; empty if x is not in the G-orbit of x0.
  std::vector<int> sections(int x0, int x) const;
};

/// Stabilizer of a rational point x0 with the induced Gamma action.
struct Stabilizer {
  GroupAction action;
  std::vector<int> embedding;  // element of G for each element of the stabilizer
};
Stabilizer stabilizer(const OrbitModel& model, int x0);

/// s -> tau^-1 s(tau) as a cocycle with values in the stabilizer of x0.
/// Throws std::invalid_argument if tau x0 != x or x0, x are not rational.
Cocycle cor_x0(const OrbitModel& model, int x0, int x, int tau);

struct CorReport {
  std::size_t rational_points = 0;  // in the orbit of x0
  std::size_t rational_orbits = 0;
  std::size_t classes_hit = 0;
  bool tau_independent = true;
  bool separates = true;  // same rational orbit <=> cohomologous
  std::vector<std::string> issues;
  nlohmann::json to_json() const;
};

/// Exhaustive check over all rational points of the orbit of x0 and all sections.
CorReport check_cor_x0(const OrbitModel& model, int x0);

/// F_{q^f}^x (cyclic of order q^f - 1) with Frobenius, acting on itself by g.x = g^n x.
OrbitModel kummer_orbit_model(int n, int q, int f);

struct H1CatalogEntry {
  std::string name;
  GroupAction action;
  std::vector<int> subgroup;  // empty if no restriction is attached
};
/// Small instances (|Gamma|, |A| <= 12), abelian and nonabelian; attached subgroups
/// have index prime to |A|.
std::vector<H1CatalogEntry> h1_catalog();

struct OrbitModelEntry {
  std::string name;
  OrbitModel model;
};
/// Kummer models over finite fields and two permutation models with G = S3.
std::vector<OrbitModelEntry> orbit_model_catalog();

/// Group, action and optional subgroup read from JSON, see the README for the format.
struct H1Instance {
  GroupAction action;
  std::vector<int> subgroup;
};
FiniteGroup group_from_json(const nlohmann::json& j);
H1Instance h1_instance_from_json(const nlohmann::json& j);

}  // namespace tamelab
