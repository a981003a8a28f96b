#include "tamelab/galois_h1.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tamelab/numeric.hpp"

namespace tamelab {

namespace {

bool is_permutation_of(const Perm& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

Perm compose(const Perm& f, const Perm& g) {  // f o g
  Perm out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f[g[i]];
  return out;
}

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table)
    : labels_(std::move(labels)), table_(std::move(table)) {
  int n = size();
  if (n == 0) throw std::invalid_argument("group table is empty");
  if (static_cast<int>(labels_.size()) != n) throw std::invalid_argument("group labels do not match the table");
  for (const auto& row : table_)
    if (!is_permutation_of(row, n)) throw std::invalid_argument("group table rows must be permutations");
  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw std::invalid_argument("group table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw std::invalid_argument("group table is not associative");
  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[a] = b;
  for (int a = 0; a < n; ++a)
    if (inverse_[a] < 0 || table_[inverse_[a]][a] != identity_) throw std::invalid_argument("group table lacks inverses");

  std::vector<int> byorder(n);
  std::iota(byorder.begin(), byorder.end(), 0);
  std::stable_sort(byorder.begin(), byorder.end(), [&](int a, int b) { return order(a) > order(b); });
  std::vector<int> span{identity_};
  for (int g : byorder) {
    if (std::binary_search(span.begin(), span.end(), g)) continue;
    generators_.push_back(g);
    span = generated(generators_);
  }
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return FiniteGroup(std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::symmetric3() {
  std::vector<Perm> elems;
  Perm p{0, 1, 2};
  do elems.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::string> labels;
  for (const auto& e : elems) labels.push_back("[" + std::to_string(e[0] + 1) + std::to_string(e[1] + 1) +
                                               std::to_string(e[2] + 1) + "]");
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      table[a][b] = static_cast<int>(std::find(elems.begin(), elems.end(), compose(elems[a], elems[b])) - elems.begin());
  return FiniteGroup(std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  std::vector<Perm> trivial_phi(h.size(), identity_perm(g.size()));
  return semidirect(g, h, trivial_phi);
}

FiniteGroup FiniteGroup::semidirect(const FiniteGroup& n, const FiniteGroup& h, const std::vector<Perm>& phi) {
  if (static_cast<int>(phi.size()) != h.size()) throw std::invalid_argument("semidirect: one automorphism per element of H");
  for (int x = 0; x < h.size(); ++x) {
    if (!n.is_automorphism(phi[x])) throw std::invalid_argument("semidirect: phi(h) is not an automorphism");
    for (int y = 0; y < h.size(); ++y)
      if (phi[h.mul(x, y)] != compose(phi[x], phi[y])) throw std::invalid_argument("semidirect: phi is not a homomorphism");
  }
  int nn = n.size(), nh = h.size();
  auto id = [&](int a, int b) { return b * nn + a; };
  std::vector<std::string> labels(nn * nh);
  std::vector<std::vector<int>> table(nn * nh, std::vector<int>(nn * nh));
  for (int b1 = 0; b1 < nh; ++b1)
    for (int a1 = 0; a1 < nn; ++a1) {
      labels[id(a1, b1)] = "(" + n.label(a1) + "," + h.label(b1) + ")";
      for (int b2 = 0; b2 < nh; ++b2)
        for (int a2 = 0; a2 < nn; ++a2) table[id(a1, b1)][id(a2, b2)] = id(n.mul(a1, phi[b1][a2]), h.mul(b1, b2));
    }
  return FiniteGroup(std::move(labels), std::move(table));
}

FiniteGroup FiniteGroup::mu_semidirect(int n, int b, int e) {
  if (gcd64(e, n) != 1 || pow_mod(mod(e, n), b, n) != 1 % n)
    throw std::invalid_argument("mu_semidirect: need gcd(e, n) = 1 and e^b = 1 mod n");
  std::vector<Perm> phi(b, Perm(n));
  for (int h = 0; h < b; ++h)
    for (int z = 0; z < n; ++z) phi[h][z] = static_cast<int>(mod(pow_mod(mod(e, n), h, n) * z, n));
  return semidirect(cyclic(n), cyclic(b), phi);
}

int FiniteGroup::pow(int a, std::int64_t k) const {
  if (k < 0) return pow(inv(a), -k);
  int r = identity_;
  for (std::int64_t i = 0; i < k % order(a); ++i) r = mul(r, a);
  return r;
}

int FiniteGroup::order(int a) const {
  int k = 1;
  for (int x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elements) const {
  std::set<int> s(elements.begin(), elements.end());
  if (s.empty() || !s.count(identity_)) return false;
  for (int x : s)
    if (x < 0 || x >= size()) return false;
  for (int a : s)
    for (int b : s)
      if (!s.count(mul(a, b))) return false;
  return true;
}

std::vector<int> FiniteGroup::generated(const std::vector<int>& elements) const {
  std::set<int> s{identity_};
  std::deque<int> queue{identity_};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int g : elements) {
      int y = mul(x, g);
      if (s.insert(y).second) queue.push_back(y);
    }
  }
  return {s.begin(), s.end()};
}

bool FiniteGroup::is_automorphism(const Perm& p) const {
  if (!is_permutation_of(p, size())) return false;
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (p[mul(a, b)] != mul(p[a], p[b])) return false;
  return true;
}

Perm FiniteGroup::conjugation(int g) const {
  Perm p(size());
  for (int x = 0; x < size(); ++x) p[x] = mul(mul(g, x), inv(g));
  return p;
}

nlohmann::json FiniteGroup::to_json() const { return {{"labels", labels_}, {"table", table_}}; }

void GroupAction::validate() const {
  if (static_cast<int>(act.size()) != gamma.size()) throw std::invalid_argument("action needs one automorphism per element");
  for (int s = 0; s < gamma.size(); ++s)
    if (!a.is_automorphism(act[s])) throw std::invalid_argument("action of " + gamma.label(s) + " is not an automorphism");
  if (act[gamma.identity()] != identity_perm(a.size())) throw std::invalid_argument("identity does not act trivially");
  for (int s = 0; s < gamma.size(); ++s)
    for (int t = 0; t < gamma.size(); ++t)
      if (act[gamma.mul(s, t)] != compose(act[s], act[t])) throw std::invalid_argument("action is not a homomorphism");
}

GroupAction GroupAction::trivial(const FiniteGroup& gamma, const FiniteGroup& a) {
  return {gamma, a, std::vector<Perm>(gamma.size(), identity_perm(a.size()))};
}

GroupAction GroupAction::from_generators(const FiniteGroup& gamma, const FiniteGroup& a,
                                         const std::map<int, Perm>& images) {
  std::vector<Perm> act(gamma.size());
  std::vector<char> known(gamma.size(), 0);
  act[gamma.identity()] = identity_perm(a.size());
  known[gamma.identity()] = 1;
  std::deque<int> queue{gamma.identity()};
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (const auto& [s, perm] : images) {
      if (s < 0 || s >= gamma.size()) throw std::invalid_argument("action generator out of range");
      if (!is_permutation_of(perm, a.size())) throw std::invalid_argument("action image is not a permutation");
      int gs = gamma.mul(g, s);
      Perm p = compose(act[g], perm);
      if (known[gs]) {
        if (act[gs] != p) throw std::invalid_argument("generator images do not define a homomorphism");
        continue;
      }
      act[gs] = std::move(p);
      known[gs] = 1;
      queue.push_back(gs);
    }
  }
  if (std::find(known.begin(), known.end(), 0) != known.end())
    throw std::invalid_argument("action generators do not generate the group");
  GroupAction out{gamma, a, std::move(act)};
  out.validate();
  return out;
}

GroupAction GroupAction::through(const FiniteGroup& gamma, const FiniteGroup& a, const std::function<Perm(int)>& rho) {
  GroupAction out{gamma, a, {}};
  for (int s = 0; s < gamma.size(); ++s) out.act.push_back(rho(s));
  out.validate();
  return out;
}

bool is_cocycle(const GroupAction& action, const Cocycle& c) {
  const auto& G = action.gamma;
  const auto& A = action.a;
  if (static_cast<int>(c.size()) != G.size()) return false;
  for (int v : c)
    if (v < 0 || v >= A.size()) return false;
  for (int s = 0; s < G.size(); ++s)
    for (int t = 0; t < G.size(); ++t)
      if (c[G.mul(s, t)] != A.mul(c[s], action.apply(s, c[t]))) return false;
  return true;
}

Cocycle trivial_cocycle(const GroupAction& action) { return Cocycle(action.gamma.size(), action.a.identity()); }

Cocycle coboundary_twist(const GroupAction& action, const Cocycle& c, int b) {
  const auto& A = action.a;
  Cocycle out(c.size());
  for (int s = 0; s < action.gamma.size(); ++s) out[s] = A.mul(A.mul(A.inv(b), c[s]), action.apply(s, b));
  return out;
}

bool cohomologous(const GroupAction& action, const Cocycle& c1, const Cocycle& c2) {
  for (int b = 0; b < action.a.size(); ++b)
    if (coboundary_twist(action, c1, b) == c2) return true;
  return false;
}

std::size_t H1Set::classify(const Cocycle& c) const {
  auto it = index.find(c);
  if (it == index.end()) throw std::invalid_argument("not a cocycle of this action");
  return class_of[it->second];
}

nlohmann::json H1Set::to_json(const GroupAction& action) const {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : representatives) {
    nlohmann::json m = nlohmann::json::object();
    for (int s = 0; s < action.gamma.size(); ++s) m[action.gamma.label(s)] = action.a.label(r[s]);
    reps.push_back(m);
  }
  return {{"classes", size()}, {"cocycles", cocycles.size()}, {"representatives", reps}};
}

H1Set enumerate_h1(const GroupAction& action, const H1Options& options) {
  const auto& G = action.gamma;
  const auto& A = action.a;
  const auto& gens = G.generators();
  double candidates = std::pow(static_cast<double>(A.size()), static_cast<double>(gens.size()));
  if (candidates > static_cast<double>(options.budget))
    throw BudgetExceeded("enumerate_h1: " + std::to_string(static_cast<long long>(candidates)) +
                         " candidate cocycles exceed the budget");
  H1Set out;
  std::vector<int> images(gens.size(), 0);
  while (true) {
    Cocycle c(G.size(), -1);
    c[G.identity()] = A.identity();
    std::deque<int> queue{G.identity()};
    bool ok = true;
    while (!queue.empty() && ok) {
      int g = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < gens.size() && ok; ++i) {
        int gs = G.mul(g, gens[i]);
        int v = A.mul(c[g], action.apply(g, images[i]));
        if (c[gs] < 0) {
          c[gs] = v;
          queue.push_back(gs);
        } else if (c[gs] != v) {
          ok = false;
        }
      }
    }
    if (ok && is_cocycle(action, c)) {
      out.index.emplace(c, out.cocycles.size());
      out.cocycles.push_back(std::move(c));
    }
    std::size_t k = 0;
    while (k < images.size() && ++images[k] == A.size()) images[k++] = 0;
    if (k == images.size()) break;
  }

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  out.class_of.assign(out.cocycles.size(), kUnset);
  std::vector<std::size_t> order{out.index.at(trivial_cocycle(action))};
  for (std::size_t i = 0; i < out.cocycles.size(); ++i) order.push_back(i);
  for (std::size_t i : order) {
    if (out.class_of[i] != kUnset) continue;
    std::size_t id = out.representatives.size();
    out.representatives.push_back(out.cocycles[i]);
    for (int b = 0; b < A.size(); ++b) out.class_of[out.index.at(coboundary_twist(action, out.cocycles[i], b))] = id;
  }
  return out;
}

Subgroup make_subgroup(const FiniteGroup& gamma, const std::vector<int>& elements) {
  if (!gamma.is_subgroup(elements)) throw std::invalid_argument("elements do not form a subgroup");
  std::vector<int> emb(elements.begin(), elements.end());
  std::sort(emb.begin(), emb.end());
  emb.erase(std::unique(emb.begin(), emb.end()), emb.end());
  int n = static_cast<int>(emb.size());
  auto pos = [&](int g) { return static_cast<int>(std::lower_bound(emb.begin(), emb.end(), g) - emb.begin()); };
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    labels.push_back(gamma.label(emb[i]));
    for (int j = 0; j < n; ++j) table[i][j] = pos(gamma.mul(emb[i], emb[j]));
  }
  return {FiniteGroup(std::move(labels), std::move(table)), emb, static_cast<std::size_t>(gamma.size() / n)};
}

GroupAction restrict_action(const GroupAction& action, const Subgroup& sub) {
  GroupAction out{sub.group, action.a, {}};
  for (int g : sub.embedding) out.act.push_back(action.act[g]);
  return out;
}

Cocycle restriction(const GroupAction& action, const Cocycle& c, const Subgroup& sub) {
  if (!is_cocycle(action, c)) throw std::invalid_argument("restriction: not a cocycle");
  Cocycle out;
  for (int g : sub.embedding) out.push_back(c[g]);
  return out;
}

GroupAction twist(const GroupAction& action, const Cocycle& c) {
  if (!is_cocycle(action, c)) throw std::invalid_argument("twist: not a cocycle");
  GroupAction out{action.gamma, action.a, {}};
  for (int s = 0; s < action.gamma.size(); ++s)
    out.act.push_back(compose(action.a.conjugation(c[s]), action.act[s]));
  out.validate();
  return out;
}

Cocycle untwist_cocycle(const GroupAction& action, const Cocycle& c) {
  Cocycle out(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) out[s] = action.a.inv(c[s]);
  return out;
}

nlohmann::json H1MapReport::to_json() const {
  return {{"image", image},           {"well_defined", well_defined}, {"kernel_trivial", kernel_trivial},
          {"injective", injective},   {"surjective", surjective},     {"issues", issues}};
}

H1MapReport map_h1(const H1Set& source, const H1Set& target, const std::function<Cocycle(const Cocycle&)>& f) {
  H1MapReport r;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  r.image.assign(source.size(), kUnset);
  for (std::size_t i = 0; i < source.cocycles.size(); ++i) {
    auto it = target.index.find(f(source.cocycles[i]));
    if (it == target.index.end()) {
      r.well_defined = false;
      r.issues.push_back("a cocycle is not sent to a cocycle");
      continue;
    }
    std::size_t cls = source.class_of[i], t = target.class_of[it->second];
    if (r.image[cls] == kUnset) {
      r.image[cls] = t;
    } else if (r.image[cls] != t) {
      r.well_defined = false;
      r.issues.push_back("class " + std::to_string(cls) + " has images in two classes");
    }
  }
  std::set<std::size_t> hit;
  std::size_t to_trivial = 0;
  for (std::size_t c = 0; c < r.image.size(); ++c) {
    if (r.image[c] == kUnset) continue;
    hit.insert(r.image[c]);
    if (r.image[c] == 0) ++to_trivial;
  }
  if (!r.image.empty() && r.image[0] != 0) r.issues.push_back("trivial class not sent to the trivial class");
  r.kernel_trivial = r.well_defined && to_trivial == 1 && r.image[0] == 0;
  r.injective = r.well_defined && hit.size() == r.image.size();
  r.surjective = r.well_defined && hit.size() == target.size();
  return r;
}

H1MapReport map_h1_by_hom(const GroupAction& source, const GroupAction& target, const std::vector<int>& hom) {
  if (source.gamma.table() != target.gamma.table()) throw std::invalid_argument("map_h1_by_hom: different acting groups");
  if (static_cast<int>(hom.size()) != source.a.size()) throw std::invalid_argument("map_h1_by_hom: hom has wrong size");
  for (int x : hom)
    if (x < 0 || x >= target.a.size()) throw std::invalid_argument("map_h1_by_hom: hom value out of range");
  for (int a = 0; a < source.a.size(); ++a) {
    for (int b = 0; b < source.a.size(); ++b)
      if (hom[source.a.mul(a, b)] != target.a.mul(hom[a], hom[b]))
        throw std::invalid_argument("map_h1_by_hom: not a homomorphism");
    for (int s = 0; s < source.gamma.size(); ++s)
      if (hom[source.apply(s, a)] != target.apply(s, hom[a]))
        throw std::invalid_argument("map_h1_by_hom: not equivariant");
  }
  auto hs = enumerate_h1(source), ht = enumerate_h1(target);
  return map_h1(hs, ht, [&](const Cocycle& c) {
    Cocycle out;
    for (int v : c) out.push_back(hom[v]);
    return out;
  });
}

bool RestrictionReport::all_trivial() const {
  return std::all_of(kernel_trivial.begin(), kernel_trivial.end(), [](bool b) { return b; });
}

nlohmann::json RestrictionReport::to_json() const {
  return {{"index", index}, {"twists", twists}, {"kernel_trivial", kernel_trivial}, {"all_trivial", all_trivial()}};
}

RestrictionReport restriction_kernels(const GroupAction& action, const std::vector<int>& subgroup) {
  Subgroup sub = make_subgroup(action.gamma, subgroup);
  RestrictionReport r;
  r.index = sub.index;
  H1Set h = enumerate_h1(action);
  for (const auto& c : h.representatives) {
    GroupAction tw = twist(action, c);
    GroupAction res = restrict_action(tw, sub);
    auto map = map_h1(enumerate_h1(tw), enumerate_h1(res), [&](const Cocycle& a) { return restriction(tw, a, sub); });
    r.kernel_trivial.push_back(map.kernel_trivial);
    ++r.twists;
  }
  return r;
}

void OrbitModel::validate() const {
  galois.validate();
  const auto& G = galois.a;
  const auto& Gam = galois.gamma;
  if (static_cast<int>(g_act.size()) != G.size() || static_cast<int>(gamma_act.size()) != Gam.size())
    throw std::invalid_argument("orbit model: action tables have the wrong size");
  for (const auto& p : g_act)
    if (!is_permutation_of(p, points)) throw std::invalid_argument("orbit model: G does not act by permutations");
  for (const auto& p : gamma_act)
    if (!is_permutation_of(p, points)) throw std::invalid_argument("orbit model: Gamma does not act by permutations");
  for (int g = 0; g < G.size(); ++g)
    for (int h = 0; h < G.size(); ++h)
      if (g_act[G.mul(g, h)] != compose(g_act[g], g_act[h])) throw std::invalid_argument("orbit model: G action is not a homomorphism");
  for (int s = 0; s < Gam.size(); ++s)
    for (int t = 0; t < Gam.size(); ++t)
      if (gamma_act[Gam.mul(s, t)] != compose(gamma_act[s], gamma_act[t]))
        throw std::invalid_argument("orbit model: Gamma action is not a homomorphism");
  if (g_act[G.identity()] != identity_perm(points) || gamma_act[Gam.identity()] != identity_perm(points))
    throw std::invalid_argument("orbit model: identity does not act trivially");
  for (int s = 0; s < Gam.size(); ++s)
    for (int g = 0; g < G.size(); ++g)
      for (int x = 0; x < points; ++x)
        if (gamma_act[s][g_act[g][x]] != g_act[galois.apply(s, g)][gamma_act[s][x]])
          throw std::invalid_argument("orbit model: actions are not compatible");
}

std::vector<int> OrbitModel::rational_points() const {
  std::vector<int> out;
  for (int x = 0; x < points; ++x) {
    bool fixed = true;
    for (const auto& p : gamma_act) fixed = fixed && p[x] == x;
    if (fixed) out.push_back(x);
  }
  return out;
}

std::vector<int> OrbitModel::rational_group() const {
  std::vector<int> out;
  for (int g = 0; g < galois.a.size(); ++g) {
    bool fixed = true;
    for (const auto& p : galois.act) fixed = fixed && p[g] == g;
    if (fixed) out.push_back(g);
  }
  return out;
}

std::vector<int> OrbitModel::sections(int x0, int x) const {
  std::vector<int> out;
  for (int g = 0; g < galois.a.size(); ++g)
    if (g_act[g][x0] == x) out.push_back(g);
  return out;
}

namespace {

void require_rational(const OrbitModel& model, int x) {
  if (x < 0 || x >= model.points) throw std::invalid_argument("point out of range");
  for (const auto& p : model.gamma_act)
    if (p[x] != x) throw std::invalid_argument("point " + std::to_string(x) + " is not rational");
}

}  // namespace

Stabilizer stabilizer(const OrbitModel& model, int x0) {
  require_rational(model, x0);
  const auto& G = model.galois.a;
  std::vector<int> elems;
  for (int g = 0; g < G.size(); ++g)
    if (model.g_act[g][x0] == x0) elems.push_back(g);
  Subgroup sub = make_subgroup(G, elems);
  auto pos = [&](int g) {
    return static_cast<int>(std::lower_bound(sub.embedding.begin(), sub.embedding.end(), g) - sub.embedding.begin());
  };
  GroupAction act{model.galois.gamma, sub.group, {}};
  for (int s = 0; s < model.galois.gamma.size(); ++s) {
    Perm p;
    for (int g : sub.embedding) p.push_back(pos(model.galois.apply(s, g)));
    act.act.push_back(std::move(p));
  }
  act.validate();
  return {std::move(act), std::move(sub.embedding)};
}

Cocycle cor_x0(const OrbitModel& model, int x0, int x, int tau) {
  require_rational(model, x0);
  require_rational(model, x);
  const auto& G = model.galois.a;
  if (tau < 0 || tau >= G.size() || model.g_act[tau][x0] != x)
    throw std::invalid_argument("cor_x0: tau does not move x0 to x");
  Stabilizer st = stabilizer(model, x0);
  Cocycle c;
  for (int s = 0; s < model.galois.gamma.size(); ++s) {
    int v = G.mul(G.inv(tau), model.galois.apply(s, tau));
    auto it = std::lower_bound(st.embedding.begin(), st.embedding.end(), v);
    if (it == st.embedding.end() || *it != v) throw std::logic_error("cor_x0: value outside the stabilizer");
    c.push_back(static_cast<int>(it - st.embedding.begin()));
  }
  if (!is_cocycle(st.action, c)) throw std::logic_error("cor_x0: result is not a cocycle");
  return c;
}

nlohmann::json CorReport::to_json() const {
  return {{"rational_points", rational_points}, {"rational_orbits", rational_orbits}, {"classes_hit", classes_hit},
          {"tau_independent", tau_independent}, {"separates", separates},             {"issues", issues}};
}

CorReport check_cor_x0(const OrbitModel& model, int x0) {
  model.validate();
  Stabilizer st = stabilizer(model, x0);
  H1Set h = enumerate_h1(st.action);
  CorReport r;
  std::vector<int> pts;
  std::map<int, std::size_t> cls;
  for (int x : model.rational_points()) {
    auto taus = model.sections(x0, x);
    if (taus.empty()) continue;
    pts.push_back(x);
    std::set<std::size_t> seen;
    for (int tau : taus) seen.insert(h.classify(cor_x0(model, x0, x, tau)));
    if (seen.size() != 1) {
      r.tau_independent = false;
      r.issues.push_back("point " + std::to_string(x) + ": sections give different classes");
    }
    cls[x] = *seen.begin();
  }
  std::vector<int> rg = model.rational_group();
  std::set<std::size_t> hit;
  std::set<std::set<int>> orbits;
  for (int x : pts) {
    hit.insert(cls[x]);
    std::set<int> orbit;
    for (int g : rg) orbit.insert(model.g_act[g][x]);
    orbits.insert(orbit);
    for (int y : pts) {
      bool same = orbit.count(y) > 0;
      if (same != (cls[x] == cls[y])) {
        r.separates = false;
        if (r.issues.size() < 5)
          r.issues.push_back("points " + std::to_string(x) + "," + std::to_string(y) + ": orbit and class disagree");
      }
    }
  }
  r.rational_points = pts.size();
  r.rational_orbits = orbits.size();
  r.classes_hit = hit.size();
  return r;
}

OrbitModel kummer_orbit_model(int n, int q, int f) {
  if (n < 1 || q < 2 || f < 1) throw std::invalid_argument("kummer_orbit_model: need n >= 1, q >= 2, f >= 1");
  std::int64_t m64 = 1;
  for (int i = 0; i < f; ++i) m64 *= q;
  m64 -= 1;
  if (m64 > 4096) throw BudgetExceeded("kummer_orbit_model: q^f - 1 too large");
  int m = static_cast<int>(m64);
  FiniteGroup C = FiniteGroup::cyclic(m), Gam = FiniteGroup::cyclic(f);
  auto frob = [&](int s, int x) { return static_cast<int>(mod(static_cast<std::int64_t>(x) * pow_mod(q, s, m), m)); };
  OrbitModel model;
  model.galois = GroupAction::through(Gam, C, [&](int s) {
    Perm p(m);
    for (int x = 0; x < m; ++x) p[x] = frob(s, x);
    return p;
  });
  model.points = m;
  for (int g = 0; g < m; ++g) {
    Perm p(m);
    for (int x = 0; x < m; ++x) p[x] = static_cast<int>(mod(static_cast<std::int64_t>(n) * g + x, m));
    model.g_act.push_back(std::move(p));
  }
  for (int s = 0; s < f; ++s) {
    Perm p(m);
    for (int x = 0; x < m; ++x) p[x] = frob(s, x);
    model.gamma_act.push_back(std::move(p));
  }
  model.validate();
  return model;
}

namespace {

Perm multiply_by(int n, int k) {
  Perm p(n);
  for (int x = 0; x < n; ++x) p[x] = static_cast<int>(mod(static_cast<std::int64_t>(k) * x, n));
  return p;
}

std::vector<Perm> s3_points() {
  std::vector<Perm> elems;
  Perm p{0, 1, 2};
  do elems.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return elems;
}

}  // namespace

std::vector<H1CatalogEntry> h1_catalog() {
  auto z = [](int n) { return FiniteGroup::cyclic(n); };
  auto s3 = FiniteGroup::symmetric3();
  auto klein = FiniteGroup::direct_product(z(2), z(2));
  auto mu3 = FiniteGroup::mu_semidirect(3, 2, 2);
  auto transposition = s3.conjugation(2);
  auto odd = [&](int s) { return s3.order(s) == 2; };
  std::vector<H1CatalogEntry> out;
  auto add = [&](std::string name, GroupAction a, std::vector<int> sub = {}) {
    out.push_back({std::move(name), std::move(a), std::move(sub)});
  };
  add("Z2 trivial on Z2", GroupAction::trivial(z(2), z(2)));
  add("1 on Z3", GroupAction::trivial(FiniteGroup::trivial(), z(3)));
  add("Z2 inverting Z3", GroupAction::from_generators(z(2), z(3), {{1, multiply_by(3, -1)}}), {0});
  add("Z2 inverting Z4", GroupAction::from_generators(z(2), z(4), {{1, multiply_by(4, -1)}}));
  add("Z4 on Z5 by 2", GroupAction::from_generators(z(4), z(5), {{1, multiply_by(5, 2)}}), {0});
  add("Z6 on Z3 through Z2", GroupAction::from_generators(z(6), z(3), {{1, multiply_by(3, -1)}}), {0, 2, 4});
  add("Z6 trivial on Z2", GroupAction::trivial(z(6), z(2)), {0, 3});
  add("Z6 on Z4 through Z2", GroupAction::from_generators(z(6), z(4), {{1, multiply_by(4, -1)}}), {0, 3});
  add("Z2 on S3 by conjugation", GroupAction::from_generators(z(2), s3, {{1, transposition}}));
  add("Z2 trivial on S3", GroupAction::trivial(z(2), s3));
  add("Z3 trivial on S3", GroupAction::trivial(z(3), s3));
  add("S3 on Z3 by sign", GroupAction::through(s3, z(3), [&](int s) { return multiply_by(3, odd(s) ? -1 : 1); }),
      {0, 3, 4});
  add("S3 trivial on Z2", GroupAction::trivial(s3, z(2)), {0, 2});
  add("mu3 x| Z2 on mu3", GroupAction::through(mu3, z(3), [](int s) { return multiply_by(3, s / 3 ? 2 : 1); }),
      {0, 1, 2});
  add("Z2 Frobenius on F9^x", GroupAction::from_generators(z(2), z(8), {{1, multiply_by(8, 3)}}));
  add("Z4 trivial on Klein", GroupAction::trivial(z(4), klein));
  add("Klein on Z3 through first factor",
      GroupAction::through(klein, z(3), [](int s) { return multiply_by(3, s % 2 ? -1 : 1); }));
  add("Z10 on S3 by conjugation", GroupAction::from_generators(z(10), s3, {{1, transposition}}), {0, 5});
  add("Z10 trivial on S3", GroupAction::trivial(z(10), s3), {0, 5});
  return out;
}

std::vector<OrbitModelEntry> orbit_model_catalog() {
  std::vector<OrbitModelEntry> out;
  for (auto [n, q, f] : std::vector<std::array<int, 3>>{
           {2, 3, 2}, {2, 5, 2}, {3, 4, 2}, {2, 7, 2}, {3, 7, 2}, {2, 3, 3}, {4, 5, 2}, {3, 2, 2}, {3, 7, 1}})
    out.push_back({"kummer n=" + std::to_string(n) + " F_" + std::to_string(q) + "^" + std::to_string(f),
                   kummer_orbit_model(n, q, f)});
  auto s3 = FiniteGroup::symmetric3();
  auto pts = s3_points();
  for (bool conj : {true, false}) {
    OrbitModel m;
    m.galois = conj ? GroupAction::from_generators(FiniteGroup::cyclic(2), s3, {{1, s3.conjugation(2)}})
                    : GroupAction::trivial(FiniteGroup::cyclic(2), s3);
    m.points = 3;
    m.g_act = pts;
    m.gamma_act = {pts[0], conj ? pts[2] : pts[0]};
    m.validate();
    out.push_back({conj ? "S3 on 3 points, Z2 by a transposition" : "S3 on 3 points, trivial Z2", std::move(m)});
  }
  return out;
}

FiniteGroup group_from_json(const nlohmann::json& j) {
  if (j.contains("cyclic")) return FiniteGroup::cyclic(j.at("cyclic").get<int>());
  if (j.contains("trivial")) return FiniteGroup::trivial();
  if (j.contains("symmetric")) {
    if (j.at("symmetric").get<int>() != 3) throw std::invalid_argument("only symmetric: 3 is built in");
    return FiniteGroup::symmetric3();
  }
  if (j.contains("product"))
    return FiniteGroup::direct_product(group_from_json(j.at("product").at(0)), group_from_json(j.at("product").at(1)));
  if (j.contains("mu_semidirect")) {
    auto v = j.at("mu_semidirect").get<std::vector<int>>();
    if (v.size() != 3) throw std::invalid_argument("mu_semidirect takes [n, b, e]");
    return FiniteGroup::mu_semidirect(v[0], v[1], v[2]);
  }
  if (j.contains("table")) {
    auto table = j.at("table").get<std::vector<std::vector<int>>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      labels = j.at("labels").get<std::vector<std::string>>();
    } else {
      for (std::size_t i = 0; i < table.size(); ++i) labels.push_back(std::to_string(i));
    }
    return FiniteGroup(std::move(labels), std::move(table));
  }
  throw std::invalid_argument("group must give cyclic, trivial, symmetric, product, mu_semidirect or table");
}

H1Instance h1_instance_from_json(const nlohmann::json& j) {
  FiniteGroup gamma = group_from_json(j.at("gamma"));
  FiniteGroup a = group_from_json(j.at("A"));
  H1Instance inst;
  const auto& act = j.contains("action") ? j.at("action") : nlohmann::json("trivial");
  if (act.is_string()) {
    if (act.get<std::string>() != "trivial") throw std::invalid_argument("unknown action '" + act.get<std::string>() + "'");
    inst.action = GroupAction::trivial(gamma, a);
  } else if (act.contains("generators")) {
    std::map<int, Perm> images;
    for (const auto& [key, perm] : act.at("generators").items()) images[std::stoi(key)] = perm.get<Perm>();
    inst.action = GroupAction::from_generators(gamma, a, images);
  } else if (act.contains("table")) {
    inst.action = GroupAction{gamma, a, act.at("table").get<std::vector<Perm>>()};
    inst.action.validate();
  } else {
    throw std::invalid_argument("action must be \"trivial\", {generators: ...} or {table: ...}");
  }
  if (j.contains("subgroup")) inst.subgroup = j.at("subgroup").get<std::vector<int>>();
  return inst;
}

}  // namespace tamelab
