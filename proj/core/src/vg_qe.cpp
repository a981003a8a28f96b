#include "tamelab/vg_qe.hpp"

#include <functional>
#include <set>

namespace tamelab {

std::int64_t VGModel::quotient(std::int64_t n) const { return d_part(n, d); }

bool VGModel::contains(const Rational& r) const {
  return gcd64(mod(BigInt(denominator(r)), d), d) == 1;
}

std::int64_t VGModel::free_prime() const {
  for (std::int64_t q = 2;; ++q)
    if (is_prime(q) && d % q != 0) return q;
}

namespace {

// Linear form over VG items (variables and opaque ord terms) plus a constant.
struct Lin {
  std::map<std::string, BigInt> coef;
  std::map<std::string, TermPtr> items;
  BigInt c = 0;

  BigInt at(const std::string& key) const {
    auto it = coef.find(key);
    return it == coef.end() ? BigInt(0) : it->second;
  }
  void add_item(const std::string& key, const TermPtr& t, const BigInt& a) {
    if (a == 0) return;
    BigInt& slot = coef[key];
    slot += a;
    items.emplace(key, t);
    if (slot == 0) coef.erase(key);
  }
  void add(const Lin& o, const BigInt& a) {
    for (const auto& [k, v] : o.coef) add_item(k, o.items.at(k), a * v);
    c += a * o.c;
  }
  void drop(const std::string& key) { coef.erase(key); }
};

// Congruence  sum(vg) + sum(q) + c == 0  modulo N.
struct QLin {
  std::int64_t N = 1;
  std::map<std::string, std::int64_t> vg, q;
  std::map<std::string, TermPtr> items;
  std::int64_t c = 0;

  std::int64_t at(const std::string& key) const {
    auto it = vg.find(key);
    return it == vg.end() ? 0 : it->second;
  }
  void add_vg(const std::string& key, const TermPtr& t, const BigInt& a) {
    std::int64_t r = mod(a, N);
    if (r == 0) return;
    auto& slot = vg[key];
    slot = mod(slot + r, N);
    items.emplace(key, t);
    if (slot == 0) vg.erase(key);
  }
  void add_q(const std::string& key, const TermPtr& t, std::int64_t a) {
    std::int64_t r = mod(a, N);
    if (r == 0) return;
    auto& slot = q[key];
    slot = mod(slot + r, N);
    items.emplace(key, t);
    if (slot == 0) q.erase(key);
  }
  void add_const(const BigInt& a) { c = mod(BigInt(c) + a, N); }
};

std::string item_key(const TermPtr& t) { return t->kind == TermKind::Var ? t->name : print(t); }

void linearize(const TermPtr& t, const BigInt& a, Lin& out) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Ord:
      out.add_item(item_key(t), t, a);
      return;
    case TermKind::Lit:
      if (denominator(t->value) != 1) throw ShapeError("non-integer value group literal");
      out.c += a * BigInt(numerator(t->value));
      return;
    case TermKind::Add:
      linearize(t->args[0], a, out);
      linearize(t->args[1], a, out);
      return;
    case TermKind::Sub:
      linearize(t->args[0], a, out);
      linearize(t->args[1], -a, out);
      return;
    case TermKind::Neg:
      linearize(t->args[0], -a, out);
      return;
    case TermKind::Scale:
      linearize(t->args[0], a * t->k, out);
      return;
    default:
      throw ShapeError("unexpected value group term " + print(t));
  }
}

Lin linearize(const TermPtr& t) {
  Lin l;
  linearize(t, 1, l);
  return l;
}

void linearize_q(const TermPtr& t, std::int64_t a, QLin& out) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::OrdN:
      out.add_q(item_key(t), t, a);
      return;
    case TermKind::Lit:
      out.add_const(BigInt(a) * BigInt(numerator(t->value)));
      return;
    case TermKind::Add:
      linearize_q(t->args[0], a, out);
      linearize_q(t->args[1], a, out);
      return;
    case TermKind::Sub:
      linearize_q(t->args[0], a, out);
      linearize_q(t->args[1], -a, out);
      return;
    case TermKind::Neg:
      linearize_q(t->args[0], -a, out);
      return;
    case TermKind::Scale:
      linearize_q(t->args[0], mod(BigInt(a) * t->k, out.N), out);
      return;
    case TermKind::Pi: {
      Lin l = linearize(t->args[0]);
      for (const auto& [k, v] : l.coef) out.add_vg(k, l.items.at(k), v * a);
      out.add_const(l.c * a);
      return;
    }
    case TermKind::PiNM:
      linearize_q(t->args[0], a, out);
      return;
    default:
      throw ShapeError("unexpected quotient term " + print(t));
  }
}

QLin linearize_q(const TermPtr& lhs, const TermPtr& rhs, const VGModel& model) {
  QLin q;
  q.N = model.quotient(lhs->sort.n);
  linearize_q(lhs, 1, q);
  linearize_q(rhs, -1, q);
  return q;
}

TermPtr sum_terms(const std::vector<TermPtr>& ts, Sort sort) {
  if (ts.empty()) return lit(0, sort);
  TermPtr acc = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) acc = add(acc, ts[i]);
  return acc;
}

TermPtr scaled(const BigInt& a, const TermPtr& t) {
  return a == 1 ? t : scale(static_cast<std::int64_t>(a), t);
}

enum class LinOp { Eq, Ne, Lt, Le };

// Builds the atom  l op 0  with positive and negative parts on opposite sides.
FormulaPtr lin_atom(LinOp op, Lin l) {
  if (l.coef.empty()) {
    bool v = op == LinOp::Eq ? l.c == 0 : op == LinOp::Ne ? l.c != 0 : op == LinOp::Lt ? l.c < 0 : l.c <= 0;
    return v ? top() : bot();
  }
  BigInt g = boost::multiprecision::abs(l.c);
  for (const auto& [k, v] : l.coef) g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::abs(v)));
  if (g > 1) {
    for (auto& [k, v] : l.coef) v /= g;
    l.c /= g;
  }
  if (op == LinOp::Eq || op == LinOp::Ne) {
    // Canonical orientation for symmetric atoms: first coefficient positive.
    if (l.coef.begin()->second < 0) {
      for (auto& [k, v] : l.coef) v = -v;
      l.c = -l.c;
    }
  }
  std::vector<TermPtr> pos, negs;
  for (const auto& [k, v] : l.coef) {
    if (v > 0) pos.push_back(scaled(v, l.items.at(k)));
    else negs.push_back(scaled(-v, l.items.at(k)));
  }
  if (l.c > 0) pos.push_back(lit(Rational(l.c), Sort::vg()));
  if (l.c < 0) negs.push_back(lit(Rational(-l.c), Sort::vg()));
  TermPtr lhs = sum_terms(pos, Sort::vg()), rhs = sum_terms(negs, Sort::vg());
  switch (op) {
    case LinOp::Eq: return eq(lhs, rhs);
    case LinOp::Ne: return neq(lhs, rhs);
    case LinOp::Lt: return lt(lhs, rhs);
    case LinOp::Le: return le(lhs, rhs);
  }
  return top();
}

FormulaPtr q_atom(bool positive, const QLin& q) {
  if (q.N == 1 || (q.vg.empty() && q.q.empty())) {
    bool v = q.N == 1 || q.c == 0;
    return v == positive ? top() : bot();
  }
  Sort s = Sort::vgq(q.N);
  std::vector<TermPtr> parts;
  for (const auto& [k, a] : q.vg) parts.push_back(scaled(a, pi(q.N, q.items.at(k))));
  for (const auto& [k, a] : q.q) {
    TermPtr t = q.items.at(k);
    if (t->sort.n != q.N) t = pi_nm(t->sort.n, q.N, t);
    parts.push_back(scaled(a, t));
  }
  FormulaPtr atom = eq(sum_terms(parts, s), lit(mod(-q.c, q.N), s));
  return positive ? atom : not_(atom);
}

bool term_mentions(const TermPtr& t, const std::string& x) {
  if (t->kind == TermKind::Var) return t->name == x;
  for (const auto& a : t->args)
    if (term_mentions(a, x)) return true;
  return false;
}

bool mentions(const FormulaPtr& f, const std::string& x) {
  if (f->lhs) return term_mentions(f->lhs, x) || term_mentions(f->rhs, x);
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) && f->var == x) return false;
  for (const auto& s : f->subs)
    if (mentions(s, x)) return true;
  return false;
}

void collect_atoms(const FormulaPtr& f, const std::string& x, std::vector<FormulaPtr>& out) {
  if (f->lhs) {
    if (!mentions(f, x)) return;
    for (const auto& a : out)
      if (equal(a, f)) return;
    out.push_back(f);
    return;
  }
  for (const auto& s : f->subs) collect_atoms(s, x, out);
}

FormulaPtr replace_atom(const FormulaPtr& f, const FormulaPtr& atom, bool value) {
  if (f->lhs) return equal(f, atom) ? (value ? top() : bot()) : f;
  if (f->subs.empty()) return f;
  Formula copy = *f;
  for (auto& s : copy.subs) s = replace_atom(s, atom, value);
  return std::make_shared<const Formula>(std::move(copy));
}

// Moves x out of RF quantifiers (by case distinction on the x-atoms below
// them) and expands VGQ quantifiers whose scope mentions x.
FormulaPtr expand_inner(const FormulaPtr& f, const std::string& x, const VGModel& model) {
  if (f->lhs || f->subs.empty() || !mentions(f, x)) return f;
  Formula copy = *f;
  for (auto& s : copy.subs) s = expand_inner(s, x, model);
  FormulaPtr g = std::make_shared<const Formula>(std::move(copy));
  if (g->kind != FormulaKind::Exists && g->kind != FormulaKind::Forall) return g;
  bool is_exists = g->kind == FormulaKind::Exists;
  const FormulaPtr& body = g->subs[0];
  switch (g->var_sort.kind) {
    case SortKind::VG: throw ShapeError("nested value group quantifier on " + g->var);
    case SortKind::VF: throw ShapeError("valued field quantifier on " + g->var);
    case SortKind::VGQ: {
      std::int64_t n = model.quotient(g->var_sort.n);
      std::vector<FormulaPtr> cases;
      for (std::int64_t k = 0; k < n; ++k)
        cases.push_back(substitute(body, g->var, lit(k, g->var_sort)));
      return is_exists ? or_all(cases) : and_all(cases);
    }
    case SortKind::RF: {
      std::vector<FormulaPtr> atoms;
      collect_atoms(body, x, atoms);
      std::vector<FormulaPtr> cases;
      for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
        FormulaPtr b = body;
        std::vector<FormulaPtr> guard;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          bool v = (mask >> i) & 1;
          b = replace_atom(b, atoms[i], v);
          guard.push_back(v ? atoms[i] : not_(atoms[i]));
        }
        b = simplify(b);
        FormulaPtr q = is_exists ? exists(g->var, g->var_sort, b) : forall(g->var, g->var_sort, b);
        guard.push_back(simplify(q));
        cases.push_back(and_all(guard));
      }
      return or_all(cases);
    }
  }
  return g;
}

enum class XKind { Eq, Ne, Lt };

struct XLit {
  XKind kind;
  Lin l;
};

struct Conj {
  std::vector<XLit> xs;
  std::vector<FormulaPtr> rest;
};

using DNF = std::vector<Conj>;

struct DnfTooLarge {};

DNF product(const DNF& a, const DNF& b, std::size_t limit) {
  if (a.size() * b.size() > limit) throw DnfTooLarge{};
  DNF out;
  for (const auto& ca : a)
    for (const auto& cb : b) {
      Conj c = ca;
      c.xs.insert(c.xs.end(), cb.xs.begin(), cb.xs.end());
      c.rest.insert(c.rest.end(), cb.rest.begin(), cb.rest.end());
      out.push_back(std::move(c));
    }
  return out;
}

// Lcm of the quotient moduli of congruence atoms that mention x.
std::int64_t residue_modulus(const FormulaPtr& f, const std::string& x, const VGModel& model) {
  if (f->lhs) {
    if (f->lhs->sort.kind == SortKind::VGQ && mentions(f, x)) return model.quotient(f->lhs->sort.n);
    return 1;
  }
  std::int64_t M = 1;
  for (const auto& s : f->subs) M = lcm64(M, residue_modulus(s, x, model));
  return M;
}

// Replaces pi_N(x) by the residue rho in every congruence atom.
FormulaPtr fix_residue(const FormulaPtr& f, const std::string& x, std::int64_t rho,
                       const VGModel& model) {
  if (f->lhs) {
    if (f->lhs->sort.kind != SortKind::VGQ || !mentions(f, x)) return f;
    QLin q = linearize_q(f->lhs, f->rhs, model);
    std::int64_t a = q.at(x);
    q.vg.erase(x);
    q.add_const(BigInt(a) * mod(rho, q.N));
    return q_atom(true, q);
  }
  if (f->subs.empty()) return f;
  Formula copy = *f;
  for (auto& s : copy.subs) s = fix_residue(s, x, rho, model);
  return std::make_shared<const Formula>(std::move(copy));
}

class Eliminator {
 public:
  Eliminator(std::string x, const VGModel& model, std::size_t limit)
      : x_(std::move(x)), model_(model), limit_(limit) {}

  DNF dnf(const FormulaPtr& f, bool positive) {
    if (!mentions(f, x_)) return {Conj{{}, {positive ? f : not_(f)}}};
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Le:
        return atom(f, positive);
      case FormulaKind::Not:
        return dnf(f->subs[0], !positive);
      case FormulaKind::And:
      case FormulaKind::Or: {
        bool conj = (f->kind == FormulaKind::And) == positive;
        DNF a = dnf(f->subs[0], positive), b = dnf(f->subs[1], positive);
        if (conj) return product(a, b, limit_);
        if (a.size() + b.size() > limit_) throw DnfTooLarge{};
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case FormulaKind::Implies: {
        DNF a = dnf(f->subs[0], !positive), b = dnf(f->subs[1], positive);
        if (!positive) return product(a, b, limit_);
        if (a.size() + b.size() > limit_) throw DnfTooLarge{};
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      default:
        throw ShapeError("quantifier over " + f->var + " left in the scope of " + x_);
    }
  }

  // (exists x) (conjunction c  and  pi_M(x) = rho).
  FormulaPtr eliminate(const Conj& c, std::int64_t rho, std::int64_t M) {
    std::vector<FormulaPtr> parts = c.rest;
    std::vector<XLit> xs;
    for (const auto& lit : c.xs) {
      if (lit.l.at(x_) != 0) xs.push_back(lit);
      else parts.push_back(emit(lit));
    }
    const XLit* pivot = nullptr;
    for (const auto& lit : xs)
      if (lit.kind == XKind::Eq) {
        pivot = &lit;
        break;
      }
    parts.push_back(pivot ? substitute_equation(*pivot, xs, rho, M) : bounds(xs));
    return simplify(and_all(parts));
  }

 private:
  std::string x_;
  const VGModel& model_;
  std::size_t limit_;

  DNF atom(const FormulaPtr& f, bool positive) {
    if (f->lhs->sort.kind == SortKind::VGQ)
      throw ShapeError("congruence on " + x_ + " left after residue split");
    if (f->lhs->sort.kind != SortKind::VG) return {Conj{{}, {positive ? f : not_(f)}}};
    Lin l = linearize(f->lhs);
    l.add(linearize(f->rhs), -1);
    if (f->kind == FormulaKind::Eq) return {Conj{{XLit{positive ? XKind::Eq : XKind::Ne, l}}, {}}};
    if (!positive) {
      // !(l <= 0)  <=>  -l < 0
      Lin m;
      m.add(l, -1);
      return {Conj{{XLit{XKind::Lt, m}}, {}}};
    }
    return {Conj{{XLit{XKind::Lt, l}}, {}}, Conj{{XLit{XKind::Eq, l}}, {}}};
  }

  FormulaPtr emit(const XLit& lit) {
    switch (lit.kind) {
      case XKind::Eq: return lin_atom(LinOp::Eq, lit.l);
      case XKind::Ne: return lin_atom(LinOp::Ne, lit.l);
      case XKind::Lt: return lin_atom(LinOp::Lt, lit.l);
    }
    return top();
  }

  // K x = g0 with K > 0: x exists in the coset rho + M G iff g0 lies in
  // K rho + K M G; the other literals are multiplied by K and g0 substituted.
  FormulaPtr substitute_equation(const XLit& pivot, const std::vector<XLit>& xs, std::int64_t rho,
                                 std::int64_t M) {
    Lin l0 = pivot.l;
    if (l0.at(x_) < 0) {
      Lin m;
      m.add(l0, -1);
      l0 = m;
    }
    BigInt K = l0.at(x_);
    Lin g0;
    g0.add(l0, -1);
    g0.drop(x_);

    std::vector<FormulaPtr> order;
    for (const auto& lit : xs) {
      if (&lit == &pivot) continue;
      BigInt c = lit.l.at(x_);
      Lin rest = lit.l;
      rest.drop(x_);
      Lin out;
      out.add(g0, c);
      out.add(rest, K);
      order.push_back(lin_atom(lit.kind == XKind::Eq   ? LinOp::Eq
                               : lit.kind == XKind::Ne ? LinOp::Ne
                                                       : LinOp::Lt,
                               out));
    }
    QLin cond;
    cond.N = d_part_big(K) * M;
    for (const auto& [k, v] : g0.coef) cond.add_vg(k, g0.items.at(k), v);
    cond.add_const(g0.c - K * rho);
    order.push_back(q_atom(true, cond));
    return simplify(and_all(order));
  }

  std::int64_t d_part_big(const BigInt& K) {
    BigInt r = 1, k = K;
    for (std::int64_t p : prime_factors(model_.d))
      while (k % p == 0) {
        k /= p;
        r *= p;
      }
    return static_cast<std::int64_t>(r);
  }

  // Strict bounds only: each coset of MG is dense, so disequalities and the
  // residue condition never obstruct a witness.
  FormulaPtr bounds(const std::vector<XLit>& xs) {
    std::vector<const XLit*> lower, upper;
    for (const auto& lit : xs)
      if (lit.kind == XKind::Lt) (lit.l.at(x_) < 0 ? lower : upper).push_back(&lit);
    std::vector<FormulaPtr> parts;
    for (const XLit* lo : lower)
      for (const XLit* up : upper) {
        // R_l < b x  and  a x < -R_u  give  a R_l + b R_u < 0.
        BigInt b = -lo->l.at(x_), a = up->l.at(x_);
        Lin rl = lo->l, ru = up->l;
        rl.drop(x_);
        ru.drop(x_);
        Lin out;
        out.add(rl, a);
        out.add(ru, b);
        parts.push_back(lin_atom(LinOp::Lt, out));
      }
    return simplify(and_all(parts));
  }
};

}  // namespace

namespace {

std::size_t node_count(const TermPtr& t) {
  std::size_t n = 1;
  for (const auto& a : t->args) n += node_count(a);
  return n;
}

std::size_t node_count(const FormulaPtr& f) {
  std::size_t n = 1;
  if (f->lhs) n += node_count(f->lhs) + node_count(f->rhs);
  for (const auto& s : f->subs) n += node_count(s);
  return n;
}

// Test points for x inside one coset rho + MG: below every breakpoint, at a
// breakpoint -r/a, or just above it. Truth of the atoms is constant between
// consecutive breakpoints and every coset is dense, so these points suffice.
struct TestPoint {
  enum Kind { Below, At, Above } kind;
  BigInt a;
  Lin r;
};

class TestPointEliminator {
 public:
  TestPointEliminator(std::string x, const VGModel& model) : x_(std::move(x)), model_(model) {}

  FormulaPtr run(const FormulaPtr& body, bool is_exists) {
    std::int64_t M = residue_modulus(body, x_, model_);
    std::vector<TestPoint> points{TestPoint{TestPoint::Below, 0, {}}};
    std::set<std::string> seen;
    collect(body, points, seen);
    std::vector<FormulaPtr> out;
    std::set<std::string> emitted;
    for (std::int64_t rho = 0; rho < M; ++rho) {
      FormulaPtr branch = simplify(fix_residue(body, x_, rho, model_));
      for (const auto& pt : points) {
        FormulaPtr value = simplify(at(branch, pt));
        FormulaPtr guard = pt.kind == TestPoint::At ? coset_guard(pt, rho, M) : top();
        FormulaPtr piece = is_exists ? simplify(and_(guard, value)) : simplify(implies(guard, value));
        if (piece->kind == (is_exists ? FormulaKind::True : FormulaKind::False)) return piece;
        if (piece->kind == (is_exists ? FormulaKind::False : FormulaKind::True)) continue;
        if (emitted.insert(print(piece)).second) out.push_back(piece);
      }
    }
    return simplify(is_exists ? or_all(out) : and_all(out));
  }

 private:
  std::string x_;
  const VGModel& model_;

  void collect(const FormulaPtr& f, std::vector<TestPoint>& points, std::set<std::string>& seen) {
    if (f->lhs) {
      if (f->lhs->sort.kind != SortKind::VG || !mentions(f, x_)) return;
      Lin l = linearize(f->lhs);
      l.add(linearize(f->rhs), -1);
      BigInt a = l.at(x_);
      l.drop(x_);
      BigInt g = boost::multiprecision::abs(a);
      g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::abs(l.c)));
      for (const auto& [k, v] : l.coef) g = boost::multiprecision::gcd(g, BigInt(boost::multiprecision::abs(v)));
      if (a < 0) g = -g;
      Lin r;
      r.add(l, 1);
      for (auto& [k, v] : r.coef) v /= g;
      r.c /= g;
      a /= g;
      std::string key = a.str() + "|" + r.c.str();
      for (const auto& [k, v] : r.coef) key += "|" + k + ":" + v.str();
      if (!seen.insert(key).second) return;
      points.push_back(TestPoint{TestPoint::At, a, r});
      points.push_back(TestPoint{TestPoint::Above, a, r});
      return;
    }
    for (const auto& s : f->subs) collect(s, points, seen);
  }

  // x = -r/a lies in rho + MG  iff  -r - a rho lies in a M G.
  FormulaPtr coset_guard(const TestPoint& pt, std::int64_t rho, std::int64_t M) {
    QLin cond;
    BigInt ad = 1, k = pt.a;
    for (std::int64_t p : prime_factors(model_.d))
      while (k % p == 0) {
        k /= p;
        ad *= p;
      }
    cond.N = static_cast<std::int64_t>(ad) * M;
    for (const auto& [key, v] : pt.r.coef) cond.add_vg(key, pt.r.items.at(key), -v);
    cond.add_const(-pt.r.c - pt.a * rho);
    return q_atom(true, cond);
  }

  FormulaPtr at(const FormulaPtr& f, const TestPoint& pt) {
    if (f->lhs) {
      if (f->lhs->sort.kind != SortKind::VG || !mentions(f, x_)) return f;
      Lin l = linearize(f->lhs);
      l.add(linearize(f->rhs), -1);
      BigInt c = l.at(x_);
      l.drop(x_);
      bool is_eq = f->kind == FormulaKind::Eq;
      if (pt.kind == TestPoint::Below) {
        if (is_eq) return bot();
        return c > 0 ? top() : bot();
      }
      // a (c x + s) at x = -r/a
      Lin out;
      out.add(pt.r, -c);
      out.add(l, pt.a);
      if (pt.kind == TestPoint::At) return lin_atom(is_eq ? LinOp::Eq : LinOp::Le, out);
      if (is_eq) return bot();
      return lin_atom(c < 0 ? LinOp::Le : LinOp::Lt, out);
    }
    if (f->subs.empty()) return f;
    Formula copy = *f;
    for (auto& s : copy.subs) s = at(s, pt);
    return std::make_shared<const Formula>(std::move(copy));
  }
};

FormulaPtr eliminate_dnf(const FormulaPtr& body, const std::string& x, const VGModel& model,
                         std::size_t limit) {
  FormulaPtr expanded = simplify(expand_inner(body, x, model));
  std::int64_t M = residue_modulus(expanded, x, model);
  Eliminator e(x, model, limit);
  std::vector<FormulaPtr> out;
  std::size_t total = 0;
  for (std::int64_t rho = 0; rho < M; ++rho) {
    FormulaPtr branch = simplify(fix_residue(expanded, x, rho, model));
    if (branch->kind == FormulaKind::False) continue;
    DNF d = e.dnf(branch, true);
    total += d.size();
    if (total > limit) throw DnfTooLarge{};
    for (const auto& c : d) {
      FormulaPtr r = e.eliminate(c, rho, M);
      if (r->kind == FormulaKind::True) return top();
      if (r->kind != FormulaKind::False) out.push_back(r);
    }
  }
  return simplify(or_all(out));
}

FormulaPtr eliminate_quantifier(const FormulaPtr& body, const std::string& x, const VGModel& model,
                                bool is_exists) {
  if (!mentions(body, x)) return body;
  if (has_quantifier(body, SortKind::VG)) throw ShapeError("body still has value group quantifiers");
  if (has_quantifier(body, SortKind::VF)) throw ShapeError("valued field quantifiers are not supported");
  FormulaPtr tp = TestPointEliminator(x, model).run(simplify(body), is_exists);
  std::size_t budget = node_count(tp);
  try {
    FormulaPtr dnf = is_exists ? eliminate_dnf(body, x, model, 4 * budget)
                               : simplify(not_(eliminate_dnf(simplify(not_(body)), x, model, 4 * budget)));
    if (node_count(dnf) <= budget) return dnf;
  } catch (const DnfTooLarge&) {
  }
  return tp;
}

}  // namespace

FormulaPtr eliminate_one(const FormulaPtr& body, const std::string& x, const VGModel& model) {
  return eliminate_quantifier(body, x, model, true);
}

FormulaPtr eliminate_all(const FormulaPtr& f, const VGModel& model) {
  if (!has_quantifier(f, SortKind::VG)) return f;
  if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
    FormulaPtr body = eliminate_all(f->subs[0], model);
    if (f->var_sort.kind != SortKind::VG)
      return f->kind == FormulaKind::Exists ? exists(f->var, f->var_sort, body)
                                            : forall(f->var, f->var_sort, body);
    return eliminate_quantifier(body, f->var, model, f->kind == FormulaKind::Exists);
  }
  Formula copy = *f;
  for (auto& s : copy.subs) s = eliminate_all(s, model);
  return simplify(std::make_shared<const Formula>(std::move(copy)));
}

}  // namespace tamelab
