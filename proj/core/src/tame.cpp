#include "tamelab/tame.hpp"

#include <set>

#include "tamelab/eval.hpp"
#include "tamelab/vg_qe.hpp"

namespace tamelab {

namespace {

void check_characteristic(std::int64_t p) {
  if (p == 2 || p == 3)
    throw std::domain_error("ord rewriting needs residue characteristic 0 or > 3 (got " + std::to_string(p) + ")");
}

TermPtr times(std::int64_t k, const TermPtr& t) { return k == 1 ? t : mul(lit(k), t); }

}  // namespace

FormulaPtr rewrite_ord_lt(const TermPtr& fi, const TermPtr& fj, std::int64_t residue_characteristic) {
  check_characteristic(residue_characteristic);
  auto a = [&](std::int64_t k) { return ac(add(fi, times(k, fj))); };
  return and_all({neq(ac(fi), lit(0, Sort::rf())), eq(a(1), a(2)), eq(a(2), a(3))});
}

FormulaPtr rewrite_ord_le(const TermPtr& fi, const TermPtr& fj, std::int64_t residue_characteristic) {
  return not_(rewrite_ord_lt(fj, fi, residue_characteristic));
}

FormulaPtr rewrite_ord_eq(const TermPtr& fi, const TermPtr& fj, std::int64_t residue_characteristic) {
  return and_(rewrite_ord_le(fi, fj, residue_characteristic), rewrite_ord_le(fj, fi, residue_characteristic));
}

namespace {

// Coefficients of the ord(t) items of a linear value-group term, keyed by print(t).
struct OrdLin {
  std::map<std::string, std::pair<BigInt, TermPtr>> items;
  std::set<std::string> vars;
  BigInt c = 0;
};

void ord_linearize(const TermPtr& t, const BigInt& a, OrdLin& out) {
  switch (t->kind) {
    case TermKind::Ord: {
      auto& slot = out.items[print(t->args[0])];
      slot.first += a;
      slot.second = t->args[0];
      return;
    }
    case TermKind::Var: out.vars.insert(t->name); return;
    case TermKind::Lit:
      if (denominator(t->value) != 1) throw std::invalid_argument("non-integer value group literal");
      out.c += a * BigInt(numerator(t->value));
      return;
    case TermKind::Add:
      ord_linearize(t->args[0], a, out);
      ord_linearize(t->args[1], a, out);
      return;
    case TermKind::Sub:
      ord_linearize(t->args[0], a, out);
      ord_linearize(t->args[1], -a, out);
      return;
    case TermKind::Neg: ord_linearize(t->args[0], -a, out); return;
    case TermKind::Scale: ord_linearize(t->args[0], a * t->k, out); return;
    default: throw std::invalid_argument("unexpected value group term " + print(t));
  }
}

void collect_ord_args(const TermPtr& t, std::map<std::string, TermPtr>& out) {
  if (t->kind == TermKind::Ord) out.emplace(print(t->args[0]), t->args[0]);
  for (const auto& a : t->args) collect_ord_args(a, out);
}

void collect_ord_args(const FormulaPtr& f, std::map<std::string, TermPtr>& out) {
  if (f->lhs) {
    collect_ord_args(f->lhs, out);
    collect_ord_args(f->rhs, out);
  }
  for (const auto& s : f->subs) collect_ord_args(s, out);
}

TermPtr with_args(const TermPtr& t, std::vector<TermPtr> args) {
  auto n = std::make_shared<Term>(*t);
  n->args = std::move(args);
  return n;
}

// One case of the split on which ord arguments vanish.
class CaseRewriter {
 public:
  CaseRewriter(const std::set<std::string>& zero, const TameOptions& options) : zero_(zero), opt_(options) {}

  // Decides atoms touching ord(0) by the +infinity convention; inside pi_n ord(0) counts as 0.
  FormulaPtr resolve(const FormulaPtr& f) const {
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Le: {
        if (f->lhs->sort.kind == SortKind::VG) {
          OrdLin l;
          ord_linearize(f->lhs, 1, l);
          ord_linearize(f->rhs, -1, l);
          bool pos = false, neg = false;
          for (const auto& [key, entry] : l.items) {
            if (entry.first == 0 || !zero_.count(key)) continue;
            (entry.first > 0 ? pos : neg) = true;
          }
          if (pos || neg) {
            if (f->kind == FormulaKind::Eq) return pos && neg ? top() : bot();
            return neg ? top() : bot();
          }
          return f;
        }
        if (f->lhs->sort.kind != SortKind::VGQ) return f;
        auto g = std::make_shared<Formula>(*f);
        g->lhs = drop_zero_ords(f->lhs);
        g->rhs = drop_zero_ords(f->rhs);
        return g;
      }
      case FormulaKind::True:
      case FormulaKind::False: return f;
      default: {
        auto g = std::make_shared<Formula>(*f);
        for (auto& s : g->subs) s = resolve(s);
        return g;
      }
    }
  }

  FormulaPtr to_residue(const FormulaPtr& f) const {
    switch (f->kind) {
      case FormulaKind::Eq:
      case FormulaKind::Le: {
        if (f->lhs->sort.kind == SortKind::VG) return order_atom(f);
        if (f->lhs->sort.kind != SortKind::VGQ) return f;
        auto g = std::make_shared<Formula>(*f);
        g->lhs = quotient_term(f->lhs);
        g->rhs = quotient_term(f->rhs);
        return g;
      }
      case FormulaKind::True:
      case FormulaKind::False: return f;
      default: {
        if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) && f->var_sort.kind == SortKind::VG)
          throw std::logic_error("value group quantifier survived elimination");
        auto g = std::make_shared<Formula>(*f);
        for (auto& s : g->subs) s = to_residue(s);
        return g;
      }
    }
  }

 private:
  const std::set<std::string>& zero_;
  const TameOptions& opt_;

  TermPtr drop_zero_ords(const TermPtr& t) const {
    if (t->kind == TermKind::Ord && zero_.count(print(t->args[0]))) return lit(0, Sort::vg());
    if (t->args.empty() || t->sort.kind == SortKind::VF || t->sort.kind == SortKind::RF) return t;
    std::vector<TermPtr> args;
    for (const auto& a : t->args) args.push_back(drop_zero_ords(a));
    return with_args(t, std::move(args));
  }

  static TermPtr product(const std::vector<std::pair<BigInt, TermPtr>>& factors) {
    if (factors.empty()) return lit(1);
    TermPtr acc;
    for (const auto& [e, t] : factors) {
      TermPtr f = e == 1 ? t : pow(t, static_cast<std::int64_t>(e));
      acc = acc ? mul(acc, f) : f;
    }
    return acc;
  }

  // sum c_i ord(t_i) <op> 0  ->  ord(prod_{c>0} t^c) <op> ord(prod_{c<0} t^-c)
  FormulaPtr order_atom(const FormulaPtr& f) const {
    OrdLin l;
    ord_linearize(f->lhs, 1, l);
    ord_linearize(f->rhs, -1, l);
    if (!l.vars.empty()) throw std::invalid_argument("free value group variable in " + print(f));
    std::vector<std::pair<BigInt, TermPtr>> pos, neg;
    for (const auto& [key, entry] : l.items) {
      if (entry.first > 0) pos.emplace_back(entry.first, entry.second);
      if (entry.first < 0) neg.emplace_back(-entry.first, entry.second);
    }
    if (pos.empty() && neg.empty()) {
      bool v = f->kind == FormulaKind::Eq ? l.c == 0 : l.c <= 0;
      return v ? top() : bot();
    }
    if (l.c != 0)
      throw std::invalid_argument("value group constant in an order condition cannot be made tame: " + print(f));
    TermPtr a = product(pos), b = product(neg);
    return f->kind == FormulaKind::Eq ? rewrite_ord_eq(a, b) : rewrite_ord_le(a, b);
  }

  // VGQ(n) term with pi_n(sum c ord t + k) turned into sum c ord_n(t) + k.
  TermPtr quotient_term(const TermPtr& t) const {
    if (t->kind == TermKind::Pi) return lift(t->args[0], t->n);
    if (t->args.empty() || t->kind == TermKind::OrdN) return t;
    std::vector<TermPtr> args;
    for (const auto& a : t->args) args.push_back(quotient_term(a));
    return with_args(t, std::move(args));
  }

  static TermPtr lift(const TermPtr& t, std::int64_t n) {
    Sort s = Sort::vgq(n);
    switch (t->kind) {
      case TermKind::Ord: return ord_n(n, t->args[0]);
      case TermKind::Lit:
        if (denominator(t->value) != 1) throw std::invalid_argument("non-integer value group literal");
        return lit(mod(BigInt(numerator(t->value)), n), s);
      case TermKind::Add: return add(lift(t->args[0], n), lift(t->args[1], n));
      case TermKind::Sub: return sub(lift(t->args[0], n), lift(t->args[1], n));
      case TermKind::Neg: return neg(lift(t->args[0], n));
      case TermKind::Scale: return scale(t->k, lift(t->args[0], n));
      default: throw std::invalid_argument("free value group variable in " + print(t));
    }
  }
};

}  // namespace

FormulaPtr to_tame(const FormulaPtr& f, const TameOptions& options) {
  if (is_tame(f)) return f;
  if (has_quantifier(f, SortKind::VF)) throw std::invalid_argument("to_tame: valued field quantifiers are not supported");
  for (const auto& [name, sort] : free_vars(f))
    if (sort.kind == SortKind::VG) throw std::invalid_argument("to_tame: free value group variable '" + name + "'");

  std::map<std::string, TermPtr> args;
  collect_ord_args(f, args);
  std::vector<std::pair<std::string, TermPtr>> split;
  std::set<std::string> always_zero;
  for (const auto& [key, t] : args) {
    if (t->kind == TermKind::Lit) {
      if (t->value == 0) always_zero.insert(key);
      continue;
    }
    split.emplace_back(key, t);
  }
  if (split.size() > 12) throw BudgetExceeded("to_tame: too many ord arguments for the zero case split");

  VGModel model{options.d};
  std::vector<FormulaPtr> cases;
  for (std::uint32_t mask = 0; mask < (1U << split.size()); ++mask) {
    std::set<std::string> zero = always_zero;
    std::vector<FormulaPtr> cond;
    for (std::size_t i = 0; i < split.size(); ++i) {
      FormulaPtr is_zero = eq(split[i].second, lit(0));
      if (mask & (1U << i)) {
        zero.insert(split[i].first);
        cond.push_back(is_zero);
      } else {
        cond.push_back(not_(is_zero));
      }
    }
    CaseRewriter rw(zero, options);
    FormulaPtr g = eliminate_all(simplify(rw.resolve(f)), model);
    FormulaPtr h = simplify(rw.to_residue(g));
    if (h->kind == FormulaKind::False) continue;
    cond.push_back(h);
    cases.push_back(and_all(cond));
  }
  return simplify(or_all(cases));
}

std::int64_t compute_d0(const FormulaPtr& f) {
  std::int64_t d0 = 1;
  for (std::int64_t n : moduli(f)) d0 *= n;
  return d0;
}

nlohmann::json RewriteCheck::to_json() const {
  return {{"p", p}, {"samples_per_relation", samples}, {"disagreements", disagreements}, {"kinds", by_kind},
          {"examples", examples}};
}

RewriteCheck check_ord_rewrites(std::int64_t p, std::size_t samples, std::uint64_t seed) {
  RewriteCheck report;
  report.p = p;
  report.samples = samples;
  auto K = FieldDesc::padic(p, 8);
  std::mt19937_64 rng(seed);
  TermPtr x = var("x", Sort::vf()), y = var("y", Sort::vf());
  struct Relation {
    const char* name;
    FormulaPtr f;
    bool (*direct)(std::int64_t, std::int64_t);
  };
  std::vector<Relation> relations{
      {"lt", rewrite_ord_lt(x, y, p), [](std::int64_t a, std::int64_t b) { return a < b; }},
      {"le", rewrite_ord_le(x, y, p), [](std::int64_t a, std::int64_t b) { return a <= b; }},
      {"eq", rewrite_ord_eq(x, y, p), [](std::int64_t a, std::int64_t b) { return a == b; }},
  };
  const char* kinds[] = {"generic", "equal-order", "cancellation", "zero", "identical"};
  std::uniform_int_distribution<int> small(1, 3), gap(1, 4), coin(0, 1), zero_kind(0, 2);
  Elem P = Elem::uniformizer(K);
  for (std::size_t i = 0; i < samples; ++i) {
    int kind = static_cast<int>(i % 5);
    Elem a = sample(K, -5, 5, rng), b = sample(K, -5, 5, rng);
    switch (kind) {
      case 1: a = P.pow(b.ord()) * sample(K, 0, 0, rng); break;
      case 2: {
        // a + k b gains valuation: a = -k b + p^(ord b + j) w
        std::int64_t k = small(rng);
        a = Elem::from_int(K, -k) * b + P.pow(b.ord() + gap(rng)) * sample(K, 0, 0, rng);
        break;
      }
      case 3: {
        int z = zero_kind(rng);
        if (z != 1) a = Elem::zero(K);
        if (z != 0) b = Elem::zero(K);
        break;
      }
      case 4: a = b; break;
      default: break;
    }
    if (coin(rng)) std::swap(a, b);
    ++report.by_kind[kinds[kind]];
    for (const auto& rel : relations) {
      bool want = rel.direct(a.ord(), b.ord());
      bool got = eval_formula(rel.f, {{"x", a}, {"y", b}}, K);
      if (want != got) {
        ++report.disagreements;
        if (report.examples.size() < 5)
          report.examples.push_back(std::string(rel.name) + " x=" + a.str() + " y=" + b.str());
      }
    }
  }
  return report;
}

}  // namespace tamelab
