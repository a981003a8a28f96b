#include "tamelab/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tamelab {

Sort Sort::vgq(std::int64_t n) {
  if (n < 2) throw SortError("quotient sort VGQ[" + std::to_string(n) + "] needs n >= 2");
  return {SortKind::VGQ, n};
}

std::string Sort::str() const {
  switch (kind) {
    case SortKind::VF: return "VF";
    case SortKind::RF: return "RF";
    case SortKind::VG: return "VG";
    case SortKind::VGQ: return "VGQ[" + std::to_string(n) + "]";
  }
  return "?";
}

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw SortError(msg);
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

Term node(TermKind kind, Sort sort) {
  Term t;
  t.kind = kind;
  t.sort = sort;
  return t;
}

Formula fnode(FormulaKind kind) {
  Formula f;
  f.kind = kind;
  return f;
}

}  // namespace

TermPtr var(const std::string& name, Sort sort) {
  require(!name.empty(), "empty variable name");
  Term t = node(TermKind::Var, sort);
  t.name = name;
  return make(std::move(t));
}

TermPtr lit(const Rational& value, Sort sort) {
  require(sort.kind == SortKind::VF || is_integer(value),
          "literal " + to_string(value) + " of sort " + sort.str() + " must be an integer");
  Term t = node(TermKind::Lit, sort);
  t.value = value;
  return make(std::move(t));
}

TermPtr add(const TermPtr& a, const TermPtr& b) {
  require(a->sort == b->sort, "sum of " + print(a) + " and " + print(b) + " mixes sorts");
  Term t = node(TermKind::Add, a->sort);
  t.args = {a, b};
  return make(std::move(t));
}

TermPtr sub(const TermPtr& a, const TermPtr& b) {
  require(a->sort == b->sort, "difference of " + print(a) + " and " + print(b) + " mixes sorts");
  Term t = node(TermKind::Sub, a->sort);
  t.args = {a, b};
  return make(std::move(t));
}

TermPtr neg(const TermPtr& a) {
  Term t = node(TermKind::Neg, a->sort);
  t.args = {a};
  return make(std::move(t));
}

TermPtr mul(const TermPtr& a, const TermPtr& b) {
  require(a->sort == b->sort, "product of " + print(a) + " and " + print(b) + " mixes sorts");
  require(a->sort.is_ring(), "product " + print(a) + " * " + print(b) + " in group sort " +
                                 a->sort.str());
  Term t = node(TermKind::Mul, a->sort);
  t.args = {a, b};
  return make(std::move(t));
}

TermPtr scale(std::int64_t k, const TermPtr& a) {
  require(a->sort.is_group(), "integer scaling of " + print(a) + " outside a group sort");
  Term t = node(TermKind::Scale, a->sort);
  t.k = k;
  t.args = {a};
  return make(std::move(t));
}

TermPtr pow(const TermPtr& a, std::int64_t k) {
  require(a->sort.is_ring(), "power of " + print(a) + " outside a ring sort");
  require(k >= 0, "negative exponent on " + print(a));
  Term t = node(TermKind::Pow, a->sort);
  t.k = k;
  t.args = {a};
  return make(std::move(t));
}

TermPtr ord(const TermPtr& a) {
  require(a->sort.kind == SortKind::VF, "ord applied to non-VF term " + print(a));
  Term t = node(TermKind::Ord, Sort::vg());
  t.args = {a};
  return make(std::move(t));
}

TermPtr ac(const TermPtr& a) {
  require(a->sort.kind == SortKind::VF, "ac applied to non-VF term " + print(a));
  Term t = node(TermKind::Ac, Sort::rf());
  t.args = {a};
  return make(std::move(t));
}

TermPtr ord_n(std::int64_t n, const TermPtr& a) {
  require(a->sort.kind == SortKind::VF, "ord[" + std::to_string(n) + "] applied to non-VF term " +
                                            print(a));
  Term t = node(TermKind::OrdN, Sort::vgq(n));
  t.n = n;
  t.args = {a};
  return make(std::move(t));
}

TermPtr pi(std::int64_t n, const TermPtr& a) {
  require(a->sort.kind == SortKind::VG, "pi[" + std::to_string(n) + "] applied to non-VG term " +
                                            print(a));
  Term t = node(TermKind::Pi, Sort::vgq(n));
  t.n = n;
  t.args = {a};
  return make(std::move(t));
}

TermPtr pi_nm(std::int64_t n, std::int64_t m, const TermPtr& a) {
  std::string label = "pi[" + std::to_string(n) + "," + std::to_string(m) + "]";
  require(n >= 2 && m >= 2, label + " needs moduli >= 2");
  require(n % m == 0, label + ": " + std::to_string(m) + " does not divide " + std::to_string(n));
  require(a->sort == Sort::vgq(n), label + " applied to " + print(a) + " of sort " + a->sort.str());
  Term t = node(TermKind::PiNM, Sort::vgq(m));
  t.n = n;
  t.m = m;
  t.args = {a};
  return make(std::move(t));
}

FormulaPtr top() { return make(fnode(FormulaKind::True)); }
FormulaPtr bot() { return make(fnode(FormulaKind::False)); }

FormulaPtr eq(const TermPtr& a, const TermPtr& b) {
  require(a->sort == b->sort, "equation " + print(a) + " = " + print(b) + " mixes sorts");
  Formula f = fnode(FormulaKind::Eq);
  f.lhs = a;
  f.rhs = b;
  return make(std::move(f));
}

FormulaPtr le(const TermPtr& a, const TermPtr& b) {
  require(a->sort.kind == SortKind::VG && b->sort.kind == SortKind::VG,
          "order " + print(a) + " <= " + print(b) + " outside the value group");
  Formula f = fnode(FormulaKind::Le);
  f.lhs = a;
  f.rhs = b;
  return make(std::move(f));
}

FormulaPtr lt(const TermPtr& a, const TermPtr& b) { return not_(le(b, a)); }
FormulaPtr neq(const TermPtr& a, const TermPtr& b) { return not_(eq(a, b)); }

FormulaPtr not_(const FormulaPtr& g) {
  Formula f = fnode(FormulaKind::Not);
  f.subs = {g};
  return make(std::move(f));
}

FormulaPtr and_(const FormulaPtr& a, const FormulaPtr& b) {
  Formula f = fnode(FormulaKind::And);
  f.subs = {a, b};
  return make(std::move(f));
}

FormulaPtr or_(const FormulaPtr& a, const FormulaPtr& b) {
  Formula f = fnode(FormulaKind::Or);
  f.subs = {a, b};
  return make(std::move(f));
}

FormulaPtr implies(const FormulaPtr& a, const FormulaPtr& b) {
  Formula f = fnode(FormulaKind::Implies);
  f.subs = {a, b};
  return make(std::move(f));
}

FormulaPtr exists(const std::string& name, Sort sort, const FormulaPtr& body) {
  Formula f = fnode(FormulaKind::Exists);
  f.var = name;
  f.var_sort = sort;
  f.subs = {body};
  return make(std::move(f));
}

FormulaPtr forall(const std::string& name, Sort sort, const FormulaPtr& body) {
  Formula f = fnode(FormulaKind::Forall);
  f.var = name;
  f.var_sort = sort;
  f.subs = {body};
  return make(std::move(f));
}

FormulaPtr and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return top();
  FormulaPtr acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = and_(acc, fs[i]);
  return acc;
}

FormulaPtr or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return bot();
  FormulaPtr acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = or_(acc, fs[i]);
  return acc;
}

FormulaPtr simplify(const FormulaPtr& f) {
  auto is = [](const FormulaPtr& g, FormulaKind k) { return g->kind == k; };
  switch (f->kind) {
    case FormulaKind::Not: {
      auto s = simplify(f->subs[0]);
      if (is(s, FormulaKind::True)) return bot();
      if (is(s, FormulaKind::False)) return top();
      if (is(s, FormulaKind::Not)) return s->subs[0];
      return s == f->subs[0] ? f : not_(s);
    }
    case FormulaKind::And: {
      auto a = simplify(f->subs[0]), b = simplify(f->subs[1]);
      if (is(a, FormulaKind::False) || is(b, FormulaKind::False)) return bot();
      if (is(a, FormulaKind::True)) return b;
      if (is(b, FormulaKind::True)) return a;
      return (a == f->subs[0] && b == f->subs[1]) ? f : and_(a, b);
    }
    case FormulaKind::Or: {
      auto a = simplify(f->subs[0]), b = simplify(f->subs[1]);
      if (is(a, FormulaKind::True) || is(b, FormulaKind::True)) return top();
      if (is(a, FormulaKind::False)) return b;
      if (is(b, FormulaKind::False)) return a;
      return (a == f->subs[0] && b == f->subs[1]) ? f : or_(a, b);
    }
    case FormulaKind::Implies: {
      auto a = simplify(f->subs[0]), b = simplify(f->subs[1]);
      if (is(a, FormulaKind::False) || is(b, FormulaKind::True)) return top();
      if (is(a, FormulaKind::True)) return b;
      if (is(b, FormulaKind::False)) return simplify(not_(a));
      return (a == f->subs[0] && b == f->subs[1]) ? f : implies(a, b);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      auto b = simplify(f->subs[0]);
      if (is(b, FormulaKind::True) || is(b, FormulaKind::False)) return b;
      if (b == f->subs[0]) return f;
      return f->kind == FormulaKind::Exists ? exists(f->var, f->var_sort, b)
                                            : forall(f->var, f->var_sort, b);
    }
    default:
      return f;
  }
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->sort != b->sort || a->name != b->name || a->value != b->value ||
      a->k != b->k || a->n != b->n || a->m != b->m || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->var != b->var || a->var_sort != b->var_sort ||
      a->subs.size() != b->subs.size())
    return false;
  if (a->lhs && !(equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs))) return false;
  for (std::size_t i = 0; i < a->subs.size(); ++i)
    if (!equal(a->subs[i], b->subs[i])) return false;
  return true;
}

namespace {

bool is_function(TermKind k) {
  return k == TermKind::Ord || k == TermKind::Ac || k == TermKind::OrdN || k == TermKind::Pi ||
         k == TermKind::PiNM;
}

// A term is anchored when its sort can be recovered from a variable or a
// function symbol without looking at literal annotations.
bool anchored(const TermPtr& t) {
  if (t->kind == TermKind::Var || is_function(t->kind)) return true;
  if (t->kind == TermKind::Scale || t->kind == TermKind::Pow || t->kind == TermKind::Neg)
    return anchored(t->args[0]);
  if (t->kind == TermKind::Lit) return false;
  return anchored(t->args[0]) || anchored(t->args[1]);
}

struct Printer {
  std::set<std::string> annotated;
  std::vector<std::string> bound;
  std::ostringstream out;

  bool is_bound(const std::string& name) const {
    return std::find(bound.begin(), bound.end(), name) != bound.end();
  }

  void term(const TermPtr& t, bool annotate_lits) {
    switch (t->kind) {
      case TermKind::Var:
        out << t->name;
        if (t->sort.kind != SortKind::VF && !is_bound(t->name) && annotated.insert(t->name).second)
          out << ":" << t->sort.str();
        break;
      case TermKind::Lit:
        out << to_string(t->value);
        if (annotate_lits && t->sort.kind != SortKind::VF) out << ":" << t->sort.str();
        break;
      case TermKind::Add:
      case TermKind::Sub:
      case TermKind::Mul: {
        const char* op = t->kind == TermKind::Add ? " + " : t->kind == TermKind::Sub ? " - " : " * ";
        out << "(";
        term(t->args[0], annotate_lits);
        out << op;
        term(t->args[1], annotate_lits);
        out << ")";
        break;
      }
      case TermKind::Scale:
        out << "(" << t->k << " * ";
        term(t->args[0], annotate_lits);
        out << ")";
        break;
      case TermKind::Neg:
        out << "-(";
        term(t->args[0], annotate_lits);
        out << ")";
        break;
      case TermKind::Pow:
        if (t->args[0]->kind == TermKind::Neg || t->args[0]->kind == TermKind::Pow ||
            (t->args[0]->kind == TermKind::Lit && t->args[0]->value < 0)) {
          out << "(";
          term(t->args[0], annotate_lits);
          out << ")";
        } else {
          term(t->args[0], annotate_lits);
        }
        out << "^" << t->k;
        break;
      case TermKind::Ord:
        out << "ord(";
        term(t->args[0], false);
        out << ")";
        break;
      case TermKind::Ac:
        out << "ac(";
        term(t->args[0], false);
        out << ")";
        break;
      case TermKind::OrdN:
        out << "ord[" << t->n << "](";
        term(t->args[0], false);
        out << ")";
        break;
      case TermKind::Pi:
        out << "pi[" << t->n << "](";
        term(t->args[0], false);
        out << ")";
        break;
      case TermKind::PiNM:
        out << "pi[" << t->n << "," << t->m << "](";
        term(t->args[0], false);
        out << ")";
        break;
    }
  }

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::True: out << "true"; break;
      case FormulaKind::False: out << "false"; break;
      case FormulaKind::Eq:
      case FormulaKind::Le: {
        bool annotate = !anchored(f->lhs) && !anchored(f->rhs);
        term(f->lhs, annotate);
        out << (f->kind == FormulaKind::Eq ? " = " : " <= ");
        term(f->rhs, annotate);
        break;
      }
      case FormulaKind::Not:
        out << "!";
        formula(f->subs[0]);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies: {
        const char* op = f->kind == FormulaKind::And  ? " & "
                         : f->kind == FormulaKind::Or ? " | "
                                                      : " -> ";
        out << "(";
        formula(f->subs[0]);
        out << op;
        formula(f->subs[1]);
        out << ")";
        break;
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        out << "(" << (f->kind == FormulaKind::Exists ? "exists " : "forall ") << f->var << ":"
            << f->var_sort.str() << ") ";
        bound.push_back(f->var);
        formula(f->subs[0]);
        bound.pop_back();
        break;
    }
  }
};

}  // namespace

std::string print(const TermPtr& t) {
  Printer p;
  p.term(t, !anchored(t));
  return p.out.str();
}

std::string print(const FormulaPtr& f) {
  Printer p;
  p.formula(f);
  return p.out.str();
}

namespace {

bool term_has_vg(const TermPtr& t) {
  if (t->sort.kind == SortKind::VG) return true;
  for (const auto& a : t->args)
    if (term_has_vg(a)) return true;
  return false;
}

}  // namespace

bool contains_vg(const FormulaPtr& f) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) &&
      f->var_sort.kind == SortKind::VG)
    return true;
  if (f->lhs && (term_has_vg(f->lhs) || term_has_vg(f->rhs))) return true;
  for (const auto& s : f->subs)
    if (contains_vg(s)) return true;
  return false;
}

bool has_quantifier(const FormulaPtr& f, SortKind kind) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) && f->var_sort.kind == kind)
    return true;
  for (const auto& s : f->subs)
    if (has_quantifier(s, kind)) return true;
  return false;
}

bool is_tame(const FormulaPtr& f) { return !contains_vg(f) && !has_quantifier(f, SortKind::VF); }

namespace {

void collect_term_vars(const TermPtr& t, const std::vector<std::string>& bound, VarList& out) {
  if (t->kind == TermKind::Var) {
    if (std::find(bound.begin(), bound.end(), t->name) != bound.end()) return;
    for (const auto& [name, s] : out)
      if (name == t->name) return;
    out.emplace_back(t->name, t->sort);
    return;
  }
  for (const auto& a : t->args) collect_term_vars(a, bound, out);
}

void collect_vars(const FormulaPtr& f, std::vector<std::string>& bound, VarList& out) {
  if (f->lhs) {
    collect_term_vars(f->lhs, bound, out);
    collect_term_vars(f->rhs, bound, out);
    return;
  }
  bool quant = f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall;
  if (quant) bound.push_back(f->var);
  for (const auto& s : f->subs) collect_vars(s, bound, out);
  if (quant) bound.pop_back();
}

void collect_moduli(const TermPtr& t, std::set<std::int64_t>& out) {
  if (t->sort.kind == SortKind::VGQ) out.insert(t->sort.n);
  if (t->kind == TermKind::OrdN || t->kind == TermKind::Pi) out.insert(t->n);
  if (t->kind == TermKind::PiNM) {
    out.insert(t->n);
    out.insert(t->m);
  }
  for (const auto& a : t->args) collect_moduli(a, out);
}

void collect_moduli(const FormulaPtr& f, std::set<std::int64_t>& out) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) &&
      f->var_sort.kind == SortKind::VGQ)
    out.insert(f->var_sort.n);
  if (f->lhs) {
    collect_moduli(f->lhs, out);
    collect_moduli(f->rhs, out);
  }
  for (const auto& s : f->subs) collect_moduli(s, out);
}

}  // namespace

VarList free_vars(const FormulaPtr& f) {
  VarList out;
  std::vector<std::string> bound;
  collect_vars(f, bound, out);
  return out;
}

VarList term_vars(const TermPtr& t) {
  VarList out;
  collect_term_vars(t, {}, out);
  return out;
}

std::set<std::int64_t> moduli(const FormulaPtr& f) {
  std::set<std::int64_t> out;
  collect_moduli(f, out);
  return out;
}

TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& value) {
  if (t->kind == TermKind::Var) {
    if (t->name != name) return t;
    require(value->sort == t->sort, "substituting " + print(value) + " for " + name + " changes sort");
    return value;
  }
  bool changed = false;
  std::vector<TermPtr> args;
  for (const auto& a : t->args) {
    args.push_back(substitute(a, name, value));
    changed = changed || args.back() != a;
  }
  if (!changed) return t;
  Term copy = *t;
  copy.args = std::move(args);
  return make(std::move(copy));
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& name, const TermPtr& value) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) && f->var == name) return f;
  Formula copy = *f;
  bool changed = false;
  if (f->lhs) {
    copy.lhs = substitute(f->lhs, name, value);
    copy.rhs = substitute(f->rhs, name, value);
    changed = copy.lhs != f->lhs || copy.rhs != f->rhs;
  }
  for (auto& s : copy.subs) {
    auto n = substitute(s, name, value);
    changed = changed || n != s;
    s = n;
  }
  return changed ? make(std::move(copy)) : f;
}

nlohmann::json to_json(const TermPtr& t) {
  static const char* names[] = {"var", "lit", "add", "sub", "neg",  "mul", "scale",
                                "pow", "ord", "ac",  "ord_n", "pi", "pi_nm"};
  nlohmann::json j;
  j["kind"] = names[static_cast<int>(t->kind)];
  j["sort"] = t->sort.str();
  switch (t->kind) {
    case TermKind::Var: j["name"] = t->name; break;
    case TermKind::Lit: j["value"] = to_string(t->value); break;
    case TermKind::Scale: j["factor"] = t->k; break;
    case TermKind::Pow: j["exponent"] = t->k; break;
    case TermKind::OrdN:
    case TermKind::Pi: j["n"] = t->n; break;
    case TermKind::PiNM:
      j["n"] = t->n;
      j["m"] = t->m;
      break;
    default: break;
  }
  if (!t->args.empty()) {
    j["args"] = nlohmann::json::array();
    for (const auto& a : t->args) j["args"].push_back(to_json(a));
  }
  return j;
}

nlohmann::json to_json(const FormulaPtr& f) {
  static const char* names[] = {"true", "false", "eq",      "le",     "not",
                                "and",  "or",    "implies", "exists", "forall"};
  nlohmann::json j;
  j["kind"] = names[static_cast<int>(f->kind)];
  if (f->lhs) {
    j["lhs"] = to_json(f->lhs);
    j["rhs"] = to_json(f->rhs);
  }
  if (f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) {
    j["var"] = f->var;
    j["sort"] = f->var_sort.str();
    j["body"] = to_json(f->subs[0]);
  } else if (!f->subs.empty()) {
    j["args"] = nlohmann::json::array();
    for (const auto& s : f->subs) j["args"].push_back(to_json(s));
  }
  return j;
}

}  // namespace tamelab
