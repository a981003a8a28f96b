#include "tamelab/eval.hpp"

#include <set>

#include "tamelab/vg_qe.hpp"

namespace tamelab {

std::int64_t VfBackend::ord_mod(const TermPtr& t, std::int64_t n) {
  std::int64_t v = ord(t);
  return v == kOrdInfinity ? 0 : mod(v, n);
}

ElemBackend::ElemBackend(const FieldDesc& field, std::map<std::string, Elem> assignment)
    : field_(field), assignment_(std::move(assignment)) {}

Elem ElemBackend::value(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = assignment_.find(t->name);
      if (it == assignment_.end()) throw std::invalid_argument("no value for variable '" + t->name + "'");
      return it->second;
    }
    case TermKind::Lit: return Elem::from_rational(field_, t->value);
    case TermKind::Add: return value(t->args[0]) + value(t->args[1]);
    case TermKind::Sub: return value(t->args[0]) - value(t->args[1]);
    case TermKind::Neg: return -value(t->args[0]);
    case TermKind::Mul: return value(t->args[0]) * value(t->args[1]);
    case TermKind::Scale: return Elem::from_int(field_, t->k) * value(t->args[0]);
    case TermKind::Pow: return value(t->args[0]).pow(t->k);
    default: throw std::invalid_argument("not a valued-field term: " + print(t));
  }
}

bool ElemBackend::vf_equal(const TermPtr& a, const TermPtr& b) { return (value(a) - value(b)).is_zero(); }

namespace {

TermPtr with_args(const TermPtr& t, std::vector<TermPtr> args) {
  auto n = std::make_shared<Term>(*t);
  n->args = std::move(args);
  return n;
}

class Evaluator {
 public:
  Evaluator(VfBackend& backend, const EvalOptions& options)
      : b_(backend), rf_(backend.residue()), opt_(options) {}

  bool eval(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::True: return true;
      case FormulaKind::False: return false;
      case FormulaKind::Eq: {
        const Sort& s = f->lhs->sort;
        switch (s.kind) {
          case SortKind::VF: return b_.vf_equal(f->lhs, f->rhs);
          case SortKind::RF: return rf_term(f->lhs) == rf_term(f->rhs);
          case SortKind::VGQ: return quotient_term(f->lhs) == quotient_term(f->rhs);
          case SortKind::VG: return value_group(f);
        }
        return false;
      }
      case FormulaKind::Le: return value_group(f);
      case FormulaKind::Not: return !eval(f->subs[0]);
      case FormulaKind::And: return eval(f->subs[0]) && eval(f->subs[1]);
      case FormulaKind::Or: return eval(f->subs[0]) || eval(f->subs[1]);
      case FormulaKind::Implies: return !eval(f->subs[0]) || eval(f->subs[1]);
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        bool ex = f->kind == FormulaKind::Exists;
        switch (f->var_sort.kind) {
          case SortKind::VF: throw std::invalid_argument("valued-field quantifiers cannot be evaluated");
          case SortKind::VG: return value_group(f);
          case SortKind::RF: {
            Scope<ResidueElem> scope(rf_env_, f->var);
            for (ResidueElem v = 0; v < rf_.size(); ++v) {
              rf_env_[f->var] = v;
              if (eval(f->subs[0]) == ex) return ex;
            }
            return !ex;
          }
          case SortKind::VGQ: {
            Scope<std::int64_t> scope(q_env_, f->var);
            for (std::int64_t v = 0; v < f->var_sort.n; ++v) {
              q_env_[f->var] = v;
              if (eval(f->subs[0]) == ex) return ex;
            }
            return !ex;
          }
        }
      }
    }
    return false;
  }

 private:
  VfBackend& b_;
  const ResidueField& rf_;
  const EvalOptions& opt_;
  std::map<std::string, ResidueElem> rf_env_;
  std::map<std::string, std::int64_t> q_env_;
  std::set<std::string> symbolic_;  // VGQ names bound inside a value-group block

  template <class V>
  struct Scope {
    std::map<std::string, V>& env;
    std::string name;
    std::optional<V> saved;
    Scope(std::map<std::string, V>& e, const std::string& n) : env(e), name(n) {
      auto it = env.find(n);
      if (it != env.end()) saved = it->second;
    }
    ~Scope() {
      if (saved)
        env[name] = *saved;
      else
        env.erase(name);
    }
  };

  ResidueElem rf_literal(const Rational& r) const {
    ResidueElem num = rf_.from_int(mod(BigInt(numerator(r)), rf_.p()));
    ResidueElem den = rf_.from_int(mod(BigInt(denominator(r)), rf_.p()));
    return rf_.mul(num, rf_.inv(den));
  }

  ResidueElem rf_term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var: {
        auto it = rf_env_.find(t->name);
        if (it == rf_env_.end()) throw std::invalid_argument("free residue variable '" + t->name + "'");
        return it->second;
      }
      case TermKind::Lit: return rf_literal(t->value);
      case TermKind::Add: return rf_.add(rf_term(t->args[0]), rf_term(t->args[1]));
      case TermKind::Sub: return rf_.sub(rf_term(t->args[0]), rf_term(t->args[1]));
      case TermKind::Neg: return rf_.neg(rf_term(t->args[0]));
      case TermKind::Mul: return rf_.mul(rf_term(t->args[0]), rf_term(t->args[1]));
      case TermKind::Scale: return rf_.mul(rf_.from_int(t->k), rf_term(t->args[0]));
      case TermKind::Pow: return rf_.pow(rf_term(t->args[0]), t->k);
      case TermKind::Ac: return b_.ac(t->args[0]);
      default: throw std::invalid_argument("not a residue-field term: " + print(t));
    }
  }

  // Value in Z/n where n = t->sort.n.
  std::int64_t quotient_term(const TermPtr& t) {
    std::int64_t n = t->sort.n;
    switch (t->kind) {
      case TermKind::Var: {
        auto it = q_env_.find(t->name);
        if (it == q_env_.end()) throw std::invalid_argument("free quotient variable '" + t->name + "'");
        return mod(it->second, n);
      }
      case TermKind::Lit:
        if (denominator(t->value) != 1) throw std::invalid_argument("fractional quotient literal");
        return mod(BigInt(numerator(t->value)), n);
      case TermKind::Add: return mod(quotient_term(t->args[0]) + quotient_term(t->args[1]), n);
      case TermKind::Sub: return mod(quotient_term(t->args[0]) - quotient_term(t->args[1]), n);
      case TermKind::Neg: return mod(-quotient_term(t->args[0]), n);
      case TermKind::Scale: return mod(static_cast<std::int64_t>(static_cast<__int128>(t->k) * quotient_term(t->args[0]) % n), n);
      case TermKind::OrdN: return b_.ord_mod(t->args[0], n);
      case TermKind::PiNM: return mod(quotient_term(t->args[0]), n);
      case TermKind::Pi: return mod(group_value(t->args[0], n), n);
      default: throw std::invalid_argument("not a quotient term: " + print(t));
    }
  }

  // Closed VG term reduced mod n, infinite ord counting as 0.
  std::int64_t group_value(const TermPtr& t, std::int64_t n) {
    switch (t->kind) {
      case TermKind::Lit:
        if (denominator(t->value) != 1) throw std::invalid_argument("fractional value-group literal under pi");
        return mod(BigInt(numerator(t->value)), n);
      case TermKind::Add: return mod(group_value(t->args[0], n) + group_value(t->args[1], n), n);
      case TermKind::Sub: return mod(group_value(t->args[0], n) - group_value(t->args[1], n), n);
      case TermKind::Neg: return mod(-group_value(t->args[0], n), n);
      case TermKind::Scale: return mod(static_cast<std::int64_t>(static_cast<__int128>(t->k) * group_value(t->args[0], n) % n), n);
      case TermKind::Ord: return b_.ord_mod(t->args[0], n);
      case TermKind::Var: throw std::invalid_argument("free value-group variable '" + t->name + "'");
      default: throw std::invalid_argument("not a value-group term: " + print(t));
    }
  }

  // ---- value-group blocks -------------------------------------------------

  bool value_group(const FormulaPtr& f) {
    symbolic_.clear();
    FormulaPtr g = ground(f);
    return evaluate_vg(g, VGModel{opt_.vg_model_d}, {}, {});
  }

  // Linear coefficients of ord-subterms of a VG term, keyed by the printed argument.
  void collect(const TermPtr& t, std::int64_t c, std::map<std::string, std::pair<std::int64_t, TermPtr>>& out) {
    switch (t->kind) {
      case TermKind::Ord: {
        auto& slot = out[print(t->args[0])];
        slot.first += c;
        slot.second = t->args[0];
        return;
      }
      case TermKind::Add:
        collect(t->args[0], c, out);
        collect(t->args[1], c, out);
        return;
      case TermKind::Sub:
        collect(t->args[0], c, out);
        collect(t->args[1], -c, out);
        return;
      case TermKind::Neg: collect(t->args[0], -c, out); return;
      case TermKind::Scale: collect(t->args[0], c * t->k, out); return;
      default: return;
    }
  }

  // Replaces ord(t) by its value (0 when infinite) and ord_n / bound quotient
  // variables by literals.
  TermPtr ground_term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Ord: {
        std::int64_t v = b_.ord(t->args[0]);
        return lit(v == kOrdInfinity ? 0 : v, Sort::vg());
      }
      case TermKind::OrdN: return lit(b_.ord_mod(t->args[0], t->n), t->sort);
      case TermKind::Var:
        if (t->sort.kind == SortKind::VGQ && !symbolic_.count(t->name)) {
          auto it = q_env_.find(t->name);
          if (it != q_env_.end()) return lit(mod(it->second, t->sort.n), t->sort);
        }
        return t;
      default: {
        if (t->args.empty()) return t;
        std::vector<TermPtr> args;
        for (const auto& a : t->args) args.push_back(ground_term(a));
        return with_args(t, std::move(args));
      }
    }
  }

  FormulaPtr ground(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::True:
      case FormulaKind::False: return f;
      case FormulaKind::Eq:
      case FormulaKind::Le: {
        const Sort& s = f->lhs->sort;
        if (s.kind == SortKind::VF || s.kind == SortKind::RF) return eval(f) ? top() : bot();
        if (s.kind == SortKind::VG) {
          std::map<std::string, std::pair<std::int64_t, TermPtr>> coef;
          collect(f->lhs, 1, coef);
          collect(f->rhs, -1, coef);
          bool pos = false, neg = false;
          for (const auto& [key, entry] : coef) {
            if (entry.first == 0 || b_.ord(entry.second) != kOrdInfinity) continue;
            (entry.first > 0 ? pos : neg) = true;
          }
          if (pos || neg) {
            if (f->kind == FormulaKind::Eq) return pos && neg ? top() : bot();
            return neg ? top() : bot();
          }
        }
        auto g = std::make_shared<Formula>(*f);
        g->lhs = ground_term(f->lhs);
        g->rhs = ground_term(f->rhs);
        return g;
      }
      case FormulaKind::Not: return not_(ground(f->subs[0]));
      case FormulaKind::And: return and_(ground(f->subs[0]), ground(f->subs[1]));
      case FormulaKind::Or: return or_(ground(f->subs[0]), ground(f->subs[1]));
      case FormulaKind::Implies: return implies(ground(f->subs[0]), ground(f->subs[1]));
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        bool ex = f->kind == FormulaKind::Exists;
        switch (f->var_sort.kind) {
          case SortKind::VF: throw std::invalid_argument("valued-field quantifiers cannot be evaluated");
          case SortKind::RF: {
            Scope<ResidueElem> scope(rf_env_, f->var);
            std::vector<FormulaPtr> parts;
            for (ResidueElem v = 0; v < rf_.size(); ++v) {
              rf_env_[f->var] = v;
              parts.push_back(ground(f->subs[0]));
            }
            return ex ? or_all(parts) : and_all(parts);
          }
          case SortKind::VG:
          case SortKind::VGQ: {
            bool fresh = symbolic_.insert(f->var).second;
            FormulaPtr body = ground(f->subs[0]);
            if (fresh) symbolic_.erase(f->var);
            return ex ? exists(f->var, f->var_sort, body) : forall(f->var, f->var_sort, body);
          }
        }
      }
    }
    return f;
  }
};

}  // namespace

bool eval_formula(const FormulaPtr& f, VfBackend& backend, const EvalOptions& options) {
  return Evaluator(backend, options).eval(f);
}

bool eval_formula(const FormulaPtr& f, const std::map<std::string, Elem>& assignment, const FieldDesc& field,
                  const EvalOptions& options) {
  ElemBackend backend(field, assignment);
  return eval_formula(f, backend, options);
}

}  // namespace tamelab
