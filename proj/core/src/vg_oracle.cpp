#include <algorithm>
#include <map>
#include <set>
#include <optional>

#include "tamelab/vg_qe.hpp"

namespace tamelab {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("oracle arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Frac {
  std::int64_t n = 0, d = 1;

  static Frac make(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return {narrow(n), narrow(d)};
  }
  friend bool operator<(Frac a, Frac b) { return i128(a.n) * b.d < i128(b.n) * a.d; }
  friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
  std::string str() const { return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d); }
};

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Sparse integer linear form over variable slots plus a constant.
struct Form {
  std::map<int, std::int64_t> coef;
  std::int64_t c = 0;

  std::int64_t at(int v) const {
    auto it = coef.find(v);
    return it == coef.end() ? 0 : it->second;
  }
  void normalize() {
    std::int64_t g = std::llabs(c);
    for (auto it = coef.begin(); it != coef.end();) {
      if (it->second == 0) it = coef.erase(it);
      else {
        g = gcd64(g, it->second);
        ++it;
      }
    }
    if (g > 1) {
      for (auto& [k, v] : coef) v /= g;
      c /= g;
    }
    std::int64_t lead = coef.empty() ? c : coef.begin()->second;
    if (lead < 0) {
      for (auto& [k, v] : coef) v = -v;
      c = -c;
    }
  }
  friend bool operator<(const Form& a, const Form& b) { return std::tie(a.coef, a.c) < std::tie(b.coef, b.c); }
};

struct Flat {
  std::vector<std::pair<int, std::int64_t>> coef;
  std::int64_t c = 0;

  Flat() = default;
  explicit Flat(const Form& f) : coef(f.coef.begin(), f.coef.end()), c(f.c) {}
};

enum class NK { True, False, Not, And, Or, Implies, VgEq, VgLe, QEq, Quant, QuantQ };

struct Node {
  NK kind = NK::True;
  std::vector<int> kids;
  Form form;  // value group atoms: lhs - rhs
  Flat flat;
  // Congruence atoms: sum qvg * pi_N(slot) + sum qvq * slot + qc == 0 mod N.
  std::int64_t N = 1;
  std::vector<std::pair<int, std::int64_t>> qvg, qvq;
  std::int64_t qc = 0;
  // Quantifiers.
  bool exists = true;
  int slot = -1;
  std::int64_t size = 1;     // quotient sort size
  std::vector<Flat> breaks;  // critical forms without the bound variable
  std::vector<std::int64_t> break_coef;
  std::int64_t modulus = 1;
};

class Program {
 public:
  Program(const FormulaPtr& f, const VGModel& model, const VarList& free) : model_(model) {
    std::map<std::string, int> scope;
    for (const auto& [name, s] : free) scope[name] = fresh();
    free_ = scope;
    root_ = compile(f, scope);
    analyse(root_);
  }

  int slot_of(const std::string& name) const {
    auto it = free_.find(name);
    return it == free_.end() ? -1 : it->second;
  }
  int slots() const { return slots_; }
  int root() const { return root_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

 private:
  const VGModel& model_;
  std::vector<Node> nodes_;
  std::map<std::string, int> free_;
  int slots_ = 0;
  int root_ = 0;

  int fresh() { return slots_++; }

  int push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  static int lookup(const std::map<std::string, int>& scope, const std::string& name) {
    auto it = scope.find(name);
    if (it == scope.end()) throw std::invalid_argument("oracle: unassigned variable " + name);
    return it->second;
  }

  void to_form(const TermPtr& t, std::int64_t a, Form& out, const std::map<std::string, int>& scope) {
    switch (t->kind) {
      case TermKind::Var: out.coef[lookup(scope, t->name)] += a; return;
      case TermKind::Lit: out.c += a * static_cast<std::int64_t>(numerator(t->value)); return;
      case TermKind::Add:
        to_form(t->args[0], a, out, scope);
        to_form(t->args[1], a, out, scope);
        return;
      case TermKind::Sub:
        to_form(t->args[0], a, out, scope);
        to_form(t->args[1], -a, out, scope);
        return;
      case TermKind::Neg: to_form(t->args[0], -a, out, scope); return;
      case TermKind::Scale: to_form(t->args[0], a * t->k, out, scope); return;
      default: throw std::invalid_argument("oracle: unsupported value group term " + print(t));
    }
  }

  void to_residue(const TermPtr& t, std::int64_t a, Node& out, const std::map<std::string, int>& scope) {
    const std::int64_t N = out.N;
    switch (t->kind) {
      case TermKind::Var: out.qvq.emplace_back(lookup(scope, t->name), mod(a, N)); return;
      case TermKind::Lit:
        out.qc = mod(out.qc + mod(a, N) * mod(BigInt(numerator(t->value)), N), N);
        return;
      case TermKind::Add:
        to_residue(t->args[0], a, out, scope);
        to_residue(t->args[1], a, out, scope);
        return;
      case TermKind::Sub:
        to_residue(t->args[0], a, out, scope);
        to_residue(t->args[1], -a, out, scope);
        return;
      case TermKind::Neg: to_residue(t->args[0], -a, out, scope); return;
      case TermKind::Scale: to_residue(t->args[0], mod(mod(a, N) * mod(t->k, N), N), out, scope); return;
      case TermKind::Pi: {
        Form F;
        to_form(t->args[0], 1, F, scope);
        for (const auto& [s, c] : F.coef) out.qvg.emplace_back(s, mod(mod(a, N) * mod(c, N), N));
        out.qc = mod(out.qc + mod(a, N) * mod(F.c, N), N);
        return;
      }
      case TermKind::PiNM: to_residue(t->args[0], a, out, scope); return;
      default: throw std::invalid_argument("oracle: unsupported quotient term " + print(t));
    }
  }

  int compile(const FormulaPtr& f, std::map<std::string, int>& scope) {
    Node n;
    switch (f->kind) {
      case FormulaKind::True: n.kind = NK::True; break;
      case FormulaKind::False: n.kind = NK::False; break;
      case FormulaKind::Not:
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
        n.kind = f->kind == FormulaKind::Not   ? NK::Not
                 : f->kind == FormulaKind::And ? NK::And
                 : f->kind == FormulaKind::Or  ? NK::Or
                                               : NK::Implies;
        for (const auto& s : f->subs) n.kids.push_back(compile(s, scope));
        break;
      case FormulaKind::Eq:
      case FormulaKind::Le:
        if (f->lhs->sort.kind == SortKind::VG) {
          n.kind = f->kind == FormulaKind::Eq ? NK::VgEq : NK::VgLe;
          to_form(f->lhs, 1, n.form, scope);
          to_form(f->rhs, -1, n.form, scope);
          std::erase_if(n.form.coef, [](const auto& e) { return e.second == 0; });
          n.flat = Flat(n.form);
        } else if (f->lhs->sort.kind == SortKind::VGQ && f->kind == FormulaKind::Eq) {
          n.kind = NK::QEq;
          n.N = model_.quotient(f->lhs->sort.n);
          to_residue(f->lhs, 1, n, scope);
          to_residue(f->rhs, -1, n, scope);
        } else {
          throw std::invalid_argument("oracle: unsupported atom " + print(f));
        }
        break;
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        if (!f->var_sort.is_group()) throw std::invalid_argument("oracle: unsupported quantifier sort");
        n.kind = f->var_sort.kind == SortKind::VG ? NK::Quant : NK::QuantQ;
        n.exists = f->kind == FormulaKind::Exists;
        n.slot = fresh();
        if (n.kind == NK::QuantQ) n.size = model_.quotient(f->var_sort.n);
        auto it = scope.find(f->var);
        std::optional<int> saved = it != scope.end() ? std::optional<int>(it->second) : std::nullopt;
        scope[f->var] = n.slot;
        n.kids.push_back(compile(f->subs[0], scope));
        if (saved) scope[f->var] = *saved;
        else scope.erase(f->var);
        break;
      }
    }
    return push(std::move(n));
  }

  // Critical forms of a subformula and the modulus controlling its dependence
  // on cosets of the outer variables.
  std::pair<std::set<Form>, std::int64_t> analyse(int i) {
    const NK kind = nodes_[static_cast<std::size_t>(i)].kind;
    switch (kind) {
      case NK::VgEq:
      case NK::VgLe: {
        Form F = nodes_[static_cast<std::size_t>(i)].form;
        F.normalize();
        if (F.coef.empty()) return {{}, 1};
        return {{F}, 1};
      }
      case NK::QEq: return {{}, nodes_[static_cast<std::size_t>(i)].N};
      case NK::Quant: {
        auto [forms, M] = analyse(nodes_[static_cast<std::size_t>(i)].kids[0]);
        Node& q = nodes_[static_cast<std::size_t>(i)];
        const int v = q.slot;
        std::int64_t D = 1;
        std::vector<const Form*> with;
        std::set<Form> out;
        for (const auto& F : forms) {
          if (F.at(v) == 0) out.insert(F);
          else {
            with.push_back(&F);
            D = lcm64(D, model_.quotient(std::llabs(F.at(v))));
          }
        }
        for (std::size_t a = 0; a < with.size(); ++a)
          for (std::size_t b = a + 1; b < with.size(); ++b) {
            Form C;
            std::int64_t ca = with[a]->at(v), cb = with[b]->at(v);
            for (const auto& [k, c] : with[a]->coef) C.coef[k] += narrow(i128(cb) * c);
            for (const auto& [k, c] : with[b]->coef) C.coef[k] -= narrow(i128(ca) * c);
            C.c = narrow(i128(cb) * with[a]->c - i128(ca) * with[b]->c);
            C.coef.erase(v);
            C.normalize();
            if (!C.coef.empty()) out.insert(C);
          }
        for (const Form* F : with) {
          Form rest = *F;
          rest.coef.erase(v);
          q.breaks.emplace_back(rest);
          q.break_coef.push_back(F->at(v));
        }
        q.modulus = M;
        return {out, narrow(i128(M) * D)};
      }
      default: {
        std::set<Form> out;
        std::int64_t M = 1;
        for (int k : std::vector<int>(nodes_[static_cast<std::size_t>(i)].kids)) {
          auto [fs, m] = analyse(k);
          out.insert(fs.begin(), fs.end());
          M = lcm64(M, m);
        }
        return {out, M};
      }
    }
  }
};

class Oracle {
 public:
  Oracle(const Program& prog, const VGModel& model, std::int64_t q)
      : vg(static_cast<std::size_t>(prog.slots())),
        vq(static_cast<std::size_t>(prog.slots()), 0),
        prog_(prog),
        model_(model),
        q_(q) {}

  bool eval() { return eval(prog_.root()); }

  std::vector<Frac> vg;
  std::vector<std::int64_t> vq;

 private:
  const Program& prog_;
  const VGModel& model_;
  std::int64_t q_;

  // Exact c + sum coef * vg as numerator over a common denominator.
  std::pair<i128, i128> combine(const Flat& F) const {
    i128 num = F.c, den = 1;
    for (const auto& [s, a] : F.coef) {
      const Frac& v = vg[static_cast<std::size_t>(s)];
      if (v.d == den) {
        num += i128(a) * v.n;
      } else {
        i128 g = gcd128(den, v.d);
        i128 m = v.d / g;
        num = num * m + i128(a) * v.n * (den / g);
        den *= m;
      }
      if (num > (i128(1) << 100) || num < -(i128(1) << 100) || den > (i128(1) << 62))
        throw std::overflow_error("oracle arithmetic overflow");
    }
    return {num, den};
  }

  std::int64_t residue_of(const Frac& v, std::int64_t N) const {
    if (N == 1) return 0;
    return mod(mod(v.n, N) * inv_mod(mod(v.d, N), N), N);
  }

  bool eval(int i) {
    const Node& n = prog_.node(i);
    switch (n.kind) {
      case NK::True: return true;
      case NK::False: return false;
      case NK::Not: return !eval(n.kids[0]);
      case NK::And: return eval(n.kids[0]) && eval(n.kids[1]);
      case NK::Or: return eval(n.kids[0]) || eval(n.kids[1]);
      case NK::Implies: return !eval(n.kids[0]) || eval(n.kids[1]);
      case NK::VgEq: return combine(n.flat).first == 0;
      case NK::VgLe: return combine(n.flat).first <= 0;
      case NK::QEq: {
        if (n.N == 1) return true;
        i128 r = n.qc;
        for (const auto& [s, a] : n.qvg) r += i128(a) * residue_of(vg[static_cast<std::size_t>(s)], n.N);
        for (const auto& [s, a] : n.qvq) r += i128(a) * mod(vq[static_cast<std::size_t>(s)], n.N);
        return r % n.N == 0;
      }
      case NK::QuantQ: {
        std::size_t v = static_cast<std::size_t>(n.slot);
        for (std::int64_t k = 0; k < n.size; ++k) {
          vq[v] = k;
          if (eval(n.kids[0]) == n.exists) return n.exists;
        }
        return !n.exists;
      }
      case NK::Quant: return quantifier(n);
    }
    return false;
  }

  // One point of r + M*G strictly between lo and hi.
  Frac between(Frac lo, Frac hi, std::int64_t r, std::int64_t M) const {
    i128 width_n = i128(hi.n) * lo.d - i128(lo.n) * hi.d, width_d = i128(hi.d) * lo.d;
    i128 qe = 1;
    while (i128(M) * width_d >= width_n * qe) qe *= q_;
    // x = r + M j / qe with j = floor((lo - r) qe / M) + 1
    i128 num = (i128(lo.n) - i128(r) * lo.d) * qe, den = i128(lo.d) * M;
    i128 j = floor_div(num, den) + 1;
    return Frac::make(i128(r) * qe + i128(M) * j, qe);
  }

  bool quantifier(const Node& n) {
    const bool want = n.exists;
    const std::size_t v = static_cast<std::size_t>(n.slot);
    std::vector<Frac> points;
    points.reserve(n.breaks.size());
    for (std::size_t k = 0; k < n.breaks.size(); ++k) {
      auto [num, den] = combine(n.breaks[k]);
      points.push_back(Frac::make(-num, den * n.break_coef[k]));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto test = [&](const Frac& c) {
      vg[v] = c;
      return eval(n.kids[0]) == want;
    };
    for (const auto& pt : points)
      if (gcd64(mod(pt.d, model_.d), model_.d) == 1 && test(pt)) return want;
    const std::int64_t M = n.modulus;
    for (std::int64_t r = 0; r < M; ++r) {
      if (points.empty()) {
        if (test(Frac{r, 1})) return want;
        continue;
      }
      // Rays: the largest point of the coset below the first breakpoint and
      // the smallest above the last one.
      const Frac& first = points.front();
      const Frac& last = points.back();
      i128 jlo = floor_div(i128(first.n) - i128(r) * first.d, i128(first.d) * M);
      Frac below = Frac::make(i128(r) + i128(M) * jlo, 1);
      if (!(below < first)) below = Frac::make(i128(r) + i128(M) * (jlo - 1), 1);
      if (test(below)) return want;
      i128 jhi = floor_div(i128(last.n) - i128(r) * last.d, i128(last.d) * M) + 1;
      if (test(Frac::make(i128(r) + i128(M) * jhi, 1))) return want;
      for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (test(between(points[i], points[i + 1], r, M))) return want;
    }
    return !want;
  }
};

std::int64_t max_coefficient(const TermPtr& t) {
  std::int64_t m = t->kind == TermKind::Scale ? std::llabs(t->k) : 0;
  for (const auto& a : t->args) m = std::max(m, max_coefficient(a));
  return m;
}

std::int64_t max_coefficient(const FormulaPtr& f) {
  std::int64_t m = 1;
  if (f->lhs) m = std::max({m, max_coefficient(f->lhs), max_coefficient(f->rhs)});
  for (const auto& s : f->subs) m = std::max(m, max_coefficient(s));
  return m;
}

}  // namespace

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["agree"] = agree;
  j["assignments"] = assignments;
  j["disagreements"] = disagreements;
  j["widening"] = widening;
  if (!counterexample.empty()) {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : counterexample) c[k] = v;
    j["counterexample"] = {{"assignment", c}, {"lhs", lhs_value}, {"rhs", rhs_value}};
  }
  return j;
}

bool evaluate_vg(const FormulaPtr& f, const VGModel& model, const std::map<std::string, Rational>& vg_values,
                 const std::map<std::string, std::int64_t>& quotient_values) {
  VarList vars;
  for (const auto& [k, v] : vg_values) vars.emplace_back(k, Sort::vg());
  for (const auto& [k, v] : quotient_values) vars.emplace_back(k, Sort::vgq(2));
  Program prog(f, model, vars);
  Oracle o(prog, model, model.free_prime());
  for (const auto& [k, v] : vg_values)
    o.vg[static_cast<std::size_t>(prog.slot_of(k))] =
        Frac::make(static_cast<std::int64_t>(numerator(v)), static_cast<std::int64_t>(denominator(v)));
  for (const auto& [k, v] : quotient_values) o.vq[static_cast<std::size_t>(prog.slot_of(k))] = v;
  return o.eval();
}

CheckReport bounded_check(const FormulaPtr& f, const FormulaPtr& g, const VGModel& model,
                          const CheckOptions& options) {
  CheckReport report;
  report.widening = 4 * (1 + std::max(max_coefficient(f), max_coefficient(g)));
  std::vector<std::int64_t> primes = options.primes;
  if (primes.empty()) primes.push_back(model.free_prime());

  std::set<std::int64_t> dens{1};
  for (bool grew = true; grew;) {
    grew = false;
    for (std::int64_t b : std::set<std::int64_t>(dens))
      for (std::int64_t p : primes)
        if (b * p <= options.bound && dens.insert(b * p).second) grew = true;
  }
  std::vector<Frac> grid;
  {
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::int64_t b : dens)
      for (std::int64_t a = -options.bound; a <= options.bound; ++a) {
        Frac v = Frac::make(a, b);
        if (seen.insert({v.n, v.d}).second) grid.push_back(v);
      }
  }

  VarList vars = free_vars(f);
  for (const auto& v : free_vars(g))
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  std::vector<std::size_t> sizes;
  for (const auto& [name, s] : vars) {
    if (s.kind == SortKind::VG) sizes.push_back(grid.size());
    else if (s.kind == SortKind::VGQ) sizes.push_back(static_cast<std::size_t>(model.quotient(s.n)));
    else throw std::invalid_argument("bounded_check: free variable " + name + " of sort " + s.str());
  }

  Program pf(f, model, vars), pg(g, model, vars);
  Oracle of(pf, model, primes.front()), og(pg, model, primes.front());
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto& [name, s] = vars[i];
      auto a = static_cast<std::size_t>(pf.slot_of(name));
      auto b = static_cast<std::size_t>(pg.slot_of(name));
      if (s.kind == SortKind::VG) of.vg[a] = og.vg[b] = grid[idx[i]];
      else of.vq[a] = og.vq[b] = static_cast<std::int64_t>(idx[i]);
    }
    bool a = of.eval(), b = og.eval();
    ++report.assignments;
    if (a != b) {
      ++report.disagreements;
      if (report.counterexample.empty()) {
        for (std::size_t i = 0; i < vars.size(); ++i)
          report.counterexample.emplace_back(
              vars[i].first, vars[i].second.kind == SortKind::VG ? grid[idx[i]].str() : std::to_string(idx[i]));
        report.lhs_value = a;
        report.rhs_value = b;
      }
      if (report.disagreements >= options.max_disagreements) break;
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == sizes[i]) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  report.agree = report.disagreements == 0;
  return report;
}

}  // namespace tamelab
