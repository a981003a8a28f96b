#include "tamelab/zeta.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <set>
#include <unordered_map>
#include <variant>

#include "tamelab/eval.hpp"
#include "zeta_internal.hpp"

namespace tamelab {

namespace detail {

ReductionInfo reduction_info(const Polynomial& f, std::int64_t p) {
  ReductionInfo info;
  ReducedPoly r = f.reduce(p);
  std::size_t n = f.nvars();
  std::vector<char> occurs(n, 0);
  for (const auto& [e, c] : r)
    for (std::size_t i = 0; i < n; ++i)
      if (e[i] > 0) occurs[i] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (occurs[i]) info.vars.push_back(i);
  if (r.empty()) {
    info.has_zero = true;
    info.smooth = false;
    info.zeros = 1;
    for (std::size_t i = 0; i < n; ++i) info.zeros *= p;
    return info;
  }
  if (info.vars.empty()) {
    info.constant = true;
    return info;
  }
  // partial derivatives of the reduction
  std::vector<ReducedPoly> grad;
  for (std::size_t v : info.vars) {
    ReducedPoly d;
    for (const auto& [e, c] : r) {
      if (e[v] == 0) continue;
      std::int64_t k = mod(c * e[v], p);
      if (k == 0) continue;
      Exponents e2 = e;
      --e2[v];
      d[e2] = mod(d[e2] + k, p);
    }
    grad.push_back(std::move(d));
  }
  std::vector<std::int64_t> x(n, 0);
  std::int64_t local = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == info.vars.size()) {
      if (evaluate_mod(r, x, p) != 0) return;
      ++local;
      bool nonsingular = false;
      for (const auto& d : grad) nonsingular = nonsingular || evaluate_mod(d, x, p) != 0;
      info.smooth = info.smooth && nonsingular;
      return;
    }
    for (std::int64_t c = 0; c < p; ++c) {
      x[info.vars[k]] = c;
      rec(k + 1);
    }
    x[info.vars[k]] = 0;
  };
  rec(0);
  info.zeros = local;
  for (std::size_t i = info.vars.size(); i < n; ++i) info.zeros *= p;
  info.has_zero = local > 0;
  return info;
}

int strip_content(Polynomial& f, std::int64_t p) {
  int k = f.content_valuation(p);
  if (k != 0) f = f.scaled(prime_power(p, -k));
  return k;
}

void unit_normalize(Polynomial& f, std::int64_t p) {
  if (f.is_zero()) return;
  Rational c = f.terms().rbegin()->second;
  Rational u = c / prime_power(p, valuation(c, p));
  if (u != 1) f = f.scaled(1 / u);
}

Polynomial shift(const Polynomial& f, std::size_t i, std::int64_t c, std::int64_t p) {
  return f.substitute_affine(i, Rational(c), Rational(p));
}

}  // namespace detail

using detail::reduction_info;
using detail::ReductionInfo;

// ---------------------------------------------------------------------------
// TwoVarRational

TwoVarRational TwoVarRational::from_ratfunc(const RatFunc& r, std::int64_t p) {
  TwoVarRational out;
  out.prime = p;
  if (r.is_zero()) return out;
  UPoly den = r.den(), num = r.num();
  out.t_power = den.low_degree();
  den = divmod(den, UPoly::monomial(1, out.t_power)).first;
  Rational c0 = den.coeff(0);
  den = den.scaled(1 / c0);
  num = num.scaled(1 / c0);

  UPoly rest = den;
  std::vector<DenominatorFactor> chosen;
  while (rest.degree() > 0) {
    int best_deg = 0;
    DenominatorFactor best;
    UPoly best_gcd;
    for (int b = 1; b <= rest.degree(); ++b)
      for (int a = -(3 * b + 3); a <= 3 * b + 3; ++a) {
        UPoly cand = UPoly::constant(1) - UPoly::monomial(prime_power(p, a), b);
        UPoly g = gcd(rest, cand);
        if (g.degree() > best_deg) {
          best_deg = g.degree();
          best = {a, b};
          best_gcd = g;
        }
      }
    if (best_deg == 0) {
      out.normal = false;
      break;
    }
    chosen.push_back(best);
    rest = divmod(rest, best_gcd).first;
  }
  if (out.normal) {
    UPoly full = UPoly::constant(1);
    for (const auto& f : chosen) full = full * (UPoly::constant(1) - UPoly::monomial(prime_power(p, f.a), f.b));
    auto [cof, rem] = divmod(full, den);
    if (!rem.is_zero()) throw std::logic_error("denominator normal form: cofactor is not a polynomial");
    num = num * cof;
    std::sort(chosen.begin(), chosen.end());
    out.factors = std::move(chosen);
  } else {
    out.raw_denominator = den;
  }
  for (int j = 0; j <= num.degree(); ++j)
    if (num.coeff(j) != 0) out.numerator[{0, j}] = num.coeff(j);
  return out;
}

RatFunc TwoVarRational::to_ratfunc() const {
  if (!prime) throw std::logic_error("TwoVarRational: L is not specialized");
  std::int64_t p = *prime;
  UPoly num;
  for (const auto& [ij, c] : numerator) num = num + UPoly::monomial(c * prime_power(p, ij.first), ij.second);
  UPoly den = normal ? UPoly::constant(1) : raw_denominator;
  for (const auto& f : factors) den = den * (UPoly::constant(1) - UPoly::monomial(prime_power(p, f.a), f.b));
  return RatFunc(num, den.shifted(t_power));
}

int TwoVarRational::numerator_degree() const {
  int d = -1;
  for (const auto& [ij, c] : numerator)
    if (c != 0) d = std::max(d, ij.second);
  return d;
}

int TwoVarRational::denominator_degree() const {
  int d = t_power + (normal ? 0 : raw_denominator.degree());
  for (const auto& f : factors) d += f.b;
  return d;
}

double TwoVarRational::evaluate(double t) const { return to_ratfunc().evaluate(t); }

std::string TwoVarRational::str() const {
  std::string L = prime ? std::to_string(*prime) : "L";
  std::ostringstream num;
  bool first = true;
  for (auto it = numerator.begin(); it != numerator.end(); ++it) {
    const auto& [ij, c] = *it;
    Rational a = c < 0 ? Rational(-c) : c;
    num << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    std::string mono;
    if (ij.first != 0) mono += L + "^" + std::to_string(ij.first);
    if (ij.second != 0) mono += (mono.empty() ? "" : "*") + std::string("T") + (ij.second == 1 ? "" : "^" + std::to_string(ij.second));
    if (mono.empty() || a != 1) num << to_string(a) << (mono.empty() ? "" : "*");
    num << mono;
  }
  if (first) num << "0";
  std::string den;
  if (t_power != 0) den += "T" + (t_power == 1 ? std::string() : "^" + std::to_string(t_power));
  for (const auto& f : factors) {
    if (!den.empty()) den += " ";
    den += "(1 - " + L + "^" + std::to_string(f.a) + "*T" + (f.b == 1 ? "" : "^" + std::to_string(f.b)) + ")";
  }
  if (!normal) den += (den.empty() ? "" : " ") + std::string("(") + raw_denominator.str() + ")";
  if (den.empty()) return num.str();
  return "(" + num.str() + ") / (" + den + ")";
}

nlohmann::json TwoVarRational::to_json() const {
  nlohmann::json j;
  if (prime) j["prime"] = *prime;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [ij, c] : numerator) terms.push_back({{"L", ij.first}, {"T", ij.second}, {"c", to_string(c)}});
  j["numerator"] = terms;
  j["t_power"] = t_power;
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : factors) fs.push_back({f.a, f.b});
  j["factors"] = fs;
  j["normal"] = normal;
  if (!normal) j["raw_denominator"] = raw_denominator.to_json();
  if (prime) {
    RatFunc r = to_ratfunc();
    j["ratfunc"] = {{"numerator", r.num().to_json()}, {"denominator", r.den().to_json()}};
  }
  j["degree_ok"] = check_degree(*this);
  j["text"] = str();
  return j;
}

bool check_degree(const TwoVarRational& r) { return r.numerator_degree() <= r.denominator_degree(); }

nlohmann::json UniformFit::to_json() const {
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : factors) fs.push_back({f.a, f.b});
  return {{"ok", ok}, {"a", a}, {"factors", fs}, {"message", message}};
}

namespace {

bool divides_candidate(const TwoVarRational& r, int a, const std::vector<DenominatorFactor>& factors) {
  std::int64_t p = *r.prime;
  UPoly full = UPoly::monomial(1, a);
  for (const auto& f : factors) full = full * (UPoly::constant(1) - UPoly::monomial(prime_power(p, f.a), f.b));
  return divmod(full, r.to_ratfunc().den()).second.is_zero();
}

}  // namespace

UniformFit fit_uniform_denominator(const std::vector<TwoVarRational>& results) {
  UniformFit fit;
  std::set<std::int64_t> primes;
  for (const auto& r : results) {
    if (!r.prime) {
      fit.message = "results must be per-prime";
      return fit;
    }
    primes.insert(*r.prime);
    if (!r.normal) {
      fit.message = "denominator at p = " + std::to_string(*r.prime) + " has no product form";
      return fit;
    }
  }
  if (primes.size() < 3) {
    fit.message = "need results for at least three primes";
    return fit;
  }
  std::map<DenominatorFactor, std::size_t> mult;
  for (const auto& r : results) {
    fit.a = std::max(fit.a, r.t_power);
    std::map<DenominatorFactor, std::size_t> here;
    for (const auto& f : r.factors) ++here[f];
    for (const auto& [f, m] : here) mult[f] = std::max(mult[f], m);
  }
  for (const auto& [f, m] : mult)
    for (std::size_t i = 0; i < m; ++i) fit.factors.push_back(f);
  auto all_divide = [&](int a, const std::vector<DenominatorFactor>& fs) {
    return std::all_of(results.begin(), results.end(), [&](const TwoVarRational& r) { return divides_candidate(r, a, fs); });
  };
  if (!all_divide(fit.a, fit.factors)) {
    fit.factors.clear();
    fit.message = "no common denominator of the form T^a prod(1 - L^a_i T^b_i) found";
    return fit;
  }
  for (std::size_t i = fit.factors.size(); i-- > 0;) {
    auto trial = fit.factors;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (all_divide(fit.a, trial)) fit.factors = std::move(trial);
  }
  fit.ok = true;
  fit.message = "ok";
  return fit;
}

// ---------------------------------------------------------------------------
// IntegralSpec

std::vector<std::optional<std::int64_t>> parse_domain(const std::string& text, std::size_t n) {
  std::vector<std::optional<std::int64_t>> out;
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) return std::vector<std::optional<std::int64_t>>(n);
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "O") {
      out.emplace_back();
    } else if (item == "pO" || item == "M") {
      out.emplace_back(0);
    } else {
      auto plus = item.rfind('+');
      std::string tail = plus == std::string::npos ? "" : item.substr(plus + 1);
      if (plus == std::string::npos || (tail != "pO" && tail != "M"))
        throw std::invalid_argument("domain coordinate must be O, pO or a+pO (got '" + item + "')");
      try {
        std::size_t used = 0;
        std::int64_t a = std::stoll(item.substr(0, plus), &used);
        if (used != plus) throw std::invalid_argument("trailing characters");
        out.emplace_back(a);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad residue in domain coordinate '" + item + "'");
      }
    }
  }
  if (out.size() != n)
    throw std::invalid_argument("domain has " + std::to_string(out.size()) + " coordinates, expected " + std::to_string(n));
  return out;
}

void IntegralSpec::validate() const {
  if (vars.empty()) throw std::invalid_argument("integral needs at least one variable");
  auto check = [&](const Polynomial& q, const char* what) {
    if (q.nvars() != n()) throw std::invalid_argument(std::string(what) + " has the wrong number of variables");
  };
  check(f, "f");
  if (g) check(*g, "g");
  if (h) check(*h, "h");
  if (weights.size() > 2) throw std::invalid_argument("at most two ord weights are supported");
  for (const auto& w : weights) {
    check(w, "weight");
    if (w.is_zero()) throw std::invalid_argument("ord weight of the zero polynomial");
  }
  if (domain.size() != n()) throw std::invalid_argument("domain dimension does not match the variables");
  if (constraint && has_quantifier(constraint, SortKind::VF))
    throw std::invalid_argument("constraint must not quantify over the valued field");
}

IntegralSpec IntegralSpec::from_text(const std::string& f, const std::string& domain) {
  auto parsed = parse_polynomial(f);
  std::size_t k = 0;
  bool has_domain = domain.find_first_not_of(" \t") != std::string::npos;
  if (has_domain) k = static_cast<std::size_t>(std::count(domain.begin(), domain.end(), ',')) + 1;
  std::vector<std::string> vars = parsed.vars;
  if (vars.size() < std::max<std::size_t>(k, 1)) {
    for (int i = 1; vars.size() < std::max<std::size_t>(k, 1); ++i) {
      std::string name = "u" + std::to_string(i);
      if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
    }
    parsed = parse_polynomial(f, vars);
  }
  IntegralSpec spec;
  spec.vars = vars;
  spec.f = parsed.poly;
  spec.domain = parse_domain(domain, vars.size());
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// exact recursion

namespace {

RatFunc constant_times_t(const Rational& c, int k) { return RatFunc(UPoly::monomial(c, k)); }

// sum_{k >= 1} k^r z^k
RatFunc weighted_geometric(const RatFunc& z, int r) {
  RatFunc one(Rational(1));
  RatFunc d = one - z;
  switch (r) {
    case 0: return z / d;
    case 1: return z / (d * d);
    case 2: return z * (one + z) / (d * d * d);
    default: throw std::invalid_argument("at most two ord weights are supported");
  }
}

struct Constraint {
  FormulaPtr formula;
  std::map<std::string, std::size_t> index;
  std::vector<Polynomial> polys;
  std::int64_t modulus = 1;
};

void collect_constraint_terms(const TermPtr& t, const std::vector<std::string>& vars, Constraint& c) {
  if (t->kind == TermKind::Ord) throw std::invalid_argument("constraint uses ord; a tame constraint may only use ac and ord_n");
  if (t->kind == TermKind::Ac || t->kind == TermKind::OrdN) {
    std::string key = print(t->args[0]);
    if (!c.index.count(key)) {
      c.index[key] = c.polys.size();
      c.polys.push_back(to_polynomial(t->args[0], vars));
    }
    return;
  }
  for (const auto& a : t->args) collect_constraint_terms(a, vars, c);
}

void collect_constraint_terms(const FormulaPtr& f, const std::vector<std::string>& vars, Constraint& c) {
  if ((f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall) &&
      (f->var_sort.kind == SortKind::VF || f->var_sort.kind == SortKind::VG))
    throw std::invalid_argument("constraint must be tame: no valued field or value group quantifiers");
  if (f->lhs) {
    if (f->lhs->sort.kind == SortKind::VF) {
      if (f->kind != FormulaKind::Eq) throw std::invalid_argument("valued field atoms must be equalities");
      std::string key = print(f->lhs) + " = " + print(f->rhs);
      if (!c.index.count(key)) {
        c.index[key] = c.polys.size();
        c.polys.push_back(to_polynomial(f->lhs, vars) - to_polynomial(f->rhs, vars));
      }
    } else if (f->lhs->sort.kind == SortKind::VG) {
      throw std::invalid_argument("constraint must be tame: value group atoms are not allowed");
    } else {
      collect_constraint_terms(f->lhs, vars, c);
      collect_constraint_terms(f->rhs, vars, c);
    }
  }
  for (const auto& s : f->subs) collect_constraint_terms(s, vars, c);
}

struct State {
  Polynomial f;
  std::optional<Polynomial> g, h;
  std::vector<Polynomial> w;
  unsigned active = 0;
  bool constrained = false;
  std::vector<Polynomial> c;
  std::vector<std::int64_t> off;
};

std::string state_key(const State& s) {
  std::string k = s.f.str();
  k += s.g ? "|g:" + s.g->str() : "|";
  k += s.h ? "|h:" + s.h->str() : "|";
  for (std::size_t j = 0; j < s.w.size(); ++j) k += (s.active >> j) & 1U ? "|w:" + s.w[j].str() : "|-";
  if (s.constrained)
    for (std::size_t i = 0; i < s.c.size(); ++i) k += "|c:" + s.c[i].str() + "@" + std::to_string(s.off[i]);
  return k;
}

// Resolved constraint data of a branch: ac is the constant reduction, ord the offset.
class BranchBackend : public VfBackend {
 public:
  BranchBackend(const Constraint& c, const State& s, std::int64_t p)
      : c_(c), s_(s), p_(p), rf_(residue_field(FieldDesc::padic(p))) {}
  const ResidueField& residue() const override { return rf_; }
  ResidueElem ac(const TermPtr& t) override {
    const Polynomial& q = poly(print(t));
    if (q.is_zero()) return 0;
    return rf_.from_int(tamelab::residue(q.terms().begin()->second, p_));
  }
  std::int64_t ord(const TermPtr&) override {
    throw std::invalid_argument("constraint uses ord; a tame constraint may only use ac and ord_n");
  }
  std::int64_t ord_mod(const TermPtr& t, std::int64_t n) override {
    std::size_t i = at(print(t));
    if (s_.c[i].is_zero()) return 0;
    return mod(s_.off[i], n);
  }
  bool vf_equal(const TermPtr& a, const TermPtr& b) override { return poly(print(a) + " = " + print(b)).is_zero(); }

 private:
  const Constraint& c_;
  const State& s_;
  std::int64_t p_;
  const ResidueField& rf_;
  std::size_t at(const std::string& key) const {
    auto it = c_.index.find(key);
    if (it == c_.index.end()) throw std::logic_error("constraint term '" + key + "' was not registered");
    return it->second;
  }
  const Polynomial& poly(const std::string& key) const { return s_.c[at(key)]; }
};

struct Weighted {
  State state;
  RatFunc coeff;
};

class Engine {
 public:
  Engine(const IntegralSpec& spec, std::int64_t p, const ZetaOptions& options)
      : spec_(spec), p_(p), opt_(options), n_(spec.n()) {
    if (spec.constraint) {
      cons_.formula = spec.constraint;
      collect_constraint_terms(spec.constraint, spec.vars, cons_);
      for (std::int64_t m : moduli(spec.constraint)) cons_.modulus = lcm64(cons_.modulus, m);
    }
  }

  RatFunc run(ZetaStats* stats) {
    if (spec_.f.is_zero() || (spec_.g && spec_.g->is_zero()) || (spec_.h && spec_.h->is_zero())) return RatFunc();
    State root;
    root.f = spec_.f;
    root.g = spec_.g;
    root.h = spec_.h;
    root.w = spec_.weights;
    root.active = (1U << spec_.weights.size()) - 1;
    root.constrained = static_cast<bool>(spec_.constraint);
    root.c = cons_.polys;
    root.off.assign(cons_.polys.size(), 0);
    Rational base = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!spec_.domain[i]) continue;
      apply_shift(root, i, *spec_.domain[i]);
      base /= p_;
    }
    RatFunc total;
    for (auto& [s, coeff] : normalize(std::move(root), RatFunc(base))) {
      int id = visit(s, 0);
      total += coeff * nodes_[id].value;
    }
    if (stats) {
      stats->states = nodes_.size();
      stats->max_depth = deepest_;
      stats->largest_cycle = largest_scc_;
    }
    return total;
  }

 private:
  struct Node {
    std::vector<std::pair<int, RatFunc>> edges;
    RatFunc constant;
    int index = 0, low = 0;
    bool on_stack = false;
    RatFunc value;
  };

  const IntegralSpec& spec_;
  std::int64_t p_;
  ZetaOptions opt_;
  std::size_t n_;
  Constraint cons_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> memo_;
  std::vector<int> stack_;
  int counter_ = 0;
  int deepest_ = 0;
  std::size_t largest_scc_ = 0;

  void apply_shift(State& s, std::size_t i, std::int64_t c) const {
    s.f = detail::shift(s.f, i, c, p_);
    if (s.g) s.g = detail::shift(*s.g, i, c, p_);
    if (s.h) s.h = detail::shift(*s.h, i, c, p_);
    for (std::size_t j = 0; j < s.w.size(); ++j)
      if ((s.active >> j) & 1U) s.w[j] = detail::shift(s.w[j], i, c, p_);
    if (s.constrained)
      for (auto& q : s.c)
        if (!q.is_zero()) q = detail::shift(q, i, c, p_);
  }

  // Strips p-contents: T^k for f, p^-k for g and h, ord offsets for the constraint,
  // and (k + ord w) expanded over the subsets of the active weights.
  std::vector<Weighted> normalize(State s, RatFunc coeff) const {
    int kf = detail::strip_content(s.f, p_);
    if (kf < 0) throw std::invalid_argument("f must have p-integral coefficients");
    detail::unit_normalize(s.f, p_);
    Rational c = 1;
    for (auto* q : {&s.g, &s.h})
      if (*q) {
        int k = detail::strip_content(**q, p_);
        detail::unit_normalize(**q, p_);
        c *= prime_power(p_, -k);
      }
    coeff *= constant_times_t(c, kf);
    if (s.constrained)
      for (std::size_t i = 0; i < s.c.size(); ++i)
        if (!s.c[i].is_zero()) s.off[i] = mod(s.off[i] + detail::strip_content(s.c[i], p_), cons_.modulus);
    std::vector<int> k(s.w.size(), 0);
    for (std::size_t j = 0; j < s.w.size(); ++j)
      if ((s.active >> j) & 1U) {
        k[j] = detail::strip_content(s.w[j], p_);
        detail::unit_normalize(s.w[j], p_);
      }
    std::vector<Weighted> out;
    for (unsigned u = 0; u < (1U << s.w.size()); ++u) {
      if ((u & s.active) != u) continue;
      Rational m = 1;
      for (std::size_t j = 0; j < s.w.size(); ++j)
        if (((s.active & ~u) >> j) & 1U) m *= k[j];
      if (m == 0) continue;
      State t = s;
      t.active = u;
      for (std::size_t j = 0; j < t.w.size(); ++j)
        if (!((u >> j) & 1U)) t.w[j] = Polynomial();
      out.push_back({std::move(t), coeff * RatFunc(m)});
    }
    return out;
  }

  // Closed value of the branch, or the variable to split.
  std::variant<RatFunc, std::size_t> analyze(State& s) const {
    std::vector<std::size_t> candidates;
    if (s.constrained) {
      bool resolved = true;
      for (const auto& q : s.c) {
        if (q.is_zero()) continue;
        auto info = reduction_info(q, p_);
        if (info.constant) continue;
        resolved = false;
        candidates.insert(candidates.end(), info.vars.begin(), info.vars.end());
      }
      if (resolved) {
        BranchBackend backend(cons_, s, p_);
        if (!eval_formula(cons_.formula, backend)) return RatFunc();
        s.constrained = false;
      }
    }
    std::vector<const Polynomial*> nonunit;
    std::vector<ReductionInfo> infos;
    bool f_nonunit = false;
    int gh_nonunit = 0;
    auto consider = [&](const Polynomial& q, int role) {
      auto info = reduction_info(q, p_);
      if (!info.has_zero) return false;
      nonunit.push_back(&q);
      infos.push_back(info);
      if (role == 0) f_nonunit = true;
      if (role == 1) ++gh_nonunit;
      return true;
    };
    consider(s.f, 0);
    if (s.g) consider(*s.g, 1);
    if (s.h) consider(*s.h, 1);
    int r = 0;
    bool unit_weight = false;
    for (std::size_t j = 0; j < s.w.size(); ++j)
      if ((s.active >> j) & 1U) {
        ++r;
        if (!consider(s.w[j], 2)) unit_weight = true;
      }
    if (!s.constrained) {
      if (unit_weight) return RatFunc();
      if (nonunit.empty()) return RatFunc(Rational(1));
      bool same = std::all_of(nonunit.begin(), nonunit.end(), [&](const Polynomial* q) { return *q == *nonunit[0]; });
      if (same && infos[0].smooth) {
        // Hensel: near a smooth zero the common polynomial is p times a coordinate
        Rational pn = prime_power(p_, static_cast<int>(n_));
        Rational N = infos[0].zeros;
        RatFunc z = constant_times_t(prime_power(p_, -1 - gh_nonunit), f_nonunit ? 1 : 0);
        RatFunc out = RatFunc(N * (p_ - 1) / pn) * weighted_geometric(z, r);
        if (r == 0) out += RatFunc((pn - N) / pn);
        return out;
      }
    }
    for (const auto& info : infos) candidates.insert(candidates.end(), info.vars.begin(), info.vars.end());
    if (candidates.empty()) throw std::logic_error("zeta: no variable to split");
    return *std::min_element(candidates.begin(), candidates.end());
  }

  int visit(const State& s0, int depth) {
    std::string key = state_key(s0);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (nodes_.size() >= opt_.max_states)
      throw BudgetExceeded("zeta: more than " + std::to_string(opt_.max_states) + " branch states");
    if (depth > opt_.max_depth)
      throw BudgetExceeded("zeta: recursion deeper than " + std::to_string(opt_.max_depth) + " without closing");
    deepest_ = std::max(deepest_, depth);
    int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    memo_.emplace(std::move(key), id);
    nodes_[id].index = nodes_[id].low = counter_++;
    nodes_[id].on_stack = true;
    stack_.push_back(id);

    State s = s0;
    auto verdict = analyze(s);
    if (auto* v = std::get_if<RatFunc>(&verdict)) {
      nodes_[id].constant = *v;
    } else {
      std::size_t var = std::get<std::size_t>(verdict);
      RatFunc share(Rational(1, p_));
      for (std::int64_t c = 0; c < p_; ++c) {
        State child = s;
        apply_shift(child, var, c);
        for (auto& [t, coeff] : normalize(std::move(child), share)) {
          int cid = visit(t, depth + 1);
          if (nodes_[cid].on_stack) nodes_[id].low = std::min(nodes_[id].low, nodes_[cid].low);
          nodes_[id].edges.emplace_back(cid, std::move(coeff));
        }
      }
    }
    if (nodes_[id].low == nodes_[id].index) solve_component(id);
    return id;
  }

  // X_i = constant_i + sum_j c_ij X_j over one strongly connected component.
  void solve_component(int root) {
    std::vector<int> members;
    while (true) {
      int x = stack_.back();
      stack_.pop_back();
      nodes_[x].on_stack = false;
      members.push_back(x);
      if (x == root) break;
    }
    largest_scc_ = std::max(largest_scc_, members.size());
    std::map<int, std::size_t> pos;
    for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = i;
    std::size_t m = members.size();
    std::vector<std::vector<RatFunc>> a(m, std::vector<RatFunc>(m));
    std::vector<RatFunc> b(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Node& nd = nodes_[members[i]];
      a[i][i] = RatFunc(Rational(1));
      b[i] = nd.constant;
      for (const auto& [cid, coeff] : nd.edges) {
        auto it = pos.find(cid);
        if (it == pos.end()) {
          b[i] += coeff * nodes_[cid].value;
        } else {
          a[i][it->second] = a[i][it->second] - coeff;
        }
      }
    }
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      while (piv < m && a[piv][col].is_zero()) ++piv;
      if (piv == m) throw std::logic_error("zeta: singular branch system");
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
      RatFunc inv = RatFunc(Rational(1)) / a[col][col];
      for (std::size_t k = col; k < m; ++k) a[col][k] *= inv;
      b[col] *= inv;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col || a[r][col].is_zero()) continue;
        RatFunc f = a[r][col];
        for (std::size_t k = col; k < m; ++k) a[r][k] = a[r][k] - f * a[col][k];
        b[r] = b[r] - f * b[col];
      }
    }
    for (std::size_t i = 0; i < m; ++i) nodes_[members[i]].value = b[i];
  }
};

}  // namespace

RatFunc igusa_ratfunc(const IntegralSpec& spec, std::int64_t p, const ZetaOptions& options, ZetaStats* stats) {
  spec.validate();
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  Engine engine(spec, p, options);
  return engine.run(stats);
}

TwoVarRational igusa_exact(const IntegralSpec& spec, std::int64_t p, const ZetaOptions& options, ZetaStats* stats) {
  return TwoVarRational::from_ratfunc(igusa_ratfunc(spec, p, options, stats), p);
}

TwoVarRational orbital_integral(const IntegralSpec& spec, const FormulaPtr& orbit, std::int64_t p,
                                const ZetaOptions& options) {
  IntegralSpec s = spec;
  s.constraint = s.constraint ? and_(s.constraint, orbit) : orbit;
  return igusa_exact(s, p, options);
}

}  // namespace tamelab
