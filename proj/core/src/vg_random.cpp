#include "tamelab/vg_qe.hpp"

namespace tamelab {

namespace {

class Generator {
 public:
  Generator(std::mt19937_64& rng, const RandomFormulaOptions& o) : rng_(rng), o_(o) {}

  FormulaPtr run() {
    int nfree = pick(o_.max_free + 1);
    std::vector<std::string> scope;
    for (int i = 1; i <= nfree; ++i) scope.push_back("y" + std::to_string(i));
    quantifiers_ = 1 + pick(o_.max_quantifiers);
    atoms_ = o_.max_atoms;
    return formula(scope, 3);
  }

 private:
  std::mt19937_64& rng_;
  const RandomFormulaOptions& o_;
  int quantifiers_ = 0;
  int atoms_ = 0;
  int fresh_ = 0;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::int64_t coefficient() {
    std::int64_t c = 1 + pick(static_cast<int>(o_.max_coefficient));
    return pick(2) ? c : -c;
  }

  FormulaPtr formula(std::vector<std::string> scope, int depth) {
    if (quantifiers_ > 0 && (scope.empty() || pick(3) != 0)) {
      --quantifiers_;
      std::string x = "x" + std::to_string(++fresh_);
      scope.push_back(x);
      FormulaPtr body = formula(scope, depth);
      if (pick(6) == 0) body = quotient_quantifier(x, body);
      return pick(3) ? exists(x, Sort::vg(), body) : forall(x, Sort::vg(), body);
    }
    if (depth <= 0 || atoms_ <= 1 || pick(3) == 0) return atom(scope);
    switch (pick(5)) {
      case 0: return not_(formula(scope, depth - 1));
      case 1:
      case 2: return and_(formula(scope, depth - 1), formula(scope, depth - 1));
      case 3: return or_(formula(scope, depth - 1), formula(scope, depth - 1));
      default: return implies(formula(scope, depth - 1), formula(scope, depth - 1));
    }
  }

  // (exists q:VGQ[n]) (pi[n](x) = k q & body)
  FormulaPtr quotient_quantifier(const std::string& x, const FormulaPtr& body) {
    std::int64_t n = o_.moduli[pick(static_cast<int>(o_.moduli.size()))];
    Sort s = Sort::vgq(n);
    std::string q = "q" + std::to_string(++fresh_);
    TermPtr rhs = var(q, s);
    std::int64_t k = 1 + pick(2);
    if (k > 1) rhs = scale(k, rhs);
    return exists(q, s, and_(eq(pi(n, var(x, Sort::vg())), rhs), body));
  }

  FormulaPtr atom(const std::vector<std::string>& scope) {
    --atoms_;
    if (scope.empty()) return pick(2) ? top() : bot();
    std::vector<std::string> pool = scope;
    std::vector<std::string> chosen{pool.back()};
    pool.pop_back();
    int extra = pick(std::min<int>(3, static_cast<int>(pool.size()) + 1));
    for (int i = 0; i < extra; ++i) {
      std::size_t j = static_cast<std::size_t>(pick(static_cast<int>(pool.size())));
      chosen.push_back(pool[j]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::vector<TermPtr> lhs, rhs;
    for (const auto& v : chosen) {
      std::int64_t c = coefficient();
      TermPtr t = var(v, Sort::vg());
      if (std::llabs(c) != 1) t = scale(std::llabs(c), t);
      (c > 0 ? lhs : rhs).push_back(t);
    }
    if (pick(2)) {
      std::int64_t c = coefficient();
      (c > 0 ? lhs : rhs).push_back(lit(std::llabs(c), Sort::vg()));
    }
    auto sum = [](const std::vector<TermPtr>& ts) {
      if (ts.empty()) return lit(0, Sort::vg());
      TermPtr acc = ts.front();
      for (std::size_t i = 1; i < ts.size(); ++i) acc = add(acc, ts[i]);
      return acc;
    };
    TermPtr a = sum(lhs), b = sum(rhs);
    if (pick(5) == 0) {
      std::int64_t n = o_.moduli[pick(static_cast<int>(o_.moduli.size()))];
      Sort s = Sort::vgq(n);
      FormulaPtr f = eq(pi(n, sub(a, b)), lit(pick(static_cast<int>(n)), s));
      return pick(3) ? f : not_(f);
    }
    switch (pick(4)) {
      case 0: return eq(a, b);
      case 1: return le(a, b);
      case 2: return lt(a, b);
      default: return neq(a, b);
    }
  }
};

}  // namespace

FormulaPtr random_vg_formula(std::mt19937_64& rng, const RandomFormulaOptions& options) {
  return Generator(rng, options).run();
}

}  // namespace tamelab
