#include "tamelab/polynomial.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tamelab {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e.at(i) = 1;
  p.add_term(e, 1);
  return p;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::degree_in(std::size_t i) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.n_ != n_) throw std::invalid_argument("polynomial: variable count mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-() const { return scaled(-1); }
Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.n_ != n_) throw std::invalid_argument("polynomial: variable count mismatch");
  Polynomial r(n_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(n_);
      for (std::size_t i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(n_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(n_, 1), b = *this;
  while (k > 0) {
    if (k & 1U) r = r * b;
    k >>= 1U;
    if (k > 0) b = b * b;
  }
  return r;
}

Polynomial Polynomial::derivative(std::size_t i) const {
  Polynomial r(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents f = e;
    --f[i];
    r.add_term(f, c * e[i]);
  }
  return r;
}

Polynomial Polynomial::substitute_affine(std::size_t i, const Rational& c, const Rational& scale) const {
  Polynomial r(n_);
  for (const auto& [e, coef] : terms_) {
    int k = e[i];
    // (c + scale*x)^k = sum_j binom(k, j) c^(k-j) scale^j x^j
    Rational binom = 1;
    for (int j = 0; j <= k; ++j) {
      Rational term = coef * binom;
      for (int a = 0; a < k - j; ++a) term *= c;
      for (int a = 0; a < j; ++a) term *= scale;
      Exponents f = e;
      f[i] = j;
      r.add_term(f, term);
      binom = binom * (k - j) / (j + 1);
    }
  }
  return r;
}

Rational Polynomial::evaluate(const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    sum += t;
  }
  return sum;
}

Elem Polynomial::evaluate(const std::vector<Elem>& x, const FieldDesc& field) const {
  Elem sum = Elem::zero(field);
  for (const auto& [e, c] : terms_) {
    Elem t = Elem::from_rational(field, c);
    for (std::size_t i = 0; i < n_; ++i)
      if (e[i] > 0) t = t * x[i].pow(e[i]);
    sum = sum + t;
  }
  return sum;
}

int Polynomial::content_valuation(std::int64_t p) const {
  if (terms_.empty()) throw std::domain_error("content of the zero polynomial");
  int v = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) v = std::min(v, valuation(c, p));
  return v;
}

ReducedPoly Polynomial::reduce(std::int64_t p) const {
  ReducedPoly r;
  for (const auto& [e, c] : terms_) {
    std::int64_t k = residue(c, p);
    if (k != 0) r.emplace(e, k);
  }
  return r;
}

std::string Polynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational a = c;
    if (first) {
      if (a < 0) os << "-";
    } else {
      os << (a < 0 ? " - " : " + ");
    }
    if (a < 0) a = -a;
    first = false;
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      std::string v = i < names.size() ? names[i] : "x" + std::to_string(i);
      factors.push_back(e[i] == 1 ? v : v + "^" + std::to_string(e[i]));
    }
    if (factors.empty() || a != 1) {
      os << to_string(a);
      if (!factors.empty()) os << "*";
    }
    for (std::size_t j = 0; j < factors.size(); ++j) os << (j ? "*" : "") << factors[j];
  }
  return os.str();
}

std::int64_t evaluate_mod(const ReducedPoly& f, const std::vector<std::int64_t>& x, std::int64_t p) {
  std::int64_t sum = 0;
  for (const auto& [e, c] : f) {
    std::int64_t t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t = t * pow_mod(x[i], e[i], p) % p;
    sum = (sum + t) % p;
  }
  return sum;
}

Polynomial to_polynomial(const TermPtr& t, const std::vector<std::string>& vars) {
  std::size_t n = vars.size();
  switch (t->kind) {
    case TermKind::Var: {
      auto it = std::find(vars.begin(), vars.end(), t->name);
      if (it == vars.end()) throw std::invalid_argument("unknown variable '" + t->name + "'");
      return Polynomial::variable(n, static_cast<std::size_t>(it - vars.begin()));
    }
    case TermKind::Lit: return Polynomial::constant(n, t->value);
    case TermKind::Add: return to_polynomial(t->args[0], vars) + to_polynomial(t->args[1], vars);
    case TermKind::Sub: return to_polynomial(t->args[0], vars) - to_polynomial(t->args[1], vars);
    case TermKind::Neg: return -to_polynomial(t->args[0], vars);
    case TermKind::Mul: return to_polynomial(t->args[0], vars) * to_polynomial(t->args[1], vars);
    case TermKind::Scale: return to_polynomial(t->args[0], vars).scaled(t->k);
    case TermKind::Pow:
      if (t->k < 0) throw std::invalid_argument("negative exponent in polynomial");
      return to_polynomial(t->args[0], vars).pow(static_cast<unsigned>(t->k));
    default: throw std::invalid_argument("not a polynomial term: " + print(t));
  }
}

ParsedPolynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  TermPtr t;
  try {
    t = parse_term(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed polynomial '" + text + "': " + e.what());
  }
  if (t->sort != Sort::vf()) throw std::invalid_argument("polynomial must be a valued-field term");
  ParsedPolynomial out;
  if (!vars.empty()) {
    out.vars = vars;
  } else {
    std::set<std::string> names;
    for (const auto& [name, sort] : term_vars(t)) names.insert(name);
    out.vars.assign(names.begin(), names.end());
    if (out.vars.empty()) out.vars.push_back("x");
  }
  out.poly = to_polynomial(t, out.vars);
  return out;
}

}  // namespace tamelab
