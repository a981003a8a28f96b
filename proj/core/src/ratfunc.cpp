#include "tamelab/ratfunc.hpp"

#include <cmath>
#include <stdexcept>

namespace tamelab {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::constant(const Rational& c) { return UPoly(std::vector<Rational>{c}); }

UPoly UPoly::monomial(const Rational& c, int degree) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return UPoly(std::move(v));
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::coeff(int i) const {
  return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0);
}

int UPoly::low_degree() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<int>(i);
  return 0;
}

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return UPoly(std::move(v));
}

UPoly UPoly::operator-(const UPoly& o) const { return *this + (-o); }

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  }
  return UPoly(std::move(v));
}

UPoly UPoly::operator-() const { return scaled(-1); }

UPoly UPoly::scaled(const Rational& k) const {
  std::vector<Rational> v(c_);
  for (auto& x : v) x *= k;
  return UPoly(std::move(v));
}

UPoly UPoly::shifted(int k) const {
  if (k < 0) throw std::invalid_argument("negative shift");
  if (is_zero()) return {};
  std::vector<Rational> v(static_cast<std::size_t>(k), Rational(0));
  v.insert(v.end(), c_.begin(), c_.end());
  return UPoly(std::move(v));
}

UPoly UPoly::monic() const { return is_zero() ? *this : scaled(1 / leading()); }

Rational UPoly::evaluate(const Rational& t) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
  return r;
}

double UPoly::evaluate(double t) const {
  double r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + static_cast<double>(*it);
  return r;
}

std::string UPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rational a = abs(c_[i]);
    bool negative = c_[i] < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    if (mono.empty()) {
      out += to_string(a);
    } else if (a == 1) {
      out += mono;
    } else {
      out += to_string(a) + "*" + mono;
    }
  }
  return out;
}

nlohmann::json UPoly::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& x : c_) j.push_back(to_string(x));
  return j;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {UPoly(), a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db) + 1, Rational(0));
  Rational lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Rational k = r[i] / lb;
    q[i - db] = k;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= k * b.coeffs()[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

RatFunc::RatFunc(const UPoly& num, const UPoly& den) {
  if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = UPoly();
    den_ = UPoly::constant(1);
    return;
  }
  UPoly g = gcd(num, den);
  UPoly n = divmod(num, g).first, d = divmod(den, g).first;
  Rational lc = d.leading();
  num_ = n.scaled(1 / lc);
  den_ = d.scaled(1 / lc);
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::domain_error("rational function division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -num_;
  return r;
}

Rational RatFunc::evaluate(const Rational& t) const {
  Rational d = den_.evaluate(t);
  if (d == 0) throw std::domain_error("rational function evaluated at a pole");
  return num_.evaluate(t) / d;
}

double RatFunc::evaluate(double t) const { return num_.evaluate(t) / den_.evaluate(t); }

std::string RatFunc::str(const std::string& var) const {
  if (den_ == UPoly::constant(1)) return num_.str(var);
  return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
}

}  // namespace tamelab
