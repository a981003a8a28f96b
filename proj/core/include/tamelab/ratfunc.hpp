#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamelab/numeric.hpp"

namespace tamelab {

/// Univariate polynomial over Q in T; c[i] is the coefficient of T^i.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly constant(const Rational& c);
  static UPoly monomial(const Rational& c, int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  Rational coeff(int i) const;
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  /// Largest k with T^k dividing the polynomial (0 for the zero polynomial).
  int low_degree() const;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly operator-() const;
  UPoly scaled(const Rational& k) const;
  UPoly shifted(int k) const;  // times T^k, k >= 0
  UPoly monic() const;

  Rational evaluate(const Rational& t) const;
  double evaluate(double t) const;

  std::string str(const std::string& var = "T") const;
  nlohmann::json to_json() const;  // coefficient strings, constant term first

  friend bool operator==(const UPoly&, const UPoly&) = default;

 private:
  std::vector<Rational> c_;
  void trim();
};

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);

/// Reduced fraction of polynomials in T with monic denominator.
class RatFunc {
 public:
  RatFunc() : num_(), den_(UPoly::constant(1)) {}
  RatFunc(const Rational& c) : num_(UPoly::constant(c)), den_(UPoly::constant(1)) {}  // NOLINT
  RatFunc(const UPoly& p) : num_(p), den_(UPoly::constant(1)) {}                        // NOLINT
  RatFunc(const UPoly& num, const UPoly& den);

  static RatFunc T(int k = 1) { return RatFunc(UPoly::monomial(1, k)); }

  const UPoly& num() const { return num_; }
  const UPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  Rational evaluate(const Rational& t) const;
  double evaluate(double t) const;
  std::string str(const std::string& var = "T") const;

  friend bool operator==(const RatFunc&, const RatFunc&) = default;

 private:
  UPoly num_, den_;
};

}  // namespace tamelab
