#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "tamelab/formula.hpp"
#include "tamelab/local_field.hpp"
#include "tamelab/numeric.hpp"

namespace tamelab {

using Exponents = std::vector<int>;

/// Multivariate polynomial over Q in a fixed number of variables x0..x_{n-1}.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : n_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  std::size_t nvars() const { return n_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational coefficient(const Exponents& e) const;
  int total_degree() const;
  int degree_in(std::size_t i) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(unsigned k) const;
  Polynomial derivative(std::size_t i) const;

  /// x_i -> c + scale * x_i.
  Polynomial substitute_affine(std::size_t i, const Rational& c, const Rational& scale) const;

  Rational evaluate(const std::vector<Rational>& x) const;
  Elem evaluate(const std::vector<Elem>& x, const FieldDesc& field) const;

  /// Minimum p-adic valuation of the coefficients (the zero polynomial is rejected).
  int content_valuation(std::int64_t p) const;
  /// Coefficients reduced mod p; requires p-integral coefficients. Zero terms dropped.
  std::map<Exponents, std::int64_t> reduce(std::int64_t p) const;

  std::string str(const std::vector<std::string>& names = {}) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    return std::tie(a.n_, a.terms_) < std::tie(b.n_, b.terms_);
  }

 private:
  std::size_t n_ = 0;
  std::map<Exponents, Rational> terms_;  // no zero coefficients

  void add_term(const Exponents& e, const Rational& c);
};

/// Reduction of a polynomial modulo p, as produced by Polynomial::reduce.
using ReducedPoly = std::map<Exponents, std::int64_t>;

std::int64_t evaluate_mod(const ReducedPoly& f, const std::vector<std::int64_t>& x, std::int64_t p);

/// Converts a VF term into a polynomial over the given variable names.
/// Throws std::invalid_argument on non-polynomial terms or unknown variables.
Polynomial to_polynomial(const TermPtr& t, const std::vector<std::string>& vars);

struct ParsedPolynomial {
  Polynomial poly;
  std::vector<std::string> vars;  // sorted variable names
};

/// Parses polynomial text such as "x^2 - y^3"; variables are ordered
/// alphabetically unless an explicit order is given.
ParsedPolynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars = {});

}  // namespace tamelab
