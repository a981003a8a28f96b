#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tamelab/numeric.hpp"

namespace tamelab {

/// ord(0) under the +infinity convention.
inline constexpr std::int64_t kOrdInfinity = std::numeric_limits<std::int64_t>::max();

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldDesc {
  enum class Kind { PAdic, Laurent };
  Kind kind = Kind::PAdic;
  std::int64_t p = 5;
  int f = 1;           // residue degree; always 1 for Q_p
  int precision = 20;  // significant digits kept by inexact results

  static FieldDesc padic(std::int64_t p, int precision = 20);
  static FieldDesc laurent(std::int64_t p, int precision = 20, int f = 1);

  std::int64_t q() const;
  /// Throws std::invalid_argument when the invariants fail.
  void validate() const;
  std::string str() const;

  friend bool operator==(const FieldDesc&, const FieldDesc&) = default;
};

/// Element of F_q encoded as an integer in [0, q). For q = p^f with f > 1 the
/// code is the base-p digit string of a polynomial modulo a fixed irreducible.
using ResidueElem = std::int64_t;

class ResidueField {
 public:
  ResidueField(std::int64_t p, int f = 1);
  explicit ResidueField(const FieldDesc& desc) : ResidueField(desc.p, desc.f) {}

  std::int64_t p() const { return p_; }
  int degree() const { return f_; }
  std::int64_t size() const { return q_; }

  ResidueElem from_int(std::int64_t n) const;
  ResidueElem add(ResidueElem a, ResidueElem b) const;
  ResidueElem sub(ResidueElem a, ResidueElem b) const;
  ResidueElem neg(ResidueElem a) const;
  ResidueElem mul(ResidueElem a, ResidueElem b) const;
  ResidueElem inv(ResidueElem a) const;
  ResidueElem pow(ResidueElem a, std::int64_t e) const;
  /// A generator of the multiplicative group.
  ResidueElem primitive() const { return primitive_; }
  std::string str(ResidueElem a) const;

 private:
  std::int64_t p_;
  int f_;
  std::int64_t q_;
  std::vector<std::int64_t> modulus_;  // monic irreducible, low degree first (f > 1)
  std::vector<std::int64_t> exp_, log_;
  ResidueElem primitive_ = 1;

  ResidueElem poly_mul(ResidueElem a, ResidueElem b) const;
};

/// Shared residue field of a FieldDesc (tables built once per (p, f)).
const ResidueField& residue_field(const FieldDesc& desc);

/// Element of Q_p or F_q((t)).
///
/// Exact p-adic elements are rationals p^v * a/b with p not dividing ab.
/// Exact Laurent elements are finite sums t^v * (c0 + c1 t + ...).
/// Inexact elements are known modulo p^(v + r) (resp. t^(v + r)) where r is
/// the relative precision; the stored unit then has exactly r digits.
class Elem {
 public:
  Elem() = default;

  static Elem zero(const FieldDesc& desc);
  static Elem from_int(const FieldDesc& desc, std::int64_t n);
  /// For Laurent fields the rational must be p-integral and is mapped into F_p.
  static Elem from_rational(const FieldDesc& desc, const Rational& r);
  /// t^v * (sum of digits[i] * t^i), or the p-adic analogue with carries.
  static Elem from_digits(const FieldDesc& desc, std::int64_t v,
                          const std::vector<ResidueElem>& digits, bool exact = true);
  /// The uniformizer p (resp. t).
  static Elem uniformizer(const FieldDesc& desc);

  const FieldDesc& field() const { return desc_; }
  bool is_zero() const { return zero_; }
  bool is_exact() const { return exact_; }
  /// Number of certified unit digits; max() for exact elements.
  std::int64_t relative_precision() const;
  /// Exponent N such that the element is known modulo p^N; kOrdInfinity when exact.
  std::int64_t absolute_precision() const;

  std::int64_t ord() const { return zero_ ? kOrdInfinity : v_; }
  ResidueElem ac() const;
  /// The first k unit digits u0..u_{k-1}; throws PrecisionError if not certified.
  std::vector<ResidueElem> digits(int k) const;
  /// Exact rational value; only for exact p-adic elements.
  const Rational& rational() const;

  /// Same element with relative precision reduced to r digits (inexact).
  Elem truncated(std::int64_t r) const;

  friend Elem operator+(const Elem& a, const Elem& b);
  friend Elem operator-(const Elem& a, const Elem& b);
  friend Elem operator*(const Elem& a, const Elem& b);
  friend Elem operator/(const Elem& a, const Elem& b);
  Elem operator-() const;
  Elem inv() const;
  Elem pow(std::int64_t e) const;

  /// Certified equality: true/false when decidable, PrecisionError otherwise.
  bool equals(const Elem& other) const;
  /// Equality modulo the smaller absolute precision of the two operands.
  bool congruent(const Elem& other) const;

  std::string str() const;

 private:
  FieldDesc desc_;
  bool zero_ = true;
  bool exact_ = true;
  std::int64_t v_ = 0;
  std::int64_t r_ = 0;              // relative precision of inexact elements
  Rational exact_unit_;             // exact p-adic: p-free rational
  BigInt unit_;                     // inexact p-adic: unit modulo p^r, in [0, p^r)
  std::vector<ResidueElem> coeffs_; // Laurent unit coefficients, coeffs_[0] != 0

  friend class ElemOps;
};

/// Uniform valuation in [vmin, vmax], uniform nonzero leading digit, uniform
/// remaining digits (desc.precision digits in total). Exact element.
Elem sample(const FieldDesc& desc, std::int64_t vmin, std::int64_t vmax, std::mt19937_64& rng);

/// Reads "0", "p^v * (d0 + d1*p + d2*p^2 + O(p^r))" and the t-analogue.
/// The O-term makes the element inexact with absolute precision v + r.
Elem parse_elem(const FieldDesc& desc, const std::string& text);

}  // namespace tamelab
