#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamelab/formula.hpp"

namespace tamelab {

/// The value group Z^(d): rationals whose denominators are coprime to d.
/// For d = 1 this is all of Q.
struct VGModel {
  std::int64_t d = 1;

  /// Size of G/nG, i.e. the largest divisor of n built from primes dividing d.
  std::int64_t quotient(std::int64_t n) const;
  bool contains(const Rational& r) const;
  /// Smallest prime coprime to d; its powers are legal denominators.
  std::int64_t free_prime() const;
};

class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns a formula without x that is equivalent to (exists x:VG) body over Z^(d).
/// body may contain RF and VGQ quantifiers but no VG or VF quantifiers.
FormulaPtr eliminate_one(const FormulaPtr& body, const std::string& x, const VGModel& model);

/// Removes every VG quantifier, innermost first. Input without VG quantifiers
/// is returned unchanged.
FormulaPtr eliminate_all(const FormulaPtr& f, const VGModel& model);

struct CheckOptions {
  std::int64_t bound = 20;           // |numerator| and denominator bound of the grid
  std::vector<std::int64_t> primes;  // allowed denominator primes; empty means model.free_prime()
  std::size_t max_disagreements = 1;
};

struct CheckReport {
  bool agree = true;
  std::size_t assignments = 0;
  std::size_t disagreements = 0;
  std::int64_t widening = 0;
  std::vector<std::pair<std::string, std::string>> counterexample;  // variable, value
  bool lhs_value = false, rhs_value = false;

  nlohmann::json to_json() const;
};

/// Bounded-model oracle: evaluates f and g on every assignment of the free
/// variables drawn from the grid {a/b : |a| <= B, b <= B a product of allowed
/// primes} (quotient variables range over G/nG). VG quantifiers are decided
/// exactly by testing one representative per sign cell and coset.
CheckReport bounded_check(const FormulaPtr& f, const FormulaPtr& g, const VGModel& model,
                          const CheckOptions& options = {});

/// Truth value of a VG/VGQ formula in Z^(d) under a concrete assignment.
/// VG values are rationals, VGQ values residues.
bool evaluate_vg(const FormulaPtr& f, const VGModel& model,
                 const std::map<std::string, Rational>& vg_values,
                 const std::map<std::string, std::int64_t>& quotient_values = {});

struct RandomFormulaOptions {
  int max_quantifiers = 3;         // VG quantifiers
  int max_free = 2;                // free VG variables y1, y2, ...
  std::int64_t max_coefficient = 5;
  std::vector<std::int64_t> moduli{2, 3, 4, 6};
  int max_atoms = 4;
};

/// Random VG/VGQ formula in the Presburger-like fragment handled by eliminate_all.
FormulaPtr random_vg_formula(std::mt19937_64& rng, const RandomFormulaOptions& options = {});

}  // namespace tamelab
