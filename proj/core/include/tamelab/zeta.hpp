#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamelab/formula.hpp"
#include "tamelab/polynomial.hpp"
#include "tamelab/ratfunc.hpp"

namespace tamelab {

/// Factor 1 - L^a T^b of a normalized denominator (b > 0).
struct DenominatorFactor {
  int a = 0;
  int b = 1;
  friend auto operator<=>(const DenominatorFactor&, const DenominatorFactor&) = default;
};

/// N(L, T) / (T^a prod (1 - L^{a_i} T^{b_i})). Per-prime values keep L = p
/// specialized: their numerator only uses L^0 and prime is set.
struct TwoVarRational {
  std::optional<std::int64_t> prime;
  std::map<std::pair<int, int>, Rational> numerator;  // (i, j) -> coefficient of L^i T^j
  int t_power = 0;
  std::vector<DenominatorFactor> factors;  // sorted
  /// False when the denominator has no product form with small exponents;
  /// raw_denominator then holds it (constant term 1 after removing T^t_power).
  bool normal = true;
  UPoly raw_denominator;

  static TwoVarRational from_ratfunc(const RatFunc& r, std::int64_t p);
  RatFunc to_ratfunc() const;  // needs prime
  int numerator_degree() const;
  int denominator_degree() const;
  double evaluate(double t) const;
  std::string str() const;
  nlohmann::json to_json() const;
};

/// deg_T numerator <= deg_T denominator.
bool check_degree(const TwoVarRational& r);

struct UniformFit {
  bool ok = false;
  int a = 0;
  std::vector<DenominatorFactor> factors;
  std::string message;
  nlohmann::json to_json() const;
};

/// Common T^a prod (1 - L^{a_i} T^{b_i}) that each per-prime denominator divides
/// after specializing L = p. Needs results for at least three primes.
UniformFit fit_uniform_denominator(const std::vector<TwoVarRational>& results);

/// Integral over W of |g| |h| |f|^s prod_j ord(w_j), T = p^-s, normalized Haar measure.
struct IntegralSpec {
  std::vector<std::string> vars;
  Polynomial f;
  std::optional<Polynomial> g;
  std::optional<Polynomial> h;  // density of the volume form
  std::vector<Polynomial> weights;  // at most two
  /// Per coordinate: nullopt for the valuation ring, a for a + pO.
  std::vector<std::optional<std::int64_t>> domain;
  /// Tame constraint on the integration domain (ac, ord_n, VF equalities,
  /// RF and VGQ quantifiers); null for none.
  FormulaPtr constraint;

  void validate() const;
  std::size_t n() const { return vars.size(); }

  /// f given as text; domain like "O,O" or "O,1+pO" (also "pO"); empty means all O.
  static IntegralSpec from_text(const std::string& f, const std::string& domain = "");
};

/// Parses "O", "pO" or "a+pO" (a an integer) per comma-separated coordinate.
std::vector<std::optional<std::int64_t>> parse_domain(const std::string& text, std::size_t n);

struct ZetaOptions {
  int max_depth = 30;
  std::size_t max_states = 100000;
};

struct ZetaStats {
  std::size_t states = 0;
  int max_depth = 0;
  std::size_t largest_cycle = 0;
};

/// Exact value as a rational function of T = p^-s. Throws BudgetExceeded when the
/// recursion does not close within the limits.
RatFunc igusa_ratfunc(const IntegralSpec& spec, std::int64_t p, const ZetaOptions& options = {},
                      ZetaStats* stats = nullptr);
TwoVarRational igusa_exact(const IntegralSpec& spec, std::int64_t p, const ZetaOptions& options = {},
                           ZetaStats* stats = nullptr);

/// The integral restricted to the set defined by a tame formula in spec.vars.
TwoVarRational orbital_integral(const IntegralSpec& spec, const FormulaPtr& orbit, std::int64_t p,
                                const ZetaOptions& options = {});

struct NumericBracket {
  double lower = 0;
  double upper = 0;
  std::size_t boxes = 0;
  double estimate() const { return (lower + upper) / 2; }
  double width() const { return upper - lower; }
  bool contains(double v, double slack = 1e-12) const;
};

/// Exact box sum to the given depth with each unresolved box bounded by [0, its maximal
/// contribution]. Weights and constraints are not supported (std::invalid_argument).
NumericBracket igusa_numeric(const IntegralSpec& spec, std::int64_t p, double s, int depth);

}  // namespace tamelab
