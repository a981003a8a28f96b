#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamelab/formula.hpp"

namespace tamelab {

/// ord f_i < ord f_j (ord(0) = +infinity) as a residue-field condition:
///   ac(f_i) != 0 & ac(f_i + f_j) = ac(f_i + 2 f_j) & ac(f_i + 2 f_j) = ac(f_i + 3 f_j).
/// Valid when the residue characteristic is 0 or > 3; pass the characteristic
/// (0 when unknown or zero) to have smaller ones refused with std::domain_error.
FormulaPtr rewrite_ord_lt(const TermPtr& fi, const TermPtr& fj, std::int64_t residue_characteristic = 0);
FormulaPtr rewrite_ord_le(const TermPtr& fi, const TermPtr& fj, std::int64_t residue_characteristic = 0);
FormulaPtr rewrite_ord_eq(const TermPtr& fi, const TermPtr& fj, std::int64_t residue_characteristic = 0);

struct TameOptions {
  /// The value group is treated as Z^(d); quotient conditions are exact on
  /// Q_p only for moduli dividing a power of d.
  std::int64_t d = 6;
};

/// Tame formula equivalent to f. f must have no VF quantifiers and no free VG
/// variables (std::invalid_argument otherwise). Tame input is returned as is.
FormulaPtr to_tame(const FormulaPtr& f, const TameOptions& options = {});

/// Product of the distinct n occurring in ord_n, pi_n, pi_{n,m} or VGQ(n); 1 if none.
std::int64_t compute_d0(const FormulaPtr& f);

struct RewriteCheck {
  std::int64_t p = 0;
  std::size_t samples = 0;  // per relation
  std::size_t disagreements = 0;
  std::map<std::string, std::size_t> by_kind;  // sample-kind counts
  std::vector<std::string> examples;
  nlohmann::json to_json() const;
};

/// Compares rewrite_ord_{lt,le,eq} evaluated in Q_p with direct comparison of
/// valuations on random pairs, including equal-order, cancellation and zero pairs.
RewriteCheck check_ord_rewrites(std::int64_t p, std::size_t samples, std::uint64_t seed);

}  // namespace tamelab
