#pragma once

#include <cstdint>
#include <vector>

#include "tamelab/polynomial.hpp"

namespace tamelab::detail {

// Zeros of the reduction mod p of a p-integral polynomial, counted in F_p^n.
struct ReductionInfo {
  bool constant = false;  // reduction is a nonzero constant
  bool has_zero = false;
  bool smooth = true;     // every zero has a nonvanishing partial derivative
  std::int64_t zeros = 0;
  std::vector<std::size_t> vars;  // variables occurring in the reduction
};

ReductionInfo reduction_info(const Polynomial& f, std::int64_t p);

// p^-k f with k the content valuation; returns k.
int strip_content(Polynomial& f, std::int64_t p);

// Divides by the unit part of the leading coefficient, so |f| is unchanged.
void unit_normalize(Polynomial& f, std::int64_t p);

// x_i -> c + p x_i
Polynomial shift(const Polynomial& f, std::size_t i, std::int64_t c, std::int64_t p);

}  // namespace tamelab::detail
