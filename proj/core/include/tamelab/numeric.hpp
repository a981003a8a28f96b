#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tamelab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when a search or recursion exceeds its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_prime(std::int64_t n);

/// Non-negative remainder of a modulo m (m > 0).
std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t mod(const BigInt& a, std::int64_t m);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m);

/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

/// p-adic valuation of a nonzero integer.
int valuation(BigInt a, std::int64_t p);

/// p-adic valuation of a nonzero rational.
int valuation(const Rational& r, std::int64_t p);

BigInt ipow(const BigInt& base, unsigned exp);

/// Rational p^e for any integer e.
Rational prime_power(std::int64_t p, int e);

/// Residue of a p-integral rational modulo p.
std::int64_t residue(const Rational& r, std::int64_t p);

/// Largest divisor of n composed only of primes dividing d (the "d-part").
std::int64_t d_part(std::int64_t n, std::int64_t d);

std::vector<std::int64_t> prime_factors(std::int64_t n);

std::string to_string(const Rational& r);

/// Parses "a" or "a/b" (optionally signed).
Rational parse_rational(const std::string& text);

}  // namespace tamelab
