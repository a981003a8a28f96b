#include "tamelab/numeric.hpp"

#include <cstdlib>

namespace tamelab {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mod(const BigInt& a, std::int64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return std::llabs(a / gcd64(a, b) * b);
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  if (m == 1) return 0;
  __int128 result = 1;
  __int128 b = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, r = mod(a, m);
  while (r != 0) {
    std::int64_t q = g / r;
    std::int64_t t = g - q * r;
    g = r;
    r = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::domain_error("inv_mod: element is not invertible");
  return mod(x, m);
}

int valuation(BigInt a, std::int64_t p) {
  if (a == 0) throw std::domain_error("valuation of zero");
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

int valuation(const Rational& r, std::int64_t p) {
  return valuation(BigInt(numerator(r)), p) - valuation(BigInt(denominator(r)), p);
}

BigInt ipow(const BigInt& base, unsigned exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

Rational prime_power(std::int64_t p, int e) {
  BigInt pe = ipow(BigInt(p), static_cast<unsigned>(e < 0 ? -e : e));
  return e >= 0 ? Rational(pe) : Rational(BigInt(1), pe);
}

std::int64_t residue(const Rational& r, std::int64_t p) {
  std::int64_t n = mod(BigInt(numerator(r)), p);
  std::int64_t d = mod(BigInt(denominator(r)), p);
  if (d == 0) throw std::domain_error("residue: rational is not p-integral");
  return mod(n * inv_mod(d, p), p);
}

std::int64_t d_part(std::int64_t n, std::int64_t d) {
  n = std::llabs(n);
  if (n == 0) return 0;
  std::int64_t result = 1;
  for (std::int64_t q : prime_factors(d)) {
    while (n % q == 0) {
      n /= q;
      result *= q;
    }
  }
  return result;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  n = std::llabs(n);
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
}

}  // namespace tamelab
