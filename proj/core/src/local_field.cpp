#include "tamelab/local_field.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace tamelab {

FieldDesc FieldDesc::padic(std::int64_t p, int precision) {
  FieldDesc d{Kind::PAdic, p, 1, precision};
  d.validate();
  return d;
}

FieldDesc FieldDesc::laurent(std::int64_t p, int precision, int f) {
  FieldDesc d{Kind::Laurent, p, f, precision};
  d.validate();
  return d;
}

std::int64_t FieldDesc::q() const {
  std::int64_t r = 1;
  for (int i = 0; i < f; ++i) r *= p;
  return r;
}

void FieldDesc::validate() const {
  if (!is_prime(p)) throw std::invalid_argument("field: p = " + std::to_string(p) + " is not prime");
  if (precision < 1) throw std::invalid_argument("field: precision must be >= 1");
  if (f < 1) throw std::invalid_argument("field: residue degree must be >= 1");
  if (kind == Kind::PAdic && f != 1) throw std::invalid_argument("field: Q_p has residue degree 1");
  if (q() > (1 << 20)) throw std::invalid_argument("field: residue field too large");
}

std::string FieldDesc::str() const {
  if (kind == Kind::PAdic) return "Q_" + std::to_string(p);
  std::string k = f == 1 ? std::to_string(p) : std::to_string(p) + "^" + std::to_string(f);
  return "F_" + k + "((t))";
}

// ---------------------------------------------------------------------------

ResidueField::ResidueField(std::int64_t p, int f) : p_(p), f_(f), q_(1) {
  if (!is_prime(p)) throw std::invalid_argument("residue field: p not prime");
  for (int i = 0; i < f; ++i) q_ *= p;
  if (f == 1) {
    // smallest primitive root
    auto factors = prime_factors(p - 1);
    for (std::int64_t g = 1; g < p; ++g) {
      bool ok = p == 2 || std::all_of(factors.begin(), factors.end(), [&](std::int64_t r) {
                  return pow_mod(g, (p - 1) / r, p) != 1;
                });
      if (ok) {
        primitive_ = g;
        break;
      }
    }
    return;
  }
  // Search x^f + ... with x primitive; the quotient ring is then a field.
  modulus_.assign(static_cast<std::size_t>(f) + 1, 0);
  modulus_[static_cast<std::size_t>(f)] = 1;
  for (std::int64_t code = 1; code < q_; ++code) {
    std::int64_t c = code;
    for (int i = 0; i < f; ++i) {
      modulus_[static_cast<std::size_t>(i)] = c % p;
      c /= p;
    }
    exp_.assign(static_cast<std::size_t>(q_ - 1), 0);
    ResidueElem x = p;  // the class of the polynomial variable
    ResidueElem cur = 1;
    std::int64_t n = 0;
    do {
      if (n >= q_ - 1) break;
      exp_[static_cast<std::size_t>(n++)] = cur;
      cur = poly_mul(cur, x);
    } while (cur != 1 && cur != 0);
    if (cur == 1 && n == q_ - 1) {
      log_.assign(static_cast<std::size_t>(q_), -1);
      for (std::int64_t i = 0; i < q_ - 1; ++i) log_[static_cast<std::size_t>(exp_[static_cast<std::size_t>(i)])] = i;
      primitive_ = x;
      return;
    }
  }
  throw std::logic_error("residue field: no primitive polynomial found");
}

ResidueElem ResidueField::poly_mul(ResidueElem a, ResidueElem b) const {
  std::vector<std::int64_t> x(static_cast<std::size_t>(f_)), y(static_cast<std::size_t>(f_));
  for (int i = 0; i < f_; ++i) {
    x[static_cast<std::size_t>(i)] = a % p_;
    a /= p_;
    y[static_cast<std::size_t>(i)] = b % p_;
    b /= p_;
  }
  std::vector<std::int64_t> z(static_cast<std::size_t>(2 * f_), 0);
  for (int i = 0; i < f_; ++i)
    for (int j = 0; j < f_; ++j)
      z[static_cast<std::size_t>(i + j)] =
          (z[static_cast<std::size_t>(i + j)] + x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)]) % p_;
  for (int k = 2 * f_ - 1; k >= f_; --k) {
    std::int64_t c = z[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    for (int i = 0; i <= f_; ++i)
      z[static_cast<std::size_t>(k - f_ + i)] =
          mod(z[static_cast<std::size_t>(k - f_ + i)] - c * modulus_[static_cast<std::size_t>(i)], p_);
  }
  ResidueElem r = 0;
  for (int i = f_ - 1; i >= 0; --i) r = r * p_ + z[static_cast<std::size_t>(i)];
  return r;
}

ResidueElem ResidueField::from_int(std::int64_t n) const { return mod(n, p_); }

ResidueElem ResidueField::add(ResidueElem a, ResidueElem b) const {
  if (f_ == 1) return (a + b) % p_;
  ResidueElem r = 0, scale = 1;
  for (int i = 0; i < f_; ++i) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

ResidueElem ResidueField::neg(ResidueElem a) const {
  if (f_ == 1) return (p_ - a) % p_;
  ResidueElem r = 0, scale = 1;
  for (int i = 0; i < f_; ++i) {
    r += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return r;
}

ResidueElem ResidueField::sub(ResidueElem a, ResidueElem b) const { return add(a, neg(b)); }

ResidueElem ResidueField::mul(ResidueElem a, ResidueElem b) const {
  if (f_ == 1) return static_cast<ResidueElem>(static_cast<__int128>(a) * b % p_);
  if (a == 0 || b == 0) return 0;
  std::int64_t l = (log_[static_cast<std::size_t>(a)] + log_[static_cast<std::size_t>(b)]) % (q_ - 1);
  return exp_[static_cast<std::size_t>(l)];
}

ResidueElem ResidueField::inv(ResidueElem a) const {
  if (a == 0) throw std::domain_error("residue field: inverse of zero");
  if (f_ == 1) return inv_mod(a, p_);
  std::int64_t l = (q_ - 1 - log_[static_cast<std::size_t>(a)]) % (q_ - 1);
  return exp_[static_cast<std::size_t>(l)];
}

ResidueElem ResidueField::pow(ResidueElem a, std::int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  if (f_ == 1) return pow_mod(a, e, p_);
  ResidueElem r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::string ResidueField::str(ResidueElem a) const { return std::to_string(a); }

const ResidueField& residue_field(const FieldDesc& desc) {
  static std::mutex lock;
  static std::map<std::pair<std::int64_t, int>, std::unique_ptr<ResidueField>> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto& slot = cache[{desc.p, desc.f}];
  if (!slot) slot = std::make_unique<ResidueField>(desc.p, desc.f);
  return *slot;
}

// ---------------------------------------------------------------------------

namespace {

BigInt power(std::int64_t p, std::int64_t e) { return ipow(BigInt(p), static_cast<unsigned>(e)); }

// a mod m for a p-integral rational, m a power of p.
BigInt rational_mod(const Rational& r, const BigInt& m) {
  BigInt num = numerator(r), den = denominator(r);
  BigInt n = num % m;
  if (n < 0) n += m;
  BigInt d = den % m;
  // extended Euclid on big integers
  BigInt g = m, x = 0, x1 = 1, rem = d;
  while (rem != 0) {
    BigInt q = g / rem;
    BigInt t = g - q * rem;
    g = rem;
    rem = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::domain_error("rational_mod: denominator not invertible");
  BigInt inv = x % m;
  if (inv < 0) inv += m;
  return n * inv % m;
}

BigInt big_inv_mod(const BigInt& a, const BigInt& m) { return rational_mod(Rational(1) / Rational(a), m); }

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;

}  // namespace

class ElemOps {
 public:
  static Elem make_zero(const FieldDesc& d) {
    Elem e;
    e.desc_ = d;
    return e;
  }

  static Elem exact_padic(const FieldDesc& d, const Rational& value) {
    if (value == 0) return make_zero(d);
    Elem e;
    e.desc_ = d;
    e.zero_ = false;
    e.exact_ = true;
    e.v_ = valuation(value, d.p);
    e.exact_unit_ = value / prime_power(d.p, static_cast<int>(e.v_));
    return e;
  }

  // Inexact p-adic element from an integer S known modulo p^n, at scale p^v.
  static Elem inexact_padic(const FieldDesc& d, std::int64_t v, BigInt s, std::int64_t n) {
    BigInt m = power(d.p, n);
    s %= m;
    if (s < 0) s += m;
    if (s == 0) throw PrecisionError("result indistinguishable from zero at the tracked precision");
    std::int64_t shift = 0;
    while (s % d.p == 0) {
      s /= d.p;
      ++shift;
    }
    Elem e;
    e.desc_ = d;
    e.zero_ = false;
    e.exact_ = false;
    e.v_ = v + shift;
    e.r_ = n - shift;
    e.unit_ = s % power(d.p, e.r_);
    return e;
  }

  // Unit of a nonzero p-adic element modulo p^k (k <= r for inexact elements).
  static BigInt unit_mod(const Elem& a, std::int64_t k) {
    BigInt m = power(a.desc_.p, k);
    if (a.exact_) return rational_mod(a.exact_unit_, m);
    return a.unit_ % m;
  }

  static Elem laurent(const FieldDesc& d, std::int64_t v, std::vector<ResidueElem> c, bool exact,
                      std::int64_t r) {
    std::size_t first = 0;
    while (first < c.size() && c[first] == 0) ++first;
    if (first == c.size()) {
      if (exact) return make_zero(d);
      throw PrecisionError("result indistinguishable from zero at the tracked precision");
    }
    Elem e;
    e.desc_ = d;
    e.zero_ = false;
    e.exact_ = exact;
    e.v_ = v + static_cast<std::int64_t>(first);
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(first));
    if (exact) {
      while (c.back() == 0) c.pop_back();
    } else {
      e.r_ = r - static_cast<std::int64_t>(first);
      c.resize(static_cast<std::size_t>(e.r_), 0);
    }
    e.coeffs_ = std::move(c);
    return e;
  }

  static std::int64_t rel(const Elem& a) { return a.exact_ ? kUnbounded : a.r_; }
  static std::int64_t absolute(const Elem& a) {
    if (a.zero_ || a.exact_) return kUnbounded;
    return a.v_ + a.r_;
  }

  static Elem add(const Elem& a, const Elem& b) {
    if (!(a.desc_ == b.desc_)) throw std::invalid_argument("elements of different fields");
    if (a.zero_) return b;
    if (b.zero_) return a;
    const FieldDesc& d = a.desc_;
    std::int64_t vmin = std::min(a.v_, b.v_);
    if (d.kind == FieldDesc::Kind::PAdic) {
      if (a.exact_ && b.exact_)
        return exact_padic(d, a.exact_unit_ * prime_power(d.p, static_cast<int>(a.v_)) +
                                  b.exact_unit_ * prime_power(d.p, static_cast<int>(b.v_)));
      std::int64_t n = std::min(absolute(a), absolute(b));
      auto part = [&](const Elem& x) {
        if (x.v_ >= n) return BigInt(0);
        return unit_mod(x, n - x.v_) * power(d.p, x.v_ - vmin);
      };
      return inexact_padic(d, vmin, part(a) + part(b), n - vmin);
    }
    const ResidueField& rf = residue_field(d);
    std::int64_t n = std::min(absolute(a), absolute(b));
    bool exact = a.exact_ && b.exact_;
    std::int64_t len = exact ? std::max(a.v_ + static_cast<std::int64_t>(a.coeffs_.size()),
                                        b.v_ + static_cast<std::int64_t>(b.coeffs_.size())) - vmin
                             : n - vmin;
    std::vector<ResidueElem> c(static_cast<std::size_t>(len), 0);
    for (const Elem* x : {&a, &b})
      for (std::size_t i = 0; i < x->coeffs_.size(); ++i) {
        std::int64_t k = x->v_ - vmin + static_cast<std::int64_t>(i);
        if (k < len) c[static_cast<std::size_t>(k)] = rf.add(c[static_cast<std::size_t>(k)], x->coeffs_[i]);
      }
    return laurent(d, vmin, std::move(c), exact, len);
  }

  static Elem neg(const Elem& a) {
    if (a.zero_) return a;
    Elem e = a;
    if (a.desc_.kind == FieldDesc::Kind::PAdic) {
      if (a.exact_) {
        e.exact_unit_ = -a.exact_unit_;
      } else {
        BigInt m = power(a.desc_.p, a.r_);
        e.unit_ = (m - a.unit_) % m;
      }
    } else {
      const ResidueField& rf = residue_field(a.desc_);
      for (auto& c : e.coeffs_) c = rf.neg(c);
    }
    return e;
  }

  static Elem mul(const Elem& a, const Elem& b) {
    if (!(a.desc_ == b.desc_)) throw std::invalid_argument("elements of different fields");
    const FieldDesc& d = a.desc_;
    if ((a.zero_ && a.exact_) || (b.zero_ && b.exact_)) return make_zero(d);
    std::int64_t v = a.v_ + b.v_;
    if (d.kind == FieldDesc::Kind::PAdic) {
      if (a.exact_ && b.exact_) {
        Elem e = a;
        e.v_ = v;
        e.exact_unit_ = a.exact_unit_ * b.exact_unit_;
        return e;
      }
      std::int64_t r = std::min(rel(a), rel(b));
      return inexact_padic(d, v, unit_mod(a, r) * unit_mod(b, r), r);
    }
    const ResidueField& rf = residue_field(d);
    bool exact = a.exact_ && b.exact_;
    std::int64_t len = exact ? static_cast<std::int64_t>(a.coeffs_.size() + b.coeffs_.size()) - 1
                             : std::min(rel(a), rel(b));
    std::vector<ResidueElem> c(static_cast<std::size_t>(len), 0);
    for (std::size_t i = 0; i < a.coeffs_.size() && static_cast<std::int64_t>(i) < len; ++i)
      for (std::size_t j = 0; j < b.coeffs_.size() && static_cast<std::int64_t>(i + j) < len; ++j)
        c[i + j] = rf.add(c[i + j], rf.mul(a.coeffs_[i], b.coeffs_[j]));
    return laurent(d, v, std::move(c), exact, len);
  }

  static Elem inv(const Elem& a) {
    if (a.zero_) throw std::domain_error("division by exact zero");
    const FieldDesc& d = a.desc_;
    if (d.kind == FieldDesc::Kind::PAdic) {
      if (a.exact_) {
        Elem e = a;
        e.v_ = -a.v_;
        e.exact_unit_ = 1 / a.exact_unit_;
        return e;
      }
      Elem e = a;
      e.v_ = -a.v_;
      e.unit_ = big_inv_mod(a.unit_, power(d.p, a.r_));
      return e;
    }
    const ResidueField& rf = residue_field(d);
    if (a.exact_ && a.coeffs_.size() == 1) {
      Elem e = a;
      e.v_ = -a.v_;
      e.coeffs_[0] = rf.inv(a.coeffs_[0]);
      return e;
    }
    std::int64_t r = a.exact_ ? d.precision : a.r_;
    std::vector<ResidueElem> c(static_cast<std::size_t>(r), 0);
    ResidueElem i0 = rf.inv(a.coeffs_[0]);
    c[0] = i0;
    for (std::int64_t k = 1; k < r; ++k) {
      ResidueElem s = 0;
      for (std::int64_t j = 1; j <= k && j < static_cast<std::int64_t>(a.coeffs_.size()); ++j)
        s = rf.add(s, rf.mul(a.coeffs_[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(k - j)]));
      c[static_cast<std::size_t>(k)] = rf.neg(rf.mul(s, i0));
    }
    return laurent(d, -a.v_, std::move(c), false, r);
  }
};

Elem Elem::zero(const FieldDesc& desc) { return ElemOps::make_zero(desc); }

Elem Elem::from_int(const FieldDesc& desc, std::int64_t n) { return from_rational(desc, Rational(n)); }

Elem Elem::from_rational(const FieldDesc& desc, const Rational& r) {
  if (desc.kind == FieldDesc::Kind::PAdic) return ElemOps::exact_padic(desc, r);
  if (r == 0) return zero(desc);
  if (mod(BigInt(denominator(r)), desc.p) == 0)
    throw std::domain_error("rational " + to_string(r) + " has no image in characteristic " +
                            std::to_string(desc.p));
  ResidueElem c = residue(r, desc.p);
  return ElemOps::laurent(desc, 0, {c}, true, 1);
}

Elem Elem::from_digits(const FieldDesc& desc, std::int64_t v, const std::vector<ResidueElem>& digits,
                       bool exact) {
  for (ResidueElem x : digits)
    if (x < 0 || x >= desc.q()) throw std::invalid_argument("digit out of range");
  if (desc.kind == FieldDesc::Kind::Laurent) {
    if (!exact && digits.empty()) throw PrecisionError("no certified digits");
    return ElemOps::laurent(desc, v, digits, exact, static_cast<std::int64_t>(digits.size()));
  }
  BigInt u = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) u = u * desc.p + *it;
  if (exact) return ElemOps::exact_padic(desc, Rational(u) * prime_power(desc.p, static_cast<int>(v)));
  return ElemOps::inexact_padic(desc, v, u, static_cast<std::int64_t>(digits.size()));
}

Elem Elem::uniformizer(const FieldDesc& desc) { return from_digits(desc, 1, {1}); }

std::int64_t Elem::relative_precision() const {
  return exact_ ? std::numeric_limits<std::int64_t>::max() : r_;
}

std::int64_t Elem::absolute_precision() const {
  return (exact_ || zero_) ? kOrdInfinity : v_ + r_;
}

ResidueElem Elem::ac() const {
  if (zero_) return 0;
  if (desc_.kind == FieldDesc::Kind::Laurent) return coeffs_[0];
  return static_cast<ResidueElem>(ElemOps::unit_mod(*this, 1));
}

std::vector<ResidueElem> Elem::digits(int k) const {
  if (zero_) throw std::domain_error("zero has no unit digits");
  if (!exact_ && k > r_) throw PrecisionError("only " + std::to_string(r_) + " digits are certified");
  std::vector<ResidueElem> out(static_cast<std::size_t>(k), 0);
  if (desc_.kind == FieldDesc::Kind::Laurent) {
    for (std::size_t i = 0; i < out.size() && i < coeffs_.size(); ++i) out[i] = coeffs_[i];
    return out;
  }
  BigInt u = ElemOps::unit_mod(*this, k);
  for (auto& x : out) {
    x = static_cast<ResidueElem>(u % desc_.p);
    u /= desc_.p;
  }
  return out;
}

const Rational& Elem::rational() const {
  if (!exact_ || desc_.kind != FieldDesc::Kind::PAdic)
    throw std::logic_error("rational(): element is not an exact p-adic number");
  static const Rational kZero = 0;
  return zero_ ? kZero : exact_unit_;
}

Elem Elem::truncated(std::int64_t r) const {
  if (zero_) throw PrecisionError("cannot truncate zero");
  if (r < 1) throw std::invalid_argument("truncated: r must be >= 1");
  if (!exact_ && r >= r_) return *this;
  return from_digits(desc_, v_, digits(static_cast<int>(r)), false);
}

Elem operator+(const Elem& a, const Elem& b) { return ElemOps::add(a, b); }
Elem operator-(const Elem& a, const Elem& b) { return ElemOps::add(a, ElemOps::neg(b)); }
Elem operator*(const Elem& a, const Elem& b) { return ElemOps::mul(a, b); }
Elem operator/(const Elem& a, const Elem& b) { return ElemOps::mul(a, ElemOps::inv(b)); }
Elem Elem::operator-() const { return ElemOps::neg(*this); }
Elem Elem::inv() const { return ElemOps::inv(*this); }

Elem Elem::pow(std::int64_t e) const {
  if (e < 0) return inv().pow(-e);
  Elem result = from_int(desc_, 1), base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool Elem::equals(const Elem& other) const { return (*this - other).is_zero(); }

bool Elem::congruent(const Elem& other) const {
  try {
    return (*this - other).is_zero();
  } catch (const PrecisionError&) {
    return true;
  }
}

std::string Elem::str() const {
  if (zero_) return "0";
  const char* u = desc_.kind == FieldDesc::Kind::PAdic ? "p" : "t";
  std::ostringstream os;
  os << u << "^" << v_ << " * (";
  if (exact_ && desc_.kind == FieldDesc::Kind::PAdic &&
      (denominator(exact_unit_) != 1 || exact_unit_ < 0)) {
    os << to_string(exact_unit_) << ")";
    return os.str();
  }
  std::vector<ResidueElem> ds;
  if (exact_) {
    if (desc_.kind == FieldDesc::Kind::Laurent) {
      ds = coeffs_;
    } else {
      BigInt n = numerator(exact_unit_);
      while (n > 0) {
        ds.push_back(static_cast<ResidueElem>(n % desc_.p));
        n /= desc_.p;
      }
    }
  } else {
    ds = digits(static_cast<int>(r_));
  }
  bool first = true;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << ds[i];
    if (i == 1) os << "*" << u;
    if (i > 1) os << "*" << u << "^" << i;
  }
  if (!exact_) os << " + O(" << u << "^" << r_ << ")";
  os << ")";
  return os.str();
}

Elem sample(const FieldDesc& desc, std::int64_t vmin, std::int64_t vmax, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> val(vmin, vmax);
  std::uniform_int_distribution<ResidueElem> lead(1, desc.q() - 1), digit(0, desc.q() - 1);
  std::int64_t v = val(rng);
  std::vector<ResidueElem> ds(static_cast<std::size_t>(desc.precision));
  ds[0] = lead(rng);
  for (std::size_t i = 1; i < ds.size(); ++i) ds[i] = digit(rng);
  return Elem::from_digits(desc, v, ds, true);
}

namespace {

class ElemParser {
 public:
  ElemParser(const FieldDesc& d, const std::string& text) : d_(d) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
    sym_ = d.kind == FieldDesc::Kind::PAdic ? 'p' : 't';
  }

  Elem run() {
    if (s_ == "0") return Elem::zero(d_);
    std::int64_t v = 0;
    if (peek() == sym_) {
      ++i_;
      expect('^');
      v = integer();
      expect('*');
    }
    expect('(');
    Elem e = body(v);
    expect(')');
    if (i_ != s_.size()) fail("trailing characters");
    return e;
  }

 private:
  const FieldDesc& d_;
  std::string s_;
  std::size_t i_ = 0;
  char sym_;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("element literal, position " + std::to_string(i_) + ": " + msg);
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  std::int64_t integer() {
    std::size_t start = i_;
    if (peek() == '-') ++i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    if (i_ == start || (i_ == start + 1 && s_[start] == '-')) fail("expected integer");
    return std::stoll(s_.substr(start, i_ - start));
  }
  std::int64_t exponent() {
    if (peek() != sym_) fail("expected uniformizer symbol");
    ++i_;
    if (peek() != '^') return 1;
    ++i_;
    return integer();
  }

  Elem body(std::int64_t v) {
    std::size_t close = s_.find(')', i_);
    std::string inner = close == std::string::npos ? "" : s_.substr(i_, close - i_);
    if (d_.kind == FieldDesc::Kind::PAdic && inner.find('p') == std::string::npos &&
        inner.find('O') == std::string::npos) {
      i_ = close;
      Rational r = parse_rational(inner);
      return Elem::from_rational(d_, r * prime_power(d_.p, static_cast<int>(v)));
    }
    std::vector<ResidueElem> digits;
    std::int64_t rel = -1;
    while (true) {
      if (peek() == 'O') {
        ++i_;
        expect('(');
        rel = exponent();
        expect(')');
      } else {
        std::int64_t c = 1, k = 0;
        if (peek() == sym_) {
          k = exponent();
        } else {
          c = integer();
          if (peek() == '*') {
            ++i_;
            k = exponent();
          }
        }
        if (k < 0 || c < 0 || c >= d_.q()) fail("digit out of range");
        if (static_cast<std::size_t>(k) >= digits.size()) digits.resize(static_cast<std::size_t>(k) + 1, 0);
        if (digits[static_cast<std::size_t>(k)] != 0) fail("repeated power");
        digits[static_cast<std::size_t>(k)] = c;
      }
      if (peek() != '+') break;
      ++i_;
    }
    if (rel < 0) return Elem::from_digits(d_, v, digits, true);
    if (static_cast<std::int64_t>(digits.size()) > rel) fail("digit beyond the O-term");
    digits.resize(static_cast<std::size_t>(rel), 0);
    return Elem::from_digits(d_, v, digits, false);
  }
};

}  // namespace

Elem parse_elem(const FieldDesc& desc, const std::string& text) { return ElemParser(desc, text).run(); }

}  // namespace tamelab
