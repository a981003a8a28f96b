#include <cmath>
#include <stdexcept>

#include "tamelab/zeta.hpp"
#include "zeta_internal.hpp"

namespace tamelab {

bool NumericBracket::contains(double v, double slack) const {
  double tol = slack * std::max(1.0, std::abs(v));
  return v >= lower - tol && v <= upper + tol;
}

namespace {

struct Box {
  Polynomial f;
  std::optional<Polynomial> g, h;
  double factor;  // volume times the extracted p-powers
};

class NumericWalker {
 public:
  NumericWalker(std::int64_t p, double s, int depth, std::size_t n) : p_(p), s_(s), depth_(depth), n_(n) {
    pn_ = std::pow(static_cast<double>(p), static_cast<double>(n));
    t_ = std::pow(static_cast<double>(p), -s);
  }

  void walk(Box b, int level) {
    ++out.boxes;
    int kf = detail::strip_content(b.f, p_);
    b.factor *= std::pow(t_, kf);
    for (auto* q : {&b.g, &b.h})
      if (*q) b.factor *= std::pow(static_cast<double>(p_), -detail::strip_content(**q, p_));
    bool others_unit = true;
    for (auto* q : {&b.g, &b.h})
      if (*q && detail::reduction_info(**q, p_).has_zero) others_unit = false;
    if (others_unit) {
      if (auto v = closed(b.f)) {
        out.lower += b.factor * *v;
        out.upper += b.factor * *v;
        return;
      }
    }
    if (level == depth_) {
      out.upper += b.factor;
      return;
    }
    std::vector<std::int64_t> c(n_, 0);
    double child = b.factor / pn_;
    while (true) {
      Box nb{b.f, b.g, b.h, child};
      for (std::size_t i = 0; i < n_; ++i) {
        nb.f = detail::shift(nb.f, i, c[i], p_);
        if (nb.g) nb.g = detail::shift(*nb.g, i, c[i], p_);
        if (nb.h) nb.h = detail::shift(*nb.h, i, c[i], p_);
      }
      walk(std::move(nb), level + 1);
      std::size_t k = 0;
      while (k < n_ && ++c[k] == p_) c[k++] = 0;
      if (k == n_) break;
    }
  }

  NumericBracket out;

 private:
  std::int64_t p_;
  double s_;
  int depth_;
  std::size_t n_;
  double pn_, t_;

  // Value of the integral of |f|^s over O^n when f is a unit, a monomial times
  // a unit, or has only smooth zeros mod p.
  std::optional<double> closed(const Polynomial& f) const {
    auto info = detail::reduction_info(f, p_);
    if (!info.has_zero) return 1.0;
    double p = static_cast<double>(p_);
    Exponents alpha(n_, std::numeric_limits<int>::max());
    for (const auto& [e, c] : f.terms())
      for (std::size_t i = 0; i < n_; ++i) alpha[i] = std::min(alpha[i], e[i]);
    bool monomial = false;
    for (int a : alpha) monomial = monomial || a > 0;
    if (monomial) {
      Polynomial u(n_);
      for (const auto& [e, c] : f.terms()) {
        Exponents e2 = e;
        for (std::size_t i = 0; i < n_; ++i) e2[i] -= alpha[i];
        u = u + Polynomial::constant(n_, c) * monomial_of(e2);
      }
      if (!detail::reduction_info(u, p_).has_zero) {
        double v = 1;
        for (int a : alpha) v *= (1 - 1 / p) / (1 - std::pow(p, -1 - a * s_));
        return v;
      }
    }
    if (info.smooth) {
      double z = t_ / p;
      double N = static_cast<double>(info.zeros);
      return ((pn_ - N) + N * (p - 1) * z / (1 - z)) / pn_;
    }
    return std::nullopt;
  }

  Polynomial monomial_of(const Exponents& e) const {
    Polynomial m = Polynomial::constant(n_, 1);
    for (std::size_t i = 0; i < n_; ++i)
      if (e[i] > 0) m = m * Polynomial::variable(n_, i).pow(static_cast<unsigned>(e[i]));
    return m;
  }
};

}  // namespace

NumericBracket igusa_numeric(const IntegralSpec& spec, std::int64_t p, double s, int depth) {
  spec.validate();
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (!(s > 0)) throw std::invalid_argument("igusa_numeric needs s > 0");
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (!spec.weights.empty()) throw std::invalid_argument("igusa_numeric does not support ord weights");
  if (spec.constraint) throw std::invalid_argument("igusa_numeric does not support constraints");
  if (spec.f.is_zero() || (spec.g && spec.g->is_zero()) || (spec.h && spec.h->is_zero())) return {};
  Box root{spec.f, spec.g, spec.h, 1.0};
  for (std::size_t i = 0; i < spec.n(); ++i) {
    if (!spec.domain[i]) continue;
    root.f = detail::shift(root.f, i, *spec.domain[i], p);
    if (root.g) root.g = detail::shift(*root.g, i, *spec.domain[i], p);
    if (root.h) root.h = detail::shift(*root.h, i, *spec.domain[i], p);
    root.factor /= static_cast<double>(p);
  }
  if (root.f.content_valuation(p) < 0) throw std::invalid_argument("f must have p-integral coefficients");
  NumericWalker walker(p, s, depth, spec.n());
  walker.walk(std::move(root), 0);
  return walker.out;
}

}  // namespace tamelab
