#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamelab/numeric.hpp"

namespace tamelab {

enum class SortKind { VF, RF, VG, VGQ };

struct Sort {
  SortKind kind = SortKind::VF;
  std::int64_t n = 0;  // modulus, only for VGQ

  static Sort vf() { return {SortKind::VF, 0}; }
  static Sort rf() { return {SortKind::RF, 0}; }
  static Sort vg() { return {SortKind::VG, 0}; }
  static Sort vgq(std::int64_t n);

  bool is_group() const { return kind == SortKind::VG || kind == SortKind::VGQ; }
  bool is_ring() const { return kind == SortKind::VF || kind == SortKind::RF; }
  std::string str() const;

  friend bool operator==(const Sort& a, const Sort& b) { return a.kind == b.kind && a.n == b.n; }
  friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }
  friend bool operator<(const Sort& a, const Sort& b) {
    return std::pair(static_cast<int>(a.kind), a.n) < std::pair(static_cast<int>(b.kind), b.n);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TermKind { Var, Lit, Add, Sub, Neg, Mul, Scale, Pow, Ord, Ac, OrdN, Pi, PiNM };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  Sort sort;
  std::string name;        // Var
  Rational value;          // Lit
  std::int64_t k = 0;      // Scale factor, Pow exponent
  std::int64_t n = 0;      // OrdN, Pi, PiNM source modulus
  std::int64_t m = 0;      // PiNM target modulus
  std::vector<TermPtr> args;
};

enum class FormulaKind { True, False, Eq, Le, Not, And, Or, Implies, Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  TermPtr lhs, rhs;              // Eq, Le
  std::vector<FormulaPtr> subs;  // Not (1), And/Or/Implies (2), quantifiers (1)
  std::string var;               // quantifiers
  Sort var_sort;                 // quantifiers
};

// Term builders. All of them check sorts and throw SortError on misuse.
TermPtr var(const std::string& name, Sort sort);
TermPtr lit(const Rational& value, Sort sort = Sort::vf());
TermPtr add(const TermPtr& a, const TermPtr& b);
TermPtr sub(const TermPtr& a, const TermPtr& b);
TermPtr neg(const TermPtr& a);
TermPtr mul(const TermPtr& a, const TermPtr& b);
TermPtr scale(std::int64_t k, const TermPtr& a);
TermPtr pow(const TermPtr& a, std::int64_t k);
TermPtr ord(const TermPtr& a);
TermPtr ac(const TermPtr& a);
TermPtr ord_n(std::int64_t n, const TermPtr& a);
TermPtr pi(std::int64_t n, const TermPtr& a);
TermPtr pi_nm(std::int64_t n, std::int64_t m, const TermPtr& a);

// Formula builders.
FormulaPtr top();
FormulaPtr bot();
FormulaPtr eq(const TermPtr& a, const TermPtr& b);
FormulaPtr le(const TermPtr& a, const TermPtr& b);
FormulaPtr lt(const TermPtr& a, const TermPtr& b);  // !(b <= a)
FormulaPtr neq(const TermPtr& a, const TermPtr& b);
FormulaPtr not_(const FormulaPtr& f);
FormulaPtr and_(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr or_(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr implies(const FormulaPtr& a, const FormulaPtr& b);
FormulaPtr exists(const std::string& name, Sort sort, const FormulaPtr& body);
FormulaPtr forall(const std::string& name, Sort sort, const FormulaPtr& body);
FormulaPtr and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr or_all(const std::vector<FormulaPtr>& fs);

/// Constant folding of True/False and double negation; keeps everything else.
FormulaPtr simplify(const FormulaPtr& f);

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

std::string print(const TermPtr& t);
std::string print(const FormulaPtr& f);

FormulaPtr parse(const std::string& text);
TermPtr parse_term(const std::string& text);

bool is_tame(const FormulaPtr& f);

using VarList = std::vector<std::pair<std::string, Sort>>;

/// Free variables in order of first occurrence (left to right).
VarList free_vars(const FormulaPtr& f);
VarList term_vars(const TermPtr& t);

/// Sorted list of all n with ord_n, pi_n, pi_{n,m} (both n and m) or VGQ(n) in f.
std::set<std::int64_t> moduli(const FormulaPtr& f);

bool contains_vg(const FormulaPtr& f);
bool has_quantifier(const FormulaPtr& f, SortKind kind);

TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& value);
FormulaPtr substitute(const FormulaPtr& f, const std::string& name, const TermPtr& value);

nlohmann::json to_json(const TermPtr& t);
nlohmann::json to_json(const FormulaPtr& f);

}  // namespace tamelab
