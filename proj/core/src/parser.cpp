#include <cctype>
#include <map>
#include <memory>
#include <optional>

#include "tamelab/formula.hpp"

namespace tamelab {

namespace {

enum class Tok { Ident, Num, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80; };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i + 1 < s.size() && s[i] == '/' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({Tok::Num, s.substr(start, i - start), start});
    } else if (std::isalpha(c) || c == '_' || c >= 0x80) {
      while (i < s.size() && ident_char(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
    } else {
      std::string two = s.substr(i, 2);
      if (two == "<=" || two == "->" || two == "!=") {
        out.push_back({Tok::Sym, two, start});
        i += 2;
      } else if (std::string("()[]{},:+-*^=&|!<").find(static_cast<char>(c)) != std::string::npos) {
        out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), start});
        ++i;
      } else {
        throw ParseError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
      }
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

enum class RK { Var, Lit, Add, Sub, Neg, Mul, Pow, Ord, Ac, OrdN, Pi, PiNM };

struct Raw {
  RK kind;
  std::string name;
  Rational value;
  std::int64_t k = 0, n = 0, m = 0;
  std::optional<Sort> ann;
  std::vector<std::shared_ptr<Raw>> args;
  std::size_t begin = 0, end = 0;
  int slot = -1;
};
using RawPtr = std::shared_ptr<Raw>;

enum class RF { True, False, Eq, Le, Lt, Ne, Not, And, Or, Implies, Exists, Forall };

struct RawF {
  RF kind;
  RawPtr lhs, rhs;
  std::vector<std::shared_ptr<RawF>> subs;
  std::string var;
  Sort sort;
};
using RawFPtr = std::shared_ptr<RawF>;

RawFPtr rawf(RF kind) {
  auto f = std::make_shared<RawF>();
  f->kind = kind;
  return f;
}

class Parser {
 public:
  Parser(const std::string& src) : src_(src), toks_(lex(src)) {}

  RawFPtr parse_formula_top() {
    auto f = formula();
    expect_end();
    return f;
  }

  RawPtr parse_term_top() {
    auto t = term();
    expect_end();
    return t;
  }

  std::string span(const Raw& r) const { return src_.substr(r.begin, r.end - r.begin); }

 private:
  const std::string& src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }
  bool is_sym(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool is_ident(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.pos, msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"));
  }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    ++i_;
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }
  std::size_t here() const { return peek().pos; }
  std::size_t prev_end() const {
    const Token& t = toks_[i_ - 1];
    return t.pos + t.text.size();
  }

  std::int64_t integer() {
    bool negative = false;
    if (is_sym("-")) {
      negative = true;
      ++i_;
    }
    if (peek().kind != Tok::Num || peek().text.find('/') != std::string::npos) fail("expected integer");
    std::int64_t v = std::stoll(peek().text);
    ++i_;
    return negative ? -v : v;
  }

  Sort sort() {
    if (peek().kind != Tok::Ident) fail("expected sort");
    std::string s = peek().text;
    ++i_;
    if (s == "VF") return Sort::vf();
    if (s == "RF") return Sort::rf();
    if (s == "VG") return Sort::vg();
    if (s == "VGQ") {
      expect_sym("[");
      std::size_t pos = here();
      std::int64_t n = integer();
      expect_sym("]");
      if (n < 2) throw ParseError(pos, "VGQ modulus must be at least 2");
      return Sort::vgq(n);
    }
    throw ParseError(toks_[i_ - 1].pos, "unknown sort '" + s + "'");
  }

  RawFPtr formula() {
    auto lhs = disjunction();
    if (is_sym("->")) {
      ++i_;
      auto f = rawf(RF::Implies);
      f->subs = {lhs, formula()};
      return f;
    }
    return lhs;
  }

  RawFPtr disjunction() {
    auto acc = conjunction();
    while (is_sym("|")) {
      ++i_;
      auto f = rawf(RF::Or);
      f->subs = {acc, conjunction()};
      acc = f;
    }
    return acc;
  }

  RawFPtr conjunction() {
    auto acc = unary();
    while (is_sym("&")) {
      ++i_;
      auto f = rawf(RF::And);
      f->subs = {acc, unary()};
      acc = f;
    }
    return acc;
  }

  bool term_continues() const {
    return is_sym("=") || is_sym("<=") || is_sym("<") || is_sym("!=") || is_sym("+") ||
           is_sym("-") || is_sym("*") || is_sym("^");
  }

  RawFPtr unary() {
    if (is_sym("!")) {
      ++i_;
      auto f = rawf(RF::Not);
      f->subs = {unary()};
      return f;
    }
    if (is_sym("(") && (is_ident("exists", 1) || is_ident("forall", 1))) {
      ++i_;
      auto f = rawf(peek().text == "exists" ? RF::Exists : RF::Forall);
      ++i_;
      if (peek().kind != Tok::Ident) fail("expected variable name");
      f->var = peek().text;
      ++i_;
      expect_sym(":");
      f->sort = sort();
      expect_sym(")");
      f->subs = {unary()};
      return f;
    }
    if (is_ident("true") || is_ident("false")) {
      auto f = rawf(peek().text == "true" ? RF::True : RF::False);
      ++i_;
      return f;
    }
    if (is_sym("(")) {
      std::size_t save = i_;
      std::optional<ParseError> first_error;
      try {
        ++i_;
        auto inner = formula();
        expect_sym(")");
        if (!term_continues()) return inner;
      } catch (const ParseError& e) {
        first_error = e;
      }
      i_ = save;
      try {
        return atom();
      } catch (const ParseError& e) {
        if (first_error && first_error->position() > e.position()) throw *first_error;
        throw;
      }
    }
    return atom();
  }

  RawFPtr atom() {
    auto lhs = term();
    RF kind;
    if (is_sym("=")) kind = RF::Eq;
    else if (is_sym("<=")) kind = RF::Le;
    else if (is_sym("<")) kind = RF::Lt;
    else if (is_sym("!=")) kind = RF::Ne;
    else fail("expected '=' or '<='");
    ++i_;
    auto f = rawf(kind);
    f->lhs = lhs;
    f->rhs = term();
    return f;
  }

  RawPtr node(RK kind, std::size_t begin, std::vector<RawPtr> args) {
    auto r = std::make_shared<Raw>();
    r->kind = kind;
    r->begin = begin;
    r->end = prev_end();
    r->args = std::move(args);
    return r;
  }

  RawPtr term() {
    std::size_t begin = here();
    auto acc = product();
    while (is_sym("+") || is_sym("-")) {
      RK kind = is_sym("+") ? RK::Add : RK::Sub;
      ++i_;
      auto rhs = product();
      acc = node(kind, begin, {acc, rhs});
    }
    return acc;
  }

  RawPtr product() {
    std::size_t begin = here();
    auto acc = factor();
    while (is_sym("*")) {
      ++i_;
      auto rhs = factor();
      acc = node(RK::Mul, begin, {acc, rhs});
    }
    return acc;
  }

  RawPtr factor() {
    std::size_t begin = here();
    if (is_sym("-") && peek(1).kind != Tok::Num) {
      ++i_;
      auto inner = factor();
      return node(RK::Neg, begin, {inner});
    }
    auto base = primary();
    if (is_sym("^")) {
      ++i_;
      std::size_t pos = here();
      std::int64_t k = integer();
      if (k < 0) throw ParseError(pos, "negative exponent");
      auto r = node(RK::Pow, begin, {base});
      r->k = k;
      return r;
    }
    return base;
  }

  void annotation(Raw& r) {
    if (is_sym(":")) {
      ++i_;
      r.ann = sort();
      r.end = prev_end();
    }
  }

  // Parses "[n]" / "[n,m]" or "_{n}" / "_{n,m}" after a function name.
  std::vector<std::int64_t> indices(bool underscore) {
    std::string close = underscore ? "}" : "]";
    expect_sym(underscore ? "{" : "[");
    std::vector<std::int64_t> out{integer()};
    if (is_sym(",")) {
      ++i_;
      out.push_back(integer());
    }
    expect_sym(close);
    return out;
  }

  RawPtr primary() {
    std::size_t begin = here();
    if (peek().kind == Tok::Num || (is_sym("-") && peek(1).kind == Tok::Num)) {
      bool negative = is_sym("-");
      if (negative) ++i_;
      Rational v = parse_rational(peek().text);
      ++i_;
      auto r = node(RK::Lit, begin, {});
      r->value = negative ? -v : v;
      annotation(*r);
      return r;
    }
    if (is_sym("(")) {
      ++i_;
      auto inner = term();
      expect_sym(")");
      return inner;
    }
    if (peek().kind != Tok::Ident) fail("expected term");
    std::string id = peek().text;
    bool underscore = (id == "pi_" || id == "ord_") && is_sym("{", 1);
    std::string fname = underscore ? id.substr(0, id.size() - 1) : id;
    if (fname == "ord" || fname == "ac" || fname == "pi") {
      ++i_;
      std::vector<std::int64_t> idx;
      if (underscore || is_sym("[")) idx = indices(underscore);
      std::size_t idx_pos = toks_[i_ - 1].pos;
      expect_sym("(");
      auto arg = term();
      expect_sym(")");
      RK kind;
      if (fname == "ac") {
        if (!idx.empty()) throw ParseError(idx_pos, "ac takes no index");
        kind = RK::Ac;
      } else if (fname == "ord") {
        if (idx.size() > 1) throw ParseError(idx_pos, "ord takes at most one index");
        kind = idx.empty() ? RK::Ord : RK::OrdN;
      } else {
        if (idx.empty()) throw ParseError(idx_pos, "pi needs an index");
        kind = idx.size() == 1 ? RK::Pi : RK::PiNM;
      }
      auto r = node(kind, begin, {arg});
      if (!idx.empty()) r->n = idx[0];
      if (idx.size() > 1) r->m = idx[1];
      return r;
    }
    static const std::set<std::string> reserved{"exists", "forall", "true", "false"};
    if (reserved.count(id)) fail("unexpected keyword");
    ++i_;
    auto r = node(RK::Var, begin, {});
    r->name = id;
    annotation(*r);
    return r;
  }
};

// Sort inference: every raw term gets a slot; slots are merged by
// union-find and each class carries at most one sort.
class Inference {
 public:
  explicit Inference(const Parser& p) : parser_(p) {}

  void visit(const RawFPtr& f) {
    switch (f->kind) {
      case RF::Eq:
      case RF::Ne:
      case RF::Le:
      case RF::Lt: {
        int a = visit(f->lhs), b = visit(f->rhs);
        unite(a, b, *f->lhs);
        if (f->kind == RF::Le || f->kind == RF::Lt) fix(a, Sort::vg(), f->lhs.get());
        break;
      }
      case RF::Exists:
      case RF::Forall:
        fix(var_slot(f->var), f->sort, nullptr, f->var);
        for (const auto& s : f->subs) visit(s);
        break;
      default:
        for (const auto& s : f->subs) visit(s);
    }
  }

  int visit(const RawPtr& r) {
    r->slot = fresh();
    switch (r->kind) {
      case RK::Var:
        unite(r->slot, var_slot(r->name), *r);
        break;
      case RK::Lit:
        break;
      case RK::Add:
      case RK::Sub:
      case RK::Mul:
        unite(r->slot, visit(r->args[0]), *r);
        unite(r->slot, visit(r->args[1]), *r);
        break;
      case RK::Neg:
      case RK::Pow:
        unite(r->slot, visit(r->args[0]), *r);
        break;
      case RK::Ord:
        fix(visit(r->args[0]), Sort::vf(), r->args[0].get());
        fix(r->slot, Sort::vg(), r.get());
        break;
      case RK::Ac:
        fix(visit(r->args[0]), Sort::vf(), r->args[0].get());
        fix(r->slot, Sort::rf(), r.get());
        break;
      case RK::OrdN:
        fix(visit(r->args[0]), Sort::vf(), r->args[0].get());
        fix(r->slot, checked_vgq(r->n, *r), r.get());
        break;
      case RK::Pi:
        fix(visit(r->args[0]), Sort::vg(), r->args[0].get());
        fix(r->slot, checked_vgq(r->n, *r), r.get());
        break;
      case RK::PiNM:
        fix(visit(r->args[0]), checked_vgq(r->n, *r), r->args[0].get());
        fix(r->slot, checked_vgq(r->m, *r), r.get());
        break;
    }
    if (r->ann) fix(r->slot, *r->ann, r.get());
    return r->slot;
  }

  Sort sort_of(int slot) {
    auto s = sorts_[find(slot)];
    return s ? *s : Sort::vf();
  }

 private:
  const Parser& parser_;
  std::vector<int> parent_;
  std::vector<std::optional<Sort>> sorts_;
  std::map<std::string, int> vars_;

  int fresh() {
    parent_.push_back(static_cast<int>(parent_.size()));
    sorts_.emplace_back();
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  int var_slot(const std::string& name) {
    auto it = vars_.find(name);
    if (it != vars_.end()) return it->second;
    int s = fresh();
    vars_[name] = s;
    return s;
  }
  Sort checked_vgq(std::int64_t n, const Raw& r) {
    if (n < 2) throw SortError("quotient modulus " + std::to_string(n) + " < 2 in '" + parser_.span(r) + "'");
    return Sort::vgq(n);
  }
  void conflict(const Sort& a, const Sort& b, const std::string& what) {
    throw SortError("sort mismatch in '" + what + "': " + a.str() + " vs " + b.str());
  }
  void unite(int a, int b, const Raw& where) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (sorts_[a] && sorts_[b] && *sorts_[a] != *sorts_[b])
      conflict(*sorts_[a], *sorts_[b], parser_.span(where));
    if (!sorts_[a]) sorts_[a] = sorts_[b];
    parent_[b] = a;
  }
  void fix(int slot, Sort s, const Raw* where, const std::string& label = "") {
    int r = find(slot);
    if (sorts_[r] && *sorts_[r] != s) conflict(*sorts_[r], s, where ? parser_.span(*where) : label);
    sorts_[r] = s;
  }
};

class Builder {
 public:
  Builder(const Parser& p, Inference& inf) : parser_(p), inf_(inf) {}

  TermPtr build(const RawPtr& r) {
    Sort s = inf_.sort_of(r->slot);
    try {
      switch (r->kind) {
        case RK::Var: return var(r->name, s);
        case RK::Lit: return lit(r->value, s);
        case RK::Add: return add(build(r->args[0]), build(r->args[1]));
        case RK::Sub: return sub(build(r->args[0]), build(r->args[1]));
        case RK::Neg: return neg(build(r->args[0]));
        case RK::Pow: return pow(build(r->args[0]), r->k);
        case RK::Ord: return ord(build(r->args[0]));
        case RK::Ac: return ac(build(r->args[0]));
        case RK::OrdN: return ord_n(r->n, build(r->args[0]));
        case RK::Pi: return pi(r->n, build(r->args[0]));
        case RK::PiNM: return pi_nm(r->n, r->m, build(r->args[0]));
        case RK::Mul:
          if (s.is_ring()) return mul(build(r->args[0]), build(r->args[1]));
          for (int side = 0; side < 2; ++side) {
            const auto& k = r->args[side];
            if (k->kind == RK::Lit && denominator(k->value) == 1)
              return scale(static_cast<std::int64_t>(numerator(k->value)), build(r->args[1 - side]));
          }
          throw SortError("multiplication in group sort " + s.str() + " needs an integer factor");
      }
    } catch (const SortError& e) {
      std::string msg = e.what();
      if (msg.find(" in '") != std::string::npos) throw;
      throw SortError(msg + " in '" + parser_.span(*r) + "'");
    }
    throw SortError("unreachable");
  }

  FormulaPtr build(const RawFPtr& f) {
    switch (f->kind) {
      case RF::True: return top();
      case RF::False: return bot();
      case RF::Eq: return eq(build(f->lhs), build(f->rhs));
      case RF::Ne: return neq(build(f->lhs), build(f->rhs));
      case RF::Le: return le(build(f->lhs), build(f->rhs));
      case RF::Lt: return lt(build(f->lhs), build(f->rhs));
      case RF::Not: return not_(build(f->subs[0]));
      case RF::And: return and_(build(f->subs[0]), build(f->subs[1]));
      case RF::Or: return or_(build(f->subs[0]), build(f->subs[1]));
      case RF::Implies: return implies(build(f->subs[0]), build(f->subs[1]));
      case RF::Exists: return exists(f->var, f->sort, build(f->subs[0]));
      case RF::Forall: return forall(f->var, f->sort, build(f->subs[0]));
    }
    throw SortError("unreachable");
  }

 private:
  const Parser& parser_;
  Inference& inf_;
};

}  // namespace

FormulaPtr parse(const std::string& text) {
  Parser p(text);
  auto raw = p.parse_formula_top();
  Inference inf(p);
  inf.visit(raw);
  return Builder(p, inf).build(raw);
}

TermPtr parse_term(const std::string& text) {
  Parser p(text);
  auto raw = p.parse_term_top();
  Inference inf(p);
  inf.visit(raw);
  return Builder(p, inf).build(raw);
}

}  // namespace tamelab
