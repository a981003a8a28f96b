#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "tamelab/eval.hpp"

namespace tamelab {

nlohmann::json InvariantVector::to_json() const {
  return {{"ac", ac}, {"ord_mod_d", ord_class}};
}

InvariantVector orbit_invariants(const std::vector<Elem>& x, const InvariantSpec& spec) {
  if (x.size() != spec.vars.size()) throw std::invalid_argument("orbit_invariants: point has wrong dimension");
  if (x.empty()) return {};
  const FieldDesc& field = x.front().field();
  InvariantVector out;
  for (const auto& f : spec.f) {
    Elem v = f.evaluate(x, field);
    out.ac.push_back(v.ac());
    out.ord_class.push_back(v.is_zero() ? 0 : mod(v.ord(), spec.d));
  }
  return out;
}

ActionSpec ActionSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("action must look like kummer:n or torus:n1,n2");
  std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  ActionSpec a;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      a.weights.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad action weight '" + item + "'");
    }
  }
  if (kind == "kummer" && a.weights.size() != 1) throw std::invalid_argument("kummer takes one exponent");
  if (kind != "kummer" && kind != "torus") throw std::invalid_argument("unknown action '" + kind + "'");
  if (a.weights.empty()) throw std::invalid_argument("action without weights");
  return a;
}

void ActionSpec::validate(std::int64_t p) const {
  if (weights.empty()) throw std::invalid_argument("action without weights");
  for (std::int64_t n : weights) {
    if (n < 2) throw std::invalid_argument("action weights must be >= 2");
    if (n % p == 0) throw std::invalid_argument("action weight " + std::to_string(n) + " divisible by p");
  }
}

std::string ActionSpec::str() const {
  std::string s = weights.size() == 1 ? "kummer:" : "torus:";
  for (std::size_t i = 0; i < weights.size(); ++i) s += (i ? "," : "") + std::to_string(weights[i]);
  return s;
}

InvariantSpec kummer_invariant_spec(const ActionSpec& action) {
  InvariantSpec spec;
  std::size_t k = action.dimension();
  spec.d = 1;
  for (std::size_t i = 0; i < k; ++i) {
    spec.vars.push_back(k == 1 ? "x" : "x" + std::to_string(i + 1));
    spec.f.push_back(Polynomial::variable(k, i));
    spec.d = lcm64(spec.d, action.weights[i]);
  }
  return spec;
}

std::optional<Elem> nth_root(const Elem& z, std::int64_t n) {
  if (z.is_zero()) return z;
  const FieldDesc& field = z.field();
  if (z.ord() % n != 0) return std::nullopt;
  const ResidueField& rf = residue_field(field);
  Elem pi_v = Elem::uniformizer(field).pow(z.ord() / n);
  Elem u = z / pi_v.pow(n);
  ResidueElem a = u.ac(), r0 = -1;
  for (ResidueElem r = 1; r < rf.size(); ++r)
    if (rf.pow(r, n) == a) {
      r0 = r;
      break;
    }
  if (r0 < 0) return std::nullopt;
  int m = field.precision;
  Elem target = u.relative_precision() > m ? u.truncated(m) : u;
  std::vector<ResidueElem> start(static_cast<std::size_t>(m), 0);
  start[0] = r0;
  Elem w = Elem::from_digits(field, 0, start, false);
  Elem nn = Elem::from_int(field, n);
  for (int iter = 0; iter < 64; ++iter) {
    Elem diff;
    try {
      diff = w.pow(n) - target;
    } catch (const PrecisionError&) {
      return pi_v * w;
    }
    w = w - diff / (nn * w.pow(n - 1));
  }
  throw PrecisionError("nth_root: Newton iteration did not converge");
}

OrbitDecision same_orbit(const std::vector<Elem>& x, const std::vector<Elem>& y, const ActionSpec& action,
                         const FieldDesc& field) {
  action.validate(field.p);
  if (x.size() != action.dimension() || y.size() != action.dimension())
    throw std::invalid_argument("same_orbit: points have the wrong dimension");
  OrbitDecision out;
  const ResidueField& rf = residue_field(field);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::int64_t n = action.weights[i];
    if (x[i].is_zero() || y[i].is_zero()) {
      if (x[i].is_zero() && y[i].is_zero()) {
        out.witness.push_back(Elem::from_int(field, 1));
        continue;
      }
      out.verdict = OrbitVerdict::Different;
      out.reason = "coordinate " + std::to_string(i) + ": zero pattern differs";
      out.witness.clear();
      return out;
    }
    Elem z = y[i] / x[i];
    if (mod(z.ord(), n) != 0) {
      out.verdict = OrbitVerdict::Different;
      out.reason = "coordinate " + std::to_string(i) + ": valuation of the ratio not divisible by " + std::to_string(n);
      out.witness.clear();
      return out;
    }
    std::int64_t g = gcd64(n, rf.size() - 1);
    if (rf.pow(z.ac(), (rf.size() - 1) / g) != 1) {
      out.verdict = OrbitVerdict::Different;
      out.reason = "coordinate " + std::to_string(i) + ": ac of the ratio is not an n-th power";
      out.witness.clear();
      return out;
    }
    try {
      auto root = nth_root(z, n);
      if (!root) throw std::logic_error("same_orbit: Hensel criterion and root search disagree");
      out.witness.push_back(*root);
    } catch (const PrecisionError& e) {
      out.verdict = OrbitVerdict::Unknown;
      out.reason = e.what();
      out.witness.clear();
      return out;
    }
  }
  out.verdict = OrbitVerdict::Same;
  return out;
}

std::optional<std::size_t> CensusReport::class_of(const InvariantVector& v) const {
  for (const auto& [vec, id] : table)
    if (vec == v) return id;
  return std::nullopt;
}

nlohmann::json CensusReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [vec, id] : table) rows.push_back({{"invariants", vec.to_json()}, {"class", id}});
  return {{"buckets", buckets},   {"classes", classes},   {"violations", violations},
          {"unknown", unknown},   {"table", rows},        {"violation_examples", violation_examples}};
}

CensusReport class_census(const InvariantSpec& spec, const ActionSpec& action, const FieldDesc& field,
                          const CensusOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::map<InvariantVector, std::vector<Elem>> buckets;
  std::vector<InvariantVector> order;
  CensusReport report;
  for (std::size_t s = 0; s < options.samples; ++s) {
    std::vector<Elem> x;
    for (std::size_t i = 0; i < action.dimension(); ++i) x.push_back(sample(field, options.vmin, options.vmax, rng));
    InvariantVector v = orbit_invariants(x, spec);
    auto it = buckets.find(v);
    if (it == buckets.end()) {
      buckets.emplace(v, x);
      order.push_back(v);
      continue;
    }
    auto d = same_orbit(it->second, x, action, field);
    if (d.verdict == OrbitVerdict::Unknown) ++report.unknown;
    if (d.verdict == OrbitVerdict::Different) {
      ++report.violations;
      if (report.violation_examples.size() < 5) report.violation_examples.push_back(d.reason);
    }
  }
  // merge buckets that lie in one orbit
  std::vector<std::size_t> parent(order.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (find(i) == find(j)) continue;
      auto d = same_orbit(buckets.at(order[i]), buckets.at(order[j]), action, field);
      if (d.verdict == OrbitVerdict::Same) parent[find(j)] = find(i);
      if (d.verdict == OrbitVerdict::Unknown) ++report.unknown;
    }
  std::map<std::size_t, std::size_t> ids;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t root = find(i);
    auto [it, fresh] = ids.emplace(root, ids.size());
    report.table.emplace_back(order[i], it->second);
  }
  std::sort(report.table.begin(), report.table.end());
  report.buckets = order.size();
  report.classes = ids.size();
  return report;
}

FormulaPtr kummer_orbit_formula(std::int64_t n, std::int64_t k, ResidueElem c, const std::string& x) {
  TermPtr xv = var(x, Sort::vf());
  TermPtr xi = var("xi", Sort::rf());
  FormulaPtr valuation = eq(ord_n(n, xv), lit(mod(k, n), Sort::vgq(n)));
  FormulaPtr unit = exists("xi", Sort::rf(),
                           and_(neq(xi, lit(0, Sort::rf())), eq(mul(lit(c, Sort::rf()), pow(xi, n)), ac(xv))));
  return and_(valuation, unit);
}

std::vector<KummerClass> kummer_classes(std::int64_t n, std::int64_t p) {
  ResidueField rf(p);
  std::int64_t g = gcd64(n, p - 1);
  std::vector<KummerClass> out;
  for (std::int64_t k = 0; k < n; ++k)
    for (std::int64_t i = 0; i < g; ++i) out.push_back({k, rf.pow(rf.primitive(), i)});
  return out;
}

std::size_t kummer_class_count_mod_p3(std::int64_t n, std::int64_t p) {
  std::int64_t m = p * p * p;
  std::set<std::int64_t> powers;
  std::int64_t units = 0;
  for (std::int64_t u = 1; u < m; ++u) {
    if (u % p == 0) continue;
    ++units;
    powers.insert(pow_mod(u, n, m));
  }
  return static_cast<std::size_t>(n * (units / static_cast<std::int64_t>(powers.size())));
}

}  // namespace tamelab
