#include "tamelab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tamelab/eval.hpp"
#include "tamelab/galois_h1.hpp"
#include "tamelab/numeric.hpp"
#include "tamelab/tame.hpp"
#include "tamelab/vg_qe.hpp"
#include "tamelab/zeta.hpp"

namespace tamelab {

std::string CriterionResult::line() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << summary;
  return os.str();
}

nlohmann::json CriterionResult::to_json(bool timing) const {
  nlohmann::json j{{"id", id}, {"name", name}, {"pass", pass}, {"summary", summary}, {"details", details}};
  if (timing) j["seconds"] = seconds;
  return j;
}

namespace {

const std::vector<std::string> kCatalog{"x", "x^2", "x*y", "x^2 + y^2", "x^2 - y^3", "x^3 + y^3"};
const std::vector<std::int64_t> kCatalogPrimes{5, 7, 11, 13};

CriterionResult start(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CriterionResult qe_criterion(const AcceptanceOptions& o) {
  auto r = start(1, "vg-quantifier-elimination");
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(o.seed);
  const std::int64_t ds[] = {1, 2, 3, 6};
  std::size_t disagreements = 0, errors = 0, assignments = 0;
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t i = 0; i < o.qe_formulas; ++i) {
    VGModel model{ds[i % 4]};
    auto f = random_vg_formula(rng);
    try {
      auto g = eliminate_all(f, model);
      auto rep = bounded_check(f, g, model);
      assignments += rep.assignments;
      if (!rep.agree) {
        ++disagreements;
        if (failures.size() < 5) failures.push_back({{"formula", print(f)}, {"d", model.d}, {"report", rep.to_json()}});
      }
    } catch (const std::exception& e) {
      ++errors;
      if (failures.size() < 5) failures.push_back({{"formula", print(f)}, {"d", model.d}, {"error", e.what()}});
    }
  }
  double secs = seconds_since(t0);
  r.pass = disagreements == 0 && errors == 0 && secs < 300;
  r.summary = std::to_string(o.qe_formulas) + " formulas, " + std::to_string(disagreements) + " disagreements, " +
              std::to_string(errors) + " errors";
  if (secs >= 300) r.summary += ", over the 300 s limit";
  r.details = {{"formulas", o.qe_formulas}, {"assignments", assignments}, {"disagreements", disagreements},
               {"errors", errors}, {"failures", failures}};
  return r;
}

CriterionResult rewrite_criterion(const AcceptanceOptions& o) {
  auto r = start(2, "ord-to-ac-rewrites");
  std::size_t bad = 0;
  nlohmann::json per = nlohmann::json::array();
  for (std::int64_t p : {5, 7, 11}) {
    auto rep = check_ord_rewrites(p, o.rewrite_samples, o.seed + static_cast<std::uint64_t>(p));
    bad += rep.disagreements;
    per.push_back(rep.to_json());
  }
  r.pass = bad == 0;
  r.summary = std::to_string(o.rewrite_samples) + " samples per relation and prime, " + std::to_string(bad) +
              " disagreements";
  r.details = {{"primes", per}};
  return r;
}

CriterionResult igusa_criterion(const AcceptanceOptions& o) {
  auto r = start(3, "igusa-catalog");
  r.pass = true;
  std::size_t checks = 0;
  nlohmann::json entries = nlohmann::json::array();
  std::vector<std::string> problems;
  for (const auto& text : kCatalog) {
    auto spec = IntegralSpec::from_text(text);
    bool monomial = text == "x" || text == "x^2" || text == "x*y";
    std::vector<TwoVarRational> results;
    nlohmann::json per = nlohmann::json::array();
    for (std::int64_t p : kCatalogPrimes) {
      ZetaStats stats;
      TwoVarRational z;
      try {
        z = igusa_exact(spec, p, {}, &stats);
      } catch (const std::exception& e) {
        problems.push_back(text + " p=" + std::to_string(p) + ": " + e.what());
        continue;
      }
      results.push_back(z);
      nlohmann::json row{{"p", p}, {"value", z.str()}, {"states", stats.states}};
      for (int s : {1, 2, 3}) {
        double v = z.evaluate(std::pow(static_cast<double>(p), -s));
        auto b = igusa_numeric(spec, p, s, o.numeric_depth);
        ++checks;
        bool inside = b.contains(v, 1e-9);
        bool narrow = !monomial || b.width() < 1e-6 * std::abs(v);
        if (!inside || !narrow) {
          std::ostringstream os;
          os << text << " p=" << p << " s=" << s << ": value " << v << " bracket [" << b.lower << ", " << b.upper
             << "]";
          problems.push_back(os.str());
        }
        row["s" + std::to_string(s)] = {{"value", v}, {"lower", b.lower}, {"upper", b.upper}, {"boxes", b.boxes}};
      }
      per.push_back(row);
    }
    auto fit = fit_uniform_denominator(results);
    if (!fit.ok || results.size() != kCatalogPrimes.size()) problems.push_back(text + ": uniform fit failed: " + fit.message);
    entries.push_back({{"f", text}, {"primes", per}, {"fit", fit.to_json()}});
  }
  r.pass = problems.empty();
  r.summary = std::to_string(kCatalog.size()) + " polynomials x " + std::to_string(kCatalogPrimes.size()) +
              " primes, " + std::to_string(checks) + " bracket checks, " + std::to_string(problems.size()) +
              " problems";
  r.details = {{"entries", entries}, {"problems", problems}};
  return r;
}

CriterionResult orbital_criterion(const AcceptanceOptions&) {
  auto r = start(4, "orbital-degree-bound");
  std::size_t integrals = 0;
  std::vector<std::string> problems;
  nlohmann::json rows = nlohmann::json::array();
  auto spec = IntegralSpec::from_text("x");
  for (std::int64_t n : {2, 3})
    for (std::int64_t p : {5, 7, 11}) {
      RatFunc sum;
      for (const auto& cls : kummer_classes(n, p)) {
        auto z = orbital_integral(spec, kummer_orbit_formula(n, cls.valuation_class, cls.ac_representative), p);
        ++integrals;
        if (!check_degree(z))
          problems.push_back("degree bound fails for n=" + std::to_string(n) + " p=" + std::to_string(p) + ": " + z.str());
        sum += z.to_ratfunc();
      }
      auto total = igusa_ratfunc(spec, p);
      bool match = sum == total;
      if (!match) problems.push_back("class sum differs for n=" + std::to_string(n) + " p=" + std::to_string(p));
      rows.push_back({{"n", n}, {"p", p}, {"classes", kummer_classes(n, p).size()}, {"sum", sum.str()},
                      {"sum_matches", match}});
    }
  r.pass = problems.empty();
  r.summary = std::to_string(integrals) + " orbital integrals, " + std::to_string(problems.size()) + " problems";
  r.details = {{"cases", rows}, {"problems", problems}};
  return r;
}

CriterionResult census_criterion(const AcceptanceOptions& o) {
  auto r = start(5, "orbit-invariants");
  std::size_t violations = 0, pairs = 0;
  std::vector<std::string> problems;
  nlohmann::json rows = nlohmann::json::array();
  for (std::int64_t n : {2, 3})
    for (std::int64_t p : {5, 7, 11}) {
      auto K = FieldDesc::padic(p, 8);
      auto action = ActionSpec::kummer(n);
      auto spec = kummer_invariant_spec(action);
      auto census = class_census(spec, action, K, {1000, o.seed, -6, 6});
      std::size_t expected = kummer_class_count_mod_p3(n, p);
      if (census.classes != expected || census.violations != 0)
        problems.push_back("census n=" + std::to_string(n) + " p=" + std::to_string(p) + " found " +
                           std::to_string(census.classes) + " classes, expected " + std::to_string(expected));
      std::mt19937_64 rng(o.seed * 1000 + static_cast<std::uint64_t>(n * 100 + p));
      std::size_t bad = 0, same = 0;
      for (std::size_t i = 0; i < o.orbit_pairs; ++i, ++pairs) {
        Elem x = sample(K, -6, 6, rng);
        Elem y = rng() % 2 ? sample(K, -6, 6, rng) : sample(K, -3, 3, rng).pow(n) * x;
        if (x.is_zero() || y.is_zero()) continue;
        auto vx = orbit_invariants({x}, spec), vy = orbit_invariants({y}, spec);
        auto d = same_orbit({x}, {y}, action, K);
        auto cx = census.class_of(vx), cy = census.class_of(vy);
        bool predicted = cx && cy && *cx == *cy;
        bool actual = d.verdict == OrbitVerdict::Same;
        same += actual;
        if (d.verdict == OrbitVerdict::Unknown || !cx || !cy || predicted != actual || (vx == vy && !actual)) {
          ++bad;
          if (problems.size() < 10) problems.push_back("pair " + x.str() + ", " + y.str() + " mispredicted");
        }
      }
      violations += bad;
      rows.push_back({{"n", n}, {"p", p}, {"classes", census.classes}, {"expected", expected},
                      {"buckets", census.buckets}, {"pairs", o.orbit_pairs}, {"same_orbit_pairs", same},
                      {"violations", bad}});
    }
  r.pass = problems.empty() && violations == 0;
  r.summary = std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations, census " +
              (problems.empty() ? "matches" : "has problems");
  r.details = {{"cases", rows}, {"problems", problems}};
  return r;
}

// Every map Gamma -> A satisfying the cocycle identity, found by backtracking,
// and the classes as explicit orbits of b -> b^-1 a_s s(b).
std::size_t whole_map_h1(const GroupAction& act, std::size_t& cocycles) {
  const auto& G = act.gamma;
  const auto& A = act.a;
  int n = G.size();
  std::set<Cocycle> all;
  Cocycle c(n, -1);
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      all.insert(c);
      return;
    }
    for (int v = 0; v < A.size(); ++v) {
      c[k] = v;
      bool ok = true;
      for (int s = 0; s <= k && ok; ++s)
        for (int t = 0; t <= k && ok; ++t) {
          int st = G.mul(s, t);
          if (st <= k) ok = c[st] == A.mul(c[s], act.apply(s, c[t]));
        }
      if (ok) rec(k + 1);
    }
    c[k] = -1;
  };
  rec(0);
  cocycles = all.size();
  std::set<Cocycle> seen;
  std::size_t classes = 0;
  for (const auto& a : all) {
    if (seen.count(a)) continue;
    ++classes;
    for (int b = 0; b < A.size(); ++b) {
      Cocycle x(n);
      for (int s = 0; s < n; ++s) x[s] = A.mul(A.mul(A.inv(b), a[s]), act.apply(s, b));
      seen.insert(x);
    }
  }
  return classes;
}

CriterionResult cohomology_criterion(const AcceptanceOptions&) {
  auto r = start(6, "galois-cohomology");
  std::vector<std::string> problems;
  nlohmann::json rows = nlohmann::json::array();
  std::size_t instances = 0, restrictions = 0, models = 0, points = 0;
  for (const auto& e : h1_catalog()) {
    ++instances;
    auto h = enumerate_h1(e.action);
    std::size_t cocycles = 0;
    std::size_t classes = whole_map_h1(e.action, cocycles);
    bool ok = classes == h.size() && cocycles == h.cocycles.size();
    if (!ok) problems.push_back(e.name + ": " + std::to_string(h.size()) + " classes, oracle " + std::to_string(classes));
    nlohmann::json row{{"name", e.name}, {"gamma", e.action.gamma.size()}, {"a", e.action.a.size()},
                       {"h1", h.size()}, {"oracle", classes}};
    if (!e.subgroup.empty()) {
      ++restrictions;
      auto rep = restriction_kernels(e.action, e.subgroup);
      if (!rep.all_trivial()) problems.push_back(e.name + ": restriction has a nontrivial kernel");
      row["restriction"] = rep.to_json();
    }
    rows.push_back(row);
  }
  nlohmann::json orbit_rows = nlohmann::json::array();
  for (const auto& m : orbit_model_catalog()) {
    ++models;
    std::set<int> done;
    for (int x0 : m.model.rational_points()) {
      if (done.count(x0)) continue;
      ++points;
      auto rep = check_cor_x0(m.model, x0);
      for (int x : m.model.rational_points())
        if (!m.model.sections(x0, x).empty()) done.insert(x);
      if (!rep.tau_independent || !rep.separates) problems.push_back(m.name + ": cor_x0 check fails at " + std::to_string(x0));
      orbit_rows.push_back({{"model", m.name}, {"x0", x0}, {"report", rep.to_json()}});
    }
  }
  r.pass = problems.empty() && instances >= 10;
  r.summary = std::to_string(instances) + " H1 instances, " + std::to_string(restrictions) + " restriction checks, " +
              std::to_string(models) + " orbit models (" + std::to_string(points) + " base points), " +
              std::to_string(problems.size()) + " problems";
  r.details = {{"instances", rows}, {"orbit_models", orbit_rows}, {"problems", problems}};
  return r;
}

CriterionResult measure_criterion(const AcceptanceOptions&) {
  auto r = start(7, "measure-laws");
  std::vector<std::string> problems;
  std::size_t boxes = 0, scalings = 0;
  for (std::int64_t p : kCatalogPrimes) {
    // every box shape in up to three coordinates
    for (std::size_t n = 1; n <= 3; ++n) {
      std::vector<int> kind(n, 0);
      while (true) {
        std::string dom;
        int small = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i) dom += ",";
          if (kind[i] == 0) dom += "O";
          if (kind[i] == 1) dom += "pO";
          if (kind[i] == 2) dom += std::to_string(1 + static_cast<std::int64_t>(i) % (p - 1)) + "+pO";
          small += kind[i] != 0;
        }
        ++boxes;
        auto z = igusa_ratfunc(IntegralSpec::from_text("1", dom), p);
        if (!(z == RatFunc(prime_power(p, -small)))) problems.push_back("box " + dom + " p=" + std::to_string(p));
        std::size_t k = 0;
        while (k < n && ++kind[k] == 3) kind[k++] = 0;
        if (k == n) break;
      }
    }
    for (const auto& text : kCatalog) {
      auto spec = IntegralSpec::from_text(text);
      auto scaled = spec;
      scaled.f = spec.f.scaled(p);
      ++scalings;
      if (!(igusa_ratfunc(scaled, p) == RatFunc::T() * igusa_ratfunc(spec, p)))
        problems.push_back("scaling " + text + " p=" + std::to_string(p));
    }
  }
  r.pass = problems.empty();
  r.summary = std::to_string(boxes) + " boxes, " + std::to_string(scalings) + " scaling identities, " +
              std::to_string(problems.size()) + " problems";
  r.details = {{"boxes", boxes}, {"scalings", scalings}, {"problems", problems}};
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = qe_criterion(options); break;
    case 2: r = rewrite_criterion(options); break;
    case 3: r = igusa_criterion(options); break;
    case 4: r = orbital_criterion(options); break;
    case 5: r = census_criterion(options); break;
    case 6: r = cohomology_criterion(options); break;
    case 7: r = measure_criterion(options); break;
    default: throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> ids = options.only;
  if (ids.empty())
    for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : ids) {
    CriterionResult r;
    try {
      r = run_criterion(id, options);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion";
      r.pass = false;
      r.summary = std::string("error: ") + e.what();
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace tamelab
