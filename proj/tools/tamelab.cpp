#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tamelab/acceptance.hpp"
#include "tamelab/eval.hpp"
#include "tamelab/formula.hpp"
#include "tamelab/galois_h1.hpp"
#include "tamelab/local_field.hpp"
#include "tamelab/numeric.hpp"
#include "tamelab/polynomial.hpp"
#include "tamelab/tame.hpp"
#include "tamelab/vg_qe.hpp"
#include "tamelab/zeta.hpp"

using json = nlohmann::json;
using namespace tamelab;

namespace {

// exit codes
constexpr int kOk = 0, kCheckFailed = 1, kConfigError = 2, kBudgetError = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options of one subcommand that can also come from --config and are echoed in the report.
class Bindings {
 public:
  explicit Bindings(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    auto* opt = app_->add_option("--" + name, var, help);
    if constexpr (!std::is_same_v<T, std::vector<std::string>> && !std::is_same_v<T, std::vector<std::int64_t>> &&
                  !std::is_same_v<T, std::vector<int>>)
      opt->capture_default_str();
    entries_.push_back({name, opt, [&var](const json& j) { var = j.get<T>(); }, [&var] { return json(var); }});
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    auto* opt = app_->add_flag("--" + name, var, help);
    entries_.push_back({name, opt, [&var](const json& j) { var = j.get<bool>(); }, [&var] { return json(var); }});
    return opt;
  }

  // values from the config file fill options not given on the command line
  void apply(const json& config) {
    for (const auto& e : entries_) {
      if (!config.contains(e.name) || e.opt->count() > 0) continue;
      try {
        e.set(config.at(e.name));
      } catch (const json::exception& ex) {
        throw ConfigError("config key '" + e.name + "': " + ex.what());
      }
    }
  }

  json echo() const {
    json j = json::object();
    for (const auto& e : entries_) j[e.name] = e.get();
    return j;
  }

 private:
  struct Entry {
    std::string name;
    CLI::Option* opt;
    std::function<void(const json&)> set;
    std::function<json()> get;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_primes(const std::vector<std::int64_t>& primes) {
  if (primes.empty()) throw ConfigError("at least one prime is needed");
  for (auto p : primes)
    if (p <= 3 || !is_prime(p)) throw ConfigError("primes must be > 3, got " + std::to_string(p));
}

FormulaPtr formula_from(const std::string& text, const std::string& file) {
  if (text.empty() == file.empty()) throw ConfigError("give exactly one of --formula and --file");
  return parse(file.empty() ? text : read_file(file));
}

json coeff_array(const UPoly& p) {
  json a = json::array();
  for (int k = 0; k <= p.degree(); ++k) a.push_back(to_string(p.coeff(k)));
  return a;
}

struct Outcome {
  json results;
  json violations = json::array();
};

// ---------------------------------------------------------------------------

struct QeArgs {
  std::string formula, file;
  std::int64_t d = 1;
  bool check = false;
  std::int64_t bound = 20;
};

Outcome run_qe(const QeArgs& a) {
  if (a.d < 1) throw ConfigError("--d must be positive");
  auto f = formula_from(a.formula, a.file);
  VGModel model{a.d};
  auto g = eliminate_all(f, model);
  Outcome out;
  out.results = {{"input", print(f)}, {"output", print(g)}, {"ast", to_json(g)}};
  if (a.check) {
    CheckOptions co;
    co.bound = a.bound;
    auto rep = bounded_check(f, g, model, co);
    out.results["check"] = rep.to_json();
    if (!rep.agree) out.violations.push_back("eliminated form disagrees with the bounded oracle");
  }
  return out;
}

struct TameArgs {
  std::string formula, file;
  std::int64_t d = 6;
};

Outcome run_tame(const TameArgs& a) {
  if (a.d < 1) throw ConfigError("--d must be positive");
  auto f = formula_from(a.formula, a.file);
  auto g = to_tame(f, {a.d});
  Outcome out;
  out.results = {{"input", print(f)}, {"tame", print(g)}, {"is_tame", is_tame(g)}, {"d0", compute_d0(g)},
                 {"ast", to_json(g)}};
  return out;
}

struct EvalArgs {
  std::string formula, file, field = "padic";
  std::int64_t prime = 5;
  int precision = 20;
  int degree = 1;
  std::int64_t d = 6;
  std::vector<std::string> assign;
};

FieldDesc field_of(const std::string& kind, std::int64_t p, int precision, int degree) {
  if (precision < 4) throw ConfigError("precision must be at least 4");
  if (kind == "padic") {
    if (degree != 1) throw ConfigError("Q_p has residue degree 1");
    return FieldDesc::padic(p, precision);
  }
  if (kind == "laurent") return FieldDesc::laurent(p, precision, degree);
  throw ConfigError("--field must be padic or laurent");
}

Outcome run_eval(const EvalArgs& a) {
  require_primes({a.prime});
  auto f = formula_from(a.formula, a.file);
  auto K = field_of(a.field, a.prime, a.precision, a.degree);
  std::map<std::string, Elem> values;
  json echo = json::object();
  for (const auto& s : a.assign) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("assignment '" + s + "' is not name=value");
    std::string name = s.substr(0, eq), text = s.substr(eq + 1);
    Elem e;
    try {
      e = Elem::from_rational(K, parse_rational(text));
    } catch (const std::exception&) {
      e = parse_elem(K, text);
    }
    values[name] = e;
    echo[name] = e.str();
  }
  bool v = eval_formula(f, values, K, {a.d});
  Outcome out;
  out.results = {{"formula", print(f)}, {"field", K.str()}, {"assignment", echo}, {"value", v}};
  return out;
}

struct ZetaArgs {
  std::string poly, domain, g, h, csv, orbit_formula;
  std::vector<std::string> weights;
  std::vector<std::int64_t> primes{5};
  int max_depth = 30;
  std::size_t max_states = 100000;
  std::int64_t kummer = 0;
};

IntegralSpec spec_of(const ZetaArgs& a) {
  if (a.poly.empty()) throw ConfigError("--poly is required");
  auto spec = IntegralSpec::from_text(a.poly, a.domain);
  if (!a.g.empty()) spec.g = parse_polynomial(a.g, spec.vars).poly;
  if (!a.h.empty()) spec.h = parse_polynomial(a.h, spec.vars).poly;
  for (const auto& w : a.weights) spec.weights.push_back(parse_polynomial(w, spec.vars).poly);
  spec.validate();
  return spec;
}

json describe(const TwoVarRational& z) {
  // denominator scaled to lowest coefficient 1
  auto r = z.to_ratfunc();
  Rational c = r.den().coeff(r.den().low_degree());
  return {{"value", z.str()},
          {"numerator", coeff_array(r.num().scaled(1 / c))},
          {"denominator", coeff_array(r.den().scaled(1 / c))},
          {"normal_form", z.to_json()},
          {"degree_ok", check_degree(z)}};
}

Outcome run_zeta(const ZetaArgs& a, bool timing) {
  require_primes(a.primes);
  auto spec = spec_of(a);
  ZetaOptions zo{a.max_depth, a.max_states};
  Outcome out;
  json per = json::array();
  std::vector<TwoVarRational> all;
  std::ostringstream csv;
  csv << "prime,value,numerator,denominator,degree_ok,states\n";
  for (auto p : a.primes) {
    ZetaStats stats;
    auto t0 = std::chrono::steady_clock::now();
    auto z = igusa_exact(spec, p, zo, &stats);
    auto row = describe(z);
    row["prime"] = p;
    row["stats"] = {{"states", stats.states}, {"max_depth", stats.max_depth}, {"largest_cycle", stats.largest_cycle}};
    if (timing) row["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    per.push_back(row);
    all.push_back(z);
    auto joined = [](const json& a) {
      std::string s;
      for (const auto& c : a) s += (s.empty() ? "" : " ") + c.get<std::string>();
      return s;
    };
    csv << p << ",\"" << z.str() << "\"," << joined(row["numerator"]) << "," << joined(row["denominator"]) << ","
        << (check_degree(z) ? "true" : "false") << "," << stats.states << "\n";
  }
  out.results = {{"poly", a.poly}, {"vars", spec.vars}, {"primes", per}};
  if (all.size() >= 3) out.results["uniform_fit"] = fit_uniform_denominator(all).to_json();
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw ConfigError("cannot write " + a.csv);
    f << csv.str();
  }
  return out;
}

Outcome run_orbital(const ZetaArgs& a, bool timing) {
  require_primes(a.primes);
  auto spec = spec_of(a);
  ZetaOptions zo{a.max_depth, a.max_states};
  if (a.orbit_formula.empty() == (a.kummer == 0)) throw ConfigError("give exactly one of --orbit-formula and --kummer");
  Outcome out;
  json per = json::array();
  for (auto p : a.primes) {
    auto t0 = std::chrono::steady_clock::now();
    json row{{"prime", p}};
    if (!a.orbit_formula.empty()) {
      auto orbit = parse(read_file(a.orbit_formula));
      auto z = orbital_integral(spec, orbit, p, zo);
      row["orbit"] = print(orbit);
      row["result"] = describe(z);
      if (!check_degree(z)) out.violations.push_back("degree bound fails at p=" + std::to_string(p));
    } else {
      if (spec.n() != 1) throw ConfigError("--kummer needs a polynomial in one variable");
      ActionSpec::kummer(a.kummer).validate(p);
      json classes = json::array();
      RatFunc sum;
      for (const auto& cls : kummer_classes(a.kummer, p)) {
        auto orbit = kummer_orbit_formula(a.kummer, cls.valuation_class, cls.ac_representative, spec.vars[0]);
        auto z = orbital_integral(spec, orbit, p, zo);
        sum += z.to_ratfunc();
        classes.push_back({{"orbit", print(orbit)}, {"result", describe(z)}});
        if (!check_degree(z)) out.violations.push_back("degree bound fails for " + print(orbit) + " at p=" + std::to_string(p));
      }
      auto total = igusa_ratfunc(spec, p, zo);
      bool match = sum == total;
      row["classes"] = classes;
      row["class_sum"] = sum.str();
      row["unrestricted"] = total.str();
      row["sum_matches"] = match;
      if (!match) out.violations.push_back("class sum differs from the unrestricted integral at p=" + std::to_string(p));
    }
    if (timing) row["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    per.push_back(row);
  }
  out.results = {{"poly", a.poly}, {"primes", per}};
  return out;
}

struct H1Args {
  std::string instance;
  std::size_t budget = 1000000;
};

Outcome run_h1(const H1Args& a) {
  if (a.instance.empty()) throw ConfigError("--instance is required");
  json j;
  try {
    j = json::parse(read_file(a.instance));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("instance is not valid JSON: ") + e.what());
  }
  auto inst = h1_instance_from_json(j);
  auto h = enumerate_h1(inst.action, {a.budget});
  Outcome out;
  out.results = {{"gamma", inst.action.gamma.size()}, {"a", inst.action.a.size()}, {"h1", h.to_json(inst.action)}};
  if (!inst.subgroup.empty()) {
    auto rep = restriction_kernels(inst.action, inst.subgroup);
    out.results["restriction"] = rep.to_json();
  }
  return out;
}

struct OrbitArgs {
  std::string action = "kummer:2", field = "padic";
  std::int64_t prime = 5;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int precision = 8;
  int degree = 1;
  std::int64_t vmin = -6, vmax = 6;
};

Outcome run_orbit_test(const OrbitArgs& a) {
  require_primes({a.prime});
  auto K = field_of(a.field, a.prime, a.precision, a.degree);
  ActionSpec action;
  try {
    action = ActionSpec::parse(a.action);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  action.validate(a.prime);
  if (a.vmin > a.vmax) throw ConfigError("--vmin exceeds --vmax");
  auto rep = class_census(kummer_invariant_spec(action), action, K, {a.samples, a.seed, a.vmin, a.vmax});
  Outcome out;
  out.results = {{"action", action.str()}, {"field", K.str()}, {"census", rep.to_json()}};
  if (action.dimension() == 1 && a.field == "padic") {
    auto expected = kummer_class_count_mod_p3(action.weights[0], a.prime);
    out.results["expected_classes"] = expected;
    if (rep.classes != expected)
      out.violations.push_back("census found " + std::to_string(rep.classes) + " classes, expected " +
                               std::to_string(expected));
  }
  for (const auto& v : rep.violation_examples) out.violations.push_back(v);
  if (rep.violations > rep.violation_examples.size())
    out.violations.push_back(std::to_string(rep.violations) + " violations in total");
  return out;
}

struct AcceptArgs {
  std::uint64_t seed = 1;
  std::vector<int> only;
  std::size_t qe_formulas = 500, rewrite_samples = 10000, orbit_pairs = 1000;
  int numeric_depth = 12;
};

Outcome run_accept(const AcceptArgs& a, bool timing) {
  AcceptanceOptions o;
  o.seed = a.seed;
  o.only = a.only;
  o.qe_formulas = a.qe_formulas;
  o.rewrite_samples = a.rewrite_samples;
  o.orbit_pairs = a.orbit_pairs;
  o.numeric_depth = a.numeric_depth;
  for (int id : a.only)
    if (id < 1 || id > kCriteria) throw ConfigError("no acceptance criterion " + std::to_string(id));
  Outcome out;
  out.results = json::array();
  run_acceptance(o, [&](const CriterionResult& r) {
    std::cerr << r.line() << std::endl;
    out.results.push_back(r.to_json(timing));
    if (!r.pass) out.violations.push_back(r.line());
  });
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tame formulas, p-adic integrals and Galois cohomology experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, output_path;
  bool timing = false;
  app.add_option("--config", config_path, "JSON file with option values (command-line flags take precedence)");
  app.add_option("--output", output_path, "write the JSON report here instead of stdout");
  app.add_flag("--timing", timing, "include wall-clock times in the report");
  app.set_version_flag("--version", std::string(TAMELAB_VERSION));

  QeArgs qe;
  auto* qe_cmd = app.add_subcommand("qe", "eliminate value-group quantifiers");
  Bindings qe_b(qe_cmd);
  qe_b.add("formula", qe.formula, "formula text");
  qe_b.add("file", qe.file, "file containing the formula");
  qe_b.add("d", qe.d, "value group Z^(d)");
  qe_b.flag("check", qe.check, "compare with the bounded oracle");
  qe_b.add("bound", qe.bound, "grid bound of the oracle");

  TameArgs tame;
  auto* tame_cmd = app.add_subcommand("tame", "rewrite a formula into tame form");
  Bindings tame_b(tame_cmd);
  tame_b.add("formula", tame.formula, "formula text");
  tame_b.add("file", tame.file, "file containing the formula");
  tame_b.add("d", tame.d, "value group Z^(d) used for the VG step");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula at a point of a local field");
  Bindings eval_b(eval_cmd);
  eval_b.add("formula", ev.formula, "formula text");
  eval_b.add("file", ev.file, "file containing the formula");
  eval_b.add("field", ev.field, "padic or laurent");
  eval_b.add("prime", ev.prime, "residue characteristic");
  eval_b.add("precision", ev.precision, "digits kept by inexact results");
  eval_b.add("degree", ev.degree, "residue degree (laurent only)");
  eval_b.add("d", ev.d, "value group model for ord formulas");
  eval_b.add("assign", ev.assign, "name=value, value a rational or p^v * (d0 + d1*p + ...)");

  ZetaArgs zeta;
  auto* zeta_cmd = app.add_subcommand("zeta", "exact Igusa-type integral as a rational function of T = p^-s");
  Bindings zeta_b(zeta_cmd);
  ZetaArgs orb;
  auto* orb_cmd = app.add_subcommand("orbital", "integral restricted to an orbit");
  Bindings orb_b(orb_cmd);
  for (auto [b, z] : {std::pair{&zeta_b, &zeta}, std::pair{&orb_b, &orb}}) {
    b->add("poly", z->poly, "f");
    b->add("prime", z->primes, "primes (repeat or comma separated)")->delimiter(',');
    b->add("domain", z->domain, "per coordinate O, pO or a+pO, comma separated");
    b->add("factor", z->g, "extra factor |g|");
    b->add("density", z->h, "density |h| of the volume form");
    b->add("weight", z->weights, "ord weight polynomial (at most two)");
    b->add("max-depth", z->max_depth, "recursion depth budget");
    b->add("max-states", z->max_states, "distinct state budget");
  }
  zeta_b.add("csv", zeta.csv, "also write a CSV table of the prime sweep");
  orb_b.add("orbit-formula", orb.orbit_formula, "file with a tame formula describing the orbit");
  orb_b.add("kummer", orb.kummer, "integrate over every orbit of x -> g^n x");

  H1Args h1;
  auto* h1_cmd = app.add_subcommand("h1", "enumerate H1(Gamma, A) for a finite instance");
  Bindings h1_b(h1_cmd);
  h1_b.add("instance", h1.instance, "instance JSON file");
  h1_b.add("budget", h1.budget, "maximal number of candidate generator images");

  OrbitArgs orbit;
  auto* orbit_cmd = app.add_subcommand("orbit-test", "orbit census against invariant vectors");
  Bindings orbit_b(orbit_cmd);
  orbit_b.add("action", orbit.action, "kummer:n or torus:n1,n2,...");
  orbit_b.add("field", orbit.field, "padic or laurent");
  orbit_b.add("prime", orbit.prime, "residue characteristic");
  orbit_b.add("samples", orbit.samples, "sampled points");
  orbit_b.add("seed", orbit.seed, "random seed");
  orbit_b.add("precision", orbit.precision, "digits per sample");
  orbit_b.add("degree", orbit.degree, "residue degree (laurent only)");
  orbit_b.add("vmin", orbit.vmin, "smallest sampled valuation");
  orbit_b.add("vmax", orbit.vmax, "largest sampled valuation");

  AcceptArgs acc;
  auto* acc_cmd = app.add_subcommand("acceptance", "run the acceptance suite");
  Bindings acc_b(acc_cmd);
  acc_b.add("seed", acc.seed, "random seed");
  acc_b.add("only", acc.only, "criterion ids to run")->delimiter(',');
  acc_b.add("qe-formulas", acc.qe_formulas, "random formulas for criterion 1");
  acc_b.add("rewrite-samples", acc.rewrite_samples, "samples per relation and prime for criterion 2");
  acc_b.add("orbit-pairs", acc.orbit_pairs, "pairs per (n, p) for criterion 5");
  acc_b.add("numeric-depth", acc.numeric_depth, "bracket depth for criterion 3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  std::map<CLI::App*, Bindings*> bindings{{qe_cmd, &qe_b},   {tame_cmd, &tame_b}, {eval_cmd, &eval_b},
                                          {zeta_cmd, &zeta_b}, {orb_cmd, &orb_b},  {h1_cmd, &h1_b},
                                          {orbit_cmd, &orbit_b}, {acc_cmd, &acc_b}};
  CLI::App* cmd = app.get_subcommands().front();
  Bindings* b = bindings.at(cmd);
  std::string name = cmd->get_name();
  auto t0 = std::chrono::steady_clock::now();

  Outcome out;
  try {
    if (!config_path.empty()) {
      json config;
      try {
        config = json::parse(read_file(config_path));
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      // either flat keys or a section per subcommand
      b->apply(config.contains(name) ? config.at(name) : config);
    }
    if (cmd == qe_cmd) out = run_qe(qe);
    else if (cmd == tame_cmd) out = run_tame(tame);
    else if (cmd == eval_cmd) out = run_eval(ev);
    else if (cmd == zeta_cmd) out = run_zeta(zeta, timing);
    else if (cmd == orb_cmd) out = run_orbital(orb, timing);
    else if (cmd == h1_cmd) out = run_h1(h1);
    else if (cmd == orbit_cmd) out = run_orbit_test(orbit);
    else out = run_accept(acc, timing);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetError;
  } catch (const PrecisionError& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return kBudgetError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  json report{{"command", name},
              {"config", b->echo()},
              {"results", out.results},
              {"violations", out.violations},
              {"versions", {{"tamelab", TAMELAB_VERSION}}}};
  if (timing) report["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string text = report.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(output_path);
    if (!f) {
      std::cerr << "error: cannot write " << output_path << "\n";
      return kConfigError;
    }
    f << text;
  }
  return out.violations.empty() ? kOk : kCheckFailed;
}
