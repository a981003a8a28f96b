#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tamelab/formula.hpp"
#include "tamelab/local_field.hpp"
#include "tamelab/polynomial.hpp"

namespace tamelab {

/// Supplies ord/ac data of valued-field terms to the evaluator.
class VfBackend {
 public:
  virtual ~VfBackend() = default;
  virtual const ResidueField& residue() const = 0;
  virtual ResidueElem ac(const TermPtr& t) = 0;
  /// kOrdInfinity for zero.
  virtual std::int64_t ord(const TermPtr& t) = 0;
  /// ord(t) mod n with ord(0) = 0.
  virtual std::int64_t ord_mod(const TermPtr& t, std::int64_t n);
  virtual bool vf_equal(const TermPtr& a, const TermPtr& b) = 0;
};

/// Backend over concrete field elements assigned to the VF variables.
class ElemBackend : public VfBackend {
 public:
  ElemBackend(const FieldDesc& field, std::map<std::string, Elem> assignment);
  const ResidueField& residue() const override { return residue_field(field_); }
  ResidueElem ac(const TermPtr& t) override { return value(t).ac(); }
  std::int64_t ord(const TermPtr& t) override { return value(t).ord(); }
  bool vf_equal(const TermPtr& a, const TermPtr& b) override;
  Elem value(const TermPtr& t);

 private:
  FieldDesc field_;
  std::map<std::string, Elem> assignment_;
};

struct EvalOptions {
  /// Value-group formulas (ord terms, VG quantifiers) are decided in Z^(d)
  /// with ord values as integer constants. Atoms comparing an infinite ord
  /// are decided by the +infinity convention; inside pi_n an infinite ord counts as 0.
  std::int64_t vg_model_d = 6;
};

/// Truth value of f. RF quantifiers range over the residue field, VGQ(n)
/// quantifiers over Z/n, ord_n is ord mod n. Throws PrecisionError when some
/// needed ord/ac is not certified, std::invalid_argument on VF quantifiers.
bool eval_formula(const FormulaPtr& f, VfBackend& backend, const EvalOptions& options = {});
bool eval_formula(const FormulaPtr& f, const std::map<std::string, Elem>& assignment,
                  const FieldDesc& field, const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Orbit invariants

struct InvariantSpec {
  std::vector<Polynomial> f;
  std::vector<std::string> vars;
  std::int64_t d = 1;
};

struct InvariantVector {
  std::vector<ResidueElem> ac;
  std::vector<std::int64_t> ord_class;  // ord mod d, ord(0) = 0

  friend bool operator==(const InvariantVector&, const InvariantVector&) = default;
  friend auto operator<=>(const InvariantVector&, const InvariantVector&) = default;
  nlohmann::json to_json() const;
};

InvariantVector orbit_invariants(const std::vector<Elem>& x, const InvariantSpec& spec);

/// g . (x_1..x_k) = (g_1^{n_1} x_1, ..., g_k^{n_k} x_k) with g in G_m^k.
/// A single weight n is the Kummer action of G_m on G_m.
struct ActionSpec {
  std::vector<std::int64_t> weights;

  static ActionSpec kummer(std::int64_t n) { return ActionSpec{{n}}; }
  static ActionSpec parse(const std::string& text);  // "kummer:3" or "torus:2,3"
  std::size_t dimension() const { return weights.size(); }
  /// Throws std::invalid_argument if some weight < 2 or divisible by p.
  void validate(std::int64_t p) const;
  std::string str() const;
};

/// Invariant spec suggested by Kummer theory: f_i = x_i, d = lcm of the weights.
InvariantSpec kummer_invariant_spec(const ActionSpec& action);

enum class OrbitVerdict { Same, Different, Unknown };

struct OrbitDecision {
  OrbitVerdict verdict = OrbitVerdict::Unknown;
  std::vector<Elem> witness;  // g with g . x = y, when Same
  std::string reason;
};

OrbitDecision same_orbit(const std::vector<Elem>& x, const std::vector<Elem>& y,
                         const ActionSpec& action, const FieldDesc& field);

/// n-th root of an n-th power z (p not dividing n), to the field precision.
std::optional<Elem> nth_root(const Elem& z, std::int64_t n);

struct CensusOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::int64_t vmin = -6, vmax = 6;
};

struct CensusReport {
  std::size_t buckets = 0;  // distinct invariant vectors seen
  std::size_t classes = 0;  // orbits seen (buckets merged by same_orbit)
  std::size_t violations = 0;
  std::size_t unknown = 0;
  std::vector<std::pair<InvariantVector, std::size_t>> table;  // vector -> class id
  std::vector<std::string> violation_examples;

  /// Class id of a vector seen in the census.
  std::optional<std::size_t> class_of(const InvariantVector& v) const;
  nlohmann::json to_json() const;
};

/// Samples points of (K^x)^k, buckets them by invariant vector, checks that a
/// bucket never mixes orbits and merges buckets lying in one orbit.
CensusReport class_census(const InvariantSpec& spec, const ActionSpec& action, const FieldDesc& field,
                          const CensusOptions& options = {});

/// Orbit of a point of G_m under the Kummer action, as a tame formula in x:
/// ord_n(x) = k and ac(x) in c * (k^x)^n.
FormulaPtr kummer_orbit_formula(std::int64_t n, std::int64_t k, ResidueElem c, const std::string& x = "x");

struct KummerClass {
  std::int64_t valuation_class;
  ResidueElem ac_representative;
};

/// One representative per orbit of the Kummer action on Q_p^x (p not dividing n).
std::vector<KummerClass> kummer_classes(std::int64_t n, std::int64_t p);

/// Number of Kummer orbits computed independently: n times the index of the
/// n-th powers in (Z/p^3)^x, found by enumeration.
std::size_t kummer_class_count_mod_p3(std::int64_t n, std::int64_t p);

}  // namespace tamelab
