#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tamelab {

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  std::size_t qe_formulas = 500;
  std::size_t rewrite_samples = 10000;  // per relation and prime
  std::size_t orbit_pairs = 1000;       // per (n, p)
  int numeric_depth = 12;
  std::vector<int> only;  // criterion ids to run; empty runs all
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  nlohmann::json details;
  double seconds = 0;

  std::string line() const;  // "PASS [3] igusa-catalog: ..."
  nlohmann::json to_json(bool timing) const;
};

CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// Runs the selected criteria in order; on_result is called after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

inline constexpr int kCriteria = 7;

}  // namespace tamelab
