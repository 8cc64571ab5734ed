#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgwe/config.hpp"

namespace sgwe {

/// Regression bounds frozen from the first full measurement with base seed
/// 20240601 on the default grid.
namespace frozen {
/// besov/product ratios lie in [1/C, C].
inline constexpr double kBesovProductC = 1.25;
/// to_null isomorphism ratios lie in [1/C, C].
inline constexpr double kIsomorphismC = 1.6;
/// Largest allowed localized inverse-estimate ratio (smooth and rough inputs).
inline constexpr double kInverseEstimate = 4.0;  // measured 2.94
/// Composition constants, squared form.
inline constexpr double kCompositionC1 = 0.3;   // measured 0.206
inline constexpr double kCompositionC2 = 0.02;  // measured 0.0143
/// Allowed change of a measured constant when N doubles.
inline constexpr double kRefinementFactor = 1.5;
}  // namespace frozen

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  RunConfig config = RunConfig::defaults();  // base_seed required
  std::filesystem::path out_dir = "acceptance";
  int workers = 1;
  bool check_determinism = true;  // criterion 10 reruns 1-9 and compares CSV bytes
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_pass = true;
  nlohmann::json timings;  // seconds per criterion; kept out of the CSVs
};

using ResultSink = std::function<void(const CriterionResult&)>;

/// Runs criteria 1-10, writing one CSV per criterion plus acceptance.csv and
/// manifest.json under out_dir. `sink` sees each result as soon as it is known.
AcceptanceReport run_acceptance(const AcceptanceOptions& opt, const ResultSink& sink = {});

/// "PASS criterion k: title [detail]" or the FAIL counterpart.
std::string format_result(const CriterionResult& r);

}  // namespace sgwe
