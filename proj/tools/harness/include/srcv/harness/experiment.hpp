#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "srcv/estimators.hpp"
#include "srcv/harness/config.hpp"

namespace srcv::harness {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "SRCV_OUTPUT_DIR";

struct ExperimentResult {
  std::vector<EstimateReport> reports;  ///< in the order of config.methods
  std::vector<std::filesystem::path> files;
};

/// Output directory: `override_dir` if non-empty, else config.output_dir,
/// else $SRCV_OUTPUT_DIR, else "srcv_output".
std::filesystem::path resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir = {});

/// Simulates training and testing paths, trains the requested control
/// variates and writes, per method, <method>_report.json and
/// <method>_ecdf.csv (log-scaled sample), <method>_cvmodel.json for
/// trained methods, and a combined summary.csv with columns
/// method,min,max,variance,time_seconds,theta.
///
/// Paths come from method_seed(seed_train / seed_test, method), so with
/// common_random_numbers every method sees the same paths. Progress lines
/// go to `log` if given.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& output_dir,
                                std::ostream* log = nullptr);

/// Header line of summary.csv.
inline constexpr const char* kSummaryHeader = "method,min,max,variance,time_seconds,theta";

}  // namespace srcv::harness
