#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srcv/regression.hpp"
#include "srcv/schemes.hpp"

namespace srcv::harness {

/// One experiment: a model, a scheme, grid and sample sizes, and the
/// estimators to compare.
///
/// Text form: one `key = value` per line, `#` starts a comment, blank lines
/// are ignored. Keys:
///   model                 builtin model name (required)
///   scheme                euler1 | taylor2 | heston_trunc
///                         (default heston_trunc for heston9d, else euler1)
///   J, N, N0              steps, training paths, testing paths (required;
///                         integers, `1e5` style accepted)
///   p                     polynomial degree of the basis (default 1)
///   include_payoff_basis  true | false (default true)
///   methods               comma list from smc, rcv, rrcv, srcv
///                         (default smc,rcv,rrcv,srcv)
///   simplified_cv         true | false (default false)
///   truncation            positive bound A, or `none` (default none)
///   seed_train, seed_test must differ (defaults 1 and 2)
///   common_random_numbers true | false (default false); when false each
///                         method simulates its own paths from seeds
///                         derived from seed_train / seed_test and the
///                         method name
///   payoff                payoff override, e.g. `call_on_max:1:10`
///   output_dir            output directory
///   workers               worker threads, 0 = all cores (default 0)
///   record_timing         true | false (default true); false writes NA
///                         for times and theta so output files are
///                         reproducible byte for byte
///   ecdf_points           ECDF thinning cap (default 10000)
///   test_chunk            testing paths simulated per batch (default 65536)
///   rcond                 relative singular value cutoff (default 1e-10)
struct ExperimentConfig {
  std::string model;
  Scheme scheme = Scheme::euler1;
  std::size_t J = 0;
  std::size_t N = 0;
  std::size_t N0 = 0;
  unsigned p = 1;
  bool include_payoff_basis = true;
  std::vector<std::string> methods{"smc", "rcv", "rrcv", "srcv"};
  bool simplified_cv = false;
  std::optional<double> truncation;
  std::uint64_t seed_train = 1;
  std::uint64_t seed_test = 2;
  bool common_random_numbers = false;
  std::optional<std::string> payoff;
  std::optional<std::string> output_dir;
  std::size_t workers = 0;
  bool record_timing = true;
  std::size_t ecdf_points = 10'000;
  std::size_t test_chunk = 65'536;
  double rcond = kDefaultRcond;
};

/// Parses the text form. Throws Error(InvalidConfig) naming the line and
/// key on any problem, then validates.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Checks invariants (required keys, sizes >= 1, distinct seeds, known
/// model and methods, model/scheme compatibility). Throws InvalidConfig.
void validate(const ExperimentConfig& config);

/// Seed actually used by `method` for a phase whose base seed is `base`.
/// A bijection in `base` for each method, so distinct base seeds stay
/// distinct.
std::uint64_t method_seed(std::uint64_t base, std::string_view method, bool common_random_numbers);

/// Text form that parse_config reads back to the same config.
std::string to_text(const ExperimentConfig& config);

}  // namespace srcv::harness
