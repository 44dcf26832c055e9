#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "srcv/cv_model.hpp"
#include "srcv/path_set.hpp"

namespace srcv {

struct EcdfPoint {
  double value = 0.0;
  double probability = 0.0;
};

struct EstimateReport {
  std::string method;
  double mean = 0.0;
  /// Unbiased sample variance of one summand.
  double sample_variance = 0.0;
  double standard_error = 0.0;
  /// Range of the log-scaled sample.
  double log_min = 0.0;
  double log_max = 0.0;
  std::size_t n_testing = 0;
  std::size_t n_training = 0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  std::optional<double> theta;
  /// ECDF of the log-scaled sample.
  std::vector<EcdfPoint> ecdf;
};

inline constexpr std::size_t kDefaultEcdfPoints = 10'000;

/// Sum by recursive halving; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// f(X_T^(i)) for every path.
std::vector<double> smc_summands(const PathSet& paths, const Payoff& payoff, std::size_t workers = 1);
/// M~^(i) for every path.
std::vector<double> martingale_values(const PathSet& paths, const CvModel& cv, std::size_t workers = 1);
/// f(X_T^(i)) - M~^(i) for every path. Throws OrderMismatch.
std::vector<double> cv_summands(const PathSet& paths, const Payoff& payoff, const CvModel& cv,
                                std::size_t workers = 1);

/// Mean, unbiased variance, log-scaled range and ECDF of a sample of summands.
/// Throws EmptySample when fewer than two values are given.
EstimateReport summarize(std::string method, std::span<const double> summands,
                         std::size_t max_ecdf_points = kDefaultEcdfPoints);

EstimateReport estimate_smc(const PathSet& testing, const Payoff& payoff, std::size_t workers = 1);
EstimateReport estimate_cv(const PathSet& testing, const Payoff& payoff, const CvModel& cv,
                           std::size_t workers = 1);

/// log(1 + u_i - u_min) - log(1 + u_bar - u_min).
std::vector<double> log_scaled_sample(std::span<const double> values);

/// Step points (x, #{values <= x} / n) at the distinct values, thinned to at
/// most max_points by uniform subsampling that keeps the first and last.
std::vector<EcdfPoint> ecdf(std::span<const double> values, std::size_t max_points = kDefaultEcdfPoints);

/// (var_method / var_smc) * (time_method / time_smc). Throws DegenerateBaseline
/// when a baseline quantity is zero.
double theta_metric(double var_method, double time_method, double var_smc, double time_smc);

nlohmann::json to_json(const EstimateReport& report);
/// Two columns "value,probability", 17 significant digits.
void write_ecdf_csv(std::ostream& out, std::span<const EcdfPoint> points);
/// 17 significant digits, general notation.
std::string format_double(double value);

}  // namespace srcv
