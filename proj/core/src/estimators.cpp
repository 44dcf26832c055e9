#include "srcv/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>

#include "srcv/error.hpp"
#include "srcv/parallel.hpp"

namespace srcv {
namespace {

double pairwise(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(data, half) + pairwise(data + half, n - half);
}

void check_compatible(const PathSet& paths, const CvModel& cv) {
  if (paths.scheme() != cv.scheme || paths.n_steps() != cv.n_steps ||
      paths.law().dim_noise() != cv.model.dim_noise || paths.dim_state() != cv.model.dim_state) {
    throw Error(ErrorKind::OrderMismatch, "testing paths do not match the control variate's scheme or grid");
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise(values.data(), values.size()); }

std::vector<double> smc_summands(const PathSet& paths, const Payoff& payoff, std::size_t workers) {
  std::vector<double> out(paths.n_paths());
  parallel_for(out.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = payoff(paths.terminal(i));
  });
  return out;
}

std::vector<double> martingale_values(const PathSet& paths, const CvModel& cv, std::size_t workers) {
  check_compatible(paths, cv);
  std::vector<double> out(paths.n_paths());
  parallel_for(out.size(), workers, [&](std::size_t begin, std::size_t end) {
    CvEvaluator evaluator(cv);
    for (std::size_t i = begin; i < end; ++i) out[i] = evaluator.martingale(paths, i);
  });
  return out;
}

std::vector<double> cv_summands(const PathSet& paths, const Payoff& payoff, const CvModel& cv,
                                std::size_t workers) {
  check_compatible(paths, cv);
  std::vector<double> out(paths.n_paths());
  parallel_for(out.size(), workers, [&](std::size_t begin, std::size_t end) {
    CvEvaluator evaluator(cv);
    for (std::size_t i = begin; i < end; ++i) out[i] = payoff(paths.terminal(i)) - evaluator.martingale(paths, i);
  });
  return out;
}

EstimateReport summarize(std::string method, std::span<const double> summands, std::size_t max_ecdf_points) {
  const std::size_t n = summands.size();
  if (n < 2) throw Error(ErrorKind::EmptySample, "at least two summands are required");
  EstimateReport report;
  report.method = std::move(method);
  report.n_testing = n;
  report.mean = pairwise_sum(summands) / static_cast<double>(n);
  std::vector<double> squares(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = summands[i] - report.mean;
    squares[i] = dev * dev;
  }
  report.sample_variance = pairwise_sum(squares) / static_cast<double>(n - 1);
  report.standard_error = std::sqrt(report.sample_variance / static_cast<double>(n));
  const auto scaled = log_scaled_sample(summands);
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  report.log_min = *lo;
  report.log_max = *hi;
  report.ecdf = ecdf(scaled, max_ecdf_points);
  return report;
}

EstimateReport estimate_smc(const PathSet& testing, const Payoff& payoff, std::size_t workers) {
  const auto values = smc_summands(testing, payoff, workers);
  return summarize("smc", values);
}

EstimateReport estimate_cv(const PathSet& testing, const Payoff& payoff, const CvModel& cv, std::size_t workers) {
  const auto values = cv_summands(testing, payoff, cv, workers);
  return summarize(std::string(to_string(cv.method)), values);
}

std::vector<double> log_scaled_sample(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySample, "log-scaled sample of an empty vector");
  const double u_min = *std::min_element(values.begin(), values.end());
  const double u_bar = pairwise_sum(values) / static_cast<double>(values.size());
  // u_bar can fall below u_min by rounding when all values are equal
  const double shift = std::log1p(std::max(0.0, u_bar - u_min));
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::log1p(values[i] - u_min) - shift;
  return out;
}

std::vector<EcdfPoint> ecdf(std::span<const double> values, std::size_t max_points) {
  if (values.empty()) throw Error(ErrorKind::EmptySample, "ECDF of an empty sample");
  if (max_points < 2) throw Error(ErrorKind::InvalidArgument, "ECDF needs max_points >= 2");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<EcdfPoint> steps;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    steps.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  if (steps.size() <= max_points) return steps;
  std::vector<EcdfPoint> thinned;
  thinned.reserve(max_points);
  const std::size_t last = steps.size() - 1;
  for (std::size_t k = 0; k < max_points; ++k) {
    const std::size_t idx = static_cast<std::size_t>(
        static_cast<std::uint64_t>(k) * last / (max_points - 1));
    thinned.push_back(steps[idx]);
  }
  return thinned;
}

double theta_metric(double var_method, double time_method, double var_smc, double time_smc) {
  if (var_smc == 0.0 || time_smc == 0.0) {
    throw Error(ErrorKind::DegenerateBaseline, "baseline variance and time must be non-zero");
  }
  return (var_method / var_smc) * (time_method / time_smc);
}

nlohmann::json to_json(const EstimateReport& report) {
  nlohmann::json ecdf_json = nlohmann::json::array();
  for (const auto& p : report.ecdf) ecdf_json.push_back({p.value, p.probability});
  return {
      {"method", report.method},
      {"mean", report.mean},
      {"sample_variance", report.sample_variance},
      {"standard_error", report.standard_error},
      {"log_min", report.log_min},
      {"log_max", report.log_max},
      {"n_testing", report.n_testing},
      {"n_training", report.n_training},
      {"train_seconds", report.train_seconds},
      {"test_seconds", report.test_seconds},
      {"theta", report.theta ? nlohmann::json(*report.theta) : nlohmann::json(nullptr)},
      {"ecdf", std::move(ecdf_json)},
  };
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_ecdf_csv(std::ostream& out, std::span<const EcdfPoint> points) {
  out << "value,probability\n";
  for (const auto& p : points) out << format_double(p.value) << ',' << format_double(p.probability) << '\n';
}

}  // namespace srcv
