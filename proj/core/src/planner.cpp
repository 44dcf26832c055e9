#include "srcv/planner.hpp"

#include <cmath>
#include <limits>

#include "srcv/error.hpp"

namespace srcv {
namespace {

std::uint64_t ceil_count(double value) {
  if (!(value >= 1.0)) return 1;
  if (value >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil(value));
}

}  // namespace

Rational complexity_exponent(Rational kappa) {
  if (kappa <= Rational(1)) throw Error(ErrorKind::KappaOutOfRange, "kappa must exceed 1");
  return (Rational(7) * kappa + Rational(17)) / (Rational(4) * kappa + Rational(4));
}

PlannerOutput plan_parameters(const PlannerInput& input) {
  PlannerOutput out;
  out.complexity_exponent = complexity_exponent(input.kappa);
  const double eps = input.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  if (!(input.c_m >= 2.0)) throw Error(ErrorKind::InvalidArgument, "c_m must be at least 2");
  if (!(input.C_kappa > 0.0 && input.tilde_c_m > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "planner constants must be positive");
  }
  const double kappa = boost::rational_cast<double>(input.kappa);
  const double log_factor = std::sqrt(std::log(std::pow(eps, -1.25)));

  out.J = ceil_count(std::pow(eps, -0.5));
  const double k_base = input.tilde_c_m * input.tilde_c_m * input.C_kappa * input.C_kappa /
                        (input.c_m * std::pow(eps, 2.5));
  out.K = ceil_count(std::pow(k_base, 1.0 / (2.0 * kappa + 2.0)));
  out.N = ceil_count((input.c_m - 1.0) * std::sqrt(input.c_m) * std::pow(eps, -1.25) * log_factor);
  out.N0 = ceil_count(static_cast<double>(out.N) * static_cast<double>(out.K) / (input.c_m - 1.0));
  return out;
}

double tilde_c_m(double c_m, unsigned m) { return c_m - std::pow(1.5, static_cast<double>(m)); }

}  // namespace srcv
