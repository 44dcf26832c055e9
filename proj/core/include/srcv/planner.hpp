#pragma once

#include <cstdint>

#include <boost/rational.hpp>

namespace srcv {

using Rational = boost::rational<std::int64_t>;

struct PlannerInput {
  double epsilon = 0.01;
  Rational kappa{2};
  double c_m = 2.0;
  double C_kappa = 1.0;
  double tilde_c_m = 1.0;
};

struct PlannerOutput {
  std::uint64_t J = 1;
  std::uint64_t K = 1;
  std::uint64_t N = 1;
  std::uint64_t N0 = 1;
  Rational complexity_exponent;
};

/// (7 kappa + 17) / (4 kappa + 4): the cost grows like eps^{-exponent}.
/// Throws KappaOutOfRange if kappa <= 1.
Rational complexity_exponent(Rational kappa);

/// Complexity-optimal J, K, N, N0 with unit proportionality constants,
/// rounded up to integers (at least 1). N0 is derived from the rounded N
/// and K so that N K ~ (c_m - 1) N0.
/// Throws KappaOutOfRange if kappa <= 1 and InvalidArgument unless
/// 0 < epsilon < 1, c_m >= 2 and the constants are positive.
PlannerOutput plan_parameters(const PlannerInput& input);

/// c_m - (3/2)^m.
double tilde_c_m(double c_m, unsigned m);

}  // namespace srcv
