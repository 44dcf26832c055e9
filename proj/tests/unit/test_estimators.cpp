#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "../support/oracles.hpp"
#include "srcv/error.hpp"
#include "srcv/estimators.hpp"
#include "srcv/oracle.hpp"
#include "srcv/planner.hpp"

using namespace srcv;

namespace {

// Every innovation sequence of a 1d weak Euler chain, one path each.
PathSet exhaustive_paths(const ModelSpec& model, std::size_t J) {
  const std::size_t n = std::size_t{1} << J;
  PathSet paths(model, Scheme::euler1, J, n, 0);
  Stepper stepper(model, Scheme::euler1, paths.delta());
  for (std::size_t i = 0; i < n; ++i) {
    paths.state(i, 0)[0] = model.x0(0);
    for (std::size_t j = 1; j <= J; ++j) {
      paths.codes(i, j)[0] = (i >> (j - 1)) & 1 ? 1 : -1;
      stepper.step_codes(paths.state(i, j - 1), paths.codes(i, j), paths.state(i, j));
    }
  }
  return paths;
}

}  // namespace

TEST_CASE("standard Monte Carlo estimator") {
  const auto b = builtin_model("gbm1d_highvol");
  const auto paths = simulate_paths(b.model, Scheme::euler1, 3, 500, 1);
  const auto c = estimate_smc(paths, make_payoff("constant:2.5"));
  CHECK(c.mean == 2.5);
  CHECK(c.sample_variance == 0.0);
  CHECK(c.method == "smc");
  CHECK(c.n_testing == 500);

  const auto short_model = make_gbm1d("short", -1.0, 4.0, 1.0, 0.01);
  const auto two = exhaustive_paths(short_model, 1);
  CHECK(estimate_smc(two, make_payoff("square")).mean == doctest::Approx(1.1401).epsilon(1e-14));

  const std::vector<double> v{0.0, 2.0};
  CHECK(summarize("x", v).sample_variance == 2.0);
  const std::vector<double> single{1.0};
  CHECK_THROWS_AS(summarize("x", single), Error);
}

TEST_CASE("zero control variate reproduces SMC bit for bit") {
  const auto b = builtin_model("gbm10d");
  const auto paths = simulate_paths(b.model, Scheme::euler1, 4, 3000, 2);
  const BasisSet basis(10, 1, b.payoff);
  const auto zero = zero_cv_model(b.model, b.payoff, Scheme::euler1, 4, basis, true);
  const auto smc = estimate_smc(paths, b.payoff);
  const auto cv = estimate_cv(paths, b.payoff, zero);
  CHECK(cv.mean == smc.mean);
  CHECK(cv.sample_variance == smc.sample_variance);
  CHECK(cv.log_min == smc.log_min);
  CHECK(cv.log_max == smc.log_max);
  REQUIRE(cv.ecdf.size() == smc.ecdf.size());
  for (std::size_t i = 0; i < cv.ecdf.size(); ++i) {
    CHECK(cv.ecdf[i].value == smc.ecdf[i].value);
    CHECK(cv.ecdf[i].probability == smc.ecdf[i].probability);
  }
}

TEST_CASE("trained SRCV on the exhaustive tree has no variance left") {
  const auto m = make_gbm1d("short", -1.0, 4.0, 1.0, 0.02);
  const Payoff square = make_payoff("square");
  const auto train = simulate_paths(m, Scheme::euler1, 2, 300, 3);
  const auto cv = train_srcv(train, BasisSet(1, 1, square), square);
  const auto tree = exhaustive_paths(m, 2);
  const auto est = estimate_cv(tree, square, cv);
  CHECK(est.sample_variance <= 1e-12);
  const auto exact = exact_coefficients_enumeration(m, square, Scheme::euler1, 2);
  CHECK(est.mean == doctest::Approx(exact.mean()).epsilon(1e-12));
}

TEST_CASE("trained control variates agree with SMC in mean on independent paths") {
  const auto b = builtin_model("gbm1d_highvol");
  const BasisSet basis(1, 1, b.payoff);
  const auto training = simulate_paths(b.model, Scheme::euler1, 5, 2000, 11);
  const auto test_cv = simulate_paths(b.model, Scheme::euler1, 5, 50'000, 12);
  const auto test_smc = simulate_paths(b.model, Scheme::euler1, 5, 50'000, 13);
  const auto smc = estimate_smc(test_smc, b.payoff);
  for (auto method : {CvMethod::rcv, CvMethod::rrcv, CvMethod::srcv}) {
    const auto est = estimate_cv(test_cv, b.payoff, train(method, training, basis, b.payoff));
    const double tol = 4 * std::sqrt(est.sample_variance / 50'000 + smc.sample_variance / 50'000);
    CHECK(std::abs(est.mean - smc.mean) <= tol);
    CHECK(est.method == to_string(method));
  }
}

TEST_CASE("summands are independent of the worker count") {
  const auto b = builtin_model("heston9d");
  const auto train = simulate_paths(b.model, Scheme::heston_trunc, 3, 500, 1);
  const auto test = simulate_paths(b.model, Scheme::heston_trunc, 3, 2001, 2);
  const auto cv = train_srcv(train, BasisSet(9, 1, b.payoff), b.payoff, {.simplified = true});
  const auto a = cv_summands(test, b.payoff, cv, 1);
  const auto c = cv_summands(test, b.payoff, cv, 3);
  CHECK(a == c);
  CHECK(summarize("srcv", a).mean == summarize("srcv", c).mean);
}

TEST_CASE("log-scaled sample") {
  const std::vector<double> v{1.0, 2.0, 10.0};
  const auto s = log_scaled_sample(v);
  CHECK(s[0] == doctest::Approx(-std::log(13.0 / 3.0)).epsilon(1e-14));
  CHECK(s[0] == doctest::Approx(-1.4663).epsilon(1e-4));
  CHECK(s[1] == doctest::Approx(std::log(2.0) - std::log(13.0 / 3.0)).epsilon(1e-14));
  const std::vector<double> c{4.2, 4.2};
  const auto sc = log_scaled_sample(c);
  CHECK(sc[0] == 0.0);
  CHECK(sc[1] == 0.0);
  CHECK_THROWS_AS(log_scaled_sample(std::vector<double>{}), Error);
}

TEST_CASE("property: log-scaled sample is monotone and maps the minimum below zero") {
  std::mt19937_64 gen(4);
  std::lognormal_distribution<double> heavy(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + trial % 50);
    for (auto& x : v) x = heavy(gen) - 2.0;
    const auto s = log_scaled_sample(v);
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < v[argmin]) argmin = i;
      for (std::size_t k = 0; k < v.size(); ++k)
        if (v[i] < v[k]) REQUIRE(s[i] <= s[k]);
    }
    REQUIRE(s[argmin] <= 0.0);
  }
}

TEST_CASE("empirical CDF") {
  const auto e = ecdf(std::vector<double>{3.0, 1.0, 2.0});
  REQUIRE(e.size() == 3);
  CHECK(e[0].value == 1.0);
  CHECK(e[0].probability == doctest::Approx(1.0 / 3));
  CHECK(e[1].value == 2.0);
  CHECK(e[1].probability == doctest::Approx(2.0 / 3));
  CHECK(e[2].value == 3.0);
  CHECK(e[2].probability == 1.0);

  const auto one = ecdf(std::vector<double>{5.0});
  REQUIRE(one.size() == 1);
  CHECK(one[0].value == 5.0);
  CHECK(one[0].probability == 1.0);

  const auto ties = ecdf(std::vector<double>{1.0, 1.0, 2.0, 2.0});
  REQUIRE(ties.size() == 2);
  CHECK(ties[0].probability == 0.5);
  CHECK(ties[1].probability == 1.0);

  CHECK_THROWS_AS(ecdf(std::vector<double>{1.0}, 1), Error);
}

TEST_CASE("ECDF thinning keeps exact probabilities") {
  const std::size_t n = 1'000'000;
  std::vector<double> v(n);
  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal;
  for (auto& x : v) x = normal(gen);
  const auto full = ecdf(v, n);
  const auto thin = ecdf(v, 10'000);
  REQUIRE(full.size() == n);
  REQUIRE(thin.size() == 10'000);
  CHECK(thin.front().value == full.front().value);
  CHECK(thin.back().value == full.back().value);
  CHECK(thin.back().probability == 1.0);
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < thin.size(); ++k) {
    const auto count = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), thin[k].value) - sorted.begin());
    REQUIRE(thin[k].probability == count / static_cast<double>(n));
    if (k > 0) REQUIRE(thin[k].probability > thin[k - 1].probability);
  }
}

TEST_CASE("theta metric") {
  CHECK(theta_metric(0.1, 2.0, 1.0, 1.0) == doctest::Approx(0.2));
  CHECK(theta_metric(3.0, 7.0, 3.0, 7.0) == 1.0);
  const double rrcv = theta_metric(2.7e16, 65.3, 9.6e15, 15.1);
  CHECK(rrcv == doctest::Approx(12.16).epsilon(1e-3));
  CHECK(std::abs(rrcv - 12.38) / 12.38 <= 0.03);
  try {
    theta_metric(1.0, 1.0, 0.0, 1.0);
    FAIL("expected DegenerateBaseline");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateBaseline);
  }
  CHECK_THROWS_AS(theta_metric(1.0, 1.0, 1.0, 0.0), Error);

  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen), d = u(gen), s = u(gen), t = u(gen);
    REQUIRE(theta_metric(s * a, t * b, s * c, t * d) == doctest::Approx(theta_metric(a, b, c, d)).epsilon(1e-12));
  }
}

TEST_CASE("report serialisation") {
  const std::vector<double> v{1.0, 2.0, 4.0};
  auto r = summarize("srcv", v);
  r.theta = 0.5;
  r.n_training = 10;
  const auto j = to_json(r);
  CHECK(j["method"] == "srcv");
  CHECK(j["n_testing"] == 3);
  CHECK(j["theta"] == 0.5);
  CHECK(j["ecdf"].size() == 3);
  CHECK(j["sample_variance"].get<double>() == r.sample_variance);

  std::ostringstream csv;
  write_ecdf_csv(csv, std::vector<EcdfPoint>{{0.1, 1.0 / 3}, {-2.5, 1.0}});
  CHECK(csv.str() == "value,probability\n0.10000000000000001,0.33333333333333331\n-2.5,1\n");
  CHECK(format_double(1e-300) == "1e-300");
  for (double x : {0.1, 1.0 / 3, 6.02214076e23, -1e-17}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  // 1 + many tiny values: pairwise keeps them
  std::vector<double> w(1 << 20, 1e-16);
  w[0] = 1.0;
  CHECK(pairwise_sum(w) == doctest::Approx(1.0 + 1e-16 * ((1 << 20) - 1)).epsilon(1e-15));
}

TEST_CASE("planner complexity exponent") {
  CHECK(complexity_exponent(Rational(9)) == Rational(2));
  CHECK(complexity_exponent(Rational(3)) == Rational(19, 8));
  CHECK(boost::rational_cast<double>(complexity_exponent(Rational(3))) == 2.375);
  Rational previous = complexity_exponent(Rational(3, 2));
  for (std::int64_t k : {2, 5, 9, 10, 100, 1000, 1'000'000}) {
    const Rational e = complexity_exponent(Rational(k));
    CHECK(e < previous);
    CHECK(e > Rational(7, 4));
    previous = e;
  }
  CHECK(complexity_exponent(Rational(1'000'000)) - Rational(7, 4) == Rational(10, 4'000'004));
  CHECK(complexity_exponent(Rational(10)) < Rational(2));
  CHECK(complexity_exponent(Rational(8)) > Rational(2));
  try {
    complexity_exponent(Rational(1));
    FAIL("expected KappaOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KappaOutOfRange);
  }
}

TEST_CASE("planner parameters") {
  const PlannerInput in{.epsilon = 0.01, .kappa = Rational(3), .c_m = 2.0, .C_kappa = 1.0, .tilde_c_m = 0.5};
  const auto out = plan_parameters(in);
  CHECK(out.J == 10);
  const double k = std::pow(0.25 / (2.0 * std::pow(0.01, 2.5)), 1.0 / 8.0);
  CHECK(out.K == static_cast<std::uint64_t>(std::ceil(k)));
  const double n = std::sqrt(2.0) * std::pow(0.01, -1.25) * std::sqrt(std::log(std::pow(0.01, -1.25)));
  CHECK(out.N == static_cast<std::uint64_t>(std::ceil(n)));
  CHECK(out.complexity_exponent == Rational(19, 8));
  CHECK_THROWS_AS(plan_parameters({.epsilon = 1.5}), Error);
  CHECK_THROWS_AS(plan_parameters({.epsilon = 0.1, .kappa = Rational(1, 2)}), Error);
  CHECK(tilde_c_m(4.0, 2) == doctest::Approx(1.75));

  // cost balance N K ~ (c_m - 1) N0 up to rounding, across inputs
  for (double eps : {0.3, 0.1, 0.01, 1e-3}) {
    for (std::int64_t kap : {2, 3, 9, 20}) {
      for (unsigned m : {1u, 2u, 3u}) {
        const double c = std::pow(2.0, m);
        const auto p = plan_parameters({.epsilon = eps, .kappa = Rational(kap), .c_m = c, .C_kappa = 1.0,
                                        .tilde_c_m = tilde_c_m(c, m)});
        const double lhs = static_cast<double>(p.N) * static_cast<double>(p.K);
        const double rhs = (c - 1) * static_cast<double>(p.N0);
        REQUIRE(rhs >= lhs);
        REQUIRE(rhs - lhs < c - 1 + 1e-6 * lhs);
        REQUIRE(p.J >= 1);
        REQUIRE(p.K >= 1);
      }
    }
  }
}
