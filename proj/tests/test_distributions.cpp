#include <doctest.h>

#include <cmath>
#include <tuple>

#include "dopt/distributions.hpp"
#include "oracles.hpp"

using namespace dopt;

TEST_CASE("incomplete beta matches frozen reference values") {
  // (a, b, x, I_x(a, b), 1 - I_x(a, b)) from an independent statistics library.
  const std::tuple<double, double, double, double, double> cases[] = {
      {1, 1, 0.3, 0.3, 0.7},
      {5, 5, 0.5, 0.5, 0.5},
      {5, 5, 0.2, 0.019581440000000012, 0.98041856},
      {3, 5, 0.7, 0.9712045, 0.02879550000000002},
      {5, 3, 0.35, 0.05560753515624997, 0.9443924648437501},
      {0.5, 2.5, 0.01, 0.1689177210279435, 0.8310822789720566},
      {2.5, 0.7, 0.999, 0.9840694524243256, 0.01593054757567424},
      {30, 40, 0.45, 0.6447480085585666, 0.3552519914414319},
      {5, 5, 0.98, 0.9999996229968282, 3.7700317184000164e-07},
  };
  for (const auto& [a, b, x, cdf, sf] : cases) {
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(x);
    CHECK(regularized_incomplete_beta(a, b, x) == doctest::Approx(cdf).epsilon(1e-12));
    const SenderDist d(a, b, 2.0);
    CHECK(d.cdf(2.0 * x) == doctest::Approx(cdf).epsilon(1e-12));
    CHECK(d.survival(2.0 * x) == doctest::Approx(sf).epsilon(1e-11));
  }
  // Deep upper tail keeps relative precision.
  const SenderDist d(5, 5, 3.0);
  CHECK(d.survival(2.9999) == doctest::Approx(5.184609078272304e-21).epsilon(1e-9));
}

TEST_CASE("incomplete beta symmetry and monotonicity") {
  oracle::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.3, 8), b = rng.uniform(0.3, 8), x = rng.uniform(0, 1);
    CHECK(regularized_incomplete_beta(a, b, x) + regularized_incomplete_beta(b, a, 1 - x) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const double y = std::min(1.0, x + 0.01);
    CHECK(regularized_incomplete_beta(a, b, y) >= regularized_incomplete_beta(a, b, x));
  }
  CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
}

TEST_CASE("density matches an lgamma oracle and integrates to one") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {5.0, 5.0}, {3.0, 5.0}, {5.0, 3.0}, {2.5, 1.5}}) {
    const SenderDist d(a, b, 3.0);
    for (double z : {0.1, 0.7, 1.5, 2.2, 2.95})
      CHECK(d.pdf(z) == doctest::Approx(oracle::beta_pdf(a, b, 3.0, z)).epsilon(1e-12));
    CHECK(d.partial_moment(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("partial moments and the mean identity") {
  oracle::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const double a = rng.uniform(1, 6), b = rng.uniform(1, 6), zbar = rng.uniform(1, 3);
    const SenderDist d(a, b, zbar);
    CHECK(d.partial_moment(0.0, 1.0) == doctest::Approx(d.mean()).epsilon(1e-10));
    CHECK(d.mean() == doctest::Approx(zbar * a / (a + b)).epsilon(1e-15));
    const double c = rng.uniform(0, zbar * 0.9);
    // E[z | z >= c] times the tail mass is the first partial moment.
    CHECK(d.trunc_mean(c) * d.survival(c) == doctest::Approx(d.partial_moment(c, 1.0)).epsilon(1e-10));
    const double p = rng.uniform(0, 2);
    auto f = [&](double z) { return std::pow(z, p) * oracle::beta_pdf(a, b, zbar, z); };
    CHECK(d.partial_moment(c, p) == doctest::Approx(oracle::simpson(f, c, zbar, 1e-13)).epsilon(1e-8));
  }
}

TEST_CASE("truncated means against frozen references") {
  const std::tuple<double, double, double, double, double> cases[] = {
      {5, 3, 1.2, 1.971367112810708, 0.47880000000000006},
      {3, 5, 2.5, 2.5872326203208593, 0.000775177183356196},
      {5, 5, 2.9, 2.9169410960625344, 1.5884373571101859e-06},
      {1, 1, 0.7, 1.85, 0.4850957442022806},
  };
  for (const auto& [a, b, c, mean, inv] : cases) {
    const SenderDist d(a, b, 3.0);
    CHECK(d.trunc_mean(c) == doctest::Approx(mean).epsilon(1e-10));
    CHECK(d.partial_moment(c, -1.0) == doctest::Approx(inv).epsilon(1e-9));
  }
}

TEST_CASE("truncated mean edge behaviour") {
  const SenderDist uniform(1, 1, 3.0);
  for (double c : {0.0, 0.5, 1.75, 2.9})
    CHECK(uniform.trunc_mean(c) == doctest::Approx((c + 3.0) / 2.0).epsilon(1e-12));
  CHECK(uniform.trunc_mean(3.0) == 3.0);
  CHECK(uniform.trunc_mean(3.0 - 1e-10) == 3.0);

  const SenderDist d(5, 5, 3.0);
  double prev = d.trunc_mean(0.0);
  CHECK(prev == doctest::Approx(d.mean()).epsilon(1e-12));
  for (int i = 1; i < 300; ++i) {
    const double c = 3.0 * i / 300.0;
    const double m = d.trunc_mean(c);
    CHECK(m >= c);
    CHECK(m <= 3.0);
    CHECK(m >= prev - 1e-12);
    prev = m;
  }
}

TEST_CASE("quantile inverts the cdf") {
  const SenderDist d(3, 5, 3.0);
  CHECK(d.quantile(0.3) == doctest::Approx(0.8290190817147203).epsilon(1e-10));
  for (double p : {0.01, 0.25, 0.5, 0.9, 0.999}) CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("invalid distributions and out-of-support queries") {
  CHECK_THROWS_AS(SenderDist(0.0, 1.0, 3.0), ConfigError);
  CHECK_THROWS_AS(SenderDist(1.0, -2.0, 3.0), ConfigError);
  CHECK_THROWS_AS(SenderDist(1.0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(SenderDist(1.0, 1.0, std::nan("")), ConfigError);
  const SenderDist d(2, 2, 1.0);
  CHECK_THROWS_AS(d.pdf(-0.1), DomainError);
  CHECK_THROWS_AS(d.pdf(1.1), DomainError);
  CHECK(d.cdf(-1.0) == 0.0);
  CHECK(d.cdf(2.0) == 1.0);
}
