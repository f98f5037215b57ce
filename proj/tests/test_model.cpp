#include <doctest.h>

#include <cmath>

#include "dopt/model.hpp"
#include "oracles.hpp"

using namespace dopt;

TEST_CASE("baseline primitives") {
  const ModelParams p;
  CHECK(surplus_v(p, 2.0, 4.0, 1.5) == doctest::Approx(6.0));
  CHECK(cost_c(p, 2.0, 4.0) == doctest::Approx(0.5));
  CHECK(match_n(p, 1.7) == doctest::Approx(1.7));
  CHECK(p.signal_weight() == doctest::Approx(3.0));
  ModelParams q = p;
  q.q = 2.0;
  q.k = 0.5;
  CHECK(match_n(q, 3.0) == doctest::Approx(4.5));
}

TEST_CASE("zero action costs nothing, even for the lowest type") {
  const ModelParams p;
  CHECK(cost_c(p, 0.0, 0.0) == 0.0);
  CHECK(cost_c(p, 0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(cost_c(p, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(cost_c(p, 0.1, 1e-7), DomainError);
  CHECK_THROWS_AS(cost_c(p, -0.1, 1.0), DomainError);
}

TEST_CASE("pure signaling: action does not enter surplus") {
  ModelParams p;
  p.a = 0.0;
  CHECK(surplus_v(p, 2.0, 0.0, 1.5) == doctest::Approx(3.0));
  CHECK(surplus_v(p, 2.0, 9.0, 1.5) == doctest::Approx(3.0));
  CHECK(surplus_v_s(p, 2.0, 9.0, 1.5) == 0.0);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  for (auto mutate : {+[](ModelParams& m) { m.A = 0.0; }, +[](ModelParams& m) { m.beta_cost = -1.0; },
                      +[](ModelParams& m) { m.a = 1.0; }, +[](ModelParams& m) { m.a = -0.1; },
                      +[](ModelParams& m) { m.k = 0.0; }, +[](ModelParams& m) { m.q = -0.5; },
                      +[](ModelParams& m) { m.q = std::nan(""); }}) {
    ModelParams bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}

TEST_CASE("derivatives agree with finite differences and have the right signs") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams p = oracle::draw_params(rng);
    const double x = rng.uniform(0.1, 5), s = rng.uniform(0.1, 5), z = rng.uniform(0.1, 3);
    const double h = 1e-6;
    auto fd = [&](auto f, double at) { return (f(at + h) - f(at - h)) / (2 * h); };
    CHECK(surplus_v_s(p, x, s, z) ==
          doctest::Approx(fd([&](double t) { return surplus_v(p, x, t, z); }, s)).epsilon(1e-6));
    CHECK(surplus_v_z(p, x, s, z) ==
          doctest::Approx(fd([&](double t) { return surplus_v(p, x, s, t); }, z)).epsilon(1e-6));
    CHECK(surplus_v_x(p, x, s, z) ==
          doctest::Approx(fd([&](double t) { return surplus_v(p, t, s, z); }, x)).epsilon(1e-6));
    CHECK(cost_c_s(p, s, z) ==
          doctest::Approx(fd([&](double t) { return cost_c(p, t, z); }, s)).epsilon(1e-6));
    CHECK(cost_c_z(p, s, z) ==
          doctest::Approx(fd([&](double t) { return cost_c(p, s, t); }, z)).epsilon(1e-6));

    CHECK(surplus_v_s(p, x, s, z) >= 0.0);
    CHECK(surplus_v_z(p, x, s, z) > 0.0);
    CHECK(surplus_v_x(p, x, s, z) > 0.0);
    CHECK(cost_c_s(p, s, z) > 0.0);
    CHECK(cost_c_z(p, s, z) < 0.0);
  }
}
