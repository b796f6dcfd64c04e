#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ehbc/channel.hpp"
#include "ehbc/errors.hpp"
#include "ehbc/instance.hpp"
#include "ehbc/verify.hpp"

using namespace ehbc;

namespace {
const ChannelParams kUnit{1.0, 0.5, 1.0};
}

TEST_CASE("min_power hand values") {
  CHECK(min_power(kUnit, {0.5, 0.5}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(min_power(kUnit, {1.0, 1.0}) == doctest::Approx(18.0).epsilon(1e-14));
  CHECK(min_power(kUnit, {0.0, 0.0}) == 0.0);
  const ChannelParams other{3.0, 0.2, 0.7};
  CHECK(min_power(other, {0.0, 0.0}) == 0.0);
}

TEST_CASE("min_power in physical units: 1.6 kbps to the strong user") {
  ProblemInstance inst;
  inst.bits1 = 1.0;
  inst.harvests = {{0.0, 1.0}};
  inst.units = PhysicalUnits{1e5, 1e-13, {70.0, 75.0}};
  const ProblemInstance norm = to_normalized(inst);
  const double p = min_power(norm.channel, {1600.0 / norm.rate_scale, 0.0});
  CHECK(p == doctest::Approx(1.11e-3).epsilon(0.01));
}

TEST_CASE("rate_strong hand values") {
  CHECK(rate_strong(kUnit, 4.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rate_strong(kUnit, 3.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const double p = 7.3;
  CHECK(std::abs(rate_strong(kUnit, p, rate_weak(kUnit, p, 0.0))) < 1e-14);
  CHECK_THROWS_AS(rate_strong(kUnit, 4.0, rate_weak(kUnit, 4.0, 0.0) + 1e-6), DomainError);
}

TEST_CASE("rate_weak hand values") {
  CHECK(rate_weak(kUnit, 6.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rate_weak(kUnit, 4.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rate_weak(kUnit, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(rate_weak(kUnit, 4.0, rate_strong(kUnit, 4.0, 0.0) + 1e-6), DomainError);
}

TEST_CASE("split_power hand values") {
  SUBCASE("P = 4, equal bits") {
    const SplitResult s = split_power(kUnit, 4.0, 1.0);
    CHECK(s.rates.r1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(s.rates.r2 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(s.split.alpha == doctest::Approx(0.25).epsilon(1e-10));
  }
  SUBCASE("P = 18, equal bits") {
    const SplitResult s = split_power(kUnit, 18.0, 1.0);
    CHECK(s.rates.r1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.rates.r2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.split.alpha == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  }
  SUBCASE("no weak-user bits") {
    const SplitResult s = split_power(kUnit, 5.0, std::numeric_limits<double>::infinity());
    CHECK(s.rates.r1 == doctest::Approx(rate_strong(kUnit, 5.0, 0.0)));
    CHECK(s.rates.r2 == 0.0);
    CHECK(s.split.alpha == 1.0);
  }
  SUBCASE("no strong-user bits") {
    const SplitResult s = split_power(kUnit, 5.0, 0.0);
    CHECK(s.rates.r1 == 0.0);
    CHECK(s.rates.r2 == doctest::Approx(rate_weak(kUnit, 5.0, 0.0)));
  }
}

TEST_CASE("split_power lands on the boundary at the requested ratio") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> power(0.01, 100.0);
  std::uniform_real_distribution<double> log_ratio(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const ChannelParams c = random_channel(rng);
    const double p = power(rng);
    const double ratio = std::exp(log_ratio(rng));
    const SplitResult s = split_power(c, p, ratio);
    CHECK(s.rates.r1 / s.rates.r2 == doctest::Approx(ratio).epsilon(1e-8));
    CHECK(min_power(c, s.rates) == doctest::Approx(p).epsilon(1e-8));
  }
}

TEST_CASE("derivatives hand values") {
  const DerivativeBundle d = derivatives(kUnit, 1.0, 0.0);
  CHECK(d.h2.dP == doctest::Approx(0.5 * std::numbers::log2e * 0.5 / 1.5).epsilon(1e-12));
  CHECK(d.h2.drP == 0.0);
  CHECK(d.h2.dPr == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> power(0.01, 50.0);
  for (int k = 0; k < 100; ++k) {
    const ChannelParams c = random_channel(rng);
    const double p = power(rng);
    const double expected = -(c.s1 * c.s2 * p + c.s1 * c.sigma2) /
                            (c.s1 * c.s2 * p + c.s1 * c.sigma2 - (c.s1 - c.s2) * c.sigma2);
    const DerivativeBundle b = derivatives(c, p, 0.0);
    CHECK(b.h1.dr == doctest::Approx(expected).epsilon(1e-10));
    CHECK(b.h1.dr <= -1.0);
  }
}

TEST_CASE("invalid channel parameters") {
  CHECK_THROWS_AS((ChannelParams{0.5, 1.0, 1.0}.validate()), InvalidInstance);
  CHECK_THROWS_AS((ChannelParams{1.0, 0.0, 1.0}.validate()), InvalidInstance);
  CHECK_THROWS_AS((ChannelParams{1.0, 0.5, 0.0}.validate()), InvalidInstance);
  CHECK_NOTHROW(kUnit.validate());
}
