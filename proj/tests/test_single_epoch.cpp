#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ehbc/channel.hpp"
#include "ehbc/errors.hpp"
#include "ehbc/single_epoch.hpp"
#include "ehbc/verify.hpp"

using namespace ehbc;

namespace {
const ChannelParams kUnit{1.0, 0.5, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("transmit_energy at T = 1 equals g(1, 1)") {
  CHECK(transmit_energy(kUnit, 1.0, 1.0, 1.0) == doctest::Approx(18.0).epsilon(1e-14));
  CHECK(transmit_energy(kUnit, 0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("tmin_one_epoch hand values") {
  const auto t18 = tmin_one_epoch(18.0, 1.0, 1.0, 10.0, kUnit);
  REQUIRE(t18);
  CHECK(*t18 == doctest::Approx(1.0).epsilon(1e-9));
  const auto t0 = tmin_one_epoch(18.0, 0.0, 0.0, 10.0, kUnit);
  REQUIRE(t0);
  CHECK(*t0 == 0.0);
  const auto t36 = tmin_one_epoch(36.0, 1.0, 1.0, 10.0, kUnit);
  REQUIRE(t36);
  CHECK(*t36 > 0.7);
  CHECK(*t36 < 0.8);
  CHECK(transmit_energy(kUnit, 1.0, 1.0, *t36) == doctest::Approx(36.0).epsilon(1e-9));
}

TEST_CASE("tmin_one_epoch with an open epoch") {
  const auto t = tmin_one_epoch(18.0, 1.0, 1.0, kInf, kUnit);
  REQUIRE(t);
  CHECK(*t == doctest::Approx(1.0).epsilon(1e-9));
  // At or below the minimum-energy bound no finite time suffices.
  CHECK_FALSE(tmin_one_epoch(4.0, 1.0, 1.0, kInf, kUnit));
  const auto slow = tmin_one_epoch(4.2, 1.0, 1.0, kInf, kUnit);
  REQUIRE(slow);
  CHECK(*slow > 10.0);
}

TEST_CASE("tmin_one_epoch cannot finish inside a short epoch") {
  CHECK_FALSE(tmin_one_epoch(18.0, 1.0, 1.0, 0.5, kUnit));
  CHECK_FALSE(tmin_one_epoch(0.0, 1.0, 1.0, 10.0, kUnit));
  CHECK_THROWS_AS(tmin_one_epoch(18.0, -1.0, 1.0, 10.0, kUnit), DomainError);
}

TEST_CASE("tmin_one_epoch spends the budget and is decreasing in energy") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> bits(0.01, 5.0);
  std::uniform_real_distribution<double> extra(1.05, 20.0);
  for (int k = 0; k < 300; ++k) {
    const ChannelParams c = random_channel(rng);
    const double b1 = bits(rng);
    const double b2 = bits(rng);
    const double floor = 2.0 * std::log(2.0) * c.sigma2 * (b1 / c.s1 + b2 / c.s2);
    const double e = floor * extra(rng);
    const auto t = tmin_one_epoch(e, b1, b2, kInf, c);
    REQUIRE(t);
    CHECK(transmit_energy(c, b1, b2, *t) == doctest::Approx(e).epsilon(1e-9));
    const auto t_more = tmin_one_epoch(1.5 * e, b1, b2, kInf, c);
    REQUIRE(t_more);
    CHECK(*t_more < *t);
  }
}
