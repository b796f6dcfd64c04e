#include "ehbc/single_epoch.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ehbc/errors.hpp"

namespace ehbc {
namespace {

// d/dT of T g(b1/T, b2/T) = g(r) - r1 dg/dr1 - r2 dg/dr2 at r = b/T.
double transmit_energy_slope(const ChannelParams& c, double bits1, double bits2,
                             double t) {
  const double r1 = bits1 / t;
  const double r2 = bits2 / t;
  const double k = 2.0 * std::numbers::ln2;
  const double x1 = std::exp(k * r1);
  const double x2 = std::exp(k * r2);
  const double g = min_power(c, {r1, r2});
  const double g1 = c.sigma2 * k * x1 * x2 / c.s1;
  const double g2 = c.sigma2 * (k * x2 / c.s2 + std::expm1(k * r1) * k * x2 / c.s1);
  return g - r1 * g1 - r2 * g2;
}

}  // namespace

double transmit_energy(const ChannelParams& params, double bits1, double bits2,
                       double duration) {
  if (bits1 == 0.0 && bits2 == 0.0) {
    return 0.0;
  }
  if (!(duration > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return duration * min_power(params, {bits1 / duration, bits2 / duration});
}

std::optional<double> tmin_one_epoch(double energy, double bits1, double bits2,
                                     double t_upper,
                                     const ChannelParams& params,
                                     const Tolerances& tol) {
  if (!(bits1 >= 0.0) || !(bits2 >= 0.0)) {
    throw DomainError("tmin_one_epoch: bit counts must be nonnegative");
  }
  if (bits1 == 0.0 && bits2 == 0.0) {
    return 0.0;
  }
  if (!(t_upper > 0.0) || !(energy > 0.0)) {
    return std::nullopt;
  }

  const double eps = tol.energy_rel * energy;
  auto f = [&](double t) { return transmit_energy(params, bits1, bits2, t); };

  double hi = t_upper;
  if (std::isinf(hi)) {
    const double floor = 2.0 * std::numbers::ln2 * params.sigma2 *
                         (bits1 / params.s1 + bits2 / params.s2);
    if (!(energy > floor)) {
      return std::nullopt;
    }
    hi = 1.0;
    while (f(hi) > energy) {
      hi *= 2.0;
      if (std::isinf(hi)) {
        return std::nullopt;
      }
    }
  } else if (f(hi) - energy > eps) {
    return std::nullopt;
  }

  double lo = 0.0;
  const double width_floor = tol.width_rel * hi;
  while (hi - lo > width_floor) {
    const double mid = 0.5 * (lo + hi);
    const double used = f(mid);
    if (std::abs(energy - used) <= eps) {
      // One Newton step on the accepted point; where f is flat the residual
      // test alone leaves T coarse.
      const double slope = transmit_energy_slope(params, bits1, bits2, mid);
      if (slope < 0.0 && std::isfinite(slope)) {
        const double polished = mid - (used - energy) / slope;
        if (polished > lo && polished <= hi &&
            std::abs(energy - f(polished)) < std::abs(energy - used)) {
          return polished;
        }
      }
      return mid;
    }
    // NaN (overflow at tiny T) counts as too much energy.
    if (used < energy) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace ehbc
