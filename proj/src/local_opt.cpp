#include "ehbc/local_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ehbc/errors.hpp"
#include "ehbc/single_epoch.hpp"

namespace ehbc {
namespace {

// h2 without the domain check; negative once r1 exceeds the stronger user's
// capacity at `power`, which the bisection reads as "too few weak bits".
double weak_rate_unchecked(const ChannelParams& c, double power, double r1) {
  const double num = std::log1p(c.s2 * power / c.sigma2);
  const double den = std::log1p(c.s2 / c.s1 * std::expm1(2.0 * std::numbers::ln2 * r1));
  return 0.5 * (num - den) / std::numbers::ln2;
}

struct Remainder {
  RatePair rates;
  double active = 0.0;
};

// Remaining bits sent from one budget in minimum time.
Remainder finish_in_one(double energy, double bits1, double bits2,
                        double duration, const ChannelParams& params,
                        const Tolerances& tol) {
  bits1 = std::max(0.0, bits1);
  bits2 = std::max(0.0, bits2);
  if (bits1 == 0.0 && bits2 == 0.0) {
    return {};
  }
  const auto t = tmin_one_epoch(energy, bits1, bits2, duration, params, tol);
  if (!t || !(*t > 0.0)) {
    throw InconsistentBudget(
        "second epoch cannot deliver the remaining bits with its energy");
  }
  return {{bits1 / *t, bits2 / *t}, *t};
}

EpochState with_rates(EpochState e, RatePair rates, double active,
                      double energy, double bits1, double bits2) {
  e.rates = rates;
  e.active = active;
  e.energy = energy;
  e.bits1 = bits1;
  e.bits2 = bits2;
  return e;
}

}  // namespace

TwoEpochSolution tmin_two_epoch(double first_energy, double second_energy,
                                double bits1, double bits2,
                                double first_duration, double second_duration,
                                const ChannelParams& params,
                                const Tolerances& tol) {
  if (!(first_duration > 0.0) || std::isinf(first_duration)) {
    throw DomainError("tmin_two_epoch: first epoch needs a finite duration");
  }
  TwoEpochSolution out;
  if (bits1 == 0.0 && bits2 == 0.0) {
    return out;
  }
  const double power = first_energy / first_duration;

  if (bits1 == 0.0) {
    const double r2 = std::min(rate_weak(params, power, 0.0), bits2 / first_duration);
    const Remainder rest = finish_in_one(second_energy, 0.0, bits2 - r2 * first_duration,
                                         second_duration, params, tol);
    out.first = {0.0, r2};
    out.second = rest.rates;
    out.second_active = rest.active;
    return out;
  }

  const double cap = rate_strong(params, power, 0.0);
  const double r1_max = std::min(cap, bits1 / first_duration);

  if (bits2 == 0.0) {
    const Remainder rest = finish_in_one(second_energy, bits1 - r1_max * first_duration,
                                         0.0, second_duration, params, tol);
    out.first = {r1_max, 0.0};
    out.second = rest.rates;
    out.second_active = rest.active;
    out.rates_differ = rest.active > 0.0;
    return out;
  }

  const double eps = tol.bits_rel * std::max(1.0, bits2);

  struct Trial {
    double tail = 0.0;  // time the pair runs into the second epoch
    double r2_first = 0.0;
    double r2_second = 0.0;
    double weak_bits = 0.0;
  };
  // Stronger user held at r1 across both epochs.
  auto trial = [&](double r1) {
    Trial t;
    t.tail = (bits1 - r1 * first_duration) / r1;
    t.r2_first = rate_weak(params, power, r1);
    t.r2_second = t.tail > 0.0
                      ? weak_rate_unchecked(params, second_energy / t.tail, r1)
                      : 0.0;
    t.weak_bits = t.r2_first * first_duration + t.r2_second * t.tail;
    return t;
  };

  if (cap < bits1 / first_duration) {
    const Trial at_cap = trial(cap);
    if (at_cap.weak_bits - bits2 > eps) {
      // Equal stronger-user rates would overserve the weaker user even with
      // the first epoch given entirely to user 1.
      const Remainder rest = finish_in_one(second_energy, bits1 - cap * first_duration,
                                           bits2, second_duration, params, tol);
      out.first = {cap, 0.0};
      out.second = rest.rates;
      out.second_active = rest.active;
      out.rates_differ = true;
      return out;
    }
  }

  // As r1 -> 0 the tail grows without bound and the weaker user's bits
  // approach this limit from below.
  const double weak_limit =
      rate_weak(params, power, 0.0) * first_duration +
      second_energy * params.s2 / (2.0 * std::numbers::ln2 * params.sigma2);
  if (weak_limit < bits2 - eps) {
    throw InconsistentBudget(
        "no common stronger-user rate delivers the weaker user's bits");
  }

  double lo = 0.0;
  double hi = r1_max;
  const double width_floor = tol.width_rel * r1_max;
  double r1 = 0.5 * (lo + hi);
  Trial t = trial(r1);
  while (true) {
    if (bits2 - t.weak_bits > eps) {
      hi = r1;
    } else if (t.weak_bits - bits2 > eps) {
      lo = r1;
    } else {
      break;
    }
    if (hi - lo <= width_floor) {
      break;
    }
    r1 = 0.5 * (lo + hi);
    t = trial(r1);
  }

  out.first = {r1, t.r2_first};
  out.second = {r1, std::max(0.0, t.r2_second)};
  out.second_active = std::max(0.0, t.tail);
  return out;
}

LocalResult find_local_optimal(const EpochState& first,
                               const EpochState& second,
                               CausalityBudget budget,
                               const ChannelParams& params,
                               const Tolerances& tol) {
  LocalResult out;
  out.first = first;
  out.second = second;

  const double b1 = first.bits1 + second.bits1;
  const double b2 = first.bits2 + second.bits2;
  const double pool = first.energy + second.energy;

  if (b1 == 0.0 && b2 == 0.0) {
    out.first.rates = {};
    out.first.active = 0.0;
    out.second.rates = {};
    out.second.active = 0.0;
    out.branch = LocalBranch::Idle;
    out.finished = true;
    return out;
  }

  const double e_max = std::clamp(budget.e_max, 0.0, pool);
  const double xi = first.duration;

  // Everything inside the first epoch on the causal budget alone; a tie at
  // the epoch boundary lands here.
  if (const auto t = tmin_one_epoch(e_max, b1, b2, xi, params, tol); t && *t > 0.0) {
    const double used = std::min(transmit_energy(params, b1, b2, *t), e_max);
    out.first = with_rates(first, {b1 / *t, b2 / *t}, *t, used, b1, b2);
    out.second = with_rates(second, {}, 0.0, pool - used, 0.0, 0.0);
    out.branch = LocalBranch::FinishFirst;
    out.finished = true;
    return out;
  }

  const double span = xi + second.duration;
  const auto t_pool = tmin_one_epoch(pool, b1, b2, span, params, tol);
  if (!t_pool) {
    throw InconsistentBudget("pooled energy cannot deliver the pooled bits");
  }
  if (*t_pool > xi) {
    const RatePair r{b1 / *t_pool, b2 / *t_pool};
    // Power times the first epoch's duration.
    const double first_energy = min_power(params, r) * xi;
    if (first_energy <= e_max) {
      const double f1 = r.r1 * xi;
      const double f2 = r.r2 * xi;
      out.first = with_rates(first, r, xi, first_energy, f1, f2);
      out.second = with_rates(second, r, *t_pool - xi, pool - first_energy,
                              b1 - f1, b2 - f2);
      out.branch = LocalBranch::Equalized;
      return out;
    }
  }

  const TwoEpochSolution sol = tmin_two_epoch(e_max, pool - e_max, b1, b2, xi,
                                              second.duration, params, tol);
  const double f1 = sol.first.r1 * xi;
  const double f2 = sol.first.r2 * xi;
  const double rest1 = std::max(0.0, b1 - f1);
  const double rest2 = std::max(0.0, b2 - f2);
  out.first = with_rates(first, sol.first, xi, e_max, f1, f2);
  RatePair second_rates = sol.second;
  if (sol.second_active > 0.0) {
    second_rates = {rest1 / sol.second_active, rest2 / sol.second_active};
  }
  out.second = with_rates(second, second_rates, sol.second_active, pool - e_max,
                          rest1, rest2);
  out.branch = LocalBranch::Pinned;
  return out;
}

}  // namespace ehbc
