#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ehbc/channel.hpp"
#include "ehbc/flowright.hpp"
#include "ehbc/instance.hpp"

namespace ehbc {

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst_residual = 0.0;
  std::uint64_t seed = 0;
  std::string detail;  // first failure, if any
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
};

struct StructureTolerances {
  // Consecutive segments whose powers differ by at most power_rel share a
  // band; monotonicity allows the same slack.
  double power_rel = 1e-4;
  double band_energy_rel = 1e-6;
  double causality_rel = 1e-9;
  // Relative to the schedule's largest rate.
  double rate_rel = 1e-4;
  double completion_rel = 1e-9;
  double bits_rel = 1e-9;
};

// The eight stop-time properties: power_monotone, band_energy, causality,
// r1_monotone, r1_change_r2_zero, r2_monotone, simultaneous_completion,
// bit_totals. Works from schedule.segments(); the instance may be physical.
VerificationReport check_structure(const Schedule& schedule,
                                   const ProblemInstance& instance,
                                   const StructureTolerances& tol = {});

struct OracleOptions {
  // Grid points per axis on each zoom level.
  std::size_t points_2d = 41;
  std::size_t points_4d = 13;
  // Stop zooming once a grid cell is narrower than this (in fractions).
  double grid_step = 1e-7;
  std::size_t max_levels = 60;
};

// Brute-force minimum completion time for instances with at most three
// harvests. Every epoch before the finishing one spends a grid fraction of
// its available energy over the whole epoch with r1 a grid fraction of its
// single-user cap and r2 on the boundary; the finishing epoch sends the
// remainder in minimum time. Throws TooLarge above three harvests.
double oracle_tmin(const ProblemInstance& instance, const OracleOptions& opts = {});

struct MathCheckOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double derivative_rel = 1e-6;
  double fd_step_rel = 1e-6;
  double roundtrip_rel = 1e-9;
  double convexity_slack = 1e-12;
  double concavity_tol = 1e-10;
  double endpoint_tol = 1e-12;
  std::size_t beta_points = 21;
};

// Closed-form partials against central differences, the sign pattern, h2's
// zero mixed partials, and a DomainError just past the region edge.
VerificationReport check_derivatives(const MathCheckOptions& opts = {});

// Second differences of the power-averaging (f1) and rate-averaging (f2)
// constructions along beta, with zero endpoints and nonnegative interiors.
VerificationReport check_concavity_f1_f2(const MathCheckOptions& opts = {});

// Convexity of g, h1/h2 roundtrips through g, and the rate-splitting bound
// (two sub-slots with the same mean r1 never carry more weak-user bits).
VerificationReport check_rate_region(const MathCheckOptions& opts = {});

// Random channel with s1 > s2 > 0, used by the sampled checks.
ChannelParams random_channel(std::mt19937_64& rng);

}  // namespace ehbc
