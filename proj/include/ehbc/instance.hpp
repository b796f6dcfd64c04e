#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "ehbc/channel.hpp"

namespace ehbc {

// Energy E (joules) that becomes available at time t (seconds).
struct Harvest {
  double time = 0.0;
  double energy = 0.0;
};

struct NormalizedUnits {};

// Physical link description; converted to ChannelParams by to_normalized().
struct PhysicalUnits {
  double bandwidth_hz = 0.0;
  double noise_density = 0.0;  // watts per hertz
  std::array<double, 2> pathloss_db{0.0, 0.0};
};

using UnitSystem = std::variant<NormalizedUnits, PhysicalUnits>;

struct ProblemInstance {
  double bits1 = 0.0;
  double bits2 = 0.0;
  std::vector<Harvest> harvests;
  ChannelParams channel;  // ignored while units hold PhysicalUnits
  UnitSystem units = NormalizedUnits{};
  // Channel uses per second: multiplies a normalized rate to give bits/s.
  double rate_scale = 1.0;

  bool is_physical() const {
    return std::holds_alternative<PhysicalUnits>(units);
  }

  // Throws InvalidInstance (or InvalidUnits) on any broken invariant.
  void validate() const;
};

// Epoch durations between consecutive harvests. The epoch that opens at the
// last harvest has no end and is not listed.
struct EpochGrid {
  std::vector<double> durations;

  std::size_t size() const { return durations.size() + 1; }
  // Duration of epoch i, +inf for the open tail.
  double duration(std::size_t i) const;
};

EpochGrid epochs_from_harvests(const ProblemInstance& instance);

// Channel parameters and bit demands in normalized units. For physical input:
// sigma2 = N0 W, s_i = 10^{-PL_i/10}, bits divided by 2W (one real channel use
// every 1/(2W) seconds) and rate_scale = 2W. Normalized input passes through.
ProblemInstance to_normalized(const ProblemInstance& instance);

// lim_{T->inf} T g(B1/T, B2/T) = 2 ln2 sigma2 (B1/s1 + B2/s2), in joules.
double min_required_energy(const ProblemInstance& instance);

struct Feasibility {
  bool feasible = false;
  double harvested = 0.0;
  double required = 0.0;
  // required - harvested when infeasible, zero otherwise.
  double deficit = 0.0;
};

// Total harvest must strictly exceed the minimum required energy.
Feasibility check_feasible(const ProblemInstance& instance);

}  // namespace ehbc
