#include "ehbc/instance.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ehbc/errors.hpp"

namespace ehbc {

void ProblemInstance::validate() const {
  if (!(bits1 >= 0.0) || !(bits2 >= 0.0) || !std::isfinite(bits1) ||
      !std::isfinite(bits2)) {
    throw InvalidInstance("bit demands must be finite and nonnegative");
  }
  if (harvests.empty()) {
    throw InvalidInstance("at least one harvest is required");
  }
  if (harvests.front().time != 0.0) {
    throw InvalidInstance("the first harvest must arrive at t = 0");
  }
  for (std::size_t i = 0; i < harvests.size(); ++i) {
    const Harvest& h = harvests[i];
    if (!(h.energy > 0.0) || !std::isfinite(h.energy)) {
      std::ostringstream os;
      os << "harvest " << i << " has nonpositive energy " << h.energy;
      throw InvalidInstance(os.str());
    }
    if (!std::isfinite(h.time)) {
      throw InvalidInstance("harvest times must be finite");
    }
    if (i > 0 && !(h.time > harvests[i - 1].time)) {
      std::ostringstream os;
      os << "harvest times must be strictly increasing (index " << i << ")";
      throw InvalidInstance(os.str());
    }
  }
  if (!(rate_scale > 0.0) || !std::isfinite(rate_scale)) {
    throw InvalidInstance("rate scale must be positive");
  }
  if (const auto* phys = std::get_if<PhysicalUnits>(&units)) {
    if (!(phys->bandwidth_hz > 0.0) || !(phys->noise_density > 0.0)) {
      throw InvalidUnits("bandwidth and noise density must be positive");
    }
    if (!std::isfinite(phys->pathloss_db[0]) ||
        !std::isfinite(phys->pathloss_db[1]) ||
        !(phys->pathloss_db[0] < phys->pathloss_db[1])) {
      throw InvalidInstance(
          "path losses must be finite with the stronger user first");
    }
  } else {
    channel.validate();
  }
}

double EpochGrid::duration(std::size_t i) const {
  return i < durations.size() ? durations[i]
                              : std::numeric_limits<double>::infinity();
}

EpochGrid epochs_from_harvests(const ProblemInstance& instance) {
  EpochGrid grid;
  const auto& hs = instance.harvests;
  grid.durations.reserve(hs.empty() ? 0 : hs.size() - 1);
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const double d = hs[i].time - hs[i - 1].time;
    if (!(d > 0.0)) {
      throw InvalidInstance("harvest times must be strictly increasing");
    }
    grid.durations.push_back(d);
  }
  return grid;
}

ProblemInstance to_normalized(const ProblemInstance& instance) {
  const auto* phys = std::get_if<PhysicalUnits>(&instance.units);
  if (phys == nullptr) {
    return instance;
  }
  if (!(phys->bandwidth_hz > 0.0) || !(phys->noise_density > 0.0)) {
    throw InvalidUnits("bandwidth and noise density must be positive");
  }
  const double uses_per_second = 2.0 * phys->bandwidth_hz;
  ProblemInstance out = instance;
  out.channel.sigma2 = phys->noise_density * phys->bandwidth_hz;
  out.channel.s1 = std::pow(10.0, -phys->pathloss_db[0] / 10.0);
  out.channel.s2 = std::pow(10.0, -phys->pathloss_db[1] / 10.0);
  out.bits1 = instance.bits1 / uses_per_second;
  out.bits2 = instance.bits2 / uses_per_second;
  out.rate_scale = instance.rate_scale * uses_per_second;
  out.units = NormalizedUnits{};
  return out;
}

double min_required_energy(const ProblemInstance& instance) {
  const ProblemInstance norm = to_normalized(instance);
  const ChannelParams& c = norm.channel;
  return 2.0 * std::numbers::ln2 * c.sigma2 *
         (norm.bits1 / c.s1 + norm.bits2 / c.s2);
}

Feasibility check_feasible(const ProblemInstance& instance) {
  Feasibility f;
  for (const Harvest& h : instance.harvests) {
    f.harvested += h.energy;
  }
  f.required = min_required_energy(instance);
  f.feasible = f.harvested > f.required;
  f.deficit = f.feasible ? 0.0 : f.required - f.harvested;
  return f;
}

}  // namespace ehbc
