#pragma once

#include <cstddef>
#include <cstdint>

#include "ehbc/instance.hpp"

namespace ehbc {

// Ranges for random normalized instances. Energies are log-uniform, epoch
// lengths uniform, B1/B2 log-uniform; the bit totals are then scaled so the
// minimum required energy is `load` times the harvest total.
struct GenOptions {
  std::size_t harvests = 3;
  std::uint64_t seed = 1;
  double energy_min = 0.5;
  double energy_max = 20.0;
  double epoch_min = 0.2;
  double epoch_max = 2.0;
  double ratio_min = 1.0 / 20.0;
  double ratio_max = 20.0;
  double load_min = 0.2;
  double load_max = 0.9;
  bool random_channel = true;  // else s1 = 1, s2 = 0.5, sigma2 = 1
  std::size_t max_retries = 100;
};

// Same options, same instance. Throws Infeasible when no draw within the retry
// budget passes check_feasible, InvalidInstance on bad ranges.
ProblemInstance generate_instance(const GenOptions& opts);

}  // namespace ehbc
