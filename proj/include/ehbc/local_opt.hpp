#pragma once

#include "ehbc/channel.hpp"
#include "ehbc/tolerances.hpp"

namespace ehbc {

// One epoch of a schedule. The rate pair is held for `active` seconds from the
// epoch start; the rest of the epoch is idle.
struct EpochState {
  double start = 0.0;
  double duration = 0.0;  // +inf for the epoch opened by the last harvest
  double energy = 0.0;    // joules spent in this epoch
  double bits1 = 0.0;
  double bits2 = 0.0;
  RatePair rates;
  double active = 0.0;

  bool empty() const { return bits1 == 0.0 && bits2 == 0.0; }
  double power() const { return active > 0.0 ? energy / active : 0.0; }
  double end() const { return start + active; }
};

// Most energy the earlier epoch of a pair may spend.
struct CausalityBudget {
  double e_max = 0.0;
};

enum class LocalBranch {
  Idle,         // no bits in the pair
  FinishFirst,  // everything fits in the first epoch; a gap opens after it
  Equalized,    // common power and rate pair across both epochs
  Pinned,       // first epoch spends exactly e_max
};

struct LocalResult {
  EpochState first;
  EpochState second;
  LocalBranch branch = LocalBranch::Idle;
  // Set when the pair's bits are all delivered inside the first epoch.
  bool finished = false;
};

// Minimum-time delivery of the pair's pooled bits with its pooled energy, the
// first epoch spending at most budget.e_max. Pooled bits and energy are
// conserved.
LocalResult find_local_optimal(const EpochState& first,
                               const EpochState& second,
                               CausalityBudget budget,
                               const ChannelParams& params,
                               const Tolerances& tol = {});

struct TwoEpochSolution {
  RatePair first;       // held for the whole first epoch
  RatePair second;      // held for `second_active` seconds
  double second_active = 0.0;
  // True when the stronger user's rate steps up between the epochs (the weaker
  // user then gets nothing in the first epoch).
  bool rates_differ = false;
};

// Pair with the first epoch pinned at `first_energy` over its whole duration
// and `second_energy` left for the second. Throws InconsistentBudget when no
// stronger-user rate meets both bit totals.
TwoEpochSolution tmin_two_epoch(double first_energy, double second_energy,
                                double bits1, double bits2,
                                double first_duration, double second_duration,
                                const ChannelParams& params,
                                const Tolerances& tol = {});

}  // namespace ehbc
