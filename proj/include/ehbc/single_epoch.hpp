#pragma once

#include <optional>

#include "ehbc/channel.hpp"
#include "ehbc/tolerances.hpp"

namespace ehbc {

// Energy T g(b1/T, b2/T) needed to send (b1, b2) bits in exactly T seconds.
// Convex and decreasing in T.
double transmit_energy(const ChannelParams& params, double bits1, double bits2,
                       double duration);

// Shortest time in which energy E delivers (bits1, bits2) from a single
// budget, both users finishing together. Returns 0 for zero bits and nullopt
// when the bits cannot be finished within t_upper (t_upper may be +inf; then
// nullopt means E is at or below the minimum-energy bound).
std::optional<double> tmin_one_epoch(double energy, double bits1, double bits2,
                                     double t_upper,
                                     const ChannelParams& params,
                                     const Tolerances& tol = {});

}  // namespace ehbc
