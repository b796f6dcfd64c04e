#pragma once

namespace ehbc {

// Termination thresholds shared by the bisection routines.
struct Tolerances {
  // Single-epoch bisection stops once |E - T g(b/T)| <= energy_rel * E.
  double energy_rel = 1e-9;
  // Two-epoch bisection stops once |b2~ - b2| <= bits_rel * max(1, b2).
  double bits_rel = 1e-9;
  // Either bisection also stops when its bracket shrinks below width_rel
  // times its initial width.
  double width_rel = 1e-12;
};

}  // namespace ehbc
