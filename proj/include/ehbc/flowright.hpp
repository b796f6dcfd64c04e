#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ehbc/instance.hpp"
#include "ehbc/local_opt.hpp"
#include "ehbc/tolerances.hpp"

namespace ehbc {

// Constant rate pair held over [t_start, t_end). Rates are per channel use;
// multiply by Schedule::rate_scale for bits/s.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  double power = 0.0;
  double rate1 = 0.0;
  double rate2 = 0.0;

  double duration() const { return t_end - t_start; }
};

struct Schedule {
  // One entry per harvest, in the normalized units of the solve. Epochs past
  // the last transmitting one carry no bits.
  std::vector<EpochState> epochs;
  double completion_time = 0.0;
  std::vector<std::size_t> unused_harvests;  // 0-based harvest indices
  double rate_scale = 1.0;

  // Transmitting part of each epoch, in time order.
  std::vector<Segment> segments() const;
  // Number of epochs up to and including the last one holding bits.
  std::size_t epochs_used() const;
};

enum class StopReason { Converged, MaxIters };

std::string to_string(StopReason reason);

struct SolveDiagnostics {
  std::size_t iterations = 0;
  std::vector<double> t_history;  // T^0, T^1, ...
  std::vector<std::size_t> epochs_used_history;
  // First sweep after which the completion-time rule alone would have
  // stopped (0 if it never fired). Later sweeps only settle the schedule.
  std::size_t t_rule_iteration = 0;
  // Largest relative change of any epoch's power or rates in each sweep.
  std::vector<double> change_history;
  StopReason stop_reason = StopReason::Converged;
  // Set when the greedy start stranded bits and the deferred start was used.
  bool deferred_start = false;
  double wall_seconds = 0.0;
};

enum class InitStrategy {
  Greedy,    // each harvest spent in its own epoch, bits in the B1:B2 ratio
  Deferred,  // all energy pooled into the final harvest's open epoch
};

struct SolveOptions {
  // Stop once T^{k-1} - T^k < stop_eps * (mean duration of the used epochs).
  double stop_eps = 1e-9;
  // Also keep sweeping while some epoch's power or rate pair still moves by
  // more than settle_rel per sweep; 0 disables (completion-time rule alone).
  // T is flat to first order along the band-interior directions, so the
  // completion-time rule alone can stop with powers still drifting.
  double settle_rel = 1e-7;
  // 0 selects 50 n^2 for n harvests.
  std::size_t max_iters = 0;
  Tolerances tol;
  InitStrategy init = InitStrategy::Greedy;
};

struct SolveResult {
  Schedule schedule;
  SolveDiagnostics diagnostics;
};

// Greedy start: epoch i spends E_i over the whole epoch at the boundary rate
// pair with r1/r2 = B1/B2, until some epoch can finish the remaining bits
// with its own harvest (it then does so in minimum time). Throws Infeasible
// when the bits outlast the final harvest.
Schedule initialize(const ProblemInstance& instance, const Tolerances& tol = {});

// Every harvest is held back and spent in the final open epoch.
Schedule initialize_deferred(const ProblemInstance& instance,
                             const Tolerances& tol = {});

// FlowRight sweeps of pairwise local optimization until the completion time
// stops decreasing. Throws Infeasible (with the deficit) when the harvest
// total does not exceed the minimum required energy.
SolveResult solve(const ProblemInstance& instance, const SolveOptions& options = {});

// End of the last transmitting segment; 0 for an empty schedule.
double completion_time(const Schedule& schedule);

}  // namespace ehbc
