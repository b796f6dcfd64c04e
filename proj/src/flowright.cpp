#include "ehbc/flowright.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "ehbc/errors.hpp"
#include "ehbc/single_epoch.hpp"

namespace ehbc {
namespace {

// Epoch skeleton for a validated, normalized instance: start times and
// durations, no energy or bits yet.
std::vector<EpochState> blank_epochs(const ProblemInstance& norm) {
  const EpochGrid grid = epochs_from_harvests(norm);
  std::vector<EpochState> epochs(norm.harvests.size());
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    epochs[i].start = norm.harvests[i].time;
    epochs[i].duration = grid.duration(i);
  }
  return epochs;
}

void finalize(Schedule& s, const ProblemInstance& norm) {
  s.rate_scale = norm.rate_scale;
  s.completion_time = completion_time(s);
  s.unused_harvests.clear();
  const double t = s.completion_time;
  for (std::size_t i = 0; i < norm.harvests.size(); ++i) {
    // A harvest landing exactly at T arrives too late to matter.
    if (norm.harvests[i].time >= t * (1.0 - 1e-12) && i > 0) {
      s.unused_harvests.push_back(i);
    }
  }
}

ProblemInstance prepared(const ProblemInstance& instance) {
  instance.validate();
  ProblemInstance norm = to_normalized(instance);
  norm.channel.validate();
  return norm;
}

void require_feasible(const ProblemInstance& norm) {
  if (norm.bits1 == 0.0 && norm.bits2 == 0.0) {
    return;
  }
  const Feasibility f = check_feasible(norm);
  if (!f.feasible) {
    throw Infeasible("harvested energy does not exceed the minimum required energy",
                     f.deficit);
  }
}

Schedule deferred_from_normalized(const ProblemInstance& norm,
                                  const Tolerances& tol) {
  Schedule s;
  s.epochs = blank_epochs(norm);
  double total = 0.0;
  for (const Harvest& h : norm.harvests) {
    total += h.energy;
  }
  EpochState& last = s.epochs.back();
  last.energy = total;
  if (norm.bits1 > 0.0 || norm.bits2 > 0.0) {
    const auto t = tmin_one_epoch(total, norm.bits1, norm.bits2, last.duration,
                                  norm.channel, tol);
    if (!t) {
      const Feasibility f = check_feasible(norm);
      throw Infeasible("pooled harvest cannot deliver the bits", f.deficit);
    }
    last.bits1 = norm.bits1;
    last.bits2 = norm.bits2;
    last.active = *t;
    last.rates = {norm.bits1 / *t, norm.bits2 / *t};
  }
  finalize(s, norm);
  return s;
}

Schedule greedy_from_normalized(const ProblemInstance& norm,
                                const Tolerances& tol) {
  Schedule s;
  s.epochs = blank_epochs(norm);
  for (std::size_t i = 0; i < s.epochs.size(); ++i) {
    s.epochs[i].energy = norm.harvests[i].energy;
  }
  const double ratio = norm.bits1 / norm.bits2;  // inf or 0 at the edges
  double left1 = norm.bits1;
  double left2 = norm.bits2;
  for (EpochState& e : s.epochs) {
    if (left1 <= 0.0 && left2 <= 0.0) {
      break;
    }
    if (const auto t = tmin_one_epoch(e.energy, left1, left2, e.duration,
                                      norm.channel, tol)) {
      e.bits1 = left1;
      e.bits2 = left2;
      e.active = *t;
      e.rates = {left1 / *t, left2 / *t};
      left1 = left2 = 0.0;
      break;
    }
    if (std::isinf(e.duration)) {
      break;  // open tail cannot finish either
    }
    const SplitResult split = split_power(norm.channel, e.energy / e.duration, ratio);
    e.rates = split.rates;
    e.active = e.duration;
    e.bits1 = std::min(left1, split.rates.r1 * e.duration);
    e.bits2 = std::min(left2, split.rates.r2 * e.duration);
    left1 = std::max(0.0, left1 - e.bits1);
    left2 = std::max(0.0, left2 - e.bits2);
  }
  if (left1 > 0.0 || left2 > 0.0) {
    const double needed = 2.0 * std::numbers::ln2 * norm.channel.sigma2 *
                          (left1 / norm.channel.s1 + left2 / norm.channel.s2);
    throw Infeasible("bits remain after the final harvest's epoch",
                     std::max(0.0, needed - s.epochs.back().energy));
  }
  finalize(s, norm);
  return s;
}

double mean_used_duration(const std::vector<EpochState>& epochs, std::size_t n) {
  if (n == 0) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += std::isinf(epochs[i].duration) ? epochs[i].active : epochs[i].duration;
  }
  return sum / static_cast<double>(n);
}

// Largest per-epoch change over a sweep: powers relative to themselves, rates
// relative to the largest rate in the schedule.
double largest_change(const std::vector<EpochState>& before,
                      const std::vector<EpochState>& after) {
  double peak_rate = 0.0;
  for (const EpochState& e : after) {
    peak_rate = std::max({peak_rate, e.rates.r1, e.rates.r2});
  }
  double moved = 0.0;
  for (std::size_t i = 0; i < after.size(); ++i) {
    const double p0 = before[i].power();
    const double p1 = after[i].power();
    if (const double scale = std::max(p0, p1); scale > 0.0) {
      moved = std::max(moved, std::abs(p1 - p0) / scale);
    }
    if (peak_rate > 0.0) {
      moved = std::max({moved, std::abs(after[i].rates.r1 - before[i].rates.r1) / peak_rate,
                        std::abs(after[i].rates.r2 - before[i].rates.r2) / peak_rate});
    }
  }
  return moved;
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged:
      return "converged";
    case StopReason::MaxIters:
      return "max_iters";
  }
  return "unknown";
}

std::vector<Segment> Schedule::segments() const {
  std::vector<Segment> out;
  for (const EpochState& e : epochs) {
    if (e.active > 0.0 && !e.empty()) {
      out.push_back({e.start, e.start + e.active, e.power(), e.rates.r1, e.rates.r2});
    }
  }
  return out;
}

std::size_t Schedule::epochs_used() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (!epochs[i].empty()) {
      n = i + 1;
    }
  }
  return n;
}

double completion_time(const Schedule& schedule) {
  double t = 0.0;
  for (const Segment& seg : schedule.segments()) {
    t = std::max(t, seg.t_end);
  }
  return t;
}

Schedule initialize(const ProblemInstance& instance, const Tolerances& tol) {
  const ProblemInstance norm = prepared(instance);
  require_feasible(norm);
  return greedy_from_normalized(norm, tol);
}

Schedule initialize_deferred(const ProblemInstance& instance,
                             const Tolerances& tol) {
  const ProblemInstance norm = prepared(instance);
  require_feasible(norm);
  return deferred_from_normalized(norm, tol);
}

SolveResult solve(const ProblemInstance& instance, const SolveOptions& options) {
  const auto clock_start = std::chrono::steady_clock::now();
  const ProblemInstance norm = prepared(instance);
  require_feasible(norm);

  SolveResult result;
  SolveDiagnostics& diag = result.diagnostics;
  Schedule& s = result.schedule;

  if (options.init == InitStrategy::Deferred) {
    s = deferred_from_normalized(norm, options.tol);
    diag.deferred_start = true;
  } else {
    try {
      s = greedy_from_normalized(norm, options.tol);
    } catch (const Infeasible&) {
      s = deferred_from_normalized(norm, options.tol);
      diag.deferred_start = true;
    }
  }

  const std::size_t harvests = norm.harvests.size();
  std::vector<double> cum_harvest(harvests);
  double acc = 0.0;
  for (std::size_t i = 0; i < harvests; ++i) {
    acc += norm.harvests[i].energy;
    cum_harvest[i] = acc;
  }

  const std::size_t max_iters =
      options.max_iters > 0 ? options.max_iters : 50 * harvests * harvests;
  std::size_t n = s.epochs_used();
  diag.t_history.push_back(s.completion_time);
  diag.epochs_used_history.push_back(n);

  if (n == 0) {
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    return result;
  }

  diag.stop_reason = StopReason::MaxIters;
  std::vector<EpochState> before;
  while (diag.iterations < max_iters) {
    before = s.epochs;
    double consumed_before = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      EpochState& a = s.epochs[i];
      EpochState& b = s.epochs[i + 1];
      if (a.empty() && b.empty()) {
        consumed_before += a.energy;
        continue;
      }
      const double pool = a.energy + b.energy;
      const CausalityBudget budget{std::min(cum_harvest[i] - consumed_before, pool)};
      const LocalResult local = find_local_optimal(a, b, budget, norm.channel, options.tol);
      a = local.first;
      b = local.second;
      consumed_before += a.energy;
    }
    ++diag.iterations;

    n = s.epochs_used();
    const double t_prev = diag.t_history.back();
    const double t_now = completion_time(s);
    diag.t_history.push_back(t_now);
    diag.epochs_used_history.push_back(n);
    const double moved = largest_change(before, s.epochs);
    diag.change_history.push_back(moved);
    const bool settled = options.settle_rel <= 0.0 || moved <= options.settle_rel;
    const bool t_stalled = t_prev - t_now < options.stop_eps * mean_used_duration(s.epochs, n);
    if (t_stalled && diag.t_rule_iteration == 0) {
      diag.t_rule_iteration = diag.iterations;
    }
    if (t_stalled && settled) {
      diag.stop_reason = StopReason::Converged;
      break;
    }
  }

  // Epochs past the last transmitting one hold no bits; clear stale rates.
  for (std::size_t i = n; i < s.epochs.size(); ++i) {
    s.epochs[i].rates = {};
    s.epochs[i].active = 0.0;
  }
  finalize(s, norm);
  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return result;
}

}  // namespace ehbc
