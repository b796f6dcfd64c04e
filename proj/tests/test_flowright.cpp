#include <doctest.h>

#include <cmath>
#include <limits>

#include "ehbc/errors.hpp"
#include "ehbc/flowright.hpp"
#include "ehbc/generate.hpp"
#include "ehbc/single_epoch.hpp"
#include "ehbc/verify.hpp"

using namespace ehbc;

namespace {

const ChannelParams kUnit{1.0, 0.5, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemInstance unit_instance(double b1, double b2, std::vector<Harvest> h) {
  ProblemInstance inst;
  inst.bits1 = b1;
  inst.bits2 = b2;
  inst.harvests = std::move(h);
  inst.channel = kUnit;
  return inst;
}

ProblemInstance reference_instance() {
  ProblemInstance inst;
  inst.bits1 = 8e8;
  inst.bits2 = 1e8;
  const std::vector<double> hours{0, 2, 5, 7, 9, 10, 11, 13, 14, 15, 18, 20, 23};
  const std::vector<double> joules{10, 10, 20, 40, 60, 70, 90, 180, 190, 100, 50, 30, 10};
  for (std::size_t i = 0; i < hours.size(); ++i) {
    inst.harvests.push_back({hours[i] * 3600.0, joules[i]});
  }
  inst.units = PhysicalUnits{1e5, 1e-13, {70.0, 75.0}};
  return inst;
}

}  // namespace

TEST_CASE("single harvest solves in one epoch") {
  const ProblemInstance inst = unit_instance(1, 1, {{0.0, 18.0}});
  const Schedule init = initialize(inst);
  CHECK(init.completion_time == doctest::Approx(1.0).epsilon(1e-9));
  const SolveResult r = solve(inst);
  CHECK(r.schedule.completion_time == *tmin_one_epoch(18.0, 1, 1, kInf, kUnit));
  CHECK(r.diagnostics.iterations == 1);
  CHECK(r.schedule.segments().size() == 1);
  CHECK(r.diagnostics.stop_reason == StopReason::Converged);
}

TEST_CASE("no bits gives an empty schedule") {
  const SolveResult r = solve(unit_instance(0, 0, {{0.0, 1.0}, {1.0, 1.0}}));
  CHECK(r.schedule.completion_time == 0.0);
  CHECK(r.schedule.segments().empty());
  CHECK(completion_time(r.schedule) == 0.0);
}

TEST_CASE("infeasible instance reports the deficit") {
  try {
    solve(unit_instance(1, 1, {{0.0, 2.0}, {1.0, 2.0}}));
    FAIL("expected Infeasible");
  } catch (const Infeasible& e) {
    CHECK(e.deficit() == doctest::Approx(6.0 * std::log(2.0) - 4.0));
  }
}

TEST_CASE("greedy start without strong-user bits serves only user 2") {
  const ProblemInstance inst = unit_instance(0, 3, {{0.0, 2.0}, {1.0, 2.0}, {2.0, 30.0}});
  const Schedule s = initialize(inst);
  for (const EpochState& e : s.epochs) {
    CHECK(e.rates.r1 == 0.0);
    if (e.active > 0.0 && e.active == e.duration) {
      CHECK(e.rates.r2 == doctest::Approx(rate_weak(kUnit, e.power(), 0.0)));
    }
  }
  const SolveResult r = solve(inst);
  CHECK(check_structure(r.schedule, inst).all_pass());
}

TEST_CASE("reference instance") {
  const ProblemInstance inst = reference_instance();
  const Schedule init = initialize(inst);
  CHECK(init.completion_time / 3600.0 == doctest::Approx(20.08).epsilon(0.02 / 20.08));
  const SolveResult r = solve(inst);
  CHECK(r.schedule.completion_time / 3600.0 == doctest::Approx(19.20).epsilon(0.02 / 19.20));
  CHECK(r.schedule.unused_harvests == std::vector<std::size_t>{11, 12});
  CHECK(r.diagnostics.stop_reason == StopReason::Converged);
  CHECK(check_structure(r.schedule, inst).all_pass());
}

TEST_CASE("greedy and deferred starts reach the same completion time") {
  SolveOptions tight;
  tight.settle_rel = 1e-9;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.harvests = 2 + seed % 6;
    const ProblemInstance inst = generate_instance(g);
    SolveOptions greedy = tight;
    SolveOptions deferred = tight;
    deferred.init = InitStrategy::Deferred;
    const double a = solve(inst, greedy).schedule.completion_time;
    const double b = solve(inst, deferred).schedule.completion_time;
    CAPTURE(seed);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }
}

TEST_CASE("two harvests match the brute-force oracle") {
  const ProblemInstance inst = unit_instance(2, 2, {{0.0, 18.0}, {0.5, 18.0}});
  const double t = solve(inst).schedule.completion_time;
  CHECK(t == doctest::Approx(oracle_tmin(inst)).epsilon(1e-3));
}

TEST_CASE("sweeps never lengthen the schedule and conserve bits") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.harvests = 1 + seed % 10;
    const ProblemInstance inst = generate_instance(g);
    const SolveResult r = solve(inst);
    const auto& th = r.diagnostics.t_history;
    CAPTURE(seed);
    CHECK(th.back() <= th.front() * (1.0 + 1e-9));
    double b1 = 0.0;
    double b2 = 0.0;
    for (const EpochState& e : r.schedule.epochs) {
      b1 += e.bits1;
      b2 += e.bits2;
    }
    CHECK(b1 == doctest::Approx(inst.bits1).epsilon(1e-9));
    CHECK(b2 == doctest::Approx(inst.bits2).epsilon(1e-9));
    CHECK(check_structure(r.schedule, inst).all_pass());
  }
}

TEST_CASE("iteration cap is reported, not thrown") {
  SolveOptions opts;
  opts.max_iters = 1;
  const SolveResult r = solve(reference_instance(), opts);
  CHECK(r.diagnostics.iterations == 1);
  CHECK(r.diagnostics.stop_reason == StopReason::MaxIters);
  CHECK(r.schedule.completion_time > 0.0);
}
