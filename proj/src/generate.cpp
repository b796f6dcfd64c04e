#include "ehbc/generate.hpp"

#include <cmath>
#include <random>

#include "ehbc/errors.hpp"
#include "ehbc/verify.hpp"

namespace ehbc {
namespace {

void require_range(double lo, double hi, const char* what, bool positive) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi || (positive && !(lo > 0.0))) {
    throw InvalidInstance(std::string("bad generator range for ") + what);
  }
}

}  // namespace

ProblemInstance generate_instance(const GenOptions& opts) {
  if (opts.harvests == 0) {
    throw InvalidInstance("generator needs at least one harvest");
  }
  require_range(opts.energy_min, opts.energy_max, "energy", true);
  require_range(opts.epoch_min, opts.epoch_max, "epoch", true);
  require_range(opts.ratio_min, opts.ratio_max, "ratio", true);
  require_range(opts.load_min, opts.load_max, "load", true);

  std::mt19937_64 rng(opts.seed);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  double last_deficit = 0.0;
  for (std::size_t attempt = 0; attempt < opts.max_retries; ++attempt) {
    ProblemInstance inst;
    inst.channel = opts.random_channel ? random_channel(rng) : ChannelParams{};
    double t = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < opts.harvests; ++i) {
      if (i > 0) {
        t += uniform(opts.epoch_min, opts.epoch_max);
      }
      const double e = log_uniform(opts.energy_min, opts.energy_max);
      inst.harvests.push_back({t, e});
      total += e;
    }
    const double ratio = log_uniform(opts.ratio_min, opts.ratio_max);
    const double load = uniform(opts.load_min, opts.load_max);
    // Required energy per unit of B2 at this ratio.
    const ChannelParams& c = inst.channel;
    const double per_b2 = 2.0 * std::log(2.0) * c.sigma2 * (ratio / c.s1 + 1.0 / c.s2);
    inst.bits2 = load * total / per_b2;
    inst.bits1 = ratio * inst.bits2;

    const Feasibility f = check_feasible(inst);
    if (f.feasible) {
      inst.validate();
      return inst;
    }
    last_deficit = f.deficit;
  }
  throw Infeasible("no feasible instance within the retry budget", last_deficit);
}

}  // namespace ehbc
