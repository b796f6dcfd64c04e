#include "ehbc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ehbc/errors.hpp"
#include "ehbc/single_epoch.hpp"

namespace ehbc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates the worst residual of one check and remembers the first
// failure.
class Tally {
 public:
  Tally(std::string name, double limit, std::uint64_t seed = 0) : limit_(limit) {
    result_.name = std::move(name);
    result_.seed = seed;
  }

  void observe(double residual, const std::string& where = {}) {
    if (std::isnan(residual)) {
      residual = kInf;
    }
    result_.worst_residual = std::max(result_.worst_residual, residual);
    if (residual > limit_ && result_.pass) {
      result_.pass = false;
      std::ostringstream os;
      os << where << " residual " << residual << " > " << limit_;
      result_.detail = os.str();
    }
  }

  void fail(const std::string& why) {
    if (result_.pass) {
      result_.detail = why;
    }
    result_.pass = false;
  }

  CheckResult done() const { return result_; }

 private:
  double limit_;
  CheckResult result_;
};

std::string at(const char* what, std::size_t i) {
  return std::string(what) + " " + std::to_string(i);
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) {
      return &c;
    }
  }
  return nullptr;
}

ChannelParams random_channel(std::mt19937_64& rng) {
  ChannelParams c;
  c.s1 = log_uniform(rng, 0.1, 10.0);
  c.s2 = c.s1 * uniform(rng, 0.05, 0.95);
  c.sigma2 = log_uniform(rng, 0.1, 10.0);
  return c;
}

VerificationReport check_structure(const Schedule& schedule,
                                   const ProblemInstance& instance,
                                   const StructureTolerances& tol) {
  const ProblemInstance norm = to_normalized(instance);
  const std::vector<Segment> segs = schedule.segments();
  const double t_end = segs.empty() ? 0.0 : segs.back().t_end;
  const double time_slack = 1e-12 * std::max(1.0, t_end);

  // Energy spent in [0, t).
  auto consumed_before = [&](double t) {
    double e = 0.0;
    for (const Segment& s : segs) {
      const double overlap = std::min(s.t_end, t) - s.t_start;
      if (overlap > 0.0) {
        e += s.power * overlap;
      }
    }
    return e;
  };
  // Energy harvested in [from, to).
  auto harvested_in = [&](double from, double to) {
    double e = 0.0;
    for (const Harvest& h : norm.harvests) {
      if (h.time >= from - time_slack && h.time < to - time_slack) {
        e += h.energy;
      }
    }
    return e;
  };

  VerificationReport report;

  {
    Tally t("power_monotone", tol.power_rel);
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
      const double drop = segs[i].power - segs[i + 1].power;
      t.observe(drop > 0.0 ? drop / segs[i].power : 0.0, at("segment", i));
    }
    report.checks.push_back(t.done());
  }

  {
    Tally t("band_energy", tol.band_energy_rel);
    std::size_t first = 0;
    while (first < segs.size()) {
      std::size_t last = first;
      // Split only where consecutive powers jump; drift inside a band left by
      // the stop rule must not fragment it.
      while (last + 1 < segs.size() &&
             rel_diff(segs[last + 1].power, segs[last].power) <= tol.power_rel) {
        ++last;
      }
      double used = 0.0;
      for (std::size_t k = first; k <= last; ++k) {
        used += segs[k].power * segs[k].duration();
      }
      const double got = harvested_in(segs[first].t_start, segs[last].t_end);
      t.observe(got > 0.0 ? std::abs(used - got) / got : kInf, at("band from segment", first));
      first = last + 1;
    }
    report.checks.push_back(t.done());
  }

  {
    Tally t("causality", tol.causality_rel);
    std::vector<double> probes;
    for (std::size_t j = 1; j < norm.harvests.size(); ++j) {
      probes.push_back(norm.harvests[j].time);
    }
    probes.push_back(t_end);
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const double avail = harvested_in(0.0, probes[j]);
      const double excess = consumed_before(probes[j]) - avail;
      t.observe(excess > 0.0 ? excess / std::max(avail, 1e-300) : 0.0,
                at("boundary", j + 1));
    }
    report.checks.push_back(t.done());
  }

  double peak_rate = 0.0;
  for (const Segment& s : segs) {
    peak_rate = std::max({peak_rate, s.rate1, s.rate2});
  }
  auto scaled = [&](double x) { return peak_rate > 0.0 ? x / peak_rate : 0.0; };

  {
    Tally r1("r1_monotone", tol.rate_rel);
    Tally coupling("r1_change_r2_zero", tol.rate_rel);
    Tally r2("r2_monotone", tol.rate_rel);
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
      const double step1 = scaled(segs[i + 1].rate1 - segs[i].rate1);
      r1.observe(std::max(0.0, -step1), at("segment", i));
      r2.observe(std::max(0.0, scaled(segs[i].rate2 - segs[i + 1].rate2)),
                 at("segment", i));
      if (step1 > tol.rate_rel) {
        coupling.observe(scaled(segs[i].rate2), at("segment", i));
      }
    }
    report.checks.push_back(r1.done());
    report.checks.push_back(coupling.done());
    report.checks.push_back(r2.done());
  }

  {
    Tally t("simultaneous_completion", tol.completion_rel);
    double finish1 = 0.0;
    double finish2 = 0.0;
    for (const Segment& s : segs) {
      if (s.rate1 > 0.0) finish1 = std::max(finish1, s.t_end);
      if (s.rate2 > 0.0) finish2 = std::max(finish2, s.t_end);
    }
    if (norm.bits1 > 0.0 && norm.bits2 > 0.0 && t_end > 0.0) {
      t.observe(std::abs(finish1 - finish2) / t_end);
    }
    report.checks.push_back(t.done());
  }

  {
    Tally t("bit_totals", tol.bits_rel);
    double sent1 = 0.0;
    double sent2 = 0.0;
    for (const Segment& s : segs) {
      sent1 += s.rate1 * s.duration();
      sent2 += s.rate2 * s.duration();
    }
    auto residual = [](double sent, double want) {
      return want > 0.0 ? std::abs(sent - want) / want : std::abs(sent);
    };
    t.observe(residual(sent1, norm.bits1), "user 1");
    t.observe(residual(sent2, norm.bits2), "user 2");
    report.checks.push_back(t.done());
  }

  return report;
}

double oracle_tmin(const ProblemInstance& instance, const OracleOptions& opts) {
  const ProblemInstance norm = to_normalized(instance);
  const std::size_t n = norm.harvests.size();
  if (n > 3) {
    throw TooLarge("oracle_tmin handles at most three harvests");
  }
  if (norm.bits1 == 0.0 && norm.bits2 == 0.0) {
    return 0.0;
  }
  const ChannelParams& c = norm.channel;
  const EpochGrid grid = epochs_from_harvests(norm);

  // Completion time when epochs 0..depth-1 run full length with the given
  // (energy fraction, r1 fraction) pairs and epoch `depth` finishes.
  auto evaluate = [&](const std::vector<double>& x, std::size_t depth) {
    double spent = 0.0;
    double harvested = 0.0;
    double left1 = norm.bits1;
    double left2 = norm.bits2;
    double t = 0.0;
    for (std::size_t j = 0; j < depth; ++j) {
      harvested += norm.harvests[j].energy;
      const double xi = grid.duration(j);
      const double e = x[2 * j] * (harvested - spent);
      const double p = e / xi;
      const double r1 = x[2 * j + 1] * rate_strong(c, p, 0.0);
      const double r2 = rate_weak(c, p, r1);
      if (r1 * xi > left1 || r2 * xi > left2) {
        return kInf;
      }
      left1 -= r1 * xi;
      left2 -= r2 * xi;
      spent += e;
      t += xi;
    }
    harvested += norm.harvests[depth].energy;
    const auto tail = tmin_one_epoch(harvested - spent, left1, left2,
                                     grid.duration(depth), c);
    return tail ? t + *tail : kInf;
  };

  double best = kInf;
  for (std::size_t depth = 0; depth < n; ++depth) {
    const std::size_t dims = 2 * depth;
    if (dims == 0) {
      best = std::min(best, evaluate({}, 0));
      continue;
    }
    const std::size_t points = dims <= 2 ? opts.points_2d : opts.points_4d;
    std::vector<double> lo(dims, 0.0);
    std::vector<double> hi(dims, 1.0);
    std::vector<double> x(dims);
    std::vector<std::size_t> idx(dims);
    for (std::size_t level = 0; level < opts.max_levels; ++level) {
      double level_best = kInf;
      std::vector<double> arg;
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (std::size_t k = 0; k < dims; ++k) {
          x[k] = lo[k] + (hi[k] - lo[k]) * static_cast<double>(idx[k]) /
                             static_cast<double>(points - 1);
        }
        const double v = evaluate(x, depth);
        if (v < level_best) {
          level_best = v;
          arg = x;
        }
        std::size_t k = 0;
        while (k < dims && ++idx[k] == points) {
          idx[k++] = 0;
        }
        if (k == dims) {
          break;
        }
      }
      if (arg.empty()) {
        break;  // no feasible point at this depth
      }
      best = std::min(best, level_best);
      double widest = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        const double cell = (hi[k] - lo[k]) / static_cast<double>(points - 1);
        lo[k] = std::max(0.0, arg[k] - 3.0 * cell);
        hi[k] = std::min(1.0, arg[k] + 3.0 * cell);
        widest = std::max(widest, cell);
      }
      if (widest <= opts.grid_step) {
        break;
      }
    }
  }
  return best;
}

VerificationReport check_derivatives(const MathCheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  Tally fd("derivative_fd", opts.derivative_rel, opts.seed);
  Tally signs("derivative_signs", 0.0, opts.seed);
  Tally mixed("h2_mixed_zero", 1e-10, opts.seed);
  Tally edge("domain_edge", 0.0, opts.seed);

  for (std::size_t s = 0; s < opts.samples; ++s) {
    const ChannelParams c = random_channel(rng);
    const double p = log_uniform(rng, 1e-2, 1e2) * c.sigma2 / c.s2;
    const double cap = rate_weak(c, p, 0.0);
    const double r = uniform(rng, 0.05, 0.95) * cap;
    const std::string where = at("sample", s);

    const DerivativeBundle d = derivatives(c, p, r);
    const double hp = opts.fd_step_rel * p;
    const double hr = opts.fd_step_rel * cap;
    auto h1 = [&](double pp, double rr) { return rate_strong(c, pp, rr); };
    auto h2 = [&](double pp, double rr) { return rate_weak(c, pp, rr); };
    auto dp = [&](auto&& f) { return (f(p + hp, r) - f(p - hp, r)) / (2 * hp); };
    auto dr = [&](auto&& f) { return (f(p, r + hr) - f(p, r - hr)) / (2 * hr); };
    auto bundle = [&](double pp, double rr) { return derivatives(c, pp, rr); };
    const DerivativeBundle up_p = bundle(p + hp, r);
    const DerivativeBundle dn_p = bundle(p - hp, r);
    const DerivativeBundle up_r = bundle(p, r + hr);
    const DerivativeBundle dn_r = bundle(p, r - hr);

    fd.observe(rel_diff(d.h1.dP, dp(h1)), where + " h1 dP");
    fd.observe(rel_diff(d.h1.dr, dr(h1)), where + " h1 dr");
    fd.observe(rel_diff(d.h2.dP, dp(h2)), where + " h2 dP");
    fd.observe(rel_diff(d.h2.dr, dr(h2)), where + " h2 dr");
    fd.observe(rel_diff(d.h1.dPP, (up_p.h1.dP - dn_p.h1.dP) / (2 * hp)), where + " h1 dPP");
    fd.observe(rel_diff(d.h1.drr, (up_r.h1.dr - dn_r.h1.dr) / (2 * hr)), where + " h1 drr");
    fd.observe(rel_diff(d.h1.drP, (up_r.h1.dP - dn_r.h1.dP) / (2 * hr)), where + " h1 drP");
    fd.observe(rel_diff(d.h1.dPr, (up_p.h1.dr - dn_p.h1.dr) / (2 * hp)), where + " h1 dPr");
    fd.observe(rel_diff(d.h2.dPP, (up_p.h2.dP - dn_p.h2.dP) / (2 * hp)), where + " h2 dPP");
    fd.observe(rel_diff(d.h2.drr, (up_r.h2.dr - dn_r.h2.dr) / (2 * hr)), where + " h2 drr");

    for (const Partials* q : {&d.h1, &d.h2}) {
      signs.observe(std::max({-q->dP, q->dr, q->dPP, q->drr, 0.0}), where);
    }
    mixed.observe(std::max(std::abs(d.h2.drP), std::abs(d.h2.dPr)), where);
    mixed.observe(std::abs((up_r.h2.dP - dn_r.h2.dP) / (2 * hr)), where + " fd");

    if (s % 10 == 0) {
      try {
        (void)derivatives(c, p, cap * (1.0 + 1e-6));
        edge.fail(where + ": no DomainError past the region edge");
      } catch (const DomainError&) {
      }
    }
  }

  VerificationReport report;
  report.checks = {fd.done(), signs.done(), mixed.done(), edge.done()};
  return report;
}

VerificationReport check_concavity_f1_f2(const MathCheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  Tally f1_concave("f1_concave", opts.concavity_tol, opts.seed);
  Tally f2_concave("f2_concave", opts.concavity_tol, opts.seed);
  Tally endpoints("f1_f2_endpoints", opts.endpoint_tol, opts.seed);
  Tally nonneg("f1_f2_nonnegative", opts.endpoint_tol, opts.seed);
  const std::size_t k = std::max<std::size_t>(opts.beta_points, 3);

  std::vector<double> f(k);
  auto examine = [&](Tally& concave, const std::string& where) {
    endpoints.observe(std::max(std::abs(f.front()), std::abs(f.back())), where);
    for (std::size_t i = 1; i + 1 < k; ++i) {
      concave.observe(f[i - 1] - 2.0 * f[i] + f[i + 1], where);
      nonneg.observe(-f[i], where);
    }
  };

  std::size_t accepted1 = 0;
  std::size_t accepted2 = 0;
  const std::size_t attempts = 100 * opts.samples;
  for (std::size_t a = 0; a < attempts && (accepted1 < opts.samples || accepted2 < opts.samples); ++a) {
    const ChannelParams c = random_channel(rng);
    const double p1 = log_uniform(rng, 1e-2, 1e2) * c.sigma2 / c.s2;
    const double p2 = p1 * (1.0 + log_uniform(rng, 1e-3, 10.0));
    double r11 = uniform(rng, 0.0, 1.0) * rate_strong(c, p1, 0.0);
    double r12 = uniform(rng, 0.0, 1.0) * rate_strong(c, p2, 0.0);
    const double u_power = uniform(rng, 0.0, 1.0);
    const double u_rate = uniform(rng, 0.0, 1.0);
    const double base1 = rate_weak(c, p1, r11);
    const double base2 = rate_weak(c, p2, r12);
    const std::string where = at("draw", a);

    if (accepted1 < opts.samples) {
      const double dpow = u_power * (p2 - p1);
      try {
        for (std::size_t i = 0; i < k; ++i) {
          const double b = static_cast<double>(i) / static_cast<double>(k - 1);
          const double r_mix = b * r11 + (1.0 - b) * r12;
          f[i] = rate_weak(c, p1 + (1.0 - b) * dpow, r_mix) * b +
                 rate_weak(c, p2 - b * dpow, r_mix) * (1.0 - b) -
                 base1 * b - base2 * (1.0 - b);
        }
        examine(f1_concave, where + " f1");
        ++accepted1;
      } catch (const DomainError&) {
      }
    }

    if (accepted2 < opts.samples) {
      if (r11 > r12) {
        std::swap(r11, r12);
      }
      const double lo_base = rate_weak(c, p1, r11);
      const double hi_base = rate_weak(c, p2, r12);
      const double drate = u_rate * (r12 - r11);
      try {
        for (std::size_t i = 0; i < k; ++i) {
          const double b = static_cast<double>(i) / static_cast<double>(k - 1);
          f[i] = rate_weak(c, p1, r11 + (1.0 - b) * drate) * b +
                 rate_weak(c, p2, r12 - b * drate) * (1.0 - b) -
                 lo_base * b - hi_base * (1.0 - b);
        }
        examine(f2_concave, where + " f2");
        ++accepted2;
      } catch (const DomainError&) {
      }
    }
  }
  if (accepted1 < opts.samples) {
    f1_concave.fail("too few in-domain f1 configurations");
  }
  if (accepted2 < opts.samples) {
    f2_concave.fail("too few in-domain f2 configurations");
  }

  VerificationReport report;
  report.checks = {f1_concave.done(), f2_concave.done(), endpoints.done(), nonneg.done()};
  return report;
}

VerificationReport check_rate_region(const MathCheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  Tally convex("g_convex", opts.convexity_slack, opts.seed);
  Tally roundtrip("h_roundtrip", opts.roundtrip_rel, opts.seed);
  Tally splitting("rate_splitting", opts.convexity_slack, opts.seed);

  for (std::size_t s = 0; s < opts.samples; ++s) {
    const ChannelParams c = random_channel(rng);
    const std::string where = at("sample", s);

    const RatePair a{uniform(rng, 0.0, 2.0), uniform(rng, 0.0, 2.0)};
    const RatePair b{uniform(rng, 0.0, 2.0), uniform(rng, 0.0, 2.0)};
    const double lam = uniform(rng, 0.0, 1.0);
    const RatePair mix{lam * a.r1 + (1 - lam) * b.r1, lam * a.r2 + (1 - lam) * b.r2};
    const double rhs = lam * min_power(c, a) + (1 - lam) * min_power(c, b);
    convex.observe((min_power(c, mix) - rhs) / std::max(1.0, rhs), where);

    const double p = log_uniform(rng, 1e-2, 1e2) * c.sigma2 / c.s2;
    const double r2 = uniform(rng, 0.0, 1.0) * rate_weak(c, p, 0.0);
    const double r1 = uniform(rng, 0.0, 1.0) * rate_strong(c, p, 0.0);
    const double scale = std::max(1.0, p);
    roundtrip.observe(std::abs(min_power(c, {rate_strong(c, p, r2), r2}) - p) / scale,
                      where + " h1");
    roundtrip.observe(std::abs(min_power(c, {r1, rate_weak(c, p, r1)}) - p) / scale,
                      where + " h2");

    const double cap = rate_strong(c, p, 0.0);
    const double delta = uniform(rng, 0.0, 1.0) * std::min(r1, cap - r1);
    const double split = 0.5 * (rate_weak(c, p, r1 - delta) + rate_weak(c, p, r1 + delta));
    splitting.observe(split - rate_weak(c, p, r1), where);
  }

  VerificationReport report;
  report.checks = {convex.done(), roundtrip.done(), splitting.done()};
  return report;
}

}  // namespace ehbc
