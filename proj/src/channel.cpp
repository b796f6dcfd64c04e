#include "ehbc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ehbc/errors.hpp"

namespace ehbc {
namespace {

constexpr double kLn2 = std::numbers::ln2;
// Relative slack accepted at the edge of the rate region before a point is
// declared outside it. Covers rounding when a rate is computed at its cap.
constexpr double kEdgeSlack = 1e-12;

// 2^{2r} - 1 without cancellation at small r.
double exp2m1_twice(double r) { return std::expm1(2.0 * kLn2 * r); }

// 1/2 log2(1 + x)
double half_log2_1p(double x) { return 0.5 * std::log1p(x) / kLn2; }

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0)) {
    std::ostringstream os;
    os << name << " must be nonnegative, got " << value;
    throw DomainError(os.str());
  }
}

}  // namespace

void ChannelParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInstance("noise variance sigma2 must be positive and finite");
  }
  if (!(s2 > 0.0) || !(s1 > s2) || !std::isfinite(s1)) {
    throw InvalidInstance("channel gains must satisfy s1 > s2 > 0");
  }
}

double min_power(const ChannelParams& params, RatePair rates) {
  require_nonnegative(rates.r1, "r1");
  require_nonnegative(rates.r2, "r2");
  const double em1 = exp2m1_twice(rates.r1);
  const double em2 = exp2m1_twice(rates.r2);
  // em1 == 0 guards 0 * inf when r2 overflows.
  const double strong = em1 == 0.0 ? 0.0 : em1 * (1.0 + em2) / params.s1;
  return params.sigma2 * (em2 / params.s2 + strong);
}

double rate_strong(const ChannelParams& params, double power, double r2) {
  require_nonnegative(power, "power");
  require_nonnegative(r2, "r2");
  const double em2 = exp2m1_twice(r2);
  const double headroom = params.s2 * power - params.sigma2 * em2;
  if (headroom < 0.0) {
    const double scale = std::max(params.s2 * power, params.sigma2 * em2);
    if (-headroom > kEdgeSlack * scale) {
      std::ostringstream os;
      os << "r2 = " << r2 << " exceeds the weaker user's capacity at P = "
         << power;
      throw DomainError(os.str());
    }
    return 0.0;
  }
  const double x =
      params.s1 * headroom / (params.s2 * params.sigma2 * (1.0 + em2));
  return half_log2_1p(x);
}

double rate_weak(const ChannelParams& params, double power, double r1) {
  require_nonnegative(power, "power");
  require_nonnegative(r1, "r1");
  const double em1 = exp2m1_twice(r1);
  const double snr1 = params.s1 * power / params.sigma2;
  if (em1 > snr1) {
    if (em1 - snr1 > kEdgeSlack * em1) {
      std::ostringstream os;
      os << "r1 = " << r1 << " exceeds the stronger user's capacity at P = "
         << power;
      throw DomainError(os.str());
    }
    return 0.0;
  }
  const double num = std::log1p(params.s2 * power / params.sigma2);
  const double den = std::log1p(params.s2 / params.s1 * em1);
  return std::max(0.0, 0.5 * (num - den) / kLn2);
}

SplitResult split_power(const ChannelParams& params, double power,
                        double bit_ratio) {
  require_nonnegative(power, "power");
  if (std::isnan(bit_ratio) || bit_ratio < 0.0) {
    throw DomainError("bit ratio must be nonnegative");
  }

  double alpha;
  if (std::isinf(bit_ratio)) {
    alpha = 1.0;
  } else if (bit_ratio == 0.0) {
    alpha = 0.0;
  } else if (power == 0.0) {
    // Low-SNR limit of the ratio condition: alpha s1 = ratio (1 - alpha) s2.
    alpha = bit_ratio * params.s2 / (params.s1 + bit_ratio * params.s2);
  } else {
    const double a1 = params.s1 * power / params.sigma2;
    const double a2 = params.s2 * power;
    // Log form of (1 + alpha s1 P / sigma2)^{B2} = (1 + ...)^{B1}; increasing
    // in alpha, negative at 0 and positive at 1.
    auto mismatch = [&](double a) {
      const double strong = std::log1p(a * a1);
      const double weak = std::log1p((1.0 - a) * a2 / (a * a2 + params.sigma2));
      return strong - bit_ratio * weak;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mismatch(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    alpha = 0.5 * (lo + hi);
  }

  SplitResult out;
  out.split.alpha = alpha;
  out.split.p1 = alpha * power;
  out.split.p2 = power - out.split.p1;
  out.rates.r1 = half_log2_1p(out.split.p1 * params.s1 / params.sigma2);
  out.rates.r2 = half_log2_1p(out.split.p2 * params.s2 /
                              (out.split.p1 * params.s2 + params.sigma2));
  return out;
}

DerivativeBundle derivatives(const ChannelParams& params, double power,
                             double r) {
  require_nonnegative(power, "power");
  require_nonnegative(r, "r");
  const double cap = half_log2_1p(params.s2 * power / params.sigma2);
  if (r > cap * (1.0 + kEdgeSlack)) {
    std::ostringstream os;
    os << "derivatives: r = " << r << " outside the region at P = " << power
       << " (cap " << cap << ")";
    throw DomainError(os.str());
  }

  const double s1 = params.s1;
  const double s2 = params.s2;
  const double sg = params.sigma2;
  const double x = std::exp2(2.0 * r);
  const double log2e = std::numbers::log2e;

  DerivativeBundle out;

  const double head = s1 * s2 * power + s1 * sg;
  const double d = head - (s1 - s2) * sg * x;
  const double d2 = d * d;
  out.h1.dP = 0.5 * log2e * s1 * s2 / d;
  out.h1.dr = -head / d;
  out.h1.dPP = -0.5 * log2e * (s1 * s2) * (s1 * s2) / d2;
  out.h1.drr = -2.0 * kLn2 * (s1 - s2) * head * sg * x / d2;
  out.h1.drP = s1 * s2 * (s1 - s2) * sg * x / d2;
  out.h1.dPr = out.h1.drP;

  const double q = (x - 1.0) + s1 / s2;
  const double noise_plus = s2 * power + sg;
  out.h2.dP = 0.5 * log2e * s2 / noise_plus;
  out.h2.dr = -x / q;
  out.h2.dPP = -0.5 * log2e * s2 * s2 / (noise_plus * noise_plus);
  out.h2.drr = -2.0 * kLn2 * x * ((s1 - s2) / s2) / (q * q);
  out.h2.drP = 0.0;
  out.h2.dPr = 0.0;
  return out;
}

}  // namespace ehbc
