#pragma once

// Two-user AWGN broadcast rate region in normalized form: rates are bits per
// real channel use, r = 1/2 log2(1 + SNR).

namespace ehbc {

struct ChannelParams {
  double s1 = 1.0;      // stronger user's power gain
  double s2 = 0.5;      // weaker user's power gain
  double sigma2 = 1.0;  // noise variance

  // Throws InvalidInstance unless s1 > s2 > 0 and sigma2 > 0.
  void validate() const;
};

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

struct PowerSplit {
  double alpha = 0.0;  // share of total power given to the stronger user
  double p1 = 0.0;
  double p2 = 0.0;
};

struct SplitResult {
  RatePair rates;
  PowerSplit split;
};

// Partial derivatives of one of h1/h2 with respect to (P, r).
struct Partials {
  double dP = 0.0;
  double dr = 0.0;
  double dPP = 0.0;
  double drr = 0.0;
  double drP = 0.0;
  double dPr = 0.0;
};

struct DerivativeBundle {
  Partials h1;
  Partials h2;
};

// g(r1, r2): minimum total power placing (r1, r2) on the region boundary.
double min_power(const ChannelParams& params, RatePair rates);

// h1(P, r2): stronger-user rate on the boundary at power P.
// Throws DomainError if r2 exceeds the weaker user's single-user capacity.
double rate_strong(const ChannelParams& params, double power, double r2);

// h2(P, r1): weaker-user rate on the boundary at power P.
// Throws DomainError if r1 exceeds the stronger user's single-user capacity.
double rate_weak(const ChannelParams& params, double power, double r1);

// Boundary point at power P whose rates stand in ratio r1/r2 = bit_ratio.
// bit_ratio = +inf puts all power on user 1, bit_ratio = 0 on user 2.
SplitResult split_power(const ChannelParams& params, double power,
                        double bit_ratio);

// Closed-form first and second partials of h1 and h2 at (P, r). The point must
// lie inside both functions' domains, i.e. 0 <= r <= h2(P, 0).
DerivativeBundle derivatives(const ChannelParams& params, double power,
                             double r);

}  // namespace ehbc
