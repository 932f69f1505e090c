#pragma once

#include "discode/distribution.hpp"
#include "discode/scales.hpp"

namespace discode {

struct AlphaParams {
  double sigma2 = 0.1;
  double clamp_max = 1.0;
  double clamp_min = 1e-300;  // clamp_min == clamp_max pins alpha to that value

  void validate() const;
};

/// q(k) proportional to exp(-(v_k - v_raw)^2 / (2 * variance)), built in log space.
ScoreDistribution gaussian_prior(const RawScore& raw, const RatingScale& scale, double variance = 1.0);

/// Gaussian density of the raw value around the scale mean, clamped to [clamp_min, clamp_max].
double adaptive_alpha(const RawScore& raw, const RatingScale& scale, const AlphaParams& params = {});

/// Same as adaptive_alpha, evaluated at an arbitrary value instead of a candidate.
double adaptive_alpha_at(double value, double mean, const AlphaParams& params = {});

}  // namespace discode
