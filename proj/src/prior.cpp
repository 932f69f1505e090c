#include "discode/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "discode/error.hpp"

namespace discode {

void AlphaParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw Error(ErrorKind::Config, "alpha sigma2 must be > 0");
  if (!(clamp_min > 0.0) || !(clamp_min <= clamp_max)) {
    throw Error(ErrorKind::Config, "alpha clamp requires 0 < clamp_min <= clamp_max");
  }
}

ScoreDistribution gaussian_prior(const RawScore& raw, const RatingScale& scale, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw Error(ErrorKind::Config, "prior variance must be > 0");
  const double center = scale.value(raw.index);
  std::vector<double> logits(scale.size());
  for (std::size_t k = 0; k < scale.size(); ++k) {
    const double d = scale.value(k) - center;
    logits[k] = -d * d / (2.0 * variance);
  }
  return ScoreDistribution::from_logits(logits);
}

double adaptive_alpha_at(double value, double mean, const AlphaParams& params) {
  params.validate();
  const double d = value - mean;
  const double density = std::exp(-d * d / (2.0 * params.sigma2)) / std::sqrt(2.0 * std::numbers::pi * params.sigma2);
  return std::clamp(density, params.clamp_min, params.clamp_max);
}

double adaptive_alpha(const RawScore& raw, const RatingScale& scale, const AlphaParams& params) {
  return adaptive_alpha_at(scale.value(raw.index), scale.mean(), params);
}

}  // namespace discode
