#include "discode/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "discode/decoder.hpp"
#include "discode/divergence.hpp"
#include "discode/prior.hpp"
#include "discode/scales.hpp"

namespace discode {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on the portable uniform, so reports match across standard libraries.
double normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<double> random_logits(std::mt19937_64& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * normal(rng);
  return v;
}

// Simplex point with every entry at least 0.05 / n, keeping finite differences well conditioned.
std::vector<double> interior_point(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = 0.05 + uniform01(rng));
  for (double& x : v) x /= s;
  return v;
}

double l1(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

double linf(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
  return s;
}

}  // namespace

std::vector<CheckOutcome> run_selfcheck(const SelfCheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  const RatingScale& scale = make_scale(ScaleKind::Discrete09);
  const int count = std::max(1, options.instances);

  CheckOutcome agree{"analytic-vs-numeric (L1)", true, 0.0, 1e-4, count};
  CheckOutcome stationary{"stationarity residual", true, 0.0, 1e-8, count};
  CheckOutcome pooling{"head-vs-distribution (Linf)", true, 0.0, 1e-10, count};

  SolveOptions converged;
  converged.mode = SolveMode::NumericConverged;

  for (int i = 0; i < count; ++i) {
    const auto p = ScoreDistribution::from_logits(random_logits(rng, scale.size(), 2.0));
    const RawScore raw = raw_score_at(scale, static_cast<std::size_t>(uniform01(rng) * scale.size()));
    const double alpha = adaptive_alpha(raw, scale);
    const auto q = gaussian_prior(raw, scale);
    const double solve_alpha = std::clamp(alpha * options.alpha_corruption, 1e-300, 1.0);

    const auto z = analytic_distribution(p, q, solve_alpha);
    const auto numeric = numeric_solve(p, q, DivergenceSpec::weighted_kl(alpha), converged);
    agree.worst = std::max(agree.worst, l1(z.probs(), numeric.distribution.probs()));
    stationary.worst = std::max(stationary.worst, stationarity_residual(z, p, q, alpha));

    FeatureBundle bundle;
    const std::size_t dims[] = {4, 16, 256};
    const std::size_t d = dims[i % 3];
    bundle.h = random_logits(rng, d, 1.0 / std::sqrt(static_cast<double>(d)));
    bundle.V = Matrix(scale.size(), d);
    for (double& v : bundle.V.data) v = 2.0 * normal(rng);
    bundle.c = random_logits(rng, scale.size(), 1.0);
    const double bundle_alpha = 0.05 + 0.95 * uniform01(rng);
    const auto head = analytic_head(bundle, q, bundle_alpha);
    const auto via_head = head.apply(bundle.h);
    const auto via_pool = analytic_distribution(bundle.distribution(), q, bundle_alpha);
    pooling.worst = std::max(pooling.worst, linf(via_head.probs(), via_pool.probs()));
  }

  std::vector<CheckOutcome> out{agree, stationary, pooling};

  const DivergenceSpec specs[] = {DivergenceSpec::weighted_kl(0.3), DivergenceSpec::kl(),
                                  DivergenceSpec::jensen_shannon(), DivergenceSpec::renyi(), DivergenceSpec::beta()};
  const int grad_count = std::min(count, 100);
  for (const auto& spec : specs) {
    CheckOutcome grad{"gradient " + std::string(divergence_kind_name(spec.kind)) + " (rel)", true, 0.0, 1e-5,
                      grad_count};
    for (int i = 0; i < grad_count; ++i) {
      auto pv = interior_point(rng, scale.size());
      const auto qv = interior_point(rng, scale.size());
      const auto g = divergence_gradient(spec, pv, qv);
      constexpr double h = 1e-6;
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < pv.size(); ++k) {
        const double keep = pv[k];
        pv[k] = keep + h;
        const double up = divergence_value(spec, pv, qv);
        pv[k] = keep - h;
        const double down = divergence_value(spec, pv, qv);
        pv[k] = keep;
        const double fd = (up - down) / (2.0 * h);
        num = std::max(num, std::abs(fd - g[k]));
        den = std::max({den, std::abs(fd), std::abs(g[k])});
      }
      grad.worst = std::max(grad.worst, den > 0.0 ? num / den : num);
    }
    out.push_back(grad);
  }

  for (auto& c : out) c.passed = c.worst <= c.threshold;
  return out;
}

}  // namespace discode
