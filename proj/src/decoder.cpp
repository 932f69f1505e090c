#include "discode/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "discode/error.hpp"
#include "optim.hpp"

namespace discode {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw Error(ErrorKind::Range, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

// Loss gradient with respect to z: -log p + dD/dz.
std::vector<double> loss_gradient_z(std::span<const double> z, std::span<const double> p, std::span<const double> q,
                                    const DivergenceSpec& spec) {
  auto g = divergence_gradient(spec, z, q);
  const auto ce = cross_entropy_gradient(z, p);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] += ce[k];
  return g;
}

// Back-propagates a z-gradient through softmax into its logits: z_i (g_i - <g, z>).
std::vector<double> through_softmax(std::span<const double> z, const std::vector<double>& gz) {
  double mean = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) mean += z[k] * gz[k];
  std::vector<double> gu(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) gu[k] = z[k] * (gz[k] - mean);
  return gu;
}

double spread(const std::vector<double>& g) {
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  double worst = 0.0;
  for (double v : g) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

}  // namespace

std::vector<double> Matrix::apply(std::span<const double> x) const {
  require_same_size(cols, x.size(), "matrix-vector product");
  std::vector<double> out(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto rw = row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += rw[c] * x[c];
    out[r] = s;
  }
  return out;
}

void FeatureBundle::validate() const {
  if (h.empty()) throw Error(ErrorKind::Dimension, "feature vector h is empty");
  if (c.size() < 2) throw Error(ErrorKind::Dimension, "feature bundle needs at least two candidates");
  require_same_size(V.rows, c.size(), "features V rows vs c");
  require_same_size(V.cols, h.size(), "features V cols vs h");
  require_same_size(V.data.size(), V.rows * V.cols, "features V storage");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(h) || !finite(V.data) || !finite(c)) throw Error(ErrorKind::Range, "feature bundle has non-finite entries");
}

std::vector<double> FeatureBundle::logits() const {
  validate();
  auto out = V.apply(h);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += c[k];
  return out;
}

ScoreDistribution FeatureBundle::distribution() const { return ScoreDistribution::from_logits(logits()); }

ScoreDistribution DecoderHead::apply(std::span<const double> h) const {
  require_same_size(W.rows, b.size(), "decoder head");
  auto logits = W.apply(h);
  for (std::size_t k = 0; k < logits.size(); ++k) logits[k] += b[k];
  return ScoreDistribution::from_logits(logits);
}

void SolveOptions::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::Config, "max_iters must be >= 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::Config, "learning rate must be > 0");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::Config, "tolerance must be > 0");
  if (converged_max_iters < 1) throw Error(ErrorKind::Config, "converged_max_iters must be >= 1");
}

double att_loss(std::span<const double> z, std::span<const double> p_lvlm, std::span<const double> q,
                const DivergenceSpec& spec) {
  return cross_entropy(z, p_lvlm) + divergence_value(spec, z, q);
}

double att_loss(const ScoreDistribution& z, const ScoreDistribution& p_lvlm, const ScoreDistribution& q,
                double alpha) {
  require_alpha(alpha);
  return att_loss(z.probs(), p_lvlm.probs(), q.probs(), DivergenceSpec::weighted_kl(alpha));
}

DecoderHead analytic_head(const FeatureBundle& bundle, const ScoreDistribution& q, double alpha) {
  require_alpha(alpha);
  bundle.validate();
  require_same_size(bundle.candidates(), q.size(), "analytic_head");
  DecoderHead head;
  head.W = bundle.V;
  for (double& w : head.W.data) w /= alpha;
  head.b.resize(q.size());
  const auto log_q = q.log_probs();
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!std::isfinite(log_q[k])) throw Error(ErrorKind::Range, "prior must be strictly positive");
    head.b[k] = (1.0 - alpha) / alpha * log_q[k] + bundle.c[k] / alpha;
  }
  return head;
}

ScoreDistribution analytic_distribution(const ScoreDistribution& p_lvlm, const ScoreDistribution& q, double alpha) {
  require_alpha(alpha);
  require_same_size(p_lvlm.size(), q.size(), "analytic_distribution");
  const auto log_p = p_lvlm.log_probs();
  const auto log_q = q.log_probs();
  const double prior_weight = (1.0 - alpha) / alpha;
  std::vector<double> logits(p_lvlm.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    // 0 * -inf would be NaN; a zero-weight term contributes nothing.
    const double prior_term = prior_weight == 0.0 ? 0.0 : prior_weight * log_q[k];
    logits[k] = log_p[k] / alpha + prior_term;
  }
  return ScoreDistribution::from_logits(logits);
}

SolveResult numeric_solve(const ScoreDistribution& p_lvlm, const ScoreDistribution& q, const DivergenceSpec& spec,
                          const SolveOptions& opts) {
  spec.validate();
  opts.validate();
  require_same_size(p_lvlm.size(), q.size(), "numeric_solve");
  if (opts.mode == SolveMode::Analytic) {
    if (spec.kind != DivergenceKind::WeightedKL) {
      throw Error(ErrorKind::Config, "the analytic solver only applies to the weighted KL divergence");
    }
    auto z = analytic_distribution(p_lvlm, q, spec.alpha);
    const double loss = att_loss(z.probs(), p_lvlm.probs(), q.probs(), spec);
    return {std::move(z), 0, loss};
  }

  const auto p = p_lvlm.probs();
  const auto qp = q.probs();
  optim::Objective objective = [&](std::span<const double> u, std::vector<double>& grad) {
    const auto z = softmax(u);
    grad = through_softmax(z, loss_gradient_z(z, p, qp, spec));
    return att_loss(z, p, qp, spec);
  };

  std::vector<double> u(p_lvlm.size());
  const auto log_p = p_lvlm.log_probs();
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::max(log_p[k], std::log(kProbFloor));

  SolveResult result{ScoreDistribution::uniform(u.size()), 0, 0.0};
  if (opts.mode == SolveMode::NumericFidelity) {
    result.loss = optim::adam(objective, u,
                              {opts.max_iters, opts.learning_rate, opts.adam_beta1, opts.adam_beta2, opts.adam_eps});
    result.iterations = opts.max_iters;
  } else {
    optim::SimplexObjective simplex_objective = [&](std::span<const double> x, std::vector<double>& grad_z) {
      const auto z = softmax(x);
      grad_z = loss_gradient_z(z, p, qp, spec);
      return att_loss(z, p, qp, spec);
    };
    optim::MirrorConfig cfg;
    cfg.max_iters = opts.converged_max_iters;
    cfg.tolerance = opts.tolerance;
    const auto r = optim::mirror_descent(simplex_objective, u, cfg);
    result.loss = r.loss;
    result.iterations = r.iterations;
  }
  result.distribution = ScoreDistribution::from_logits(u);
  return result;
}

DecoderHead numeric_solve_head(const FeatureBundle& bundle, const ScoreDistribution& q, const DivergenceSpec& spec,
                               const SolveOptions& opts, int* iterations) {
  spec.validate();
  opts.validate();
  bundle.validate();
  require_same_size(bundle.candidates(), q.size(), "numeric_solve_head");
  const std::size_t n = bundle.candidates();
  const std::size_t d = bundle.dim();
  const auto p_lvlm = bundle.distribution();
  const auto p = p_lvlm.probs();
  const auto qp = q.probs();

  DecoderHead head{bundle.V, bundle.c};
  if (opts.mode == SolveMode::Analytic) {
    if (spec.kind != DivergenceKind::WeightedKL) {
      throw Error(ErrorKind::Config, "the analytic solver only applies to the weighted KL divergence");
    }
    if (iterations) *iterations = 0;
    return analytic_head(bundle, q, spec.alpha);
  }

  // Parameters: W (row-major, n x d) followed by b (n).
  std::vector<double> x(head.W.data);
  x.insert(x.end(), head.b.begin(), head.b.end());
  optim::Objective objective = [&](std::span<const double> params, std::vector<double>& grad) {
    std::vector<double> logits(n);
    for (std::size_t r = 0; r < n; ++r) {
      double s = params[n * d + r];
      for (std::size_t c = 0; c < d; ++c) s += params[r * d + c] * bundle.h[c];
      logits[r] = s;
    }
    const auto z = softmax(logits);
    const auto gl = through_softmax(z, loss_gradient_z(z, p, qp, spec));
    grad.assign(params.size(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) grad[r * d + c] = gl[r] * bundle.h[c];
      grad[n * d + r] = gl[r];
    }
    return att_loss(z, p, qp, spec);
  };

  int iters = 0;
  if (opts.mode == SolveMode::NumericFidelity) {
    optim::adam(objective, x, {opts.max_iters, opts.learning_rate, opts.adam_beta1, opts.adam_beta2, opts.adam_eps});
    iters = opts.max_iters;
  } else {
    iters = optim::lbfgs(objective, x, {opts.converged_max_iters, opts.tolerance, 8}).iterations;
  }
  if (iterations) *iterations = iters;
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n * d), head.W.data.begin());
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(n * d), x.end(), head.b.begin());
  return head;
}

double stationarity_residual(const ScoreDistribution& z, const ScoreDistribution& p_lvlm, const ScoreDistribution& q,
                             double alpha) {
  require_alpha(alpha);
  require_same_size(z.size(), p_lvlm.size(), "stationarity_residual");
  require_same_size(z.size(), q.size(), "stationarity_residual");
  const auto log_z = z.log_probs();
  const auto log_p = p_lvlm.log_probs();
  const auto log_q = q.log_probs();
  std::vector<double> g(z.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!std::isfinite(log_z[k])) throw Error(ErrorKind::Range, "stationarity residual needs z > 0 everywhere");
    g[k] = -log_p[k] - (1.0 - alpha) * log_q[k] + alpha * log_z[k] + alpha;
  }
  return spread(g);
}

double gradient_spread(std::span<const double> z, std::span<const double> p_lvlm, std::span<const double> q,
                       const DivergenceSpec& spec) {
  return spread(loss_gradient_z(z, p_lvlm, q, spec));
}

}  // namespace discode
