#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "discode/distribution.hpp"
#include "discode/divergence.hpp"

namespace discode {

/// Dense row-major matrix, rows x cols.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  /// this * x
  std::vector<double> apply(std::span<const double> x) const;
};

/// Decoder feature h plus the judge's output-projection rows V and biases c for the candidates.
struct FeatureBundle {
  std::vector<double> h;  // d
  Matrix V;               // |S| x d
  std::vector<double> c;  // |S|

  std::size_t candidates() const noexcept { return c.size(); }
  std::size_t dim() const noexcept { return h.size(); }
  void validate() const;
  /// V h + c
  std::vector<double> logits() const;
  /// softmax(V h + c)
  ScoreDistribution distribution() const;
};

/// Linear layer followed by softmax: z = softmax(W h + b).
struct DecoderHead {
  Matrix W;               // |S| x d
  std::vector<double> b;  // |S|

  ScoreDistribution apply(std::span<const double> h) const;
};

enum class SolveMode { Analytic, NumericConverged, NumericFidelity };

struct SolveOptions {
  SolveMode mode = SolveMode::Analytic;
  int max_iters = 10;               // fidelity step count
  double learning_rate = 1e-3;      // fidelity Adam step size
  double tolerance = 1e-10;         // converged: stop once loss improvement drops below this
  int converged_max_iters = 20000;  // converged: safety cap
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

struct SolveResult {
  ScoreDistribution distribution;
  int iterations = 0;
  double loss = 0.0;
};

/// H(z, p_lvlm) + D_alpha(z || q) with the weighted KL divergence.
double att_loss(const ScoreDistribution& z, const ScoreDistribution& p_lvlm, const ScoreDistribution& q,
                double alpha);

/// H(z, p_lvlm) + D(z || q) for any divergence in the family.
double att_loss(std::span<const double> z, std::span<const double> p_lvlm, std::span<const double> q,
                const DivergenceSpec& spec);

/// Closed-form minimizer in head form: W = V / alpha, b = ((1 - alpha) / alpha) log q + c / alpha.
DecoderHead analytic_head(const FeatureBundle& bundle, const ScoreDistribution& q, double alpha);

/**
 * Closed-form minimizer from the distribution alone.
 *
 * z is proportional to p_lvlm^(1/alpha) * q^((1-alpha)/alpha), evaluated in
 * log space with max subtraction so very small alpha degrades to a one-hot
 * at argmax(log p_lvlm + log q) instead of overflowing.
 */
ScoreDistribution analytic_distribution(const ScoreDistribution& p_lvlm, const ScoreDistribution& q, double alpha);

/**
 * Gradient-based minimization over a free logit vector u, z = softmax(u),
 * started from u = log p_lvlm.
 *
 * NumericFidelity runs exactly max_iters Adam steps. NumericConverged runs
 * entropic mirror descent on u until the loss improves by less than the
 * tolerance and the simplex optimality residual is also small. Throws
 * Error(Numeric) naming the iteration if the loss becomes non-finite.
 */
SolveResult numeric_solve(const ScoreDistribution& p_lvlm, const ScoreDistribution& q, const DivergenceSpec& spec,
                          const SolveOptions& opts);

/// The same minimization carried out over the head parameters (W, b), started from (V, c).
/// Converged mode uses L-BFGS here since the parameters are not a point on the simplex.
DecoderHead numeric_solve_head(const FeatureBundle& bundle, const ScoreDistribution& q, const DivergenceSpec& spec,
                               const SolveOptions& opts, int* iterations = nullptr);

/**
 * Spread of the loss gradient g_k = -log p(k) - (1-alpha) log q(k) + alpha log z(k) + alpha
 * across candidates: max_k |g_k - mean(g)|. Zero exactly at a stationary point on the simplex.
 * Throws Error(Range) if z has zero entries.
 */
double stationarity_residual(const ScoreDistribution& z, const ScoreDistribution& p_lvlm, const ScoreDistribution& q,
                             double alpha);

/// Gradient spread of H(z, p) + D(z || q) for an arbitrary divergence.
double gradient_spread(std::span<const double> z, std::span<const double> p_lvlm, std::span<const double> q,
                       const DivergenceSpec& spec);

}  // namespace discode
