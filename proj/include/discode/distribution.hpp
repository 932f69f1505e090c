#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace discode {

/// Probability floor applied before any logarithm of a probability.
inline constexpr double kProbFloor = 1e-12;

double logsumexp(std::span<const double> x);
std::vector<double> log_softmax(std::span<const double> logits);
std::vector<double> softmax(std::span<const double> logits);

/// log(exp(a) + exp(b)), exact for -inf arguments.
double log_add_exp(double a, double b);

/**
 * Probability mass over the candidates of a rating scale.
 *
 * Both the probabilities and their logarithms are kept. Distributions built
 * in log space (the decoder output at tiny alpha, for instance) keep finite
 * log-probabilities even where the probability itself underflows to zero.
 */
class ScoreDistribution {
public:
  /// Validates p >= 0 and sum(p) == 1 within 1e-9.
  static ScoreDistribution from_probs(std::vector<double> probs);
  /// Renormalizes a non-negative vector with positive mass.
  static ScoreDistribution normalized(std::span<const double> weights);
  static ScoreDistribution from_logits(std::span<const double> logits);
  static ScoreDistribution uniform(std::size_t n);
  static ScoreDistribution one_hot(std::size_t n, std::size_t index);

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> log_probs() const noexcept { return log_probs_; }
  double operator[](std::size_t k) const { return probs_[k]; }
  std::size_t argmax() const;

private:
  ScoreDistribution(std::vector<double> probs, std::vector<double> log_probs)
      : probs_(std::move(probs)), log_probs_(std::move(log_probs)) {}

  std::vector<double> probs_;
  std::vector<double> log_probs_;
};

void require_same_size(std::size_t a, std::size_t b, const char* what);

}  // namespace discode
