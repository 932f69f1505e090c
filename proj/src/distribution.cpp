#include "discode/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "discode/error.hpp"

namespace discode {

double logsumexp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

std::vector<double> log_softmax(std::span<const double> logits) {
  const double lse = logsumexp(logits);
  if (!std::isfinite(lse)) throw Error(ErrorKind::Numeric, "log-softmax of non-finite logits");
  std::vector<double> out(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) out[k] = logits[k] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  auto out = log_softmax(logits);
  for (double& v : out) v = std::exp(v);
  return out;
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::Dimension, std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                                          std::to_string(b) + ")");
  }
}

ScoreDistribution ScoreDistribution::from_probs(std::vector<double> probs) {
  if (probs.empty()) throw Error(ErrorKind::Dimension, "empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorKind::Range, "probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::Range, "probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
  std::vector<double> logs(probs.size());
  std::transform(probs.begin(), probs.end(), logs.begin(), [](double p) { return std::log(p); });
  return ScoreDistribution(std::move(probs), std::move(logs));
}

ScoreDistribution ScoreDistribution::normalized(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::Range, "weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorKind::Range, "weights have no mass");
  std::vector<double> probs(weights.begin(), weights.end());
  std::vector<double> logs(probs.size());
  const double log_sum = std::log(sum);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    probs[k] /= sum;
    logs[k] = std::log(weights[k]) - log_sum;
  }
  return ScoreDistribution(std::move(probs), std::move(logs));
}

ScoreDistribution ScoreDistribution::from_logits(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorKind::Dimension, "empty logit vector");
  auto logs = log_softmax(logits);
  std::vector<double> probs(logs.size());
  std::transform(logs.begin(), logs.end(), probs.begin(), [](double l) { return std::exp(l); });
  return ScoreDistribution(std::move(probs), std::move(logs));
}

ScoreDistribution ScoreDistribution::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Dimension, "empty distribution");
  const double p = 1.0 / static_cast<double>(n);
  return ScoreDistribution(std::vector<double>(n, p), std::vector<double>(n, std::log(p)));
}

ScoreDistribution ScoreDistribution::one_hot(std::size_t n, std::size_t index) {
  if (index >= n) throw Error(ErrorKind::Range, "one-hot index out of range");
  std::vector<double> probs(n, 0.0);
  std::vector<double> logs(n, -std::numeric_limits<double>::infinity());
  probs[index] = 1.0;
  logs[index] = 0.0;
  return ScoreDistribution(std::move(probs), std::move(logs));
}

std::size_t ScoreDistribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(log_probs_.begin(), log_probs_.end()) - log_probs_.begin());
}

}  // namespace discode
