#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace discode {

struct LabeledScore {
  std::string id;
  double predicted = 0.0;
  double human = 0.0;
};

enum class Preferred { A, B };

struct PreferencePair {
  std::string id;
  double score_a = 0.0;
  double score_b = 0.0;
  Preferred preferred = Preferred::A;
};

/// Pair counts behind both Kendall statistics.
struct ConcordanceCounts {
  std::int64_t n = 0;
  std::int64_t concordant_minus_discordant = 0;
  std::int64_t tied_predicted = 0;  // pairs tied on predicted (including joint ties)
  std::int64_t tied_human = 0;      // pairs tied on human (including joint ties)
  std::int64_t distinct_predicted = 0;
  std::int64_t distinct_human = 0;
};

/// O(n log n) counting (sort + merge-sort inversion count).
ConcordanceCounts concordance_counts(std::span<const LabeledScore> data);

/// (C - D) / sqrt((n0 - n1)(n0 - n2)). Throws Error(Metric) when either variable is constant.
double kendall_tau_b(std::span<const LabeledScore> data);

/// 2m(C - D) / (n^2 (m - 1)) with m = min(#distinct predicted, #distinct human).
double kendall_tau_c(std::span<const LabeledScore> data);

/// Share of pairs where the preferred caption scores strictly higher; ties earn tie_credit.
double pairwise_accuracy(std::span<const PreferencePair> pairs, double tie_credit = 0.0);

}  // namespace discode
