#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "discode/decoder.hpp"
#include "discode/divergence.hpp"
#include "discode/prior.hpp"
#include "discode/scales.hpp"

namespace discode {

/// One image-caption judging event as emitted by the extractor.
struct ScoreRecord {
  std::string id;
  ScaleKind scale = ScaleKind::Decimal01;
  std::string raw_text;
  std::optional<std::vector<double>> logits;
  std::optional<std::vector<double>> probs;
  std::optional<FeatureBundle> features;
  std::map<std::string, std::string> meta;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();  // unknown keys, kept for round-trips

  /// p_LVLM restricted to the scale candidates (probs are renormalized).
  ScoreDistribution distribution() const;
  /// Checks the logits/probs/features invariants; throws Error(Input|Dimension).
  void validate() const;
};

enum class Method { Raw, Smoothing, Discode };

std::string_view method_name(Method method) noexcept;
Method parse_method(std::string_view name);

struct ScoringConfig {
  AlphaParams alpha;
  double prior_var = 1.0;
  DivergenceSpec divergence;  // alpha field is filled per record for the weighted KL
  SolveOptions solve;
  bool use_features = false;
};

struct ScoredResult {
  std::string id;
  ScaleKind scale = ScaleKind::Decimal01;
  Method method = Method::Raw;
  double score = 0.0;
  std::optional<std::vector<double>> distribution;
  std::optional<double> alpha;
  std::map<std::string, double> diagnostics;  // att_loss, residual, iterations
  std::vector<std::string> warnings;
};

/// Sum of candidate values weighted by p.
double expected_score(const RatingScale& scale, const ScoreDistribution& p);

/// Decimal scale: min(1, integer_part + 0.1 * s_hat). Other scales: s_hat.
double compose_final(const RatingScale& scale, const RawScore& raw, double s_hat);

/**
 * Scores one record with the requested method.
 *
 * The raw score used for the prior and alpha is the argmax candidate; a
 * disagreement with raw_text is reported as a warning. raw_text still
 * supplies the integer part on the decimal scale.
 */
ScoredResult score_record(const ScoreRecord& record, Method method, const ScoringConfig& config);

/// Scores records on `jobs` threads; results keep input order.
std::vector<ScoredResult> score_records(const std::vector<ScoreRecord>& records, Method method,
                                        const ScoringConfig& config, unsigned jobs = 1);

}  // namespace discode
