#include "discode/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "discode/distribution.hpp"
#include "discode/error.hpp"

namespace discode {

namespace {

// 53-bit uniform in [0, 1), identical on every standard library.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void SynthConfig::validate() const {
  if (n_records < 0) throw Error(ErrorKind::Config, "n_records must be >= 0");
  if (!(truth_sigma > 0.0)) throw Error(ErrorKind::Config, "truth_sigma must be > 0");
  if (!(bias_weight >= 0.0 && bias_weight < 1.0)) throw Error(ErrorKind::Config, "bias_weight must lie in [0, 1)");
  if (!(temperature > 0.0)) throw Error(ErrorKind::Config, "temperature must be > 0");
  if (bias_index >= make_scale(scale).size()) throw Error(ErrorKind::Config, "bias target outside the scale");
}

SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  const RatingScale& sc = make_scale(config.scale);
  const std::size_t n = sc.size();
  std::mt19937_64 rng(config.seed);

  SynthCorpus corpus;
  corpus.records.reserve(static_cast<std::size_t>(config.n_records));
  corpus.truths.reserve(static_cast<std::size_t>(config.n_records));
  const double log_keep = std::log1p(-config.bias_weight);
  const double log_bias =
      config.bias_weight > 0.0 ? std::log(config.bias_weight) : -std::numeric_limits<double>::infinity();

  std::vector<double> log_clean(n), log_tempered(n), logits(n);
  for (std::int64_t r = 0; r < config.n_records; ++r) {
    double mean;
    if (config.continuous_means) {
      mean = sc.min_value() + uniform01(rng) * (sc.max_value() - sc.min_value());
    } else {
      mean = sc.value(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
    }

    for (std::size_t k = 0; k < n; ++k) {
      const double d = sc.value(k) - mean;
      log_clean[k] = -d * d / (2.0 * config.truth_sigma * config.truth_sigma);
    }
    const auto clean = softmax(log_clean);
    for (std::size_t k = 0; k < n; ++k) log_tempered[k] = log_clean[k] / config.temperature;
    const auto tempered = log_softmax(log_tempered);
    for (std::size_t k = 0; k < n; ++k) {
      logits[k] = log_keep + tempered[k];
      if (k == config.bias_index) logits[k] = log_add_exp(logits[k], log_bias);
    }

    double clean_mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) clean_mean += sc.value(k) * clean[k];

    const auto top = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    ScoreRecord rec;
    rec.id = "synth-" + std::to_string(r);
    rec.scale = config.scale;
    rec.raw_text = sc.label(top);
    rec.logits = logits;
    corpus.records.push_back(std::move(rec));
    corpus.truths.push_back(compose_final(sc, raw_score_at(sc, top), clean_mean));
  }
  return corpus;
}

}  // namespace discode
