#pragma once

#include <cstdint>
#include <vector>

#include "discode/scales.hpp"
#include "discode/scoring.hpp"

namespace discode {

/**
 * Simulated judge with symbolic bias toward one candidate.
 *
 * Each record draws a true mean over the candidate values, builds a clean
 * Gaussian-shaped distribution around it, sharpens or flattens it with
 * `temperature`, then moves `bias_weight` of the mass onto `bias_index`.
 */
struct SynthConfig {
  std::int64_t n_records = 1000;
  ScaleKind scale = ScaleKind::Decimal01;
  double truth_sigma = 1.0;
  double bias_weight = 0.3;
  double temperature = 1.0;
  std::uint64_t seed = 42;
  std::size_t bias_index = 0;
  bool continuous_means = false;  // draw means uniformly over [min, max] instead of on candidates

  void validate() const;
};

struct SynthCorpus {
  std::vector<ScoreRecord> records;
  std::vector<double> truths;  // expected value of the clean distribution, composed per scale
};

SynthCorpus generate_corpus(const SynthConfig& config);

}  // namespace discode
